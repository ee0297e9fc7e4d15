#ifndef DRAINET_LATTICE_PATHS_HPP
#define DRAINET_LATTICE_PATHS_HPP

#include <optional>
#include <vector>

#include "drainet/environment.hpp"

namespace drainet {

enum class StepKind : unsigned char { Left, Right };

// Step policy: resolve every branching to the left, to the right, or by an
// explicit symbol sequence consumed one symbol per step.
struct Selector {
  enum class Policy : unsigned char { AlwaysLeft, AlwaysRight, Explicit };

  Policy policy = Policy::AlwaysLeft;
  std::vector<StepKind> sequence;

  static Selector always_left() { return Selector{Policy::AlwaysLeft, {}}; }
  static Selector always_right() { return Selector{Policy::AlwaysRight, {}}; }
  static Selector explicit_sequence(std::vector<StepKind> seq) {
    return Selector{Policy::Explicit, std::move(seq)};
  }

  StepKind at(std::size_t step) const {
    switch (policy) {
      case Policy::AlwaysLeft:
        return StepKind::Left;
      case Policy::AlwaysRight:
        return StepKind::Right;
      case Policy::Explicit:
        break;
    }
    if (step >= sequence.size()) throw SelectorExhausted("explicit selector sequence exhausted");
    return sequence[step];
  }
};

struct LatticePath {
  Cell start;
  std::vector<i64> positions;  // x at times start.t, start.t+1, ...

  i64 time_at(std::size_t i) const { return start.t + static_cast<i64>(i); }
  std::size_t steps() const { return positions.empty() ? 0 : positions.size() - 1; }
};

// Candidates for the nearest open cell immediately above an open cell.
// When unique, left == right.
struct AboveCandidates {
  i64 left_x;
  i64 right_x;
  bool tie;
};

template <EnvironmentModel E>
AboveCandidates nearest_above(const E& env, i64 x, i64 t) {
  const i64 t1 = t + 1;
  if (env.open(x, t1)) return {x, x, false};
  const i64 r = env.r_max();
  for (i64 k = 1; k <= r; ++k) {
    const bool left = env.open(x - k, t1);
    const bool right = env.open(x + k, t1);
    if (left && right) return {x - k, x + k, true};
    if (left) return {x - k, x - k, false};
    if (right) return {x + k, x + k, false};
  }
  throw RadiusExceeded("no open cell within r_max in the row above");
}

// One forward step of the drainage dynamics from an open cell, without the
// open-precondition check (hot loop form).
template <EnvironmentModel E>
i64 step_x(const E& env, i64 x, i64 t, StepKind kind) {
  const AboveCandidates c = nearest_above(env, x, t);
  if (!c.tie) return c.left_x;
  const int th = env.theta(x, t);
  if (kind == StepKind::Left) return th == 1 ? c.right_x : c.left_x;
  return th == -1 ? c.left_x : c.right_x;
}

// True when both outgoing edges exist at z: a tie above resolved as a kept
// branching (theta == 0).
template <EnvironmentModel E>
bool branches_at(const E& env, i64 x, i64 t) {
  const AboveCandidates c = nearest_above(env, x, t);
  return c.tie && env.theta(x, t) == 0;
}

template <EnvironmentModel E>
Cell gamma(const E& env, Cell z, StepKind kind) {
  if (!env.open(z.x, z.t)) throw NotOpen("gamma: start cell is not open");
  return Cell{step_x(env, z.x, z.t, kind), z.t + 1};
}

template <EnvironmentModel E>
LatticePath walk(const E& env, Cell z, const Selector& selector, i64 steps) {
  if (steps < 1) throw std::invalid_argument("walk: steps must be >= 1");
  if (!env.open(z.x, z.t)) throw NotOpen("walk: start cell is not open");
  LatticePath path{z, {}};
  path.positions.reserve(static_cast<std::size_t>(steps) + 1);
  path.positions.push_back(z.x);
  i64 x = z.x;
  for (i64 k = 0; k < steps; ++k) {
    x = step_x(env, x, z.t + k, selector.at(static_cast<std::size_t>(k)));
    path.positions.push_back(x);
  }
  return path;
}

// First step index at which two same-kind paths from u and v coincide
// (they then coincide forever; one extra step is verified). nullopt when
// censored at t_max.
template <EnvironmentModel E>
std::optional<i64> coalescence_time(const E& env, Cell u, Cell v, StepKind kind, i64 t_max) {
  if (u.t != v.t) throw std::invalid_argument("coalescence_time: starts must share a row");
  if (!env.open(u.x, u.t) || !env.open(v.x, v.t))
    throw NotOpen("coalescence_time: start cells must be open");
  if (u.x == v.x) return 0;
  i64 a = u.x;
  i64 b = v.x;
  for (i64 t = 1; t <= t_max; ++t) {
    const i64 row = u.t + t - 1;
    a = step_x(env, a, row, kind);
    b = step_x(env, b, row, kind);
    if (a == b) {
      const i64 a2 = step_x(env, a, u.t + t, kind);
      const i64 b2 = step_x(env, b, u.t + t, kind);
      if (a2 != b2) throw std::logic_error("coalesced paths separated");
      return t;
    }
  }
  return std::nullopt;
}

// First step at which the r-path from v reaches or passes the l-path from u.
template <EnvironmentModel E>
std::optional<i64> crossing_time(const E& env, Cell u, Cell v, i64 t_max) {
  if (u.t != v.t) throw std::invalid_argument("crossing_time: starts must share a row");
  if (!env.open(u.x, u.t) || !env.open(v.x, v.t))
    throw NotOpen("crossing_time: start cells must be open");
  if (v.x >= u.x) return 0;
  i64 l = u.x;
  i64 r = v.x;
  for (i64 t = 1; t <= t_max; ++t) {
    const i64 row = u.t + t - 1;
    l = step_x(env, l, row, StepKind::Left);
    r = step_x(env, r, row, StepKind::Right);
    if (r >= l) return t;
  }
  return std::nullopt;
}

// Number of visited cells with both outgoing edges present.
template <EnvironmentModel E>
i64 count_branch_events(const E& env, const LatticePath& path) {
  i64 count = 0;
  for (std::size_t i = 0; i < path.positions.size(); ++i)
    if (branches_at(env, path.positions[i], path.time_at(i))) ++count;
  return count;
}

}  // namespace drainet

#endif
