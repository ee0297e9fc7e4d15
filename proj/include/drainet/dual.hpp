#ifndef DRAINET_DUAL_HPP
#define DRAINET_DUAL_HPP

#include <algorithm>
#include <optional>
#include <vector>

#include "drainet/lattice_paths.hpp"
#include "drainet/pmf.hpp"

namespace drainet {

// Dual vertex at the midpoint of two consecutive open cells of a row.
// x2 is the doubled coordinate: even <=> integer position, odd <=>
// half-integer position. Coalescence is equality testing, so half-integers
// are kept exact.
struct DualVertex {
  i64 x2 = 0;
  i64 t = 0;
  friend bool operator==(const DualVertex&, const DualVertex&) = default;

  double position() const { return static_cast<double>(x2) / 2.0; }
  bool at_integer() const { return x2 % 2 == 0; }
};

struct DualPath {
  DualVertex start;
  std::vector<i64> positions2;  // doubled x at times start.t, start.t-1, ...

  i64 time_at(std::size_t i) const { return start.t - static_cast<i64>(i); }
};

// All dual vertices of row t with midpoint in [x_lo, x_hi], sorted.
template <EnvironmentModel E>
std::vector<DualVertex> dual_vertices_in_row(const E& env, i64 t, i64 x_lo, i64 x_hi) {
  if (x_lo >= x_hi) throw std::invalid_argument("dual_vertices_in_row: x_lo must be < x_hi");
  std::vector<DualVertex> out;
  i64 o = env.open(x_lo, t) ? x_lo : x_lo - k_left(env, x_lo, t);
  while (true) {
    const i64 o_next = o + k_right(env, o, t);
    const i64 x2 = o + o_next;
    if (x2 > 2 * x_hi) break;
    if (x2 >= 2 * x_lo) out.push_back(DualVertex{x2, t});
    o = o_next;
  }
  return out;
}

namespace detail {

inline i64 floor_div2(i64 a) { return a >= 0 ? a / 2 : -((-a + 1) / 2); }
inline i64 ceil_div2(i64 a) { return -floor_div2(-a); }

// a^l: largest open k in the row below z_hat whose l-step lands strictly
// left of z_hat's position. l-paths from one row never cross, so the
// qualifying cells form a prefix of the open cells.
template <EnvironmentModel E>
i64 dual_a_l(const E& env, const DualVertex& z_hat) {
  const i64 row = z_hat.t - 1;
  const i64 m2 = z_hat.x2;
  i64 k = floor_div2(z_hat.x2);
  if (!env.open(k, row)) k -= k_left(env, k, row);
  const i64 guard = 4 * env.r_max();
  if (2 * step_x(env, k, row, StepKind::Left) < m2) {
    for (i64 i = 0; i < guard; ++i) {
      const i64 next = k + k_right(env, k, row);
      if (2 * step_x(env, next, row, StepKind::Left) >= m2) return k;
      k = next;
    }
  } else {
    for (i64 i = 0; i < guard; ++i) {
      k -= k_left(env, k, row);
      if (2 * step_x(env, k, row, StepKind::Left) < m2) return k;
    }
  }
  throw RadiusExceeded("dual step scan exceeded bound");
}

// a^r: smallest open k whose r-step lands strictly right of z_hat.
template <EnvironmentModel E>
i64 dual_a_r(const E& env, const DualVertex& z_hat) {
  const i64 row = z_hat.t - 1;
  const i64 m2 = z_hat.x2;
  i64 k = ceil_div2(z_hat.x2);
  if (!env.open(k, row)) k += k_right(env, k, row);
  const i64 guard = 4 * env.r_max();
  if (2 * step_x(env, k, row, StepKind::Right) > m2) {
    for (i64 i = 0; i < guard; ++i) {
      const i64 prev = k - k_left(env, k, row);
      if (2 * step_x(env, prev, row, StepKind::Right) <= m2) return k;
      k = prev;
    }
  } else {
    for (i64 i = 0; i < guard; ++i) {
      k += k_right(env, k, row);
      if (2 * step_x(env, k, row, StepKind::Right) > m2) return k;
    }
  }
  throw RadiusExceeded("dual step scan exceeded bound");
}

}  // namespace detail

// One backward dual step. In the non-branch case (a^l != a^r) both kinds
// move to the midpoint of (a^l, a^r). In the branch case (a^l == a^r == a,
// exactly when the forward system branches at (a, t-1)) the left/right
// sense is reversed: kind Left goes to the dual neighbor right of a, kind
// Right to the dual neighbor left of a.
template <EnvironmentModel E>
DualVertex dual_step(const E& env, const DualVertex& z_hat, StepKind kind) {
  const i64 al = detail::dual_a_l(env, z_hat);
  const i64 ar = detail::dual_a_r(env, z_hat);
  const i64 row = z_hat.t - 1;
  if (al != ar) return DualVertex{al + ar, row};
  if (kind == StepKind::Left) return DualVertex{2 * al + k_right(env, al, row), row};
  return DualVertex{2 * al - k_left(env, al, row), row};
}

template <EnvironmentModel E>
bool dual_branches_at(const E& env, const DualVertex& z_hat) {
  return detail::dual_a_l(env, z_hat) == detail::dual_a_r(env, z_hat);
}

template <EnvironmentModel E>
DualPath dual_walk(const E& env, const DualVertex& z_hat, StepKind kind, i64 steps) {
  DualPath path{z_hat, {}};
  path.positions2.reserve(static_cast<std::size_t>(steps) + 1);
  path.positions2.push_back(z_hat.x2);
  DualVertex v = z_hat;
  for (i64 k = 0; k < steps; ++k) {
    v = dual_step(env, v, kind);
    path.positions2.push_back(v.x2);
  }
  return path;
}

// Exact one-step law of a dual path, keyed by doubled increment 2v.
// Non-integer positions: P(2v = d) = P(G1 - G2 = d). Integer positions add
// the open-in-front cases: no-branch forced left/right and the kept
// branching, which for kind Left jumps right (the reversed sense) and for
// kind Right jumps left. Series truncated by a tail-mass certificate.
inline DiscretePmf dual_kernel(double p, double epsilon, bool at_integer,
                               StepKind kind = StepKind::Left, double tail_mass = 1e-12) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("dual_kernel: p must be in (0,1)");
  const double q = 1.0 - p;
  const auto geom_diff = [&](i64 d) { return p * std::pow(q, std::abs(d)) / (2.0 - p); };
  const auto geom = [&](i64 k) { return k >= 1 ? p * std::pow(q, k - 1) : 0.0; };

  DiscretePmf pmf;
  // P(|G1 - G2| > D) = 2 q^(D+1) / (2 - p); P(G > D) = q^D
  i64 d_max = 1;
  while (2.0 * std::pow(q, d_max + 1) / (2.0 - p) + std::pow(q, d_max) > tail_mass) ++d_max;

  for (i64 d = -d_max; d <= d_max; ++d) {
    double w = at_integer ? (1.0 - p) * geom_diff(d) : geom_diff(d);
    if (at_integer) {
      w += 0.5 * p * (1.0 - epsilon) * geom(std::abs(d));
      w += p * epsilon * geom(kind == StepKind::Left ? d : -d);
    }
    if (w > 0.0) pmf.mass[d] += w;
  }
  return pmf;
}

struct Window {
  i64 x_lo, x_hi, t_lo, t_hi;
};

struct DualityReport {
  i64 crossings = 0;      // same-kind forward/dual crossings (must be 0)
  i64 dnb_branches = 0;   // branch cells with t in [t_lo, t_hi-1]
  i64 dual_branches = 0;  // dual branch vertices with t in [t_lo+1, t_hi]
};

// Exhaustive window check of the forward/dual correspondence: walks every
// always-left (and always-right) forward edge and dual edge in the window,
// counts forbidden same-kind crossings and branch events on both sides.
// A branch cell (a, t) pairs with the dual branch vertex at (a, t+1), so
// interior counts must match exactly.
template <EnvironmentModel E>
DualityReport verify_duality(const E& env, const Window& w) {
  if (w.x_lo >= w.x_hi || w.t_lo >= w.t_hi)
    throw std::invalid_argument("verify_duality: empty window");
  DualityReport report;

  struct Edge {
    i64 lo2, hi2;  // doubled x at slab bottom / top
  };
  // forward edges span [t, t+1] with lo at t; dual edges from row t+1 span
  // the same slab with hi at t+1.
  std::vector<std::vector<Edge>> fwd_l(w.t_hi - w.t_lo), fwd_r(w.t_hi - w.t_lo);
  std::vector<std::vector<Edge>> dual_l(w.t_hi - w.t_lo), dual_r(w.t_hi - w.t_lo);

  for (i64 t = w.t_lo; t < w.t_hi; ++t) {
    auto& slab_l = fwd_l[t - w.t_lo];
    auto& slab_r = fwd_r[t - w.t_lo];
    for (i64 x = w.x_lo; x <= w.x_hi; ++x) {
      if (!env.open(x, t)) continue;
      const i64 xl = step_x(env, x, t, StepKind::Left);
      const i64 xr = step_x(env, x, t, StepKind::Right);
      slab_l.push_back(Edge{2 * x, 2 * xl});
      slab_r.push_back(Edge{2 * x, 2 * xr});
      if (xl != xr) ++report.dnb_branches;
    }
  }

  for (i64 t = w.t_lo + 1; t <= w.t_hi; ++t) {
    auto& slab_l = dual_l[t - 1 - w.t_lo];
    auto& slab_r = dual_r[t - 1 - w.t_lo];
    for (const DualVertex& v : dual_vertices_in_row(env, t, w.x_lo, w.x_hi)) {
      const DualVertex dl = dual_step(env, v, StepKind::Left);
      const DualVertex dr = dual_step(env, v, StepKind::Right);
      slab_l.push_back(Edge{dl.x2, v.x2});
      slab_r.push_back(Edge{dr.x2, v.x2});
      if (dl.x2 != dr.x2) ++report.dual_branches;
    }
  }

  const auto count_crossings = [](const std::vector<Edge>& fwd, const std::vector<Edge>& dual) {
    i64 c = 0;
    for (const Edge& f : fwd)
      for (const Edge& d : dual)
        if ((f.lo2 - d.lo2) * (f.hi2 - d.hi2) < 0) ++c;
    return c;
  };
  for (std::size_t s = 0; s < fwd_l.size(); ++s) {
    report.crossings += count_crossings(fwd_l[s], dual_l[s]);
    report.crossings += count_crossings(fwd_r[s], dual_r[s]);
  }
  return report;
}

// First backward step at which two same-kind dual paths coincide.
template <EnvironmentModel E>
std::optional<i64> dual_coalescence_time(const E& env, DualVertex u_hat, DualVertex v_hat,
                                         StepKind kind, i64 t_max) {
  if (u_hat.t != v_hat.t)
    throw std::invalid_argument("dual_coalescence_time: starts must share a row");
  if (u_hat.x2 == v_hat.x2) return 0;
  DualVertex a = u_hat;
  DualVertex b = v_hat;
  for (i64 t = 1; t <= t_max; ++t) {
    a = dual_step(env, a, kind);
    b = dual_step(env, b, kind);
    if (a.x2 == b.x2) return t;
  }
  return std::nullopt;
}

// First backward step at which both dual paths sit at integer positions.
template <EnvironmentModel E>
std::optional<i64> dual_integer_return_time(const E& env, DualVertex u_hat, DualVertex v_hat,
                                            StepKind kind, i64 t_max) {
  if (u_hat.t != v_hat.t)
    throw std::invalid_argument("dual_integer_return_time: starts must share a row");
  DualVertex a = u_hat;
  DualVertex b = v_hat;
  if (a.at_integer() && b.at_integer()) return 0;
  for (i64 t = 1; t <= t_max; ++t) {
    a = dual_step(env, a, kind);
    b = dual_step(env, b, kind);
    if (a.at_integer() && b.at_integer()) return t;
  }
  return std::nullopt;
}

}  // namespace drainet

#endif
