#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "drainet/lattice_paths.hpp"
#include "drainet/reference.hpp"
#include "drainet/stats.hpp"
#include "test_env_util.hpp"

using namespace drainet;

namespace {

HashedEnvironment make_env(double p, double eps, u64 seed) {
  return HashedEnvironment(EnvParams{p, eps, seed});
}

}  // namespace

TEST_CASE("gamma follows the nearest-open-above rule") {
  SUBCASE("unique nearest above") {
    testing::TableEnvironment env;
    env.open_cells(0, {0}).open_cells(1, {0});
    CHECK(gamma(env, Cell{0, 0}, StepKind::Left) == Cell{0, 1});
    CHECK(gamma(env, Cell{0, 0}, StepKind::Right) == Cell{0, 1});
  }
  SUBCASE("tie kept as branching when theta is zero") {
    testing::TableEnvironment env;
    env.open_cells(0, {0}).open_cells(1, {-1, 1}).set_theta(0, 0, 0);
    CHECK(gamma(env, Cell{0, 0}, StepKind::Left) == Cell{-1, 1});
    CHECK(gamma(env, Cell{0, 0}, StepKind::Right) == Cell{1, 1});
    CHECK(branches_at(env, 0, 0));
  }
  SUBCASE("tie resolved right when theta is +1") {
    testing::TableEnvironment env;
    env.open_cells(0, {0}).open_cells(1, {-1, 1}).set_theta(0, 0, 1);
    CHECK(gamma(env, Cell{0, 0}, StepKind::Left) == Cell{1, 1});
    CHECK(gamma(env, Cell{0, 0}, StepKind::Right) == Cell{1, 1});
    CHECK(!branches_at(env, 0, 0));
  }
  SUBCASE("closed start is rejected") {
    testing::TableEnvironment env;
    env.open_cells(1, {0});
    CHECK_THROWS_AS(gamma(env, Cell{0, 0}, StepKind::Left), NotOpen);
    CHECK_THROWS_AS(walk(env, Cell{0, 0}, Selector::always_left(), 5), NotOpen);
  }
}

TEST_CASE("walk with one step reproduces gamma") {
  auto env = make_env(0.5, 0.3, 101);
  OverlayEnvironment overlay(env);
  overlay.force_open(Cell{0, 0});
  const LatticePath path = walk(overlay, Cell{0, 0}, Selector::always_right(), 1);
  CHECK(path.positions.size() == 2);
  CHECK(path.positions[1] == gamma(overlay, Cell{0, 0}, StepKind::Right).x);
}

TEST_CASE("explicit selectors are consumed one symbol per step") {
  auto env = make_env(0.5, 0.5, 103);
  OverlayEnvironment overlay(env);
  overlay.force_open(Cell{0, 0});
  const Selector sel = Selector::explicit_sequence({StepKind::Left, StepKind::Right});
  CHECK_NOTHROW(walk(overlay, Cell{0, 0}, sel, 2));
  CHECK_THROWS_AS(walk(overlay, Cell{0, 0}, sel, 3), SelectorExhausted);
}

TEST_CASE("walks are pure functions of seed, parameters and start") {
  auto env = make_env(0.4, 0.2, 107);
  OverlayEnvironment overlay(env);
  overlay.force_open(Cell{3, -2});
  const LatticePath a = walk(overlay, Cell{3, -2}, Selector::always_left(), 200);
  const LatticePath b = walk(overlay, Cell{3, -2}, Selector::always_left(), 200);
  CHECK(a.positions == b.positions);
}

TEST_CASE("always-left stays weakly left of always-right") {
  for (u64 seed = 0; seed < 30; ++seed) {
    auto env = make_env(0.5, 0.4, 200 + seed);
    OverlayEnvironment overlay(env);
    overlay.force_open(Cell{0, 0});
    const LatticePath l = walk(overlay, Cell{0, 0}, Selector::always_left(), 300);
    const LatticePath r = walk(overlay, Cell{0, 0}, Selector::always_right(), 300);
    for (std::size_t i = 0; i < l.positions.size(); ++i) CHECK(l.positions[i] <= r.positions[i]);
  }
}

TEST_CASE("same-kind paths from one row never cross") {
  for (u64 seed = 0; seed < 10; ++seed) {
    auto env = make_env(0.45, 0.3, 300 + seed);
    std::vector<LatticePath> paths;
    for (i64 x = -20; x <= 20; x += 5) {
      OverlayEnvironment overlay(env);
      overlay.force_open(Cell{x, 0});
      paths.push_back(walk(overlay, Cell{x, 0}, Selector::always_left(), 150));
    }
    for (std::size_t a = 0; a + 1 < paths.size(); ++a)
      for (std::size_t i = 0; i < paths[a].positions.size(); ++i)
        CHECK(paths[a].positions[i] <= paths[a + 1].positions[i]);
  }
}

TEST_CASE("every selector path is sandwiched between the l- and r-path") {
  auto env = make_env(0.5, 0.6, 401);
  OverlayEnvironment overlay(env);
  overlay.force_open(Cell{0, 0});
  const i64 steps = 200;
  const LatticePath l = walk(overlay, Cell{0, 0}, Selector::always_left(), steps);
  const LatticePath r = walk(overlay, Cell{0, 0}, Selector::always_right(), steps);
  SplitMix coin(77);
  std::vector<StepKind> seq;
  for (i64 i = 0; i < steps; ++i)
    seq.push_back(coin.next_below(2) == 0 ? StepKind::Left : StepKind::Right);
  const LatticePath mid = walk(overlay, Cell{0, 0}, Selector::explicit_sequence(seq), steps);
  for (std::size_t i = 0; i < mid.positions.size(); ++i) {
    CHECK(l.positions[i] <= mid.positions[i]);
    CHECK(mid.positions[i] <= r.positions[i]);
  }
}

TEST_CASE("one-step displacement law matches the kernel within TV 0.005") {
  const double p = 0.5;
  auto env = make_env(p, 0.0, 501);
  OverlayEnvironment overlay(env);
  overlay.force_open(Cell{0, 0});
  std::map<i64, i64> counts;
  i64 x = 0;
  const i64 steps = 1000000;
  for (i64 s = 0; s < steps; ++s) {
    const i64 nx = step_x(overlay, x, s, StepKind::Left);
    ++counts[nx - x];
    x = nx;
  }
  CHECK(tv_distance(kernel_pv(p), normalize_counts(counts)) < 0.005);
}

TEST_CASE("unbiased-selector increments have zero mean within 3 sigma") {
  auto env = make_env(0.5, 0.5, 503);
  OverlayEnvironment overlay(env);
  overlay.force_open(Cell{0, 0});
  SplitMix coin(13);
  i64 x = 0;
  const i64 steps = 1000000;
  double sum = 0.0, sum2 = 0.0;
  for (i64 s = 0; s < steps; ++s) {
    const i64 nx =
        step_x(overlay, x, s, coin.next_below(2) == 0 ? StepKind::Left : StepKind::Right);
    const double d = static_cast<double>(nx - x);
    sum += d;
    sum2 += d * d;
    x = nx;
  }
  const double mean = sum / steps;
  const double se = std::sqrt((sum2 / steps - mean * mean) / steps);
  CHECK(std::abs(mean) < 3.0 * se);
}

TEST_CASE("one-step law is invariant under space-time translation") {
  const i64 samples = 100000;
  const auto histogram = [&](Cell anchor, u64 salt) {
    std::map<i64, i64> counts;
    for (i64 r = 0; r < samples; ++r) {
      auto env = make_env(0.5, 0.0, derive_seed(600 + salt, static_cast<u64>(r)));
      OverlayEnvironment overlay(env);
      overlay.force_open(anchor);
      ++counts[step_x(overlay, anchor.x, anchor.t, StepKind::Left) - anchor.x];
    }
    return counts;
  };
  const auto a = histogram(Cell{0, 0}, 0);
  const auto b = histogram(Cell{137, 2029}, 1);

  // two-sample chi-square over pooled bins with both counts >= 10
  double chi2 = 0.0;
  int dof = -1;
  for (const auto& [d, ca] : a) {
    const auto it = b.find(d);
    if (it == b.end() || ca < 10 || it->second < 10) continue;
    const double cb = static_cast<double>(it->second);
    const double diff = static_cast<double>(ca) - cb;
    chi2 += diff * diff / (static_cast<double>(ca) + cb);
    ++dof;
  }
  CHECK(dof > 3);
  CHECK(chi2 < chi2_quantile(dof, 0.99));
}

TEST_CASE("long jumps satisfy the exponential bound") {
  const double p = 0.5;
  auto env = make_env(p, 0.3, 701);
  OverlayEnvironment overlay(env);
  overlay.force_open(Cell{0, 0});
  const i64 steps = 200000;
  const i64 g = 15;
  i64 x = 0;
  i64 big = 0;
  for (i64 s = 0; s < steps; ++s) {
    const i64 nx = step_x(overlay, x, s, StepKind::Left);
    if (std::llabs(nx - x) >= g) ++big;
    x = nx;
  }
  const double c = -std::log(1.0 - p);
  const double bound = 2.0 * static_cast<double>(steps) * std::exp(-c * (g - 1));
  CHECK(static_cast<double>(big) <= bound);
}

TEST_CASE("coalescence_time basics") {
  auto env = make_env(0.5, 0.1, 801);
  OverlayEnvironment overlay(env);
  overlay.force_open(Cell{0, 0}).force_open(Cell{6, 0});
  CHECK(coalescence_time(overlay, Cell{0, 0}, Cell{0, 0}, StepKind::Left, 10) == 0);

  const auto tau = coalescence_time(overlay, Cell{0, 0}, Cell{6, 0}, StepKind::Left, 100000);
  REQUIRE(tau.has_value());
  CHECK(*tau > 0);
  // positions coincide from tau on
  i64 a = 0, b = 6;
  for (i64 s = 0; s < *tau + 20; ++s) {
    a = step_x(overlay, a, s, StepKind::Left);
    b = step_x(overlay, b, s, StepKind::Left);
    if (s + 1 >= *tau) CHECK(a == b);
  }
  CHECK(!coalescence_time(overlay, Cell{0, 0}, Cell{6, 0}, StepKind::Left, 1).has_value());
}

TEST_CASE("crossing_time basics") {
  auto env = make_env(0.5, 0.2, 901);
  OverlayEnvironment overlay(env);
  overlay.force_open(Cell{0, 0}).force_open(Cell{-4, 0});
  CHECK(crossing_time(overlay, Cell{0, 0}, Cell{0, 0}, 10) == 0);
  const auto tc = crossing_time(overlay, Cell{0, 0}, Cell{-4, 0}, 100000);
  REQUIRE(tc.has_value());
  // crossing of the r-path over the l-path happens no later than the
  // coalescence of the two r-paths started at the same cells
  const auto tau = coalescence_time(overlay, Cell{0, 0}, Cell{-4, 0}, StepKind::Right, 100000);
  REQUIRE(tau.has_value());
  CHECK(*tc <= *tau);
}

TEST_CASE("r-minus-l distance grows with per-step mean 2 b_p / n") {
  const double p = 0.5, b = 1.0, n = 25.0;
  const i64 steps = 2000;
  const i64 replicas = 4000;
  double sum = 0.0;
  for (i64 r = 0; r < replicas; ++r) {
    auto env = make_env(p, b / n, derive_seed(1000, static_cast<u64>(r)));
    OverlayEnvironment overlay(env);
    overlay.force_open(Cell{0, 0}).force_open(Cell{-30, 0});
    i64 l = 0, rr = -30;
    for (i64 s = 0; s < steps; ++s) {
      l = step_x(overlay, l, s, StepKind::Left);
      rr = step_x(overlay, rr, s, StepKind::Right);
    }
    sum += static_cast<double>(rr - l);
  }
  const double per_step = (sum / replicas + 30.0) / steps;
  const double target = 2.0 * b * (1 - p) / ((2 - p) * (2 - p)) / n;
  CHECK(per_step == doctest::Approx(target).epsilon(0.25));
}

TEST_CASE("count_branch_events matches the branch fraction") {
  SUBCASE("epsilon zero has no branches") {
    auto env = make_env(0.5, 0.0, 1101);
    OverlayEnvironment overlay(env);
    overlay.force_open(Cell{0, 0});
    const LatticePath path = walk(overlay, Cell{0, 0}, Selector::always_left(), 2000);
    CHECK(count_branch_events(overlay, path) == 0);
  }
  SUBCASE("full branching fraction is p(1-p)/(2-p)") {
    const double p = 0.5;
    auto env = make_env(p, 1.0, 1103);
    OverlayEnvironment overlay(env);
    overlay.force_open(Cell{0, 0});
    const i64 steps = 200000;
    const LatticePath path = walk(overlay, Cell{0, 0}, Selector::always_left(), steps);
    const double frac =
        static_cast<double>(count_branch_events(overlay, path)) / (steps + 1.0);
    const double target = p * (1 - p) / (2 - p);
    const double band = 3.0 * std::sqrt(target * (1 - target) / (steps + 1.0));
    CHECK(std::abs(frac - target) < band + 1.0 / steps);
  }
}
