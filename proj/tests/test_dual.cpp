#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "drainet/dual.hpp"
#include "drainet/stats.hpp"
#include "test_env_util.hpp"

using namespace drainet;

TEST_CASE("dual vertices are midpoints of consecutive open cells") {
  SUBCASE("single gap") {
    testing::TableEnvironment env;
    env.open_cells(0, {0, 3});
    const auto vs = dual_vertices_in_row(env, 0, 0, 3);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].x2 == 3);  // midpoint 1.5
    CHECK(!vs[0].at_integer());
  }
  SUBCASE("fully open row puts one vertex between every neighbour pair") {
    testing::TableEnvironment env;
    env.open_cells(0, {-2, -1, 0, 1, 2, 3, 4, 5, 6, 7});
    const auto vs = dual_vertices_in_row(env, 0, 0, 5);
    REQUIRE(vs.size() == 6);
    for (std::size_t i = 0; i < vs.size(); ++i) {
      CHECK(vs[i].x2 == 2 * static_cast<i64>(i) - 1 + 2);  // 1, 3, 5, ...
      CHECK(!vs[i].at_integer());
    }
  }
  SUBCASE("density of dual vertices equals the open density") {
    HashedEnvironment env(EnvParams{0.5, 0.0, 77});
    i64 count = 0;
    const i64 rows = 200, width = 2000;
    for (i64 t = 0; t < rows; ++t)
      count += static_cast<i64>(dual_vertices_in_row(env, t, 0, width).size());
    const double density = static_cast<double>(count) / (rows * width);
    CHECK(std::abs(density - 0.5) < 3.0 * std::sqrt(0.25 / (rows * width)) + 0.002);
  }
}

TEST_CASE("dual step follows the worked branching example") {
  // rows 2 and 3 arranged so the dual vertex at (2, 3) sits above a kept
  // branching at (2, 2): a^l = a^r = 2, dual children (5/2, 2) and (1, 2)
  testing::TableEnvironment env;
  env.open_cells(3, {1, 3}).close_cells(3, {0, 2, 4});
  env.open_cells(2, {0, 2, 3});
  env.close_cells(2, {1});
  env.open_cells(3, {-4});  // terminates scans for cells left of 0
  env.open_cells(2, {-5});
  env.set_theta(2, 2, 0);

  const DualVertex z{4, 3};  // position 2
  CHECK(z.at_integer());
  CHECK(dual_branches_at(env, z));
  const DualVertex dl = dual_step(env, z, StepKind::Left);
  const DualVertex dr = dual_step(env, z, StepKind::Right);
  CHECK(dl.x2 == 5);  // position 5/2
  CHECK(dl.t == 2);
  CHECK(dr.x2 == 2);  // position 1
  CHECK(dr.t == 2);
}

TEST_CASE("dual step without a branching in front is a single edge") {
  testing::TableEnvironment env;
  env.open_cells(1, {0, 4});
  env.open_cells(0, {-1, 1, 3, 5});
  env.close_cells(0, {0, 2, 4});
  // vertex (2, 1); cells (1,0) and (3,0) step to opens of row 1 without ties
  const DualVertex z{4, 1};
  CHECK(!dual_branches_at(env, z));
  const DualVertex dl = dual_step(env, z, StepKind::Left);
  const DualVertex dr = dual_step(env, z, StepKind::Right);
  CHECK(dl == dr);
  CHECK(dl.t == 0);
  CHECK(dl.x2 == 4);  // midpoint of (1,0) and (3,0)
}

TEST_CASE("dual kernel normalizes and matches the closed forms") {
  const double p = 0.5, eps = 0.1;
  const DiscretePmf half = dual_kernel(p, eps, false);
  CHECK(half.total() == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(half.at(0) == doctest::Approx(p / (2.0 - p)));  // 1/3
  CHECK(std::abs(half.mean()) < 1e-12);

  const DiscretePmf full_l = dual_kernel(p, eps, true, StepKind::Left);
  CHECK(full_l.total() == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(full_l.mean() / 2.0 == doctest::Approx(eps / 2.0).epsilon(1e-9));

  const DiscretePmf full_r = dual_kernel(p, eps, true, StepKind::Right);
  for (const auto& [d, w] : full_l.mass) CHECK(full_r.at(-d) == doctest::Approx(w));

  // the three integer-position cases marginalize to total mass one
  CHECK((1 - p) + p * eps + p * (1 - eps) == doctest::Approx(1.0));
}

TEST_CASE("dual step increments follow the kernel") {
  const double p = 0.5, eps = 0.15;
  std::map<i64, i64> at_int, at_half;
  for (u64 r = 0; r < 60; ++r) {
    HashedEnvironment env(EnvParams{p, eps, derive_seed(909, r)});
    OverlayEnvironment overlay(env);
    overlay.force_open(Cell{-1, 0}).force_closed(Cell{0, 0}).force_open(Cell{1, 0});
    DualVertex v{0, 0};
    for (i64 s = 0; s < 5000; ++s) {
      const DualVertex next = dual_step(overlay, v, StepKind::Left);
      (v.at_integer() ? at_int : at_half)[next.x2 - v.x2] += 1;
      v = next;
    }
  }
  CHECK(tv_distance(normalize_counts(at_int), dual_kernel(p, eps, true)) < 0.01);
  CHECK(tv_distance(normalize_counts(at_half), dual_kernel(p, eps, false)) < 0.01);
}

TEST_CASE("dual vertices reconstruct their flanking open cells exactly") {
  HashedEnvironment env(EnvParams{0.45, 0.2, 1313});
  OverlayEnvironment overlay(env);
  overlay.force_open(Cell{-1, 0}).force_closed(Cell{0, 0}).force_open(Cell{1, 0});
  DualVertex v{0, 0};
  for (i64 s = 0; s < 300; ++s) {
    // flanks: nearest opens left/right of the midpoint sum to x2
    const i64 row = v.t;
    i64 left = (v.x2 % 2 == 0) ? v.x2 / 2 : (v.x2 - 1) / 2;
    if (v.x2 < 0 && v.x2 % 2 != 0) left = (v.x2 - 1) / 2;  // floor for odd negatives
    i64 lo = left;
    while (!overlay.open(lo, row)) --lo;
    i64 hi = left + 1;
    while (!overlay.open(hi, row)) ++hi;
    CHECK(lo + hi == v.x2);
    if (v.x2 % 2 == 0) CHECK(!overlay.open(v.x2 / 2, row));
    v = dual_step(overlay, v, StepKind::Left);
  }
}

TEST_CASE("dual branches correspond exactly to forward branches in front") {
  HashedEnvironment env(EnvParams{0.5, 0.3, 1414});
  i64 checked = 0;
  for (i64 t = 1; t <= 40; ++t) {
    for (const DualVertex& v : dual_vertices_in_row(env, t, -40, 40)) {
      const bool dual_branch = dual_branches_at(env, v);
      if (v.at_integer()) {
        CHECK(dual_branch == branches_at(env, v.x2 / 2, v.t - 1));
      } else {
        CHECK(!dual_branch);
      }
      ++checked;
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("verify_duality counts zero crossings and equal branch counts") {
  SUBCASE("branching environment") {
    HashedEnvironment env(EnvParams{0.5, 0.05, 1515});
    const DualityReport r = verify_duality(env, Window{0, 100, 0, 100});
    CHECK(r.crossings == 0);
    CHECK(r.dnb_branches == r.dual_branches);
    CHECK(r.dnb_branches > 0);
  }
  SUBCASE("no branching at epsilon zero") {
    HashedEnvironment env(EnvParams{0.5, 0.0, 1616});
    const DualityReport r = verify_duality(env, Window{0, 80, 0, 80});
    CHECK(r.crossings == 0);
    CHECK(r.dnb_branches == 0);
    CHECK(r.dual_branches == 0);
  }
}

TEST_CASE("dual coalescence basics and integer-return bound") {
  HashedEnvironment env(EnvParams{0.5, 0.1, 1717});
  OverlayEnvironment overlay(env);
  overlay.force_open(Cell{-1, 0}).force_closed(Cell{0, 0}).force_open(Cell{1, 0});
  const DualVertex v{0, 0};
  CHECK(dual_coalescence_time(overlay, v, v, StepKind::Left, 10) == 0);

  // integer-return time tail is dominated by a geometric with parameter
  // p^4 (1-p)^2
  const double p = 0.5;
  const double q_step = std::pow(p, 4) * std::pow(1 - p, 2);
  const i64 replicas = 30000;
  std::vector<i64> times;
  for (i64 r = 0; r < replicas; ++r) {
    HashedEnvironment e(EnvParams{p, 0.1, derive_seed(1818, static_cast<u64>(r))});
    OverlayEnvironment o(e);
    o.force_open(Cell{0, 0}).force_open(Cell{1, 0}).force_open(Cell{5, 0}).force_open(Cell{6, 0});
    for (i64 x = 2; x < 5; ++x) o.force_closed(Cell{x, 0});
    const auto ret =
        dual_integer_return_time(o, DualVertex{1, 0}, DualVertex{11, 0}, StepKind::Left, 400);
    times.push_back(ret ? *ret : 401);
  }
  for (i64 m : {2, 5, 10, 20}) {
    i64 above = 0;
    for (i64 t : times)
      if (t > m) ++above;
    const double frac = static_cast<double>(above) / static_cast<double>(replicas);
    const double bound = std::pow(1.0 - q_step, m);
    const double band = 3.0 * std::sqrt(bound * (1 - bound) / static_cast<double>(replicas));
    CHECK(frac <= bound + band);
  }
}

TEST_CASE("dual pairs coalesce and stay together") {
  HashedEnvironment env(EnvParams{0.5, 0.05, 1919});
  OverlayEnvironment overlay(env);
  overlay.force_open(Cell{-1, 0}).force_closed(Cell{0, 0}).force_open(Cell{1, 0});
  overlay.force_open(Cell{5, 0}).force_closed(Cell{6, 0}).force_open(Cell{7, 0});
  const DualVertex u{0, 0}, v{12, 0};
  const auto tau = dual_coalescence_time(overlay, u, v, StepKind::Left, 200000);
  REQUIRE(tau.has_value());
  DualVertex a = u, b = v;
  for (i64 s = 0; s < *tau + 10; ++s) {
    a = dual_step(overlay, a, StepKind::Left);
    b = dual_step(overlay, b, StepKind::Left);
    if (s + 1 >= *tau) CHECK(a.x2 == b.x2);
  }
}
