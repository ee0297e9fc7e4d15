#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "drainet/environment.hpp"
#include "drainet/stats.hpp"
#include "test_env_util.hpp"

using namespace drainet;

TEST_CASE("cell_state is a pure function of seed and coordinates") {
  HashedEnvironment env(EnvParams{0.5, 0.3, 42});
  const CellState a = env.cell_state(Cell{0, 0});
  const CellState b = env.cell_state(Cell{0, 0});
  CHECK(a.open == b.open);
  CHECK(a.theta == b.theta);

  HashedEnvironment other(EnvParams{0.5, 0.3, 43});
  int differing = 0;
  for (i64 x = 0; x < 64; ++x)
    if (env.open(x, 0) != other.open(x, 0)) ++differing;
  CHECK(differing > 0);
}

TEST_CASE("epsilon zero never yields theta zero") {
  HashedEnvironment env(EnvParams{0.5, 0.0, 7});
  for (i64 x = -500; x <= 500; ++x) {
    const int th = env.theta(x, 3);
    CHECK(th != 0);
    CHECK((th == -1 || th == 1));
  }
}

TEST_CASE("open fraction matches p within the binomial band") {
  HashedEnvironment env(EnvParams{0.5, 0.0, 11});
  i64 open_count = 0;
  const i64 total = 1000000;
  for (i64 i = 0; i < total; ++i)
    if (env.open(i % 1000, i / 1000)) ++open_count;
  const double fraction = static_cast<double>(open_count) / static_cast<double>(total);
  CHECK(std::abs(fraction - 0.5) < 0.002);
}

TEST_CASE("theta law matches (epsilon, (1-epsilon)/2, (1-epsilon)/2)") {
  const double eps = 0.3;
  HashedEnvironment env(EnvParams{0.5, eps, 19});
  i64 zero = 0, minus = 0;
  const i64 total = 400000;
  for (i64 i = 0; i < total; ++i) {
    const int th = env.theta(i % 1000, i / 1000);
    if (th == 0) ++zero;
    if (th == -1) ++minus;
  }
  const double n = static_cast<double>(total);
  CHECK(std::abs(zero / n - eps) < 3.0 * std::sqrt(eps * (1 - eps) / n));
  const double half = (1 - eps) / 2;
  CHECK(std::abs(minus / n - half) < 3.0 * std::sqrt(half * (1 - half) / n));
}

TEST_CASE("underlying hash stream is uniform across bins") {
  const i64 total = 200000;
  const int bins = 32;
  std::vector<double> counts(bins, 0.0);
  for (i64 i = 0; i < total; ++i) {
    const double u = to_u01(cell_hash(123, i % 541, i / 541, 0));
    ++counts[static_cast<int>(u * bins)];
  }
  const double expected = static_cast<double>(total) / bins;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < chi2_quantile(bins - 1, 0.99));
}

TEST_CASE("nearest_open basic examples") {
  testing::TableEnvironment env;
  env.open_cells(1, {0});
  CHECK(nearest_open(env, Cell{0, 1}, Side::Either) == Cell{0, 1});

  testing::TableEnvironment env2;
  env2.open_cells(1, {-2, 1});
  CHECK(nearest_open(env2, Cell{0, 1}, Side::Either) == Cell{1, 1});

  testing::TableEnvironment env3;
  env3.open_cells(0, {-3, 0, 2});
  CHECK(nearest_open(env3, Cell{0, 0}, Side::Left) == Cell{-3, 0});
  CHECK(nearest_open(env3, Cell{0, 0}, Side::Right) == Cell{2, 0});
}

TEST_CASE("nearest_open raises RadiusExceeded on an empty row") {
  testing::TableEnvironment env(8);
  CHECK_THROWS_AS(nearest_open(env, Cell{0, 0}, Side::Either), RadiusExceeded);
  CHECK_THROWS_AS(k_right(env, 0, 0), RadiusExceeded);
}

TEST_CASE("nearest strictly-right distance has the Geometric(p) mean") {
  HashedEnvironment env(EnvParams{0.5, 0.0, 23});
  double sum = 0.0;
  const i64 total = 1000000;
  for (i64 i = 0; i < total; ++i) sum += static_cast<double>(k_right(env, 0, i));
  CHECK(std::abs(sum / static_cast<double>(total) - 2.0) < 0.01);
}

TEST_CASE("K_left and K_right are independent Geometric(p)") {
  const double p = 0.5;
  HashedEnvironment env(EnvParams{p, 0.0, 31});
  const int cap = 9;  // values >= cap pooled
  std::vector<std::vector<double>> counts(cap, std::vector<double>(cap, 0.0));
  const i64 total = 1000000;
  for (i64 i = 0; i < total; ++i) {
    const int kl = static_cast<int>(std::min<i64>(k_left(env, 0, i), cap));
    const int kr = static_cast<int>(std::min<i64>(k_right(env, 0, i), cap));
    ++counts[kl - 1][kr - 1];
  }
  const auto marginal = [&](int k) {
    return k < cap ? p * std::pow(1 - p, k - 1) : std::pow(1 - p, cap - 1);
  };
  double chi2 = 0.0;
  for (int a = 1; a <= cap; ++a) {
    for (int b = 1; b <= cap; ++b) {
      const double expected = static_cast<double>(total) * marginal(a) * marginal(b);
      const double diff = counts[a - 1][b - 1] - expected;
      chi2 += diff * diff / expected;
    }
  }
  CHECK(chi2 < chi2_quantile(cap * cap - 1, 0.99));
}

TEST_CASE("tie probability above an open cell is p(1-p)/(2-p)") {
  const double p = 0.5;
  HashedEnvironment env(EnvParams{p, 0.0, 37});
  i64 opens = 0, ties = 0;
  for (i64 row = 0; row < 2000000 && opens < 900000; ++row) {
    if (!env.open(0, 2 * row)) continue;
    ++opens;
    const i64 t1 = 2 * row + 1;
    if (env.open(0, t1)) continue;
    for (i64 k = 1; k <= env.r_max(); ++k) {
      const bool l = env.open(-k, t1);
      const bool r = env.open(k, t1);
      if (l && r) ++ties;
      if (l || r) break;
    }
  }
  const double target = p * (1 - p) / (2 - p);
  const double frac = static_cast<double>(ties) / static_cast<double>(opens);
  const double band = 3.0 * std::sqrt(target * (1 - target) / static_cast<double>(opens));
  CHECK(std::abs(frac - target) < band);
}

TEST_CASE("EnvParams validation") {
  CHECK_THROWS_AS(HashedEnvironment(EnvParams{1.5, 0.0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(HashedEnvironment(EnvParams{0.0, 0.0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(HashedEnvironment(EnvParams{0.5, 1.5, 1}), std::invalid_argument);
  HashedEnvironment env(EnvParams{0.25, 0.0, 1});
  CHECK(env.r_max() == 240);  // ceil(60 / 0.25)
}

TEST_CASE("overlay forcing is exact and local") {
  HashedEnvironment env(EnvParams{0.5, 0.0, 41});
  OverlayEnvironment overlay(env);
  overlay.force_open(Cell{0, 0}).force_closed(Cell{1, 0});
  CHECK(overlay.open(0, 0));
  CHECK(!overlay.open(1, 0));
  for (i64 x = -20; x <= 20; ++x) CHECK(overlay.open(x, 5) == env.open(x, 5));
}
