#include "drainet/reference.hpp"

#include <cmath>
#include <limits>

#include "drainet/stats.hpp"

namespace drainet {

TheoryConstants TheoryConstants::from_pbn(double p, double b, double n) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("TheoryConstants: p must be in (0,1)");
  if (!(b >= 0.0)) throw std::invalid_argument("TheoryConstants: b must be >= 0");
  if (!(n >= 1.0)) throw std::invalid_argument("TheoryConstants: n must be >= 1");
  TheoryConstants c;
  c.p = p;
  c.b = b;
  c.n = n;
  c.epsilon = b / n;
  if (c.epsilon > 1.0) throw std::invalid_argument("TheoryConstants: b/n must be <= 1");
  c.b_p = b * (1.0 - p) / ((2.0 - p) * (2.0 - p));
  c.lambda_p2 = lambda_p2_from_kernel(p);
  c.tie_prob = p * (1.0 - p) / (2.0 - p);
  c.branch_prob = c.tie_prob * c.epsilon;
  return c;
}

TheoryConstants TheoryConstants::from_epsilon(double p, double epsilon, double n) {
  return from_pbn(p, epsilon * n, n);
}

DiscretePmf kernel_pv(double p, double tail_mass) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("kernel_pv: p must be in (0,1)");
  const double q = 1.0 - p;
  DiscretePmf pmf;
  pmf.mass[0] = p;
  // residual mass beyond D: 2 sum_{d > D} [p q^{2d} + (p^2/2) q^{2d-1}]
  //                        = q^{2D} (2 p q^2 + p^2 q) / (1 - q^2)
  const double tail_coeff = (2.0 * p * q * q + p * p * q) / (1.0 - q * q);
  for (i64 d = 1;; ++d) {
    const double w = p * std::pow(q, 2 * d) + 0.5 * p * p * std::pow(q, 2 * d - 1);
    pmf.mass[d] = w;
    pmf.mass[-d] = w;
    if (tail_coeff * std::pow(q, 2 * d) < tail_mass) break;
  }
  return pmf;
}

DiscretePmf enumerate_step_law(double p, double epsilon, WalkKind kind, double tail_mass) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("enumerate_step_law: p in (0,1)");
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("enumerate_step_law: epsilon in [0,1]");
  const double q = 1.0 - p;

  // (1-p) * P(either side has no open cell within R) < tail_mass
  i64 radius = 1;
  while (q * 2.0 * std::pow(q, radius) >= tail_mass) ++radius;

  double tie_left = 0.5, tie_right = 0.5;
  if (kind == WalkKind::Left) {
    tie_left = epsilon + (1.0 - epsilon) * 0.5;
    tie_right = 1.0 - tie_left;
  } else if (kind == WalkKind::Right) {
    tie_right = epsilon + (1.0 - epsilon) * 0.5;
    tie_left = 1.0 - tie_right;
  }

  DiscretePmf pmf;
  pmf.mass[0] = p;  // cell in front open
  for (i64 kl = 1; kl <= radius; ++kl) {
    for (i64 kr = 1; kr <= radius; ++kr) {
      const double w = q * (p * std::pow(q, kl - 1)) * (p * std::pow(q, kr - 1));
      if (kl < kr) {
        pmf.mass[-kl] += w;
      } else if (kr < kl) {
        pmf.mass[kr] += w;
      } else {
        pmf.mass[-kl] += w * tie_left;
        pmf.mass[kl] += w * tie_right;
      }
    }
  }
  return pmf;
}

DiscretePmf branch_correction_law(double p, double epsilon, double tail_mass) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("branch_correction_law: p in (0,1)");
  const double q = 1.0 - p;
  DiscretePmf pmf;
  double moved = 0.0;
  if (epsilon > 0.0) {
    const double tail_coeff = 0.5 * epsilon * q * p * p / (1.0 - q * q);
    for (i64 k = 1;; ++k) {
      const double w = 0.5 * epsilon * q * p * p * std::pow(q, 2 * (k - 1));
      pmf.mass[-2 * k] = w;
      moved += w;
      if (tail_coeff * std::pow(q, 2 * k) < tail_mass) break;
    }
  }
  pmf.mass[0] = 1.0 - moved;
  return pmf;
}

DiscretePmf kernel_with_branch_correction(double p, double epsilon, WalkKind kind,
                                          double tail_mass) {
  DiscretePmf pmf = kernel_pv(p, tail_mass);
  if (kind == WalkKind::Unbiased || epsilon == 0.0) return pmf;
  const DiscretePmf corr = branch_correction_law(p, epsilon, tail_mass);
  // base jump +k composes with correction -2k; r-kind is the mirror image
  for (const auto& [d, w] : corr.mass) {
    if (d == 0) continue;
    const i64 k = -d / 2;
    if (!pmf.mass.count(k)) continue;
    if (kind == WalkKind::Left) {
      pmf.mass[k] -= w;
      pmf.mass[-k] += w;
    } else {
      pmf.mass[-k] -= w;
      pmf.mass[k] += w;
    }
  }
  return pmf;
}

double lambda_p2_from_kernel(double p, double tail_mass) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("lambda_p2_from_kernel: p in (0,1)");
  const double q = 1.0 - p;
  double sum = 0.0;
  // second-moment tail: sum_{d>D} 2 d^2 [p q^{2d} + (p^2/2) q^{2d-1}]
  // bounded by 2 (D+1)^2 q^{2D} (2 p q^2 + p^2 q) / (1 - q^2)^3 margin
  for (i64 d = 1;; ++d) {
    const double term =
        2.0 * static_cast<double>(d) * static_cast<double>(d) *
        (p * std::pow(q, 2 * d) + 0.5 * p * p * std::pow(q, 2 * d - 1));
    sum += term;
    const double ratio = q * q;  // asymptotic term ratio
    if (term * ratio / (1.0 - ratio) * 4.0 < tail_mass && d > 4) break;
  }
  return sum;
}

double survival_probability(double delta, double t, double lambda2) {
  if (delta < 0.0) throw std::invalid_argument("survival_probability: delta must be >= 0");
  if (!(t > 0.0) || !(lambda2 > 0.0))
    throw std::invalid_argument("survival_probability: t and lambda2 must be > 0");
  return 2.0 * normal_cdf(delta / std::sqrt(2.0 * t * lambda2)) - 1.0;
}

LRPairSimulator::LRPairSimulator(double L0, double R0, double lambda, double b_p, double dt,
                                 u64 seed, double meet_threshold)
    : rng_(seed), lambda_(lambda), b_p_(b_p), dt_(dt) {
  if (!(dt > 0.0)) throw InvalidStep("LRPairSimulator: dt must be > 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("LRPairSimulator: lambda must be > 0");
  sqrt_dt_ = std::sqrt(dt);
  threshold_ = meet_threshold > 0.0 ? meet_threshold : lambda * sqrt_dt_ / 10.0;
  center_ = 0.5 * (L0 + R0);
  gap_ = R0 - L0;
  started_below_ = R0 < L0;
  if (!started_below_ && gap_ <= threshold_) {
    state_.met = true;
    if (b_p_ == 0.0) sticky_budget_ = std::numeric_limits<double>::infinity();
  }
  publish();
}

void LRPairSimulator::publish() {
  state_.L = center_ - 0.5 * gap_;
  state_.R = center_ + 0.5 * gap_;
  state_.T_clock = static_cast<double>(t_steps_) * dt_;
  state_.S_clock = static_cast<double>(step_count_) * dt_ - state_.T_clock;
}

void LRPairSimulator::step() {
  if (sticky_budget_ > 0.0) {
    center_ += lambda_ * sqrt_dt_ * rng_.next_gaussian();
    sticky_budget_ = std::max(0.0, sticky_budget_ - dt_);
  } else {
    const double g1 = rng_.next_gaussian();
    const double g2 = rng_.next_gaussian();
    center_ += 0.5 * lambda_ * sqrt_dt_ * (g1 + g2);
    double next_gap = gap_ + lambda_ * sqrt_dt_ * (g2 - g1) + 2.0 * b_p_ * dt_;
    ++t_steps_;
    if (!state_.met && (started_below_ ? next_gap >= -threshold_ : next_gap <= threshold_))
      state_.met = true;
    if (state_.met && next_gap < 0.0) {
      // absorb the undershoot as time spent at the boundary
      sticky_budget_ = b_p_ > 0.0 ? -next_gap / (2.0 * b_p_)
                                  : std::numeric_limits<double>::infinity();
      next_gap = 0.0;
    }
    gap_ = next_gap;
  }
  ++step_count_;
  publish();
}

std::vector<LRPairState> simulate_lr_pair(double L0, double R0, double lambda, double b_p,
                                          double dt, double T, u64 seed, double meet_threshold) {
  if (!(dt > 0.0)) throw InvalidStep("simulate_lr_pair: dt must be > 0");
  if (!(T > dt)) throw std::invalid_argument("simulate_lr_pair: T must exceed dt");
  LRPairSimulator sim(L0, R0, lambda, b_p, dt, seed, meet_threshold);
  const i64 steps = static_cast<i64>(std::llround(T / dt));
  std::vector<LRPairState> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(sim.state());
  for (i64 k = 0; k < steps; ++k) {
    sim.step();
    out.push_back(sim.state());
  }
  return out;
}

}  // namespace drainet
