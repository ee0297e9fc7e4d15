#ifndef DRAINET_REFERENCE_HPP
#define DRAINET_REFERENCE_HPP

#include <vector>

#include "drainet/lattice_paths.hpp"
#include "drainet/pmf.hpp"
#include "drainet/rng.hpp"

namespace drainet {

// Closed-form theoretical targets for a parameter set with epsilon = b/n.
struct TheoryConstants {
  double p = 0.5;
  double b = 1.0;
  double n = 50.0;
  double epsilon = 0.02;
  double b_p = 0.0;        // limit drift b (1-p) / (2-p)^2
  double lambda_p2 = 0.0;  // increment variance, from kernel summation
  double tie_prob = 0.0;   // p (1-p) / (2-p)
  double branch_prob = 0.0;

  static TheoryConstants from_pbn(double p, double b, double n);
  static TheoryConstants from_epsilon(double p, double epsilon, double n);
};

// No-branching one-step displacement law P_v(0, .): mass p at 0 and
// p(1-p)^{2|d|} + (p^2/2)(1-p)^{2|d|-1} at d != 0. Truncated by a
// tail-mass certificate.
DiscretePmf kernel_pv(double p, double tail_mass = 1e-12);

enum class WalkKind { Left, Right, Unbiased };

// Exact one-step law of a DNB walk by enumeration over the local
// environment (cell in front open; distances to the nearest open cell on
// each side otherwise). Independent of the series form in kernel_pv.
DiscretePmf enumerate_step_law(double p, double epsilon, WalkKind kind, double tail_mass = 1e-13);

// Law of the branch correction applied to an l-path: jumps -2k when the
// base walk jumped +k and the kept branching chose the right edge.
// Mass (epsilon/2)(1-p) p^2 (1-p)^{2(k-1)} at -2k, remainder at 0.
DiscretePmf branch_correction_law(double p, double epsilon, double tail_mass = 1e-12);

// kernel_pv with the branch correction folded in on tie events; equals the
// l-path (or mirrored r-path) one-step law.
DiscretePmf kernel_with_branch_correction(double p, double epsilon, WalkKind kind,
                                          double tail_mass = 1e-12);

double lambda_p2_from_kernel(double p, double tail_mass = 1e-14);

// Coalescing Brownian pair survival 2 Phi(delta / sqrt(2 t lambda2)) - 1.
double survival_probability(double delta, double t, double lambda2);

struct LRPairState {
  double L = 0.0;
  double R = 0.0;
  double T_clock = 0.0;  // time driven by independent noises
  double S_clock = 0.0;  // time driven by the shared noise
  bool met = false;
};

// Euler scheme for the left-right pair: independent Gaussian drivers with
// drifts -b_p, +b_p while apart; a shared driver within meet_threshold of
// each other after the first meeting. An apart step that would put L above
// R is absorbed at L = R and held there for |undershoot| / (2 b_p) of
// model time, the Skorokhod lift of the ordering constraint; this
// reproduces the sticky occupation of the boundary, where a plain clamp
// would reflect the gap and inflate its law. The clocks advance by whole
// steps so T + S equals elapsed time exactly.
class LRPairSimulator {
 public:
  LRPairSimulator(double L0, double R0, double lambda, double b_p, double dt, u64 seed,
                  double meet_threshold = 0.0);

  void step();
  const LRPairState& state() const { return state_; }
  i64 steps_taken() const { return step_count_; }
  double elapsed() const { return static_cast<double>(step_count_) * dt_; }
  double meet_threshold() const { return threshold_; }

 private:
  void publish();

  LRPairState state_;
  SplitMix rng_;
  double lambda_, b_p_, dt_, sqrt_dt_, threshold_;
  double center_ = 0.0, gap_ = 0.0;
  double sticky_budget_ = 0.0;  // remaining model time glued at gap zero
  bool started_below_;  // R0 < L0: pair must first cross before ordering applies
  i64 step_count_ = 0;
  i64 t_steps_ = 0;
};

std::vector<LRPairState> simulate_lr_pair(double L0, double R0, double lambda, double b_p,
                                          double dt, double T, u64 seed,
                                          double meet_threshold = 0.0);

}  // namespace drainet

#endif
