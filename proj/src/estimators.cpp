#include "drainet/estimators.hpp"

#include <algorithm>

#include "drainet/parallel.hpp"
#include "drainet/stats.hpp"

namespace drainet {

TheoryConstants ParamSet::theory() const {
  TheoryConstants c = TheoryConstants::from_pbn(p, b, n);
  c.epsilon = epsilon();
  c.branch_prob = c.tie_prob * c.epsilon;
  return c;
}

void ParamSet::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("params: p must be in (0,1)");
  if (!(b >= 0.0)) throw std::invalid_argument("params: b must be >= 0");
  if (!(n >= 1.0)) throw std::invalid_argument("params: n must be >= 1");
  if (!(epsilon() >= 0.0 && epsilon() <= 1.0))
    throw std::invalid_argument("params: epsilon = b n^-alpha must be in [0,1]");
}

ExperimentReport make_report(std::string name, const ParamSet& params, double estimate,
                             double ci_half_width, double target, TargetKind kind,
                             double tolerance, i64 samples) {
  ExperimentReport r;
  r.name = std::move(name);
  r.params = params;
  r.estimate = estimate;
  r.ci_half_width = ci_half_width;
  r.target = target;
  r.target_kind = kind;
  r.tolerance = tolerance;
  r.samples = samples;
  r.seed = params.seed;
  switch (kind) {
    case TargetKind::Equals: {
      const double band = std::max(ci_half_width * (3.0 / 1.96), tolerance);
      r.verdict = std::abs(estimate - target) <= band ? Verdict::Pass : Verdict::Fail;
      break;
    }
    case TargetKind::UpperBound:
      r.verdict = estimate <= target + ci_half_width ? Verdict::Pass : Verdict::Fail;
      break;
    case TargetKind::Diagnostic:
      r.verdict = Verdict::Diagnostic;
      break;
  }
  return r;
}

bool gating_pass(const std::vector<ExperimentReport>& reports) {
  for (const ExperimentReport& r : reports)
    if (r.verdict == Verdict::Fail) return false;
  return true;
}

namespace {

u64 experiment_seed(const ParamSet& params, const std::string& tag) {
  return derive_seed(params.seed, hash_str(tag));
}

EnvParams env_params_for(const ParamSet& params, u64 replica_seed) {
  return EnvParams{params.p, params.epsilon(), replica_seed, 0};
}

using Env = HashedEnvironment;
using Overlay = OverlayEnvironment<Env>;

}  // namespace

ExperimentReport estimate_drift(const ParamSet& params, StepKind kind, i64 steps, i64 replicas) {
  params.validate();
  const u64 base = experiment_seed(params, kind == StepKind::Left ? "drift-l" : "drift-r");
  std::vector<double> per_replica(static_cast<std::size_t>(replicas));
  parallel_replicas(replicas, [&](i64 r) {
    Env env(env_params_for(params, derive_seed(base, static_cast<u64>(r))));
    Overlay overlay(env);
    overlay.force_open(Cell{0, 0});
    i64 x = 0;
    for (i64 s = 0; s < steps; ++s) x = step_x(overlay, x, s, kind);
    per_replica[static_cast<std::size_t>(r)] =
        static_cast<double>(x) / static_cast<double>(steps) * params.n;
  });
  const MeanCI ci = mean_ci(per_replica);
  const double sign = kind == StepKind::Left ? -1.0 : 1.0;
  const double target =
      sign * params.epsilon() * (1.0 - params.p) / ((2.0 - params.p) * (2.0 - params.p)) * params.n;
  ExperimentReport rep =
      make_report(kind == StepKind::Left ? "estimate-drift-l" : "estimate-drift-r", params,
                  ci.mean, ci.half_width, target, TargetKind::Equals, 0.0, replicas * steps);
  return rep;
}

ExperimentReport estimate_variance(const ParamSet& params, i64 steps, i64 replicas) {
  params.validate();
  const u64 base = experiment_seed(params, "variance");
  struct Moments {
    double s1 = 0, s2 = 0, s4 = 0;
  };
  std::vector<Moments> partial(static_cast<std::size_t>(replicas));
  parallel_replicas(replicas, [&](i64 r) {
    Env env(env_params_for(params, derive_seed(base, static_cast<u64>(r))));
    Overlay overlay(env);
    overlay.force_open(Cell{0, 0});
    Moments m;
    i64 x = 0;
    for (i64 s = 0; s < steps; ++s) {
      const i64 nx = step_x(overlay, x, s, StepKind::Left);
      const double d = static_cast<double>(nx - x);
      m.s1 += d;
      m.s2 += d * d;
      m.s4 += d * d * d * d;
      x = nx;
    }
    partial[static_cast<std::size_t>(r)] = m;
  });
  double s1 = 0, s2 = 0, s4 = 0;
  for (const Moments& m : partial) {
    s1 += m.s1;
    s2 += m.s2;
    s4 += m.s4;
  }
  const double count = static_cast<double>(replicas) * static_cast<double>(steps);
  const double mean = s1 / count;
  const double var = s2 / count - mean * mean;
  const double m4 = s4 / count;
  const double se = std::sqrt(std::max(m4 - var * var, 0.0) / count);
  const double target = params.theory().lambda_p2;
  return make_report("estimate-variance", params, var, 1.96 * se, target, TargetKind::Equals,
                     0.01 * target, static_cast<i64>(count));
}

ExperimentReport branch_rate_experiment(const ParamSet& params, i64 steps, i64 replicas) {
  params.validate();
  const u64 base = experiment_seed(params, "branch-rate");
  std::vector<double> fractions(static_cast<std::size_t>(replicas));
  parallel_replicas(replicas, [&](i64 r) {
    Env env(env_params_for(params, derive_seed(base, static_cast<u64>(r))));
    Overlay overlay(env);
    overlay.force_open(Cell{0, 0});
    i64 x = 0;
    i64 branches = 0;
    for (i64 s = 0; s < steps; ++s) {
      if (branches_at(overlay, x, s)) ++branches;
      x = step_x(overlay, x, s, StepKind::Left);
    }
    fractions[static_cast<std::size_t>(r)] =
        static_cast<double>(branches) / static_cast<double>(steps);
  });
  const MeanCI ci = mean_ci(fractions);
  const TheoryConstants th = params.theory();
  return make_report("estimate-branchrate", params, ci.mean, ci.half_width, th.branch_prob,
                     TargetKind::Equals, 0.0, replicas * steps);
}

namespace {

// Per-replica coalescence time (censored: t_max + 1 sentinel), forward kind.
i64 forward_pair_coalescence(const Env& env, i64 gap, StepKind kind, i64 t_max) {
  Overlay overlay(env);
  overlay.force_open(Cell{0, 0});
  overlay.force_open(Cell{gap, 0});
  const auto tau = coalescence_time(overlay, Cell{0, 0}, Cell{gap, 0}, kind, t_max);
  return tau ? *tau : t_max + 1;
}

// Dual pair starts at distance k: integer-position vertices when k is
// even, the adjacent-midpoint construction when k is odd.
i64 dual_pair_coalescence(const Env& env, i64 gap, StepKind kind, i64 t_max) {
  Overlay overlay(env);
  DualVertex u, v;
  if (gap % 2 == 0) {
    overlay.force_open(Cell{-1, 0}).force_closed(Cell{0, 0}).force_open(Cell{1, 0});
    overlay.force_open(Cell{gap - 1, 0}).force_closed(Cell{gap, 0}).force_open(Cell{gap + 1, 0});
    u = DualVertex{0, 0};
    v = DualVertex{2 * gap, 0};
  } else {
    overlay.force_open(Cell{0, 0}).force_open(Cell{1, 0}).force_open(Cell{gap, 0})
        .force_open(Cell{gap + 1, 0});
    for (i64 x = 2; x < gap; ++x) overlay.force_closed(Cell{x, 0});
    u = DualVertex{1, 0};
    v = DualVertex{2 * gap + 1, 0};
  }
  const auto tau = dual_coalescence_time(overlay, u, v, kind, t_max);
  return tau ? *tau : t_max + 1;
}

}  // namespace

std::vector<ExperimentReport> coalescence_tail_experiment(const ParamSet& params,
                                                          const std::vector<i64>& k_list,
                                                          const std::vector<i64>& t_grid,
                                                          i64 replicas, bool dual) {
  params.validate();
  if (k_list.empty() || t_grid.empty())
    throw std::invalid_argument("coalescence_tail_experiment: empty grid");
  std::vector<i64> grid = t_grid;
  std::sort(grid.begin(), grid.end());
  const i64 t_max = grid.back();
  const std::string prefix = dual ? "dual-coal-tail" : "coal-tail";

  std::vector<ExperimentReport> out;
  std::vector<double> scale_mean(k_list.size()), scale_se(k_list.size());
  for (std::size_t ki = 0; ki < k_list.size(); ++ki) {
    const i64 k = k_list[ki];
    const u64 base = experiment_seed(params, prefix + "-k" + std::to_string(k));
    std::vector<i64> taus(static_cast<std::size_t>(replicas));
    parallel_replicas(replicas, [&](i64 r) {
      Env env(env_params_for(params, derive_seed(base, static_cast<u64>(r))));
      taus[static_cast<std::size_t>(r)] = dual ? dual_pair_coalescence(env, k, StepKind::Left, t_max)
                                               : forward_pair_coalescence(env, k, StepKind::Left, t_max);
    });

    i64 censored = 0;
    for (i64 tau : taus)
      if (tau > t_max) ++censored;
    if (2 * censored > replicas)
      throw InsufficientUncensored(prefix + ": more than half the samples censored at t_max");

    // survival points and the per-replica sqrt(t)-scaled tail statistic
    std::vector<double> log_t, log_s, log_s_se;
    const std::size_t half = grid.size() / 2;
    std::vector<double> phi(static_cast<std::size_t>(replicas), 0.0);
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      const i64 t = grid[gi];
      i64 alive = 0;
      for (i64 tau : taus)
        if (tau > t) ++alive;
      const MeanCI s = binomial_ci(alive, replicas);
      ExperimentReport row = make_report(prefix + "-survival", params, s.mean, s.half_width, 0.0,
                                         TargetKind::Diagnostic, 0.0, replicas);
      row.k = static_cast<double>(k);
      row.t = static_cast<double>(t);
      out.push_back(row);
      if (s.mean > 0.0 && alive >= 10) {
        log_t.push_back(std::log(static_cast<double>(t)));
        log_s.push_back(std::log(s.mean));
        log_s_se.push_back(s.se / s.mean);
      }
      if (gi >= half) {
        const double w = std::sqrt(static_cast<double>(t)) / static_cast<double>(grid.size() - half);
        for (i64 r = 0; r < replicas; ++r)
          if (taus[static_cast<std::size_t>(r)] > t) phi[static_cast<std::size_t>(r)] += w;
      }
    }

    const MeanCI scale = mean_ci(phi);
    scale_mean[ki] = scale.mean;
    scale_se[ki] = scale.se;

    LineFit fit = fit_line(log_t, log_s, log_s_se);
    ExperimentReport slope_row =
        make_report(prefix + "-slope", params, fit.slope, 1.96 * fit.slope_se, -0.5,
                    TargetKind::Equals, 0.1, replicas);
    slope_row.k = static_cast<double>(k);
    out.push_back(slope_row);
  }

  for (std::size_t ki = 0; ki + 1 < k_list.size(); ++ki) {
    const double expected =
        static_cast<double>(k_list[ki + 1]) / static_cast<double>(k_list[ki]);
    if (scale_mean[ki] <= 0.0) continue;
    const double ratio = scale_mean[ki + 1] / scale_mean[ki];
    const double se = ratio * std::sqrt(std::pow(scale_se[ki] / scale_mean[ki], 2) +
                                        std::pow(scale_se[ki + 1] / scale_mean[ki + 1], 2));
    ExperimentReport row = make_report(prefix + "-k-ratio", params, ratio, 1.96 * se, expected,
                                       TargetKind::Equals, 0.3 * expected, replicas);
    row.k = static_cast<double>(k_list[ki + 1]);
    out.push_back(row);
  }
  return out;
}

std::vector<ExperimentReport> collapse_experiment(const ParamSet& params, double T,
                                                  const std::vector<i64>& n_list, i64 replicas) {
  params.validate();
  if (!(params.alpha > 1.0))
    throw std::invalid_argument("collapse_experiment: requires alpha > 1");
  if (n_list.empty()) throw std::invalid_argument("collapse_experiment: empty n list");

  std::vector<ExperimentReport> out;
  std::vector<double> log_n, log_gap, log_gap_se;
  const double gamma = 0.5;  // Doob level exponent

  for (i64 n : n_list) {
    ParamSet ps = params;
    ps.n = static_cast<double>(n);
    const i64 steps = static_cast<i64>(std::llround(T * ps.n * ps.n));
    const i64 level = static_cast<i64>(std::ceil(std::pow(ps.n, gamma)));
    const u64 base = experiment_seed(ps, "collapse-n" + std::to_string(n));
    std::vector<double> gaps(static_cast<std::size_t>(replicas));
    std::vector<double> max_hits(static_cast<std::size_t>(replicas));
    parallel_replicas(replicas, [&](i64 r) {
      Env env(env_params_for(ps, derive_seed(base, static_cast<u64>(r))));
      Overlay overlay(env);
      overlay.force_open(Cell{0, 0});
      i64 l = 0, rr = 0, max_gap = 0;
      for (i64 s = 0; s < steps; ++s) {
        if (l == rr) {
          const AboveCandidates c = nearest_above(overlay, l, s);
          if (c.tie && overlay.theta(l, s) == 0) {
            l = c.left_x;
            rr = c.right_x;
          } else {
            l = rr = step_x(overlay, l, s, StepKind::Left);
          }
        } else {
          l = step_x(overlay, l, s, StepKind::Left);
          rr = step_x(overlay, rr, s, StepKind::Right);
        }
        max_gap = std::max(max_gap, rr - l);
      }
      gaps[static_cast<std::size_t>(r)] = static_cast<double>(rr - l);
      max_hits[static_cast<std::size_t>(r)] = max_gap >= level ? 1.0 : 0.0;
    });

    const MeanCI gap_ci = mean_ci(gaps);
    const double target =
        2.0 * params.theory().b_p * T * std::pow(ps.n, 2.0 - params.alpha);
    ExperimentReport mean_row = make_report("collapse-mean-gap", ps, gap_ci.mean,
                                            gap_ci.half_width, target, TargetKind::Equals,
                                            0.10 * target, replicas);
    mean_row.t = T;
    out.push_back(mean_row);

    const MeanCI hit_ci = mean_ci(max_hits);
    const double doob = target / std::pow(ps.n, gamma);
    ExperimentReport doob_row = make_report("collapse-doob-bound", ps, hit_ci.mean,
                                            hit_ci.half_width, doob, TargetKind::UpperBound, 0.0,
                                            replicas);
    doob_row.t = T;
    doob_row.k = static_cast<double>(level);
    out.push_back(doob_row);

    if (gap_ci.mean > 0.0) {
      log_n.push_back(std::log(ps.n));
      log_gap.push_back(std::log(gap_ci.mean));
      log_gap_se.push_back(gap_ci.se / gap_ci.mean);
    }
  }

  if (log_n.size() >= 2) {
    const LineFit fit = fit_line(log_n, log_gap, log_gap_se);
    ExperimentReport slope_row =
        make_report("collapse-slope", params, fit.slope, 1.96 * fit.slope_se,
                    2.0 - params.alpha, TargetKind::Equals, 0.15, replicas);
    slope_row.t = T;
    out.push_back(slope_row);
  }
  return out;
}

ExperimentReport survival_vs_formula(const ParamSet& params, double delta, double t, i64 n,
                                     i64 replicas) {
  params.validate();
  ParamSet ps = params;
  ps.n = static_cast<double>(n);
  const i64 gap = static_cast<i64>(std::floor(delta * ps.n));
  const i64 steps = static_cast<i64>(std::llround(t * ps.n * ps.n));
  const u64 base = experiment_seed(ps, "survival");
  std::vector<double> alive(static_cast<std::size_t>(replicas), 0.0);
  parallel_replicas(replicas, [&](i64 r) {
    Env env(env_params_for(ps, derive_seed(base, static_cast<u64>(r))));
    if (gap == 0) return;  // same start: met at time zero
    Overlay overlay(env);
    overlay.force_open(Cell{0, 0});
    overlay.force_open(Cell{gap, 0});
    i64 a = 0, bpos = gap;
    for (i64 s = 0; s < steps; ++s) {
      a = step_x(overlay, a, s, StepKind::Right);
      bpos = step_x(overlay, bpos, s, StepKind::Right);
      if (a == bpos) return;
    }
    alive[static_cast<std::size_t>(r)] = 1.0;
  });
  const MeanCI ci = mean_ci(alive);
  const double target = survival_probability(delta, t, params.theory().lambda_p2);
  ExperimentReport rep = make_report("survival", ps, ci.mean, ci.half_width, target,
                                     TargetKind::Equals, 0.03, replicas);
  rep.delta = delta;
  rep.t = t;
  return rep;
}

ExperimentReport lr_pair_comparison(const ParamSet& params, i64 n, double start_offset, double t,
                                    i64 replicas) {
  params.validate();
  ParamSet ps = params;
  ps.n = static_cast<double>(n);
  const i64 gap0 = static_cast<i64>(std::llround(start_offset * ps.n));
  const i64 steps = static_cast<i64>(std::llround(t * ps.n * ps.n));
  const u64 base = experiment_seed(ps, "lr-compare");

  std::vector<double> dnb_gap(static_cast<std::size_t>(replicas));
  parallel_replicas(replicas, [&](i64 r) {
    Env env(env_params_for(ps, derive_seed(base, static_cast<u64>(r))));
    Overlay overlay(env);
    overlay.force_open(Cell{0, 0});
    if (gap0 != 0) overlay.force_open(Cell{gap0, 0});
    i64 l = 0, rr = gap0;
    for (i64 s = 0; s < steps; ++s) {
      if (l == rr) {
        const AboveCandidates c = nearest_above(overlay, l, s);
        if (c.tie && overlay.theta(l, s) == 0) {
          l = c.left_x;
          rr = c.right_x;
        } else {
          l = rr = step_x(overlay, l, s, StepKind::Left);
        }
      } else {
        l = step_x(overlay, l, s, StepKind::Left);
        rr = step_x(overlay, rr, s, StepKind::Right);
      }
    }
    dnb_gap[static_cast<std::size_t>(r)] = static_cast<double>(rr - l) / ps.n;
  });

  const TheoryConstants th = ps.theory();
  const double dt = 1e-4 * t;
  const u64 ref_base = derive_seed(base, 0x5efULL);
  std::vector<double> ref_gap(static_cast<std::size_t>(replicas));
  parallel_replicas(replicas, [&](i64 r) {
    LRPairSimulator sim(0.0, start_offset, std::sqrt(th.lambda_p2), th.b_p, dt,
                        derive_seed(ref_base, static_cast<u64>(r)));
    const i64 ref_steps = static_cast<i64>(std::llround(t / dt));
    for (i64 s = 0; s < ref_steps; ++s) sim.step();
    ref_gap[static_cast<std::size_t>(r)] = sim.state().R - sim.state().L;
  });

  const double d = ks_statistic_two_sample(dnb_gap, ref_gap);
  ExperimentReport rep = make_report("lr-compare", ps, d, 0.0, 0.05, TargetKind::Diagnostic, 0.0,
                                     replicas);
  rep.delta = start_offset;
  rep.t = t;
  return rep;
}

std::vector<ExperimentReport> overshoot_experiment(const ParamSet& params, i64 n, i64 replicas) {
  params.validate();
  ParamSet ps = params;
  ps.n = static_cast<double>(n);
  const i64 t_max = 40 * n * n;
  const u64 base = experiment_seed(ps, "overshoot");
  constexpr double kCensored = -1.0;
  std::vector<double> overshoots(static_cast<std::size_t>(replicas), kCensored);
  parallel_replicas(replicas, [&](i64 r) {
    Env env(env_params_for(ps, derive_seed(base, static_cast<u64>(r))));
    Overlay overlay(env);
    overlay.force_open(Cell{0, 0});
    i64 l = 0, rr = 0;
    for (i64 s = 0; s < t_max; ++s) {
      if (l == rr) {
        const AboveCandidates c = nearest_above(overlay, l, s);
        if (c.tie && overlay.theta(l, s) == 0) {
          l = c.left_x;
          rr = c.right_x;
        } else {
          l = rr = step_x(overlay, l, s, StepKind::Left);
        }
      } else {
        l = step_x(overlay, l, s, StepKind::Left);
        rr = step_x(overlay, rr, s, StepKind::Right);
      }
      if (rr - l >= n) {
        overshoots[static_cast<std::size_t>(r)] = static_cast<double>(rr - l - n);
        return;
      }
    }
  });
  std::vector<double> hits;
  hits.reserve(overshoots.size());
  for (double v : overshoots)
    if (v != kCensored) hits.push_back(v);
  if (hits.empty()) throw InsufficientUncensored("overshoot: no up-crossings observed");
  const MeanCI ci = mean_ci(hits);
  std::vector<ExperimentReport> out;
  ExperimentReport bound = make_report("overshoot", ps, ci.mean, ci.half_width, 5.0 / ps.p,
                                       TargetKind::UpperBound, 0.0,
                                       static_cast<i64>(hits.size()));
  bound.k = static_cast<double>(n);
  out.push_back(bound);
  ExperimentReport sanity = make_report("overshoot-jump-sanity", ps, ci.mean, ci.half_width,
                                        2.0 / ps.p * 1.5, TargetKind::Diagnostic, 0.0,
                                        static_cast<i64>(hits.size()));
  sanity.k = static_cast<double>(n);
  out.push_back(sanity);
  return out;
}

std::vector<ExperimentReport> dual_mean_experiment(const ParamSet& params, i64 steps,
                                                   i64 replicas) {
  params.validate();
  const u64 base = experiment_seed(params, "dual-mean");
  struct Sums {
    double int_sum = 0, nonint_sum = 0;
    i64 int_cnt = 0, nonint_cnt = 0;
  };
  std::vector<Sums> partial(static_cast<std::size_t>(replicas));
  parallel_replicas(replicas, [&](i64 r) {
    Env env(env_params_for(params, derive_seed(base, static_cast<u64>(r))));
    Overlay overlay(env);
    overlay.force_open(Cell{-1, 0}).force_closed(Cell{0, 0}).force_open(Cell{1, 0});
    DualVertex v{0, 0};
    Sums s;
    for (i64 k = 0; k < steps; ++k) {
      const DualVertex next = dual_step(overlay, v, StepKind::Left);
      const double inc = static_cast<double>(next.x2 - v.x2) / 2.0;
      if (v.at_integer()) {
        s.int_sum += inc;
        ++s.int_cnt;
      } else {
        s.nonint_sum += inc;
        ++s.nonint_cnt;
      }
      v = next;
    }
    partial[static_cast<std::size_t>(r)] = s;
  });

  std::vector<double> int_means, nonint_means;
  i64 int_total = 0, nonint_total = 0;
  for (const Sums& s : partial) {
    if (s.int_cnt > 0) {
      int_means.push_back(s.int_sum / static_cast<double>(s.int_cnt));
      int_total += s.int_cnt;
    }
    if (s.nonint_cnt > 0) {
      nonint_means.push_back(s.nonint_sum / static_cast<double>(s.nonint_cnt));
      nonint_total += s.nonint_cnt;
    }
  }
  const MeanCI ci_int = mean_ci(int_means);
  const MeanCI ci_non = mean_ci(nonint_means);
  std::vector<ExperimentReport> out;
  out.push_back(make_report("dual-mean-integer", params, ci_int.mean, ci_int.half_width,
                            params.epsilon() / 2.0, TargetKind::Equals, 0.0, int_total));
  out.push_back(make_report("dual-mean-noninteger", params, ci_non.mean, ci_non.half_width, 0.0,
                            TargetKind::Equals, 0.0, nonint_total));
  return out;
}

std::vector<ExperimentReport> kernel_check(const ParamSet& params, i64 mc_steps) {
  params.validate();
  std::vector<ExperimentReport> out;

  const DiscretePmf series = kernel_pv(params.p);
  const DiscretePmf enumerated = enumerate_step_law(params.p, 0.0, WalkKind::Unbiased);
  out.push_back(make_report("kernel-enum-tv", params, tv_distance(series, enumerated), 0.0, 0.0,
                            TargetKind::Equals, 1e-9, 0));

  const DiscretePmf composed =
      kernel_with_branch_correction(params.p, params.epsilon(), WalkKind::Left);
  const DiscretePmf enumerated_l = enumerate_step_law(params.p, params.epsilon(), WalkKind::Left);
  out.push_back(make_report("kernel-compose-tv", params, tv_distance(composed, enumerated_l), 0.0,
                            0.0, TargetKind::Equals, 1e-9, 0));

  // Monte Carlo of the no-branching walk against the series kernel
  const u64 base = experiment_seed(params, "kernel-mc");
  const i64 replicas = 64;
  const i64 steps = (mc_steps + replicas - 1) / replicas;
  std::vector<std::map<i64, i64>> counts(static_cast<std::size_t>(replicas));
  parallel_replicas(replicas, [&](i64 r) {
    Env env(EnvParams{params.p, 0.0, derive_seed(base, static_cast<u64>(r)), 0});
    Overlay overlay(env);
    overlay.force_open(Cell{0, 0});
    auto& local = counts[static_cast<std::size_t>(r)];
    i64 x = 0;
    for (i64 s = 0; s < steps; ++s) {
      const i64 nx = step_x(overlay, x, s, StepKind::Left);
      ++local[nx - x];
      x = nx;
    }
  });
  std::map<i64, i64> total;
  for (const auto& local : counts)
    for (const auto& [d, c] : local) total[d] += c;
  const DiscretePmf empirical = normalize_counts(total);
  out.push_back(make_report("kernel-mc-tv", params, tv_distance(series, empirical), 0.0, 0.0,
                            TargetKind::Equals, 0.005, replicas * steps));
  return out;
}

std::vector<ExperimentReport> dual_kernel_check(const ParamSet& params, i64 mc_steps) {
  params.validate();
  const u64 base = experiment_seed(params, "dual-kernel-mc");
  const i64 replicas = 64;
  const i64 steps = (mc_steps + replicas - 1) / replicas;
  struct Local {
    std::map<i64, i64> at_int, at_half;
    double int_sum = 0;
    i64 int_cnt = 0;
  };
  std::vector<Local> locals(static_cast<std::size_t>(replicas));
  parallel_replicas(replicas, [&](i64 r) {
    Env env(env_params_for(params, derive_seed(base, static_cast<u64>(r))));
    Overlay overlay(env);
    overlay.force_open(Cell{-1, 0}).force_closed(Cell{0, 0}).force_open(Cell{1, 0});
    Local& local = locals[static_cast<std::size_t>(r)];
    DualVertex v{0, 0};
    for (i64 s = 0; s < steps; ++s) {
      const DualVertex next = dual_step(overlay, v, StepKind::Left);
      const i64 d = next.x2 - v.x2;
      if (v.at_integer()) {
        ++local.at_int[d];
        local.int_sum += static_cast<double>(d) / 2.0;
        ++local.int_cnt;
      } else {
        ++local.at_half[d];
      }
      v = next;
    }
  });
  std::map<i64, i64> int_counts, half_counts;
  double int_sum = 0;
  i64 int_cnt = 0;
  for (const Local& l : locals) {
    for (const auto& [d, c] : l.at_int) int_counts[d] += c;
    for (const auto& [d, c] : l.at_half) half_counts[d] += c;
    int_sum += l.int_sum;
    int_cnt += l.int_cnt;
  }

  std::vector<ExperimentReport> out;
  const DiscretePmf k_int = dual_kernel(params.p, params.epsilon(), true, StepKind::Left);
  const DiscretePmf k_half = dual_kernel(params.p, params.epsilon(), false, StepKind::Left);
  out.push_back(make_report("dual-kernel-int-tv", params,
                            tv_distance(k_int, normalize_counts(int_counts)), 0.0, 0.0,
                            TargetKind::Equals, 0.005, int_cnt));
  out.push_back(make_report("dual-kernel-half-tv", params,
                            tv_distance(k_half, normalize_counts(half_counts)), 0.0, 0.0,
                            TargetKind::Equals, 0.005, replicas * steps - int_cnt));

  // conditional mean at integer positions; per-step variance from the kernel
  const double mean = int_cnt > 0 ? int_sum / static_cast<double>(int_cnt) : 0.0;
  const double se = std::sqrt(k_int.variance() / 4.0 / std::max<double>(1.0, int_cnt));
  out.push_back(make_report("dual-kernel-int-mean", params, mean, 1.96 * se,
                            params.epsilon() / 2.0, TargetKind::Equals, 0.0, int_cnt));
  return out;
}

std::vector<ExperimentReport> duality_check(const ParamSet& params, i64 window_size,
                                            i64 windows) {
  params.validate();
  const u64 base = experiment_seed(params, "duality");
  std::vector<DualityReport> reports(static_cast<std::size_t>(windows));
  parallel_replicas(windows, [&](i64 w) {
    Env env(env_params_for(params, derive_seed(base, static_cast<u64>(w))));
    reports[static_cast<std::size_t>(w)] =
        verify_duality(env, Window{0, window_size, 0, window_size});
  });
  i64 crossings = 0, mismatch = 0, branches = 0;
  for (const DualityReport& r : reports) {
    crossings += r.crossings;
    mismatch += std::abs(r.dnb_branches - r.dual_branches);
    branches += r.dnb_branches;
  }
  std::vector<ExperimentReport> out;
  out.push_back(make_report("duality-crossings", params, static_cast<double>(crossings), 0.0, 0.0,
                            TargetKind::Equals, 0.0, windows));
  out.push_back(make_report("duality-branch-mismatch", params, static_cast<double>(mismatch), 0.0,
                            0.0, TargetKind::Equals, 0.0, windows));
  out.push_back(make_report("duality-branch-count", params, static_cast<double>(branches), 0.0,
                            0.0, TargetKind::Diagnostic, 0.0, windows));
  return out;
}

}  // namespace drainet
