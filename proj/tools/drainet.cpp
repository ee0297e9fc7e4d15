#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drainet/report_io.hpp"

namespace {

using namespace drainet;

std::vector<i64> log_grid(i64 lo, i64 hi, int points) {
  std::vector<i64> grid;
  for (int i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / (points - 1);
    const i64 t = static_cast<i64>(std::llround(lo * std::pow(static_cast<double>(hi) / lo, f)));
    if (grid.empty() || t > grid.back()) grid.push_back(t);
  }
  return grid;
}

std::vector<OutputRow> simulate_path_rows(const ParamSet& ps, i64 steps) {
  HashedEnvironment env(EnvParams{ps.p, ps.epsilon(), ps.seed, 0});
  OverlayEnvironment overlay(env);
  overlay.force_open(Cell{0, 0});
  const LatticePath path = walk(overlay, Cell{0, 0}, Selector::always_left(), steps);
  std::vector<OutputRow> rows;
  rows.reserve(path.positions.size());
  for (std::size_t i = 0; i < path.positions.size(); ++i) {
    OutputRow row;
    row.experiment = "simulate-path";
    row.p = ps.p;
    row.epsilon = ps.epsilon();
    row.b = ps.b;
    row.n = ps.n;
    row.alpha = ps.alpha;
    row.step = static_cast<double>(i);
    row.x = static_cast<double>(path.positions[i]);
    row.verdict = "diagnostic";
    row.seed = ps.seed;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "drainet: drainage-network-with-branching simulator and statistical "
      "verification harness"};
  app.set_config("--config", "", "flat key=value config file (flags override)");

  double p = 0.5;
  double b = 1.0;
  double n = 0.0;        // 0 = unset
  double epsilon = 0.0;  // 0 = unset
  double alpha = 0.0;    // 0 = unset
  u64 seed = 1;
  i64 replicas = 10000;
  i64 t_max = 100000;
  std::string out_path;
  std::string format = "csv";

  app.add_option("--p", p, "open probability, in (0,1)")->capture_default_str();
  app.add_option("--b", b, "branching scale; epsilon = b * n^-alpha")->capture_default_str();
  app.add_option("--n", n, "scaling parameter (default 50; exclusive with --epsilon)");
  app.add_option("--epsilon", epsilon, "branching probability (exclusive with --n)");
  app.add_option("--alpha", alpha, "branching exponent (default 1; collapse uses 2)");
  app.add_option("--seed", seed, "reproducibility seed")->capture_default_str();
  app.add_option("--replicas", replicas, "Monte Carlo replicas per experiment")
      ->capture_default_str();
  app.add_option("--t-max", t_max, "censoring horizon / path length in steps")
      ->capture_default_str();
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--format", format, "output format: csv or json")->capture_default_str();

  const std::vector<std::string> subcommands = {
      "simulate-path", "verify-duality", "verify-kernel",      "estimate-drift",
      "estimate-variance", "coal-tail",  "estimate-branchrate", "collapse",
      "survival",      "lr-compare",     "overshoot",           "dual-mean",
      "all"};
  for (const std::string& name : subcommands) app.add_subcommand(name)->fallthrough();
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (format != "csv" && format != "json")
      throw std::invalid_argument("--format must be csv or json");
    if (n != 0.0 && epsilon != 0.0)
      throw std::invalid_argument("give exactly one of --n and --epsilon");
    const double alpha_eff = alpha > 0.0 ? alpha : 1.0;
    if (epsilon != 0.0) {
      if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("--epsilon must be in (0,1]");
      n = std::pow(b / epsilon, 1.0 / alpha_eff);
    } else if (n == 0.0) {
      n = 50.0;
    }
    if (replicas < 1) throw std::invalid_argument("--replicas must be >= 1");
    if (t_max < 1) throw std::invalid_argument("--t-max must be >= 1");

    ParamSet ps{p, b, n, alpha_eff, seed};
    ps.validate();

    const std::string sub = app.get_subcommands().front()->get_name();
    std::vector<OutputRow> rows;
    std::vector<ExperimentReport> reports;
    const auto append = [&](std::vector<ExperimentReport> more) {
      for (auto& r : more) reports.push_back(std::move(r));
    };

    const auto run_verify_kernel = [&] {
      append(kernel_check(ps, std::max<i64>(replicas * 100, 100000)));
      append(dual_kernel_check(ps, std::max<i64>(replicas * 100, 100000)));
    };
    const auto run_coal_tail = [&] {
      const std::vector<i64> grid = log_grid(100, t_max, 7);
      append(coalescence_tail_experiment(ps, {1, 2, 4}, grid, replicas, false));
      append(coalescence_tail_experiment(ps, {1, 2, 4}, grid, replicas, true));
    };
    const auto run_collapse = [&] {
      ParamSet cps = ps;
      cps.alpha = alpha > 1.0 ? alpha : 2.0;
      append(collapse_experiment(cps, 1.0, {static_cast<i64>(n), 2 * static_cast<i64>(n)},
                                 replicas));
    };
    const auto run_survival = [&] {
      append({survival_vs_formula(ps, 0.5, 1.0, static_cast<i64>(n), replicas)});
      append({survival_vs_formula(ps, 1.0, 1.0, static_cast<i64>(n), replicas)});
    };
    const auto run_lr_compare = [&] {
      append({lr_pair_comparison(ps, static_cast<i64>(n), 0.0, 1.0, replicas)});
      append({lr_pair_comparison(ps, static_cast<i64>(n), 0.5, 1.0, replicas)});
    };

    if (sub == "simulate-path") {
      rows = simulate_path_rows(ps, t_max);
    } else if (sub == "verify-duality") {
      append(duality_check(ps, 200, 10));
    } else if (sub == "verify-kernel") {
      run_verify_kernel();
    } else if (sub == "estimate-drift") {
      append({estimate_drift(ps, StepKind::Left, 2000, replicas)});
      append({estimate_drift(ps, StepKind::Right, 2000, replicas)});
    } else if (sub == "estimate-variance") {
      append({estimate_variance(ps, 1000, replicas)});
    } else if (sub == "estimate-branchrate") {
      append({branch_rate_experiment(ps, 100, replicas)});
    } else if (sub == "coal-tail") {
      run_coal_tail();
    } else if (sub == "collapse") {
      run_collapse();
    } else if (sub == "survival") {
      run_survival();
    } else if (sub == "lr-compare") {
      run_lr_compare();
    } else if (sub == "overshoot") {
      append(overshoot_experiment(ps, static_cast<i64>(n), replicas));
    } else if (sub == "dual-mean") {
      append(dual_mean_experiment(ps, 100, replicas));
    } else if (sub == "all") {
      std::cerr << "[drainet] running full suite, p=" << p << " b=" << b << " n=" << n
                << " seed=" << seed << " replicas=" << replicas << "\n";
      run_verify_kernel();
      append(duality_check(ps, 200, 10));
      append({estimate_drift(ps, StepKind::Left, 2000, replicas)});
      append({estimate_drift(ps, StepKind::Right, 2000, replicas)});
      append({estimate_variance(ps, 1000, replicas)});
      append({branch_rate_experiment(ps, 100, replicas)});
      run_coal_tail();
      run_collapse();
      run_survival();
      run_lr_compare();
      append(overshoot_experiment(ps, static_cast<i64>(n), replicas));
      append(dual_mean_experiment(ps, 100, replicas));
    }

    for (const OutputRow& row : to_rows(reports)) rows.push_back(row);

    const std::string payload = format == "csv" ? to_csv(rows) : to_json(rows);
    if (out_path.empty()) {
      std::cout << payload;
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open output file: " + out_path);
      file << payload;
    }

    return gating_pass(reports) ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
