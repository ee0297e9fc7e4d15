#include "drainet/report_io.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace drainet {

const char* const kCsvHeader =
    "experiment,p,epsilon,b,n,alpha,k,delta,t,step,x,estimate,ci,target,verdict,samples,seed";

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

OutputRow to_row(const ExperimentReport& r) {
  OutputRow row;
  row.experiment = r.name;
  row.p = r.params.p;
  row.epsilon = r.params.epsilon();
  row.b = r.params.b;
  row.n = r.params.n;
  row.alpha = r.params.alpha;
  if (!std::isnan(r.k)) row.k = r.k;
  if (!std::isnan(r.delta)) row.delta = r.delta;
  if (!std::isnan(r.t)) row.t = r.t;
  row.estimate = r.estimate;
  row.ci = r.ci_half_width;
  row.target = r.target;
  switch (r.verdict) {
    case Verdict::Pass:
      row.verdict = "pass";
      break;
    case Verdict::Fail:
      row.verdict = "fail";
      break;
    case Verdict::Diagnostic:
      row.verdict = "diagnostic";
      break;
  }
  row.samples = r.samples;
  row.seed = r.seed;
  return row;
}

namespace {

std::string opt_str(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

std::string to_csv(std::span<const OutputRow> rows) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const OutputRow& r : rows) {
    out << r.experiment << ',' << format_double(r.p) << ',' << format_double(r.epsilon) << ','
        << format_double(r.b) << ',' << format_double(r.n) << ',' << format_double(r.alpha) << ','
        << opt_str(r.k) << ',' << opt_str(r.delta) << ',' << opt_str(r.t) << ','
        << opt_str(r.step) << ',' << opt_str(r.x) << ',' << opt_str(r.estimate) << ','
        << opt_str(r.ci) << ',' << opt_str(r.target) << ',' << r.verdict << ','
        << (r.samples ? std::to_string(*r.samples) : std::string()) << ',' << r.seed << '\n';
  }
  return out.str();
}

std::string to_json(std::span<const OutputRow> rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const OutputRow& r : rows) {
    nlohmann::ordered_json obj;
    obj["experiment"] = r.experiment;
    obj["p"] = r.p;
    obj["epsilon"] = r.epsilon;
    obj["b"] = r.b;
    obj["n"] = r.n;
    obj["alpha"] = r.alpha;
    obj["k"] = r.k ? nlohmann::ordered_json(*r.k) : nlohmann::ordered_json(nullptr);
    obj["delta"] = r.delta ? nlohmann::ordered_json(*r.delta) : nlohmann::ordered_json(nullptr);
    obj["t"] = r.t ? nlohmann::ordered_json(*r.t) : nlohmann::ordered_json(nullptr);
    obj["step"] = r.step ? nlohmann::ordered_json(*r.step) : nlohmann::ordered_json(nullptr);
    obj["x"] = r.x ? nlohmann::ordered_json(*r.x) : nlohmann::ordered_json(nullptr);
    obj["estimate"] =
        r.estimate ? nlohmann::ordered_json(*r.estimate) : nlohmann::ordered_json(nullptr);
    obj["ci"] = r.ci ? nlohmann::ordered_json(*r.ci) : nlohmann::ordered_json(nullptr);
    obj["target"] = r.target ? nlohmann::ordered_json(*r.target) : nlohmann::ordered_json(nullptr);
    obj["verdict"] = r.verdict;
    obj["samples"] =
        r.samples ? nlohmann::ordered_json(*r.samples) : nlohmann::ordered_json(nullptr);
    obj["seed"] = r.seed;
    arr.push_back(obj);
  }
  return arr.dump(2) + "\n";
}

}  // namespace drainet
