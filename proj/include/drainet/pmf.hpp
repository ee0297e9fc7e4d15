#ifndef DRAINET_PMF_HPP
#define DRAINET_PMF_HPP

#include <cmath>
#include <map>

#include "drainet/common.hpp"

namespace drainet {

// Sparse pmf over integer-indexed support. Dual-step laws use doubled
// increments as keys so half-integers stay exact.
struct DiscretePmf {
  std::map<i64, double> mass;

  double at(i64 k) const {
    auto it = mass.find(k);
    return it == mass.end() ? 0.0 : it->second;
  }

  double total() const {
    double s = 0.0;
    for (const auto& [k, w] : mass) s += w;
    return s;
  }

  double mean() const {
    double s = 0.0;
    for (const auto& [k, w] : mass) s += static_cast<double>(k) * w;
    return s;
  }

  double moment2() const {
    double s = 0.0;
    for (const auto& [k, w] : mass) s += static_cast<double>(k) * static_cast<double>(k) * w;
    return s;
  }

  double variance() const {
    const double m = mean();
    return moment2() - m * m;
  }
};

inline double tv_distance(const DiscretePmf& a, const DiscretePmf& b) {
  double s = 0.0;
  for (const auto& [k, w] : a.mass) s += std::abs(w - b.at(k));
  for (const auto& [k, w] : b.mass)
    if (!a.mass.count(k)) s += w;
  return 0.5 * s;
}

// Empirical counts -> pmf.
inline DiscretePmf normalize_counts(const std::map<i64, i64>& counts) {
  DiscretePmf pmf;
  double n = 0.0;
  for (const auto& [k, c] : counts) n += static_cast<double>(c);
  if (n > 0.0)
    for (const auto& [k, c] : counts) pmf.mass[k] = static_cast<double>(c) / n;
  return pmf;
}

}  // namespace drainet

#endif
