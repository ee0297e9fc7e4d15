#ifndef DRAINET_STATS_HPP
#define DRAINET_STATS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "drainet/common.hpp"

namespace drainet {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

struct MeanCI {
  double mean = 0.0;
  double half_width = 0.0;  // 95%, 1.96 * se
  double se = 0.0;
  i64 n = 0;
};

inline MeanCI mean_ci(std::span<const double> xs) {
  MeanCI out;
  out.n = static_cast<i64>(xs.size());
  if (xs.empty()) return out;
  double s = 0.0;
  for (double x : xs) s += x;
  out.mean = s / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  if (xs.size() > 1) {
    const double var = ss / static_cast<double>(xs.size() - 1);
    out.se = std::sqrt(var / static_cast<double>(xs.size()));
  }
  out.half_width = 1.96 * out.se;
  return out;
}

inline MeanCI binomial_ci(i64 hits, i64 n) {
  MeanCI out;
  out.n = n;
  if (n <= 0) return out;
  out.mean = static_cast<double>(hits) / static_cast<double>(n);
  out.se = std::sqrt(std::max(out.mean * (1.0 - out.mean), 1e-300) / static_cast<double>(n));
  out.half_width = 1.96 * out.se;
  return out;
}

// Wilson-Hilferty approximation of the chi-square quantile.
inline double chi2_quantile(double df, double prob) {
  // inverse normal via Acklam-style rational approximation is overkill here;
  // the 0.99 quantile is all we use.
  const double z = prob == 0.99 ? 2.3263478740408408 : [&] {
    // bisection on normal_cdf
    double lo = -10.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (normal_cdf(mid) < prob ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }();
  const double a = 2.0 / (9.0 * df);
  const double c = 1.0 - a + z * std::sqrt(a);
  return df * c * c * c;
}

// Two-sided one-sample KS statistic against a cdf.
inline double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

// Two-sample KS statistic.
inline double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

// Asymptotic Kolmogorov tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
inline double ks_p_value(double d, double n_effective) {
  const double sn = std::sqrt(n_effective);
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * lambda * lambda * k * k);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-12) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};

// Weighted least squares fit of y = intercept + slope * x.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y,
                        std::span<const double> y_se = {}) {
  LineFit fit;
  const std::size_t n = x.size();
  if (n < 2) return fit;
  std::vector<double> w(n, 1.0);
  if (!y_se.empty())
    for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 / std::max(y_se[i] * y_se[i], 1e-30);
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
    swxx += w[i] * x[i] * x[i];
    swxy += w[i] * x[i] * y[i];
  }
  const double denom = sw * swxx - swx * swx;
  fit.slope = (sw * swxy - swx * swy) / denom;
  fit.intercept = (swy - fit.slope * swx) / sw;
  if (!y_se.empty()) {
    fit.slope_se = std::sqrt(sw / denom);
  } else {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    const double s2 = rss / static_cast<double>(n - 2);
    fit.slope_se = std::sqrt(s2 * sw / denom);
  }
  return fit;
}

}  // namespace drainet

#endif
