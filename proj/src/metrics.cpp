#include "drainet/metrics.hpp"

#include <algorithm>
#include <limits>

namespace drainet {

namespace {

double compact_x(double x, double t) { return std::tanh(x) / (1.0 + std::abs(t)); }

// max of sech^2 over the segment between two tanh arguments
double sech2_max(double f0, double f1) {
  if ((f0 <= 0.0 && f1 >= 0.0) || (f0 >= 0.0 && f1 <= 0.0)) return 1.0;
  const double m = std::min(std::abs(f0), std::abs(f1));
  const double c = std::cosh(m);
  return 1.0 / (c * c);
}

}  // namespace

double point_metric(const SpaceTimePoint& a, const SpaceTimePoint& b) {
  const double dt = std::abs(std::tanh(a.t) - std::tanh(b.t));
  const double dx = std::abs(compact_x(a.x, a.t) - compact_x(b.x, b.t));
  return std::max(dt, dx);
}

double RescaledPath::operator()(double t) const {
  if (ts.empty()) throw EmptyPath("RescaledPath: no knots");
  if (t <= ts.front()) return xs.front();
  if (t >= ts.back()) return xs.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - ts.begin());
  const double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
  return xs[i - 1] + w * (xs[i] - xs[i - 1]);
}

RescaledPath make_rescaled(double sigma, std::vector<double> ts, std::vector<double> xs) {
  if (ts.empty() || ts.size() != xs.size())
    throw EmptyPath("make_rescaled: need matching nonempty knot vectors");
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (!(ts[i] > ts[i - 1])) throw std::invalid_argument("make_rescaled: knots must increase");
  return RescaledPath{sigma, std::move(ts), std::move(xs)};
}

RescaledPath rescale(const LatticePath& path, i64 n) {
  if (n < 1) throw std::invalid_argument("rescale: n must be >= 1");
  if (path.positions.empty()) throw EmptyPath("rescale: empty lattice path");
  const double nd = static_cast<double>(n);
  RescaledPath out;
  out.ts.reserve(path.positions.size());
  out.xs.reserve(path.positions.size());
  for (std::size_t i = 0; i < path.positions.size(); ++i) {
    out.ts.push_back(static_cast<double>(path.time_at(i)) / (nd * nd));
    out.xs.push_back(static_cast<double>(path.positions[i]) / nd);
  }
  out.sigma = out.ts.front();
  return out;
}

RescaledPath rescale(const DualPath& path, i64 n) {
  if (n < 1) throw std::invalid_argument("rescale: n must be >= 1");
  if (path.positions2.empty()) throw EmptyPath("rescale: empty dual path");
  const double nd = static_cast<double>(n);
  RescaledPath out;
  out.ts.reserve(path.positions2.size());
  out.xs.reserve(path.positions2.size());
  // backward path stored with increasing time; sigma is the earliest time
  for (std::size_t j = path.positions2.size(); j-- > 0;) {
    out.ts.push_back(static_cast<double>(path.time_at(j)) / (nd * nd));
    out.xs.push_back(static_cast<double>(path.positions2[j]) / (2.0 * nd));
  }
  out.sigma = out.ts.front();
  return out;
}

namespace {

struct Segment {
  double a, b;
};

// |phi_a(t) - phi_b(t)| with phi(t) = tanh(pi(t v sigma)) / (1 + |t|)
double gap_at(const RescaledPath& pa, const RescaledPath& pb, double t) {
  return std::abs(compact_x(pa(std::max(t, pa.sigma)), t) -
                  compact_x(pb(std::max(t, pb.sigma)), t));
}

double slope_bound(const RescaledPath& p, double a, double b) {
  if (b <= p.sigma || a >= p.end_time()) return 0.0;
  double s = 0.0;
  const auto lo = std::upper_bound(p.ts.begin(), p.ts.end(), a);
  std::size_t i = lo == p.ts.begin() ? 1 : static_cast<std::size_t>(lo - p.ts.begin());
  for (; i < p.ts.size() && p.ts[i - 1] < b; ++i)
    s = std::max(s, std::abs((p.xs[i] - p.xs[i - 1]) / (p.ts[i] - p.ts[i - 1])));
  return s;
}

// Lipschitz bound for the gap on [a, b]
double gap_lipschitz(const RescaledPath& pa, const RescaledPath& pb, double a, double b) {
  const double tmin = (a <= 0.0 && b >= 0.0) ? 0.0 : std::min(std::abs(a), std::abs(b));
  const double inv = 1.0 / (1.0 + tmin);
  const double fa0 = pa(std::max(a, pa.sigma)), fa1 = pa(std::max(b, pa.sigma));
  const double fb0 = pb(std::max(a, pb.sigma)), fb1 = pb(std::max(b, pb.sigma));
  const double deriv = slope_bound(pa, a, b) * sech2_max(fa0, fa1) +
                       slope_bound(pb, a, b) * sech2_max(fb0, fb1);
  return deriv * inv + 2.0 * inv * inv;
}

}  // namespace

double path_metric(const RescaledPath& a, const RescaledPath& b, double tol) {
  if (a.ts.empty() || b.ts.empty()) throw EmptyPath("path_metric: empty path");
  const double start_term = std::abs(std::tanh(a.sigma) - std::tanh(b.sigma));

  const double lo = std::min(a.sigma, b.sigma);
  const double hi = std::max({a.end_time(), b.end_time(), 0.0, lo});

  // breakpoints: knots of both paths, start times, zero, domain ends
  std::vector<double> marks{lo, hi, 0.0, a.sigma, b.sigma};
  for (double t : a.ts) marks.push_back(t);
  for (double t : b.ts) marks.push_back(t);
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

  double best = gap_at(a, b, hi);  // also covers the constant tail past hi
  std::vector<Segment> stack;
  for (std::size_t i = 1; i < marks.size(); ++i) {
    if (marks[i - 1] < lo || marks[i] > hi || marks[i] <= marks[i - 1]) continue;
    stack.push_back(Segment{marks[i - 1], marks[i]});
    best = std::max(best, gap_at(a, b, marks[i - 1]));
  }

  while (!stack.empty()) {
    const Segment seg = stack.back();
    stack.pop_back();
    const double width = seg.b - seg.a;
    const double cap =
        std::max(gap_at(a, b, seg.a), gap_at(a, b, seg.b)) + 0.5 * width * gap_lipschitz(a, b, seg.a, seg.b);
    if (cap <= best + tol || width < 1e-15) continue;
    const double mid = 0.5 * (seg.a + seg.b);
    best = std::max(best, gap_at(a, b, mid));
    stack.push_back(Segment{seg.a, mid});
    stack.push_back(Segment{mid, seg.b});
  }

  return std::max(start_term, best);
}

double hausdorff(std::span<const RescaledPath> k1, std::span<const RescaledPath> k2, double tol) {
  if (k1.empty() || k2.empty()) throw EmptySet("hausdorff: empty path set");
  const auto one_sided = [&](std::span<const RescaledPath> from, std::span<const RescaledPath> to) {
    double worst = 0.0;
    for (const RescaledPath& p : from) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const RescaledPath& q : to) nearest = std::min(nearest, path_metric(p, q, tol));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(one_sided(k1, k2), one_sided(k2, k1));
}

}  // namespace drainet
