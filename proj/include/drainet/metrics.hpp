#ifndef DRAINET_METRICS_HPP
#define DRAINET_METRICS_HPP

#include <cmath>
#include <span>
#include <vector>

#include "drainet/dual.hpp"
#include "drainet/lattice_paths.hpp"

namespace drainet {

struct SpaceTimePoint {
  double x = 0.0;
  double t = 0.0;
};

// rho on the compactified plane; +-infinity coordinates allowed.
double point_metric(const SpaceTimePoint& a, const SpaceTimePoint& b);

// Piecewise-linear space-time path under diffusive scaling (x/n, t/n^2).
// Extended by its boundary values before sigma and after the last knot.
struct RescaledPath {
  double sigma = 0.0;
  std::vector<double> ts;  // strictly increasing, ts.front() == sigma
  std::vector<double> xs;

  double end_time() const { return ts.back(); }
  double operator()(double t) const;
};

RescaledPath rescale(const LatticePath& path, i64 n);
RescaledPath rescale(const DualPath& path, i64 n);
RescaledPath make_rescaled(double sigma, std::vector<double> ts, std::vector<double> xs);

// Path distance with the |tanh(sigma1) - tanh(sigma2)| start term and the
// sup of the compactified space distance. The sup is evaluated on the knot
// segments of both paths by bisection with interval Lipschitz bounds, so
// the returned value is within tol of the true supremum.
double path_metric(const RescaledPath& a, const RescaledPath& b, double tol = 1e-9);

// Symmetric Hausdorff distance between finite nonempty path sets.
double hausdorff(std::span<const RescaledPath> k1, std::span<const RescaledPath> k2,
                 double tol = 1e-9);

}  // namespace drainet

#endif
