#include "lelab/exponents.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "lelab/geometry.hpp"

namespace lelab {

FlowParams derive_params(double p, int n) {
  if (n < 3)
    throw InvalidArgument("derive_params: dimension n must be >= 3, got " + std::to_string(n));
  const double two_star = 2.0 * n / (n - 2.0);
  if (!(p > two_star)) {
    std::ostringstream msg;
    msg << "derive_params: p = " << p << " is not supercritical; need p > two_star = 2n/(n-2) = "
        << two_star;
    throw InvalidArgument(msg.str());
  }
  FlowParams fp;
  fp.p = p;
  fp.n = n;
  fp.alpha = 2.0 / (p - 2.0);
  fp.lambda = 2.0 * fp.alpha;
  fp.mu = fp.lambda + 2.0;
  fp.two_star = two_star;
  return fp;
}

double joseph_lundgren(int n) {
  if (n < 3)
    throw InvalidArgument("joseph_lundgren: n must be >= 3");
  if (n <= 10)
    return std::numeric_limits<double>::infinity();
  return 2.0 + 4.0 / (n - 4.0 - 2.0 * std::sqrt(n - 1.0));
}

SingularSteadyCoefficient singular_steady_coefficient(const FlowParams &params) {
  const double a = params.alpha;
  if (!(a < params.n - 2.0))
    throw InvalidArgument("singular_steady_coefficient: alpha must be < n-2");
  const double m = a * (params.n - 2.0 - a);
  return {std::pow(m, 1.0 / (params.p - 2.0)), m};
}

double singular_steady_residual(const FlowParams &params, double c) {
  // Δ r^{-α} = -α(n-2-α) r^{-α-2} and (r^{-α})^{p-1} = r^{-α-2}.
  const double a = params.alpha;
  const double minus_laplacian = c * a * (params.n - 2.0 - a);
  const double reaction = std::pow(c, params.p - 1.0);
  return std::abs(minus_laplacian - reaction) / reaction;
}

double ball_holder_constant(const FlowParams &params, double vol) {
  const double p = params.p;
  return (p - 2.0) / p * std::pow(vol, 1.0 - 0.5 * p);
}

double ball_blowup_bound(const FlowParams &params, double vol, double l2norm) {
  if (!(vol > 0.0) || !(l2norm > 0.0))
    throw InvalidArgument("ball_blowup_bound: volume and L2 norm must be positive");
  const double p = params.p;
  const double c0 = ball_holder_constant(params, vol);
  return std::pow(l2norm, 0.5 * (2.0 - p)) / (c0 * (p - 2.0));
}

double ball_l2_lower_bound(const FlowParams &params, double vol, double l2norm0, double t) {
  const double p = params.p;
  const double base =
      std::pow(l2norm0, 0.5 * (2.0 - p)) - ball_holder_constant(params, vol) * (p - 2.0) * t;
  if (base <= 0.0)
    return std::numeric_limits<double>::infinity();
  return std::pow(base, -2.0 / (p - 2.0));
}

} // namespace lelab
