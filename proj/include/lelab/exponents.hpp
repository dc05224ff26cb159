#pragma once

namespace lelab {

/// Exponent p of the flow u_t - Δu = |u|^{p-2}u in dimension n, together with
/// the scale-invariant exponents it fixes.
struct FlowParams {
  double p = 0.0;
  int n = 0;
  double alpha = 0.0;    ///< 2/(p-2), the scaling exponent of u
  double lambda = 0.0;   ///< 4/(p-2), spatial Morrey exponent of L^{2,λ}
  double mu = 0.0;       ///< 2p/(p-2), parabolic Morrey exponent of L^{p,μ}
  double two_star = 0.0; ///< 2n/(n-2)
};

/// Rejects n < 3 and p <= 2n/(n-2).
FlowParams derive_params(double p, int n);

/// 2 + 4/(n-4-2√(n-1)) for n >= 11, +infinity below.
double joseph_lundgren(int n);

struct SingularSteadyCoefficient {
  /// c with c^{p-2} = α(n-2-α): c|x|^{-α} solves -Δu = u^{p-1} on R^n \ {0}.
  double residual_free = 0.0;
  /// α(n-2-α) taken verbatim as the coefficient.
  double verbatim_constant = 0.0;
};

SingularSteadyCoefficient singular_steady_coefficient(const FlowParams &params);

/// Relative residual |−Δu − u^{p−1}| / u^{p−1} of u = c|x|^{-α}. It is
/// independent of r because both terms scale like r^{-α-2}.
double singular_steady_residual(const FlowParams &params, double c);

/// Hölder constant c_0 = ((p-2)/p) vol^{1-p/2} with (p-2)/p ‖u‖_p^p >= c_0 ‖u‖_2^p.
double ball_holder_constant(const FlowParams &params, double vol);

/// Latest blow-up time c_0^{-1}(p-2)^{-1}‖u_0‖_2^{(2-p)/2} for negative-energy data.
double ball_blowup_bound(const FlowParams &params, double vol, double l2norm);

/// Lower bound (‖u_0‖_2^{(2-p)/2} - c_0(p-2)t)^{-2/(p-2)} on ‖u(t)‖_2; +inf past the bound.
double ball_l2_lower_bound(const FlowParams &params, double vol, double l2norm0, double t);

} // namespace lelab
