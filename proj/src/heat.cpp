#include "lelab/heat.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lelab/norms.hpp"

namespace lelab {

const char *to_string(Scheme s) {
  return s == Scheme::CrankNicolson ? "crank_nicolson" : "implicit_euler";
}

Scheme scheme_from_string(const std::string &name) {
  if (name == "crank_nicolson" || name == "cn")
    return Scheme::CrankNicolson;
  if (name == "implicit_euler" || name == "ie")
    return Scheme::ImplicitEuler;
  throw InvalidArgument("unknown scheme '" + name + "' (expected crank_nicolson or implicit_euler)");
}

// RadialLaplacian ---------------------------------------------------------------

RadialLaplacian::RadialLaplacian(GridPtr grid) : grid_(std::move(grid)) {
  const int n = grid_->dim();
  const double sigma = unit_sphere_area(n);
  kappa_.resize(grid_->size() - 1);
  for (std::size_t i = 0; i < kappa_.size(); ++i)
    kappa_[i] = sigma * std::pow(grid_->midpoint(i), n - 1) / (grid_->r(i + 1) - grid_->r(i));
}

RadialField RadialLaplacian::apply(const RadialField &u) const {
  const std::size_t M = grid_->size() - 1;
  RadialField out(u.grid_ptr());
  for (std::size_t i = 0; i < M; ++i) {
    double flux = kappa_[i] * (u[i + 1] - u[i]);
    if (i > 0)
      flux -= kappa_[i - 1] * (u[i] - u[i - 1]);
    out[i] = flux / grid_->w(i);
  }
  out[M] = 0.0;
  return out;
}

RadialField RadialLaplacian::apply_shifted(double a, const RadialField &rhs) const {
  RadialField v = rhs;
  v[v.size() - 1] = 0.0;
  RadialField lv = apply(v);
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] += a * lv[i];
  return v;
}

RadialField RadialLaplacian::solve_shifted(double a, const RadialField &rhs) const {
  const std::size_t M = grid_->size() - 1;
  std::vector<double> c(M), d(M);
  // Thomas sweep on rows 0..M-1; node M is the Dirichlet boundary.
  double prev_c = 0.0, prev_d = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    const double w = grid_->w(i);
    const double lower = (i > 0) ? -a * kappa_[i - 1] / w : 0.0;
    const double upper = (i + 1 < M) ? -a * kappa_[i] / w : 0.0;
    const double diag = 1.0 + a * (kappa_[i] + (i > 0 ? kappa_[i - 1] : 0.0)) / w;
    const double pivot = diag - lower * prev_c;
    if (!(pivot > 0.0) || !std::isfinite(pivot))
      throw std::runtime_error("RadialLaplacian::solve_shifted: non-dominant system (check dt/grid)");
    c[i] = upper / pivot;
    d[i] = (rhs[i] - lower * prev_d) / pivot;
    prev_c = c[i];
    prev_d = d[i];
  }
  RadialField x(rhs.grid_ptr());
  x[M] = 0.0;
  x[M - 1] = d[M - 1];
  for (std::size_t i = M - 1; i-- > 0;)
    x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

// LinearStepper -------------------------------------------------------------------

LinearStepper::LinearStepper(GridPtr grid, Scheme scheme, double dt)
    : grid_(grid), op_(std::move(grid)), scheme_(scheme), dt_(dt) {
  if (!(dt > 0.0))
    throw InvalidArgument("LinearStepper: dt must be positive");
}

RadialField LinearStepper::step(const RadialField &f, double h) const {
  if (scheme_ == Scheme::ImplicitEuler)
    return op_.solve_shifted(h, f);
  return op_.solve_shifted(0.5 * h, op_.apply_shifted(0.5 * h, f));
}

RadialField LinearStepper::step_with_source(const RadialField &u, const RadialField &source,
                                            double h) const {
  RadialField rhs = (scheme_ == Scheme::ImplicitEuler) ? u : op_.apply_shifted(0.5 * h, u);
  for (std::size_t i = 0; i < rhs.size(); ++i)
    rhs[i] += h * source[i];
  return op_.solve_shifted(scheme_ == Scheme::ImplicitEuler ? h : 0.5 * h, rhs);
}

RadialField step_linear(const LinearStepper &s, const RadialField &f) { return s.step(f); }

RadialField semigroup(const LinearStepper &s, const RadialField &f, double t) {
  if (t < 0.0)
    throw InvalidArgument("semigroup: t must be >= 0");
  if (t == 0.0)
    return f;
  const double dt = s.dt();
  const auto whole = static_cast<long>(std::floor(t / dt + 1e-9));
  RadialField u = f;
  for (long k = 0; k < whole; ++k)
    u = s.step(u);
  const double rest = t - static_cast<double>(whole) * dt;
  if (rest > 1e-12 * t)
    u = s.step(u, rest);
  return u;
}

// Kernels ------------------------------------------------------------------------------

double gaussian_kernel(double r, double t, int n) {
  if (!(t > 0.0))
    throw InvalidArgument("gaussian_kernel: t must be positive");
  return std::pow(4.0 * std::numbers::pi * t, -0.5 * n) * std::exp(-r * r / (4.0 * t));
}

double gaussian_envelope_constant(int n) {
  // d/ds [n log(1+s) - s^2/4] = 0  <=>  s^2 + s - 2n = 0
  const double s = 0.5 * (-1.0 + std::sqrt(1.0 + 8.0 * n));
  return std::pow(1.0 + s, n) * std::pow(4.0 * std::numbers::pi, -0.5 * n) * std::exp(-0.25 * s * s);
}

double spherical_average_gaussian(double r, double rho, double t, int n) {
  if (!(t > 0.0))
    throw InvalidArgument("spherical_average_gaussian: t must be positive");
  const double peak = std::pow(4.0 * std::numbers::pi * t, -0.5 * n) *
                      std::exp(-(r - rho) * (r - rho) / (4.0 * t));
  if (r == 0.0 || rho == 0.0)
    return peak;
  const double z = r * rho / (2.0 * t);
  auto integrand = [z, n](double th) {
    return std::pow(std::sin(th), n - 2) * std::exp(-z * (1.0 - std::cos(th)));
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double cut = std::min(std::numbers::pi, 12.0 / std::sqrt(z));
  double num = GK::integrate(integrand, 0.0, cut, 15, 1e-12);
  if (cut < std::numbers::pi)
    num += GK::integrate(integrand, cut, std::numbers::pi, 15, 1e-12);
  const double den = std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (n - 1)) / std::tgamma(0.5 * n);
  return peak * num / den;
}

RadialField green_column(const LinearStepper &s, std::size_t y_index, double t) {
  const std::size_t M = s.grid().size() - 1;
  if (y_index == 0 || y_index >= M)
    throw InvalidArgument("green_column: source node must be interior");
  if (!(t > 0.0))
    throw InvalidArgument("green_column: t must be positive");
  RadialField delta(s.grid_ptr());
  delta[y_index] = 1.0 / s.grid().w(y_index);
  if (s.scheme() != Scheme::CrankNicolson || t < 2.0 * s.dt())
    return semigroup(s, delta, t);
  // CN does not damp the highest modes of a delta; four implicit half steps
  // first (Rannacher start) keep the column smooth and second order.
  const LinearStepper half(s.grid_ptr(), Scheme::ImplicitEuler, 0.5 * s.dt());
  for (int k = 0; k < 4; ++k)
    delta = half.step(delta);
  return semigroup(s, delta, t - 2.0 * s.dt());
}

// Decay ---------------------------------------------------------------------------------

DecayProfile decay_check(const RadialField &f, const FlowParams &params,
                         std::span<const double> t_grid, const DecayOptions &opts) {
  DecayProfile out;
  out.morrey_initial = morrey_norm_radial(f, 2.0, params.lambda).value;
  SpaceTimeField grads(f.grid_ptr());
  RadialField u = f;
  double t_prev = 0.0;
  for (double t : t_grid) {
    if (!(t > t_prev))
      throw InvalidArgument("decay_check: times must be positive and increasing");
    const double h = (t - t_prev) / opts.substeps;
    const LinearStepper stepper(f.grid_ptr(), opts.scheme, h);
    for (int k = 0; k < opts.substeps; ++k)
      u = stepper.step(u);
    out.t.push_back(t);
    out.scaled_sup.push_back(std::pow(t, 0.25 * params.lambda) * u.sup_abs());
    out.morrey.push_back(morrey_norm_radial(u, 2.0, params.lambda).value);
    if (opts.gradient_diagnostic)
      grads.push_back(t, radial_gradient(u));
    t_prev = t;
  }
  if (opts.gradient_diagnostic && grads.size() >= 4) {
    ParabolicMorreyOptions po;
    po.require_r2_le_t0 = false;
    out.gradient_pmorrey = parabolic_morrey_norm(grads, 2.0, params.mu, po);
  }
  return out;
}

} // namespace lelab
