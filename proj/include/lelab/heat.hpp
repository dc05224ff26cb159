#pragma once

#include <span>
#include <vector>

#include "lelab/exponents.hpp"
#include "lelab/geometry.hpp"

namespace lelab {

enum class Scheme { CrankNicolson, ImplicitEuler };

const char *to_string(Scheme s);
Scheme scheme_from_string(const std::string &name);

/// Finite-volume radial Laplacian u_rr + (n-1)/r u_r on a RadialGrid.
///
/// Row i balances the fluxes σ m^{n-1}(u_{i+1}-u_i)/(r_{i+1}-r_i) through the
/// midpoints m = m_{i±1/2} against the cell weight w_i. The flux through the
/// origin vanishes (symmetry), which yields the limiting operator n u_rr at
/// r = 0. W·L is symmetric, so the discrete semigroup is self-adjoint with
/// respect to the quadrature weights.
class RadialLaplacian {
public:
  explicit RadialLaplacian(GridPtr grid);

  const RadialGrid &grid() const { return *grid_; }
  /// Coupling κ_{i+1/2} between nodes i and i+1.
  double coupling(std::size_t i) const { return kappa_[i]; }

  /// (L u)_i for interior rows 0..M-1, using u_M as given; entry M is 0.
  RadialField apply(const RadialField &u) const;

  /// Solves (I - a L) x = rhs on rows 0..M-1 with x_M = 0.
  RadialField solve_shifted(double a, const RadialField &rhs) const;

  /// rhs + a L rhs with homogeneous Dirichlet data.
  RadialField apply_shifted(double a, const RadialField &rhs) const;

private:
  GridPtr grid_;
  std::vector<double> kappa_;
};

/// One-step linear heat propagator with homogeneous Dirichlet data at r = R.
class LinearStepper {
public:
  LinearStepper(GridPtr grid, Scheme scheme, double dt);

  const RadialGrid &grid() const { return op_.grid(); }
  const GridPtr &grid_ptr() const { return grid_; }
  const RadialLaplacian &laplacian() const { return op_; }
  Scheme scheme() const { return scheme_; }
  double dt() const { return dt_; }

  /// Advances f by one step of length dt (or `h` when given).
  RadialField step(const RadialField &f) const { return step(f, dt_); }
  RadialField step(const RadialField &f, double h) const;

  /// One step of the semi-implicit scheme for u_t - Δu = source(u): implicit
  /// diffusion, source evaluated at the start of the step.
  RadialField step_with_source(const RadialField &u, const RadialField &source, double h) const;

private:
  GridPtr grid_;
  RadialLaplacian op_;
  Scheme scheme_;
  double dt_;
};

RadialField step_linear(const LinearStepper &s, const RadialField &f);

/// S_t f: whole steps of dt followed by one partial step landing on t.
RadialField semigroup(const LinearStepper &s, const RadialField &f, double t);

/// G(x, t) = (4πt)^{-n/2} exp(-|x|^2/4t) at |x| = r.
double gaussian_kernel(double r, double t, int n);

/// C = sup_{s>=0} (1+s)^n (4π)^{-n/2} e^{-s^2/4}, so that G(x,t) <= C(|x|+√t)^{-n}.
double gaussian_envelope_constant(int n);

/// Average of G(x - y, t) over the sphere |y| = rho at |x| = r.
double spherical_average_gaussian(double r, double rho, double t, int n);

/// Column Γ_h(·, r_j, t): the semigroup applied to the discrete delta at node j
/// normalised by its weight. In the radial reduction this is the spherical
/// average of Γ over |y| = r_j. With Crank-Nicolson the first two steps are
/// replaced by four implicit Euler half steps.
RadialField green_column(const LinearStepper &s, std::size_t y_index, double t);

struct DecayProfile {
  std::vector<double> t;
  std::vector<double> scaled_sup; ///< t^{λ/4} sup|S_t f|
  std::vector<double> morrey;     ///< ‖S_t f‖_{L^{2,λ}} (centred ladder)
  double morrey_initial = 0.0;    ///< ‖f‖_{L^{2,λ}}
  /// Optional: parabolic L^{2,μ} norm of the gradient of S_t f over [0, t_max].
  double gradient_pmorrey = 0.0;
};

struct DecayOptions {
  Scheme scheme = Scheme::ImplicitEuler;
  int substeps = 100; ///< implicit steps between consecutive sample times
  bool gradient_diagnostic = false;
};

/// Samples S_t f at the increasing times t_grid (all > 0).
DecayProfile decay_check(const RadialField &f, const FlowParams &params,
                         std::span<const double> t_grid, const DecayOptions &opts = {});

} // namespace lelab
