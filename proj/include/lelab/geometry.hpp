#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lelab {

/// Raised for any violated precondition of a public operation.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Surface measure of the unit sphere S^{n-1}.
double unit_sphere_area(int n);
/// Volume of the ball of radius R in R^n.
double ball_volume(int n, double R);

/// Radial discretization of B_R(0) in R^n.
///
/// Nodes are r_i = R (i/M)^g. Node i owns the shell between the midpoints
/// of its neighbouring intervals (the first cell starts at 0, the last ends
/// at R), and its weight is the exact n-dimensional measure of that shell,
/// so the weights sum to |B_R| up to rounding.
class RadialGrid {
public:
  RadialGrid(int n, double R, int M, double grading);

  int dim() const { return n_; }
  double radius() const { return R_; }
  int intervals() const { return M_; }
  std::size_t size() const { return radii_.size(); }
  double grading() const { return grading_; }

  std::span<const double> radii() const { return radii_; }
  std::span<const double> weights() const { return weights_; }
  double r(std::size_t i) const { return radii_[i]; }
  double w(std::size_t i) const { return weights_[i]; }
  /// Midpoint between nodes i and i+1.
  double midpoint(std::size_t i) const { return 0.5 * (radii_[i] + radii_[i + 1]); }

  /// Same grid with every radius multiplied by factor.
  RadialGrid scaled(double factor) const;
  /// True when the radii coincide with other.radii() * factor to relative tol.
  bool is_scaled_copy_of(const RadialGrid &other, double factor, double tol = 1e-12) const;

private:
  RadialGrid(int n, double R, int M, double grading, std::vector<double> radii);
  void build_weights();

  int n_;
  double R_;
  int M_;
  double grading_;
  std::vector<double> radii_;
  std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// make_grid: validated construction, n >= 3, R > 0, M >= 16, grading >= 1.
GridPtr make_grid(int n, double R, int M, double grading = 2.0);

/// A radial function sampled at the nodes of a grid.
class RadialField {
public:
  RadialField() = default;
  explicit RadialField(GridPtr grid);
  RadialField(GridPtr grid, std::vector<double> values);

  const RadialGrid &grid() const { return *grid_; }
  const GridPtr &grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double &operator[](std::size_t i) { return values_[i]; }

  /// Linear interpolation in r; constant extension outside [0, R].
  double at_radius(double r) const;
  double sup_abs() const;
  bool all_finite() const;

  RadialField &operator+=(const RadialField &o);
  RadialField &operator-=(const RadialField &o);
  RadialField &operator*=(double a);

private:
  GridPtr grid_;
  std::vector<double> values_;
};

RadialField operator+(RadialField a, const RadialField &b);
RadialField operator-(RadialField a, const RadialField &b);
RadialField operator*(double a, RadialField f);

/// Samples of u(., t_k) at increasing times on a common grid.
class SpaceTimeField {
public:
  SpaceTimeField() = default;
  explicit SpaceTimeField(GridPtr grid) : grid_(std::move(grid)) {}

  void push_back(double t, RadialField slice);
  const RadialGrid &grid() const { return *grid_; }
  const GridPtr &grid_ptr() const { return grid_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  double time(std::size_t k) const { return times_[k]; }
  std::span<const double> times() const { return times_; }
  const RadialField &slice(std::size_t k) const { return slices_[k]; }
  RadialField &slice(std::size_t k) { return slices_[k]; }
  const RadialField &back() const { return slices_.back(); }
  /// Index of the slice whose time is closest to t.
  std::size_t nearest(double t) const;

private:
  GridPtr grid_;
  std::vector<double> times_;
  std::vector<RadialField> slices_;
};

SpaceTimeField operator-(const SpaceTimeField &a, const SpaceTimeField &b);

/// Sum of w_i f(r_i).
double integrate(const RadialField &f);

/// x -> R^{-alpha} f(x/R), placed on the grid whose radii are R times those of f.
RadialField rescale_field(const RadialField &f, double R, double alpha);
/// Same, onto a caller-supplied target grid. Non-nested targets are rejected
/// unless allow_interpolation is set.
RadialField rescale_field(const RadialField &f, double R, double alpha, GridPtr target,
                          bool allow_interpolation = false);

/// f(r_i) sampled from a closed form.
RadialField sample(GridPtr grid, const std::function<double(double)> &fn);
/// c |x|^{-alpha}; the singular node r_0 = 0 takes the value at r_1.
RadialField power_profile(GridPtr grid, double c, double alpha);
/// A (1 - (r/R)^2).
RadialField bubble_profile(GridPtr grid, double A);

/// Integral of a nonnegative radial density over B_r(0) ∩ B_R.
///
/// Between nodes the density is interpolated as a power law when both ends
/// are positive (exact for |x|^{-k} data), linearly otherwise; the first cell
/// [0, r_1] is always linear. Cumulative node integrals are precomputed so a
/// query costs one binary search.
class ShellIntegrator {
public:
  ShellIntegrator(const RadialGrid &grid, std::span<const double> density);
  double operator()(double r) const;
  double total() const { return cumulative_.back(); }
  /// The interpolated density at radius s (0 outside the domain).
  double density_at(double s) const;

private:
  double cell_integral(std::size_t i, double a, double b) const;

  const RadialGrid *grid_;
  std::vector<double> density_;
  std::vector<double> cumulative_;
  double sphere_;
};

// Serialization -------------------------------------------------------------

/// CSV with header "radius,value".
void write_field_csv(std::ostream &os, const RadialField &f);
/// Reads a "radius,value" CSV and interpolates it linearly onto grid.
RadialField read_field_csv(std::istream &is, GridPtr grid);
/// {"n", "R", "M", "grading"}
std::string grid_json(const RadialGrid &g);

} // namespace lelab
