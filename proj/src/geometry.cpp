#include "lelab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace lelab {

double unit_sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double ball_volume(int n, double R) {
  return std::pow(std::numbers::pi, 0.5 * n) * std::pow(R, n) / std::tgamma(0.5 * n + 1.0);
}

RadialGrid::RadialGrid(int n, double R, int M, double grading)
    : n_(n), R_(R), M_(M), grading_(grading), radii_(static_cast<std::size_t>(M) + 1) {
  for (int i = 0; i <= M; ++i)
    radii_[i] = R * std::pow(static_cast<double>(i) / M, grading);
  radii_[M] = R;
  build_weights();
}

RadialGrid::RadialGrid(int n, double R, int M, double grading, std::vector<double> radii)
    : n_(n), R_(R), M_(M), grading_(grading), radii_(std::move(radii)) {
  build_weights();
}

void RadialGrid::build_weights() {
  const double c = unit_sphere_area(n_) / n_;
  weights_.resize(radii_.size());
  double lo = 0.0;
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    const double hi = (i + 1 < radii_.size()) ? midpoint(i) : R_;
    weights_[i] = c * (std::pow(hi, n_) - std::pow(lo, n_));
    lo = hi;
  }
}

RadialGrid RadialGrid::scaled(double factor) const {
  std::vector<double> r(radii_);
  for (auto &x : r)
    x *= factor;
  return RadialGrid(n_, R_ * factor, M_, grading_, std::move(r));
}

bool RadialGrid::is_scaled_copy_of(const RadialGrid &other, double factor, double tol) const {
  if (other.size() != size() || other.dim() != dim())
    return false;
  for (std::size_t i = 0; i < size(); ++i) {
    const double expect = other.r(i) * factor;
    if (std::abs(radii_[i] - expect) > tol * std::max(std::abs(expect), R_ * 1e-300))
      return false;
  }
  return true;
}

GridPtr make_grid(int n, double R, int M, double grading) {
  if (n < 3)
    throw InvalidArgument("make_grid: dimension n must be >= 3, got " + std::to_string(n));
  if (!(R > 0.0))
    throw InvalidArgument("make_grid: radius R must be positive");
  if (M < 16)
    throw InvalidArgument("make_grid: M must be >= 16 (too coarse), got " + std::to_string(M));
  if (!(grading >= 1.0))
    throw InvalidArgument("make_grid: grading must be >= 1");
  return std::make_shared<const RadialGrid>(n, R, M, grading);
}

// RadialField ----------------------------------------------------------------

RadialField::RadialField(GridPtr grid) : grid_(std::move(grid)), values_(grid_->size(), 0.0) {}

RadialField::RadialField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size())
    throw InvalidArgument("RadialField: value count does not match grid size");
}

double RadialField::at_radius(double r) const {
  const auto radii = grid_->radii();
  if (r <= radii.front())
    return values_.front();
  if (r >= radii.back())
    return values_.back();
  const auto it = std::upper_bound(radii.begin(), radii.end(), r);
  const std::size_t j = static_cast<std::size_t>(it - radii.begin());
  const double a = radii[j - 1], b = radii[j];
  const double s = (r - a) / (b - a);
  return (1.0 - s) * values_[j - 1] + s * values_[j];
}

double RadialField::sup_abs() const {
  double m = 0.0;
  for (double v : values_)
    m = std::max(m, std::abs(v));
  return m;
}

bool RadialField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

RadialField &RadialField::operator+=(const RadialField &o) {
  for (std::size_t i = 0; i < values_.size(); ++i)
    values_[i] += o.values_[i];
  return *this;
}

RadialField &RadialField::operator-=(const RadialField &o) {
  for (std::size_t i = 0; i < values_.size(); ++i)
    values_[i] -= o.values_[i];
  return *this;
}

RadialField &RadialField::operator*=(double a) {
  for (auto &v : values_)
    v *= a;
  return *this;
}

RadialField operator+(RadialField a, const RadialField &b) { return a += b; }
RadialField operator-(RadialField a, const RadialField &b) { return a -= b; }
RadialField operator*(double a, RadialField f) { return f *= a; }

// SpaceTimeField --------------------------------------------------------------

void SpaceTimeField::push_back(double t, RadialField slice) {
  if (!grid_)
    grid_ = slice.grid_ptr();
  if (slice.grid_ptr() != grid_ && slice.size() != grid_->size())
    throw InvalidArgument("SpaceTimeField: slice on a different grid");
  if (!times_.empty() && !(t > times_.back()))
    throw InvalidArgument("SpaceTimeField: times must be strictly increasing");
  times_.push_back(t);
  slices_.push_back(std::move(slice));
}

std::size_t SpaceTimeField::nearest(double t) const {
  std::size_t best = 0;
  for (std::size_t k = 1; k < times_.size(); ++k)
    if (std::abs(times_[k] - t) < std::abs(times_[best] - t))
      best = k;
  return best;
}

SpaceTimeField operator-(const SpaceTimeField &a, const SpaceTimeField &b) {
  if (a.size() != b.size())
    throw InvalidArgument("SpaceTimeField difference: slice counts differ");
  SpaceTimeField out(a.grid_ptr());
  for (std::size_t k = 0; k < a.size(); ++k)
    out.push_back(a.time(k), a.slice(k) - b.slice(k));
  return out;
}

// Operations -------------------------------------------------------------------

double integrate(const RadialField &f) {
  const auto w = f.grid().weights();
  const auto v = f.values();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += w[i] * v[i];
  return s;
}

RadialField rescale_field(const RadialField &f, double R, double alpha) {
  if (!(R > 0.0))
    throw InvalidArgument("rescale_field: factor must be positive");
  auto target = std::make_shared<const RadialGrid>(f.grid().scaled(R));
  return rescale_field(f, R, alpha, std::move(target), false);
}

RadialField rescale_field(const RadialField &f, double R, double alpha, GridPtr target,
                          bool allow_interpolation) {
  if (!(R > 0.0))
    throw InvalidArgument("rescale_field: factor must be positive");
  const double amp = std::pow(R, -alpha);
  RadialField out(target);
  if (target->is_scaled_copy_of(f.grid(), R)) {
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = amp * f[i];
    return out;
  }
  if (!allow_interpolation)
    throw InvalidArgument("rescale_field: target grid is not the source grid scaled by R "
                          "(enable interpolation to resample)");
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = amp * f.at_radius(target->r(i) / R);
  return out;
}

RadialField sample(GridPtr grid, const std::function<double(double)> &fn) {
  RadialField f(grid);
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = fn(grid->r(i));
  return f;
}

RadialField power_profile(GridPtr grid, double c, double alpha) {
  RadialField f(grid);
  for (std::size_t i = 1; i < f.size(); ++i)
    f[i] = c * std::pow(grid->r(i), -alpha);
  f[0] = f[1];
  return f;
}

RadialField bubble_profile(GridPtr grid, double A) {
  const double R = grid->radius();
  return sample(grid, [A, R](double r) { return A * (1.0 - (r / R) * (r / R)); });
}

// ShellIntegrator --------------------------------------------------------------

ShellIntegrator::ShellIntegrator(const RadialGrid &grid, std::span<const double> density)
    : grid_(&grid), density_(density.begin(), density.end()), cumulative_(grid.size(), 0.0),
      sphere_(unit_sphere_area(grid.dim())) {
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    cumulative_[i + 1] = cumulative_[i] + cell_integral(i, grid.r(i), grid.r(i + 1));
}

double ShellIntegrator::cell_integral(std::size_t i, double a, double b) const {
  if (b <= a)
    return 0.0;
  const int n = grid_->dim();
  const double r0 = grid_->r(i), r1 = grid_->r(i + 1);
  const double h0 = density_[i], h1 = density_[i + 1];
  if (i > 0 && h0 > 0.0 && h1 > 0.0) {
    const double beta = std::log(h1 / h0) / std::log(r1 / r0);
    if (std::abs(beta) < 50.0) {
      // sigma h0 r0^{-beta} \int_a^b s^{beta+n-1} ds, written relative to r0.
      const double gamma = beta + n;
      const double xa = a / r0, xb = b / r0;
      double shape;
      if (std::abs(gamma) < 1e-12)
        shape = std::log(xb / xa);
      else
        shape = (std::pow(xb, gamma) - std::pow(xa, gamma)) / gamma;
      return sphere_ * h0 * std::pow(r0, n) * shape;
    }
  }
  const double slope = (h1 - h0) / (r1 - r0);
  const double In = (std::pow(b, n) - std::pow(a, n)) / n;
  const double In1 = (std::pow(b, n + 1) - std::pow(a, n + 1)) / (n + 1);
  return sphere_ * (h0 * In + slope * (In1 - r0 * In));
}

double ShellIntegrator::operator()(double r) const {
  const auto radii = grid_->radii();
  if (r <= 0.0)
    return 0.0;
  if (r >= radii.back())
    return cumulative_.back();
  const auto it = std::upper_bound(radii.begin(), radii.end(), r);
  const std::size_t j = static_cast<std::size_t>(it - radii.begin()) - 1;
  return cumulative_[j] + cell_integral(j, radii[j], r);
}

double ShellIntegrator::density_at(double s) const {
  const auto radii = grid_->radii();
  if (s < 0.0 || s > radii.back())
    return 0.0;
  if (s == radii.back())
    return density_.back();
  const auto it = std::upper_bound(radii.begin(), radii.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - radii.begin()) - 1;
  const double r0 = radii[i], r1 = radii[i + 1];
  const double h0 = density_[i], h1 = density_[i + 1];
  if (i > 0 && h0 > 0.0 && h1 > 0.0) {
    const double beta = std::log(h1 / h0) / std::log(r1 / r0);
    if (std::abs(beta) < 50.0)
      return h0 * std::pow(s / r0, beta);
  }
  return h0 + (h1 - h0) * (s - r0) / (r1 - r0);
}

// Serialization ------------------------------------------------------------------

void write_field_csv(std::ostream &os, const RadialField &f) {
  char buf[64];
  os << "radius,value\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", f.grid().r(i), f[i]);
    os << buf;
  }
}

RadialField read_field_csv(std::istream &is, GridPtr grid) {
  std::string line;
  std::vector<double> rs, vs;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty())
      continue;
    if (header) {
      header = false;
      if (line.find_first_not_of("0123456789+-.eE, \t\r") != std::string::npos)
        continue;
    }
    std::istringstream ss(line);
    double r, v;
    char comma;
    if (!(ss >> r >> comma >> v) || comma != ',')
      throw InvalidArgument("read_field_csv: malformed line '" + line + "'");
    if (!rs.empty() && !(r > rs.back()))
      throw InvalidArgument("read_field_csv: radii must be strictly increasing");
    rs.push_back(r);
    vs.push_back(v);
  }
  if (rs.size() < 2)
    throw InvalidArgument("read_field_csv: need at least two samples");
  RadialField f(grid);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = grid->r(i);
    if (r <= rs.front()) {
      f[i] = vs.front();
      continue;
    }
    if (r >= rs.back()) {
      f[i] = vs.back();
      continue;
    }
    const auto it = std::upper_bound(rs.begin(), rs.end(), r);
    const std::size_t j = static_cast<std::size_t>(it - rs.begin());
    const double s = (r - rs[j - 1]) / (rs[j] - rs[j - 1]);
    f[i] = (1.0 - s) * vs[j - 1] + s * vs[j];
  }
  return f;
}

std::string grid_json(const RadialGrid &g) {
  nlohmann::json j{{"n", g.dim()}, {"R", g.radius()}, {"M", g.intervals()}, {"grading", g.grading()}};
  return j.dump();
}

} // namespace lelab
