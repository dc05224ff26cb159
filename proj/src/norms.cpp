#include "lelab/norms.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "lelab/random.hpp"

namespace lelab {

namespace {

std::vector<double> abs_power(const RadialField &f, double q) {
  std::vector<double> h(f.size());
  for (std::size_t i = 0; i < h.size(); ++i)
    h[i] = std::pow(std::abs(f[i]), q);
  return h;
}

// Fraction of the sphere |y| = s that lies inside B_r(x), |x| = d > 0.
double sphere_fraction(double s, double d, double r, int n) {
  if (s <= r - d)
    return 1.0;
  if (s >= r + d || s <= d - r)
    return 0.0;
  const double c0 = (s * s + d * d - r * r) / (2.0 * s * d);
  if (c0 <= -1.0)
    return 1.0;
  if (c0 >= 1.0)
    return 0.0;
  const double a = 0.5 * (n - 1);
  // (1 + cos θ)/2 is Beta(a, a) distributed on S^{n-1}.
  return boost::math::ibetac(a, a, 0.5 * (1.0 + c0));
}

// Shell-quadrature of an off-centre ball over an interpolated density.
double offcenter_integral(const ShellIntegrator &shell, int n, double R, double d, double r) {
  if (r <= 0.0)
    return 0.0;
  if (d <= 0.0)
    return shell(r);
  double total = 0.0;
  const double inner = r - d; // spheres with s <= inner lie entirely inside
  if (inner > 0.0)
    total += shell(std::min(inner, R));
  const double lo = std::max(std::abs(r - d), 0.0);
  const double hi = std::min(r + d, R);
  if (hi <= lo)
    return total;
  const double sigma = unit_sphere_area(n);
  const int panels = 64;
  const double width = (hi - lo) / panels;
  auto integrand = [&](double s) {
    return shell.density_at(s) * std::pow(s, n - 1) * sphere_fraction(s, d, r, n);
  };
  for (int k = 0; k < panels; ++k) {
    const double a = lo + k * width;
    total += sigma * boost::math::quadrature::gauss<double, 7>::integrate(integrand, a, a + width);
  }
  return total;
}

} // namespace

std::vector<double> radius_ladder(const RadialGrid &grid, const MorreyOptions &opts) {
  const double R = grid.radius();
  const double ratio = opts.ratio;
  if (!(ratio > 1.0))
    throw InvalidArgument("radius_ladder: ratio must exceed 1");
  const double r_min = opts.r_min > 0.0 ? opts.r_min : grid.r(std::min<std::size_t>(2, grid.size() - 1));
  std::vector<double> radii;
  for (double r = R; r >= r_min * (1.0 - 1e-12); r /= ratio)
    radii.push_back(r);
  double up = R;
  for (int j = 0; j < opts.steps_above; ++j) {
    up *= ratio;
    radii.push_back(up);
  }
  std::sort(radii.begin(), radii.end());
  return radii;
}

double lq_norm(const RadialField &f, double q) {
  if (!(q >= 1.0))
    throw InvalidArgument("lq_norm: q must be >= 1");
  const auto w = f.grid().weights();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    s += w[i] * std::pow(std::abs(f[i]), q);
  return std::pow(s, 1.0 / q);
}

double spacetime_lq_norm(const SpaceTimeField &u, double q) {
  double acc = 0.0, prev = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double cur = std::pow(lq_norm(u.slice(k), q), q);
    if (k > 0)
      acc += 0.5 * (u.time(k) - u.time(k - 1)) * (cur + prev);
    prev = cur;
  }
  return std::pow(acc, 1.0 / q);
}

MorreyResult morrey_norm_radial(const RadialField &f, double q, double lam,
                                const MorreyOptions &opts) {
  const int n = f.grid().dim();
  if (!(lam > 0.0 && lam < n))
    throw InvalidArgument("morrey_norm_radial: lambda must lie in (0, n)");
  const auto h = abs_power(f, q);
  const ShellIntegrator shell(f.grid(), h);
  MorreyResult res;
  double best = 0.0;
  for (double r : radius_ladder(f.grid(), opts)) {
    const double quotient = std::pow(r, lam - n) * shell(r);
    res.profile.emplace_back(r, quotient);
    if (quotient > best) {
      best = quotient;
      res.argmax_radius = r;
    }
  }
  res.value = std::pow(best, 1.0 / q);
  return res;
}

MorreyResult morrey_norm_sampled(const RadialField &f, double q, double lam, int samples,
                                 std::uint64_t seed, const SampledMorreyOptions &opts) {
  const RadialGrid &grid = f.grid();
  const int n = grid.dim();
  const double R = grid.radius();
  if (!(lam > 0.0 && lam < n))
    throw InvalidArgument("morrey_norm_sampled: lambda must lie in (0, n)");
  if (samples < 1 || opts.centers < 1)
    throw InvalidArgument("morrey_norm_sampled: need at least one sample and one centre");
  const auto h = abs_power(f, q);
  const ShellIntegrator shell(grid, h);
  const auto ladder = radius_ladder(grid, opts.ladder);

  MorreyResult res;
  res.profile.reserve(ladder.size());
  double best = 0.0;
  std::vector<double> z(static_cast<std::size_t>(n));
  for (std::size_t j = 0; j < ladder.size(); ++j) {
    const double r = ladder[j];
    const double vol = ball_volume(n, r);
    double best_at_r = 0.0;
    for (int k = 0; k < opts.centers; ++k) {
      Rng rng(mix64(seed, mix64(static_cast<std::uint64_t>(k), j)));
      const double d = R * (k + rng.uniform()) / opts.centers;
      double acc = 0.0;
      for (int m = 0; m < samples; ++m) {
        double norm2 = 0.0;
        for (auto &zi : z) {
          zi = rng.normal();
          norm2 += zi * zi;
        }
        const double scale = r * std::pow(rng.uniform(), 1.0 / n) / std::sqrt(norm2);
        const double y0 = d + scale * z[0];
        double s2 = y0 * y0;
        for (int i = 1; i < n; ++i)
          s2 += scale * z[i] * scale * z[i];
        const double s = std::sqrt(s2);
        if (s < R)
          acc += shell.density_at(s);
      }
      const double quotient = std::pow(r, lam - n) * vol * acc / samples;
      if (quotient > best_at_r)
        best_at_r = quotient;
      if (quotient > best) {
        best = quotient;
        res.argmax_radius = r;
        res.argmax_center_offset = d;
      }
    }
    res.profile.emplace_back(r, best_at_r);
  }
  res.value = std::pow(best, 1.0 / q);
  return res;
}

ParabolicMorreyResult parabolic_morrey(const SpaceTimeField &u, double q, double mu,
                                       const ParabolicMorreyOptions &opts) {
  const RadialGrid &grid = u.grid();
  const int n = grid.dim();
  if (!(mu > 0.0 && mu < n + 2))
    throw InvalidArgument("parabolic_morrey: mu must lie in (0, n+2)");
  if (u.size() < 4)
    throw InvalidArgument("parabolic_morrey: need at least 4 time slices");
  const auto times = u.times();
  const std::size_t K = u.size();
  const auto ladder = radius_ladder(grid, opts.ladder);

  // g[j][k] = ∫_{B_{r_j}} |u(t_k)|^q
  std::vector<std::vector<double>> g(ladder.size(), std::vector<double>(K));
  for (std::size_t k = 0; k < K; ++k) {
    const ShellIntegrator shell(grid, abs_power(u.slice(k), q));
    for (std::size_t j = 0; j < ladder.size(); ++j)
      g[j][k] = shell(ladder[j]);
  }

  ParabolicMorreyResult res;
  double best = 0.0;
  std::vector<double> prefix(K);
  for (std::size_t j = 0; j < ladder.size(); ++j) {
    const double r = ladder[j];
    const auto &gj = g[j];
    prefix[0] = 0.0;
    for (std::size_t k = 1; k < K; ++k)
      prefix[k] = prefix[k - 1] + 0.5 * (times[k] - times[k - 1]) * (gj[k] + gj[k - 1]);
    const double scale = std::pow(r, mu - (n + 2));
    for (std::size_t k = 1; k < K; ++k) {
      const double t0 = times[k];
      if (opts.require_r2_le_t0 && r * r > t0 * (1.0 + 1e-12))
        continue;
      const double start = std::max(t0 - r * r, times[0]);
      // first slice index at or after `start`
      const auto it = std::lower_bound(times.begin(), times.begin() + static_cast<long>(k), start);
      std::size_t i = static_cast<std::size_t>(it - times.begin());
      double integral = prefix[k] - prefix[i];
      if (i > 0 && times[i] > start) {
        const double ta = times[i - 1], tb = times[i];
        const double gs = gj[i - 1] + (gj[i] - gj[i - 1]) * (start - ta) / (tb - ta);
        integral += 0.5 * (tb - start) * (gs + gj[i]);
      }
      const double quotient = scale * integral;
      if (std::isnan(quotient)) {
        res.value = quotient;
        return res;
      }
      if (quotient > best) {
        best = quotient;
        res.argmax_radius = r;
        res.argmax_time = t0;
      }
    }
  }
  res.value = std::pow(best, 1.0 / q);
  return res;
}

double parabolic_morrey_norm(const SpaceTimeField &u, double q, double mu,
                             const ParabolicMorreyOptions &opts) {
  return parabolic_morrey(u, q, mu, opts).value;
}

double parabolic_morrey_sampled(const SpaceTimeField &u, double q, double mu, int samples,
                                std::uint64_t seed, int centers,
                                const ParabolicMorreyOptions &opts) {
  const RadialGrid &grid = u.grid();
  const int n = grid.dim();
  const double R = grid.radius();
  if (!(mu > 0.0 && mu < n + 2))
    throw InvalidArgument("parabolic_morrey_sampled: mu must lie in (0, n+2)");
  if (u.size() < 4)
    throw InvalidArgument("parabolic_morrey_sampled: need at least 4 time slices");
  const auto times = u.times();
  const std::size_t K = u.size();
  const auto ladder = radius_ladder(grid, opts.ladder);

  std::vector<ShellIntegrator> shells;
  shells.reserve(K);
  for (std::size_t k = 0; k < K; ++k)
    shells.emplace_back(grid, abs_power(u.slice(k), q));

  double best = 0.0;
  std::vector<double> z(static_cast<std::size_t>(n));
  std::vector<double> pts(static_cast<std::size_t>(samples));
  std::vector<double> gk(K), prefix(K);
  for (std::size_t j = 0; j < ladder.size(); ++j) {
    const double r = ladder[j];
    const double vol = ball_volume(n, r);
    const double scale = std::pow(r, mu - (n + 2));
    for (int c = 0; c < centers; ++c) {
      Rng rng(mix64(seed, mix64(static_cast<std::uint64_t>(c), j)));
      const double d = R * (c + rng.uniform()) / centers;
      for (auto &s : pts) {
        double norm2 = 0.0;
        for (auto &zi : z) {
          zi = rng.normal();
          norm2 += zi * zi;
        }
        const double sc = r * std::pow(rng.uniform(), 1.0 / n) / std::sqrt(norm2);
        const double y0 = d + sc * z[0];
        double s2 = y0 * y0;
        for (int i = 1; i < n; ++i)
          s2 += sc * z[i] * sc * z[i];
        s = std::sqrt(s2);
      }
      for (std::size_t k = 0; k < K; ++k) {
        double acc = 0.0;
        for (double s : pts)
          if (s < R)
            acc += shells[k].density_at(s);
        gk[k] = vol * acc / samples;
      }
      prefix[0] = 0.0;
      for (std::size_t k = 1; k < K; ++k)
        prefix[k] = prefix[k - 1] + 0.5 * (times[k] - times[k - 1]) * (gk[k] + gk[k - 1]);
      for (std::size_t k = 1; k < K; ++k) {
        const double t0 = times[k];
        if (opts.require_r2_le_t0 && r * r > t0 * (1.0 + 1e-12))
          continue;
        const double start = std::max(t0 - r * r, times[0]);
        const auto it = std::lower_bound(times.begin(), times.begin() + static_cast<long>(k), start);
        const std::size_t i = static_cast<std::size_t>(it - times.begin());
        double integral = prefix[k] - prefix[i];
        if (i > 0 && times[i] > start) {
          const double ta = times[i - 1], tb = times[i];
          const double gs = gk[i - 1] + (gk[i] - gk[i - 1]) * (start - ta) / (tb - ta);
          integral += 0.5 * (tb - start) * (gs + gk[i]);
        }
        best = std::max(best, scale * integral);
      }
    }
  }
  return std::pow(best, 1.0 / q);
}

double offcenter_ball_integral(const RadialField &density, double offset, double r) {
  const auto h = abs_power(density, 1.0);
  const ShellIntegrator shell(density.grid(), h);
  return offcenter_integral(shell, density.grid().dim(), density.grid().radius(), offset, r);
}

double fractional_maximal_at(const RadialField &f, double a, double r, double offset) {
  if (!(a > 0.0) || !(r > 0.0))
    throw InvalidArgument("fractional_maximal: a and r must be positive");
  const int n = f.grid().dim();
  return std::pow(r, a - n) * offcenter_ball_integral(f, offset, r);
}

RadialField fractional_maximal(const RadialField &f, double a, double r) {
  if (!(a > 0.0) || !(r > 0.0))
    throw InvalidArgument("fractional_maximal: a and r must be positive");
  const RadialGrid &grid = f.grid();
  const int n = grid.dim();
  const auto h = abs_power(f, 1.0);
  const ShellIntegrator shell(grid, h);
  const double scale = std::pow(r, a - n);
  RadialField out(f.grid_ptr());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = scale * offcenter_integral(shell, n, grid.radius(), grid.r(i), r);
  return out;
}

double fractional_maximal_sup(const RadialField &f, double a, double offset,
                              const MorreyOptions &opts) {
  const RadialGrid &grid = f.grid();
  const int n = grid.dim();
  const auto h = abs_power(f, 1.0);
  const ShellIntegrator shell(grid, h);
  double best = 0.0;
  for (double r : radius_ladder(grid, opts))
    best = std::max(best, std::pow(r, a - n) * offcenter_integral(shell, n, grid.radius(), offset, r));
  return best;
}

double dirichlet_energy(const RadialField &f) {
  const RadialGrid &grid = f.grid();
  const int n = grid.dim();
  const double sigma = unit_sphere_area(n);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    const double dr = grid.r(i + 1) - grid.r(i);
    const double du = f[i + 1] - f[i];
    s += sigma * std::pow(grid.midpoint(i), n - 1) * du * du / dr;
  }
  return 0.5 * s;
}

double energy(const RadialField &f, double p) {
  const auto w = f.grid().weights();
  double potential = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    potential += w[i] * std::pow(std::abs(f[i]), p);
  return dirichlet_energy(f) - potential / p;
}

RadialField radial_gradient(const RadialField &f) {
  const RadialGrid &grid = f.grid();
  RadialField g(f.grid_ptr());
  const std::size_t last = f.size() - 1;
  for (std::size_t i = 1; i < last; ++i)
    g[i] = (f[i + 1] - f[i - 1]) / (grid.r(i + 1) - grid.r(i - 1));
  g[0] = 0.0;
  g[last] = (f[last] - f[last - 1]) / (grid.r(last) - grid.r(last - 1));
  return g;
}

} // namespace lelab
