#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lelab/geometry.hpp"

namespace lelab {

/// Outcome of a (sampled) Morrey supremum.
struct MorreyResult {
  double value = 0.0; ///< (sup quotient)^{1/q}
  double argmax_radius = 0.0;
  double argmax_center_offset = 0.0;
  /// (radius, quotient) along the ladder; for sampled norms the best quotient
  /// over all centers at that radius.
  std::vector<std::pair<double, double>> profile;
};

struct MorreyOptions {
  /// Ratio between consecutive radii of the ladder (2 or √2).
  double ratio = 2.0;
  /// Smallest radius considered; 0 selects the second grid node.
  double r_min = 0.0;
  /// Ladder steps above the domain radius.
  int steps_above = 3;
};

/// Geometric ladder {R ratio^{-j}} down to r_min, plus steps_above radii beyond R,
/// sorted increasingly.
std::vector<double> radius_ladder(const RadialGrid &grid, const MorreyOptions &opts);

/// (Σ w_i |f_i|^q)^{1/q}
double lq_norm(const RadialField &f, double q);

/// (∫_0^T Σ w_i |u_i(t)|^q dt)^{1/q} with the trapezoid rule in time.
double spacetime_lq_norm(const SpaceTimeField &u, double q);

/// sup over origin-centred balls of r^{lam-n} ∫_{B_r ∩ Ω} |f|^q, to the power 1/q.
MorreyResult morrey_norm_radial(const RadialField &f, double q, double lam,
                                const MorreyOptions &opts = {});

struct SampledMorreyOptions {
  MorreyOptions ladder;
  int centers = 16; ///< stratified offsets |x_0| in [0, R]
};

/// Monte-Carlo estimate of the full (off-centre) Morrey supremum. Each
/// (centre, radius) pair draws `samples` points from its own seeded stream,
/// so results do not depend on evaluation order.
MorreyResult morrey_norm_sampled(const RadialField &f, double q, double lam, int samples,
                                 std::uint64_t seed, const SampledMorreyOptions &opts = {});

struct ParabolicMorreyOptions {
  MorreyOptions ladder{2.0, 0.0, 0};
  /// Restrict to cylinders with r^2 <= t_0 (entirely inside t > 0).
  bool require_r2_le_t0 = true;
};

struct ParabolicMorreyResult {
  double value = 0.0;
  double argmax_radius = 0.0;
  double argmax_time = 0.0;
};

/// sup over centred backward cylinders P_r(0, t_k) of r^{mu-(n+2)} ∫∫|u|^q, with t_k
/// the slice times and the time integral by the trapezoid rule.
ParabolicMorreyResult parabolic_morrey(const SpaceTimeField &u, double q, double mu,
                                       const ParabolicMorreyOptions &opts = {});
double parabolic_morrey_norm(const SpaceTimeField &u, double q, double mu,
                             const ParabolicMorreyOptions &opts = {});

/// Off-centre cylinders: centres on an axis, ball integrals by Monte-Carlo with
/// one fixed point cloud per (centre, radius) reused over all slices.
double parabolic_morrey_sampled(const SpaceTimeField &u, double q, double mu, int samples,
                                std::uint64_t seed, int centers = 8,
                                const ParabolicMorreyOptions &opts = {});

/// ∫_{B_r(x) ∩ B_R} |f| dy for |x| = offset, by shell quadrature against the
/// exact fraction of each sphere |y| = s lying inside B_r(x).
double offcenter_ball_integral(const RadialField &density, double offset, double r);

/// M_{a,r} f at the axis point at distance `offset`: r^{a-n} ∫_{Ω_r(x)} |f|.
double fractional_maximal_at(const RadialField &f, double a, double r, double offset);
/// x -> M_{a,r} f(x) at every grid node.
RadialField fractional_maximal(const RadialField &f, double a, double r);
/// M_a f(x) = max over the radius ladder of M_{a,r} f(x).
double fractional_maximal_sup(const RadialField &f, double a, double offset,
                              const MorreyOptions &opts = {});

/// ∫ (½|∇f|^2 - |f|^p/p) dx, gradient from the difference quotient at each
/// interval midpoint.
double energy(const RadialField &f, double p);
/// The gradient part ½∫|∇f|^2 alone.
double dirichlet_energy(const RadialField &f);

/// Difference-quotient gradient at the nodes (centred in the interior,
/// zero at the origin, one-sided at r = R).
RadialField radial_gradient(const RadialField &f);

} // namespace lelab
