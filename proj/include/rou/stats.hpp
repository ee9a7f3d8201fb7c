#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rou/model.hpp"

namespace rou {

double empirical_cdf(std::span<const double> samples, double x);

// Kolmogorov-Smirnov statistic sup_x |F_n(x) - F(x)|, evaluated on both sides
// of every jump of the empirical cdf.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& reference_cdf);

// KS distance of a signed mixture of empirical cdfs, sum_j w_j F_{n_j}(x),
// against a reference cdf. The mixture need not be monotone (extrapolation
// weights can be negative); the supremum is still attained next to a jump.
// With one group and weight 1 this is ks_distance.
double ks_distance_mixture(const std::vector<std::vector<double>>& groups,
                           std::span<const double> weights,
                           const std::function<double(double)>& reference_cdf);

double sample_mean(std::span<const double> x);
// Unbiased (n - 1) sample variance; throws InsufficientSamples for n < 2.
double sample_variance(std::span<const double> x);
double sample_covariance(std::span<const double> x, std::span<const double> y);

// L^n_t = (L_{n t} - q n t) / (tau sqrt(n)) on a grid of t.
struct ScaledIdleSample {
    double n = 1.0;
    std::vector<double> t_grid;
    std::vector<double> values;
};

// Builds L^n from a path; L at n*t is linearly interpolated between grid
// points. Throws HorizonExceeded if n * max(t_grid) is past the path end.
ScaledIdleSample scaled_idle_process(const ReflectedPath& path, double q, double tau, double n,
                                     std::span<const double> t_grid);

// Same scaling applied to idle values already sampled at the times n * t.
ScaledIdleSample scale_idle_values(std::span<const double> t_grid, std::span<const double> idle_at_nt,
                                   double q, double tau, double n);

// (sigma^2 / T) int_0^T h'(Y_s)^2 ds by the trapezoid rule on the path grid.
double ergodic_tau2_estimate(const ReflectedPath& path, const OUParams& params,
                             const BoundarySpec& boundary);

// Unbiased covariance across samples of L^n_s and L^n_t; s and t must be grid
// times shared by every sample.
double increment_covariance(std::span<const ScaledIdleSample> samples, double s, double t);

}  // namespace rou
