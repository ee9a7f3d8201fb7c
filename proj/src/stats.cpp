#include "rou/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rou/analytic.hpp"
#include "rou/error.hpp"

namespace rou {

namespace {

void require_nonempty(std::span<const double> samples) {
    if (samples.empty()) throw Error(ErrorCode::EmptySample, "samples", "no samples");
}

std::size_t grid_index(const ScaledIdleSample& sample, double t) {
    const auto it = std::find(sample.t_grid.begin(), sample.t_grid.end(), t);
    if (it == sample.t_grid.end()) {
        throw Error(ErrorCode::InvalidConfig, "t_grid", "time " + std::to_string(t) + " not on the grid");
    }
    return static_cast<std::size_t>(it - sample.t_grid.begin());
}

}  // namespace

double empirical_cdf(std::span<const double> samples, double x) {
    require_nonempty(samples);
    const auto below = std::count_if(samples.begin(), samples.end(), [x](double v) { return v <= x; });
    return static_cast<double>(below) / static_cast<double>(samples.size());
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& reference_cdf) {
    require_nonempty(samples);
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = reference_cdf(sorted[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_distance_mixture(const std::vector<std::vector<double>>& groups,
                           std::span<const double> weights,
                           const std::function<double(double)>& reference_cdf) {
    if (groups.size() != weights.size() || groups.empty()) {
        throw Error(ErrorCode::InvalidConfig, "weights", "one weight per sample group");
    }
    std::vector<std::pair<double, double>> jumps;  // (location, mass)
    for (std::size_t g = 0; g < groups.size(); ++g) {
        require_nonempty(groups[g]);
        const double mass = weights[g] / static_cast<double>(groups[g].size());
        for (double v : groups[g]) jumps.emplace_back(v, mass);
    }
    std::sort(jumps.begin(), jumps.end());
    double cumulative = 0.0;
    double d = 0.0;
    for (std::size_t i = 0; i < jumps.size();) {
        const double x = jumps[i].first;
        const double f = reference_cdf(x);
        d = std::max(d, std::abs(cumulative - f));  // left limit
        for (; i < jumps.size() && jumps[i].first == x; ++i) cumulative += jumps[i].second;
        d = std::max(d, std::abs(cumulative - f));
    }
    return d;
}

double sample_mean(std::span<const double> x) {
    require_nonempty(x);
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_covariance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorCode::InvalidConfig, "samples", "length mismatch");
    if (x.size() < 2) throw Error(ErrorCode::InsufficientSamples, "samples", "need at least two samples");
    const double mx = sample_mean(x);
    const double my = sample_mean(y);
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += (x[i] - mx) * (y[i] - my);
    return acc / static_cast<double>(x.size() - 1);
}

double sample_variance(std::span<const double> x) { return sample_covariance(x, x); }

ScaledIdleSample scale_idle_values(std::span<const double> t_grid, std::span<const double> idle_at_nt,
                                   double q, double tau, double n) {
    if (t_grid.size() != idle_at_nt.size()) {
        throw Error(ErrorCode::InvalidConfig, "t_grid", "one idle value per grid time");
    }
    if (!(tau > 0.0)) throw Error(ErrorCode::InvalidConfig, "tau", "must be > 0");
    if (!(n > 0.0)) throw Error(ErrorCode::InvalidConfig, "n", "must be > 0");
    ScaledIdleSample out;
    out.n = n;
    out.t_grid.assign(t_grid.begin(), t_grid.end());
    out.values.reserve(t_grid.size());
    const double scale = tau * std::sqrt(n);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        out.values.push_back((idle_at_nt[i] - q * n * t_grid[i]) / scale);
    }
    return out;
}

ScaledIdleSample scaled_idle_process(const ReflectedPath& path, double q, double tau, double n,
                                     std::span<const double> t_grid) {
    if (path.size() < 2) throw Error(ErrorCode::InvalidConfig, "path", "path needs two grid points");
    std::vector<double> idle;
    idle.reserve(t_grid.size());
    const double end = path.times.back();
    for (double t : t_grid) {
        const double time = n * t;
        if (time < 0.0 || time > end * (1.0 + 1e-12)) {
            throw Error(ErrorCode::HorizonExceeded, "t_grid", "n*t beyond the path horizon");
        }
        // Upper neighbour on the grid, then linear interpolation.
        auto it = std::lower_bound(path.times.begin(), path.times.end(), time);
        if (it == path.times.end()) --it;
        const std::size_t k = static_cast<std::size_t>(it - path.times.begin());
        if (k == 0 || path.times[k] == time) {
            idle.push_back(path.l[k]);
            continue;
        }
        const double t0 = path.times[k - 1];
        const double w = (time - t0) / (path.times[k] - t0);
        idle.push_back(path.l[k - 1] + w * (path.l[k] - path.l[k - 1]));
    }
    return scale_idle_values(t_grid, idle, q, tau, n);
}

double ergodic_tau2_estimate(const ReflectedPath& path, const OUParams& params,
                             const BoundarySpec& boundary) {
    if (path.size() < 2) throw Error(ErrorCode::InvalidConfig, "path", "path needs two grid points");
    const StationaryLaw law(params, boundary);
    const double s2 = params.sigma() * params.sigma();
    double integral = 0.0;
    double prev = law.h_prime(path.y.front());
    prev *= prev;
    for (std::size_t k = 1; k < path.size(); ++k) {
        double cur = law.h_prime(path.y[k]);
        cur *= cur;
        integral += 0.5 * (prev + cur) * (path.times[k] - path.times[k - 1]);
        prev = cur;
    }
    return s2 * integral / (path.times.back() - path.times.front());
}

double increment_covariance(std::span<const ScaledIdleSample> samples, double s, double t) {
    if (samples.size() < 2) {
        throw Error(ErrorCode::InsufficientSamples, "samples", "need at least two scaled samples");
    }
    std::vector<double> xs, xt;
    xs.reserve(samples.size());
    xt.reserve(samples.size());
    for (const auto& sample : samples) {
        xs.push_back(sample.values[grid_index(sample, s)]);
        xt.push_back(sample.values[grid_index(sample, t)]);
    }
    return sample_covariance(xs, xt);
}

}  // namespace rou
