#include "rou/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <thread>

#include "rou/analytic.hpp"
#include "rou/error.hpp"
#include "rou/rng.hpp"

namespace rou {

namespace {

// Barriers unpacked once per path; infinities stand in for absent ones.
struct Domain {
    double lower;
    double upper;
    bool doubly;

    explicit Domain(const BoundarySpec& b)
        : lower(b.lower().value_or(-std::numeric_limits<double>::infinity())),
          upper(b.upper().value_or(std::numeric_limits<double>::infinity())),
          doubly(b.is_doubly()) {}
};

inline StepResult project(double y, double increment, const Domain& domain) {
    if (domain.doubly && std::abs(increment) > domain.upper - domain.lower) {
        throw Error(ErrorCode::StepSpansInterval, "dt",
                    "increment wider than the reflection interval");
    }
    const double proposed = y + increment;
    if (proposed < domain.lower) return {domain.lower, domain.lower - proposed, 0.0};
    if (proposed > domain.upper) return {domain.upper, 0.0, proposed - domain.upper};
    return {proposed, 0.0, 0.0};
}

double initial_state(const SimConfig& config, NormalStream& stream) {
    if (config.start == StartMode::Fixed) return config.x0;
    return StationaryLaw(config.params, config.boundary).quantile_from_barrier(stream.uniform());
}

template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n && !failed; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

void validate(const SimConfig& config) {
    const double dt = config.dt;
    if (!std::isfinite(dt) || !(dt > 0.0)) throw Error(ErrorCode::InvalidConfig, "dt", "must be > 0");
    if (!std::isfinite(config.horizon) || !(dt < config.horizon)) {
        throw Error(ErrorCode::InvalidConfig, "horizon", "must exceed dt");
    }
    if (dt > 0.1 / config.params.gamma()) {
        throw Error(ErrorCode::UnstableStep, "dt", "dt must not exceed 0.1/gamma");
    }
    if (config.start == StartMode::Fixed) {
        if (!std::isfinite(config.x0) || !config.boundary.contains(config.x0)) {
            throw Error(ErrorCode::InvalidConfig, "x0", "initial state outside the boundaries");
        }
    } else if (config.boundary.is_doubly()) {
        throw Error(ErrorCode::InvalidConfig, "start",
                    "stationary start needs a one-sided boundary");
    }
}

std::size_t step_count(const SimConfig& config) {
    // The small slack absorbs representation error in e.g. 500 / 1e-3.
    return static_cast<std::size_t>(std::floor(config.horizon / config.dt * (1.0 + 1e-12)));
}

StepResult reflect_step(double y, double increment, const BoundarySpec& boundary) {
    return project(y, increment, Domain(boundary));
}

ReflectedPath simulate_path(const SimConfig& config) {
    validate(config);
    const std::size_t steps = step_count(config);
    const Domain domain(config.boundary);
    const double alpha = config.params.alpha();
    const double gamma = config.params.gamma();
    const double dt = config.dt;
    const double noise = config.params.sigma() * std::sqrt(dt);

    NormalStream stream(config.seed);
    ReflectedPath path;
    path.dt = dt;
    path.horizon = static_cast<double>(steps) * dt;
    path.seed = config.seed;
    const std::size_t stored = config.record_full_path ? steps + 1 : 2;
    path.times.reserve(stored);
    path.y.reserve(stored);
    path.l.reserve(stored);
    path.u.reserve(stored);

    double y = initial_state(config, stream);
    double l = 0.0;
    double u = 0.0;
    auto record = [&](std::size_t k) {
        path.times.push_back(static_cast<double>(k) * dt);
        path.y.push_back(y);
        path.l.push_back(l);
        path.u.push_back(u);
    };
    record(0);
    for (std::size_t k = 0; k < steps; ++k) {
        const double xi = stream();
        const StepResult r = project(y, (alpha - gamma * y) * dt + noise * xi, domain);
        y = r.y;
        l += r.dl;
        u += r.du;
        if (config.record_full_path || k + 1 == steps) record(k + 1);
    }
    return path;
}

std::vector<double> richardson_weights(int levels) {
    if (levels < 1) throw Error(ErrorCode::InvalidConfig, "levels", "must be >= 1");
    // Lagrange basis at 0 over the nodes r_j = 2^-j.
    std::vector<double> w(levels, 1.0);
    for (int j = 0; j < levels; ++j) {
        const double rj = std::ldexp(1.0, -j);
        for (int i = 0; i < levels; ++i) {
            if (i == j) continue;
            const double ri = std::ldexp(1.0, -i);
            w[j] *= (0.0 - ri) / (rj - ri);
        }
    }
    return w;
}

CoupledSample simulate_coupled(const SimConfig& config, int levels, const Observation& observe) {
    validate(config);
    if (levels < 1 || levels > 6) throw Error(ErrorCode::InvalidConfig, "levels", "must be in [1, 6]");
    const std::size_t steps = step_count(config);
    const double dt = config.dt;
    const double horizon = static_cast<double>(steps) * dt;

    std::vector<std::size_t> marks;
    for (double t : observe.checkpoints) {
        const long long k = std::llround(t / dt);
        if (k < 0 || static_cast<std::size_t>(k) > steps) {
            throw Error(ErrorCode::HorizonExceeded, "checkpoints", "checkpoint beyond the horizon");
        }
        marks.push_back(static_cast<std::size_t>(k));
    }
    if (!std::is_sorted(marks.begin(), marks.end())) {
        throw Error(ErrorCode::InvalidConfig, "checkpoints", "must be ascending");
    }

    const Domain domain(config.boundary);
    const double alpha = config.params.alpha();
    const double gamma = config.params.gamma();
    const double sigma = config.params.sigma();

    struct Level {
        std::size_t period;  // fine steps per step of this level
        double h, noise, scale;
        double y, l = 0.0, u = 0.0, acc = 0.0;
        std::size_t pending = 0, done = 0;
        std::size_t average_start = 0;
        double sum = 0.0, first = 0.0, last = 0.0;
        bool averaging = false;
    };

    NormalStream stream(config.seed);
    CoupledSample sample;
    sample.seed = config.seed;
    sample.x0 = initial_state(config, stream);

    const bool with_average = observe.average_from >= 0.0;
    auto observed = [&](double y) { return observe.average_of ? observe.average_of(y) : y; };
    if (with_average && observe.average_from >= horizon) {
        throw Error(ErrorCode::HorizonExceeded, "average_from", "window starts past the horizon");
    }
    std::vector<Level> lv(levels);
    for (int j = 0; j < levels; ++j) {
        Level& v = lv[j];
        v.period = std::size_t{1} << (2 * (levels - 1 - j));
        v.h = std::ldexp(dt, -2 * j);
        v.noise = sigma * std::sqrt(v.h);
        v.scale = std::ldexp(1.0, -(levels - 1 - j));  // 1/sqrt(period)
        v.y = sample.x0;
        if (with_average) {
            v.average_start = static_cast<std::size_t>(std::llround(observe.average_from / v.h));
            if (v.average_start == 0) {
                v.averaging = true;
                v.first = v.sum = observed(v.y);
            }
        }
    }

    sample.levels.resize(levels);
    for (int j = 0; j < levels; ++j) {
        sample.levels[j].dt = lv[j].h;
        sample.levels[j].y.reserve(marks.size());
    }
    std::size_t next_mark = 0;
    auto record_marks = [&](std::size_t k) {
        while (next_mark < marks.size() && marks[next_mark] == k) {
            for (int j = 0; j < levels; ++j) {
                sample.levels[j].y.push_back(lv[j].y);
                sample.levels[j].l.push_back(lv[j].l);
                sample.levels[j].u.push_back(lv[j].u);
            }
            ++next_mark;
        }
    };
    record_marks(0);

    const std::size_t fine_per_coarse = lv[0].period;
    for (std::size_t k = 0; k < steps; ++k) {
        for (std::size_t f = 0; f < fine_per_coarse; ++f) {
            const double xi = stream();
            for (Level& v : lv) {
                v.acc += xi;
                if (++v.pending < v.period) continue;
                const StepResult r =
                    project(v.y, (alpha - gamma * v.y) * v.h + v.noise * (v.acc * v.scale), domain);
                v.y = r.y;
                v.l += r.dl;
                v.u += r.du;
                v.acc = 0.0;
                v.pending = 0;
                ++v.done;
                if (with_average && v.done >= v.average_start) {
                    if (!v.averaging) {
                        v.averaging = true;
                        v.first = observed(v.y);
                    }
                    v.sum += observed(v.y);
                }
            }
        }
        record_marks(k + 1);
    }

    for (int j = 0; j < levels; ++j) {
        Level& v = lv[j];
        if (with_average) {
            const double span = horizon - static_cast<double>(v.average_start) * v.h;
            sample.levels[j].time_average = v.h * (v.sum - 0.5 * (v.first + observed(v.y))) / span;
        }
    }
    return sample;
}

std::vector<TerminalSummary> batch_simulate(const SimConfig& config, std::size_t n_paths,
                                            std::uint64_t master_seed,
                                            const BatchOptions& options) {
    if (n_paths == 0) throw Error(ErrorCode::InsufficientSamples, "n_paths", "need at least one path");
    validate(config);
    const double horizon = static_cast<double>(step_count(config)) * config.dt;
    Observation terminal;
    terminal.checkpoints = {horizon};

    std::vector<TerminalSummary> out(n_paths);
    parallel_for(n_paths, options.workers, [&](std::size_t i) {
        SimConfig c = config;
        c.seed = path_seed(master_seed, i);
        const CoupledSample s = simulate_coupled(c, 1, terminal);
        const LevelTrace& t = s.levels.front();
        out[i] = {i, t.y.back(), t.l.back(), t.u.back()};
    });
    return out;
}

std::vector<CoupledSample> batch_coupled(const SimConfig& config, std::size_t n_paths,
                                         std::uint64_t master_seed, int levels,
                                         const Observation& observe,
                                         const BatchOptions& options) {
    if (n_paths == 0) throw Error(ErrorCode::InsufficientSamples, "n_paths", "need at least one path");
    validate(config);
    std::vector<CoupledSample> out(n_paths);
    parallel_for(n_paths, options.workers, [&](std::size_t i) {
        SimConfig c = config;
        c.seed = path_seed(master_seed, i);
        out[i] = simulate_coupled(c, levels, observe);
    });
    return out;
}

void write_summaries_csv(const std::vector<TerminalSummary>& summaries, std::ostream& out) {
    out << "path_index,y_T,l_T,u_T\n" << std::setprecision(17);
    for (const auto& s : summaries) {
        out << s.path_index << ',' << s.y_T << ',' << s.l_T << ',' << s.u_T << '\n';
    }
}

}  // namespace rou
