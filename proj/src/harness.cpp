#include "rou/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "rou/analytic.hpp"
#include "rou/error.hpp"
#include "rou/normal.hpp"
#include "rou/stats.hpp"

namespace rou {

using nlohmann::json;

namespace {

constexpr int kConfigVersion = 1;

[[noreturn]] void config_error(const std::string& field, const std::string& detail) {
    throw Error(ErrorCode::InvalidConfig, field, detail);
}

std::string_view to_string(StartMode mode) { return mode == StartMode::Fixed ? "fixed" : "stationary"; }

StartMode parse_start(const std::string& name) {
    if (name == "fixed") return StartMode::Fixed;
    if (name == "stationary") return StartMode::Stationary;
    config_error("simulation.start", "expected `fixed` or `stationary`, got `" + name + "`");
}

// Reads the members of one JSON object, rejecting keys no reader asked for.
class Section {
public:
    Section(const json& doc, std::string name) : doc_(doc), name_(std::move(name)) {
        if (!doc_.is_object()) config_error(name_, "must be an object");
    }

    template <class T>
    void read(const char* key, T& target) {
        seen_.insert(key);
        const auto it = doc_.find(key);
        if (it == doc_.end()) return;
        try {
            target = it->template get<T>();
        } catch (const json::exception& e) {
            config_error(name_ + "." + key, e.what());
        }
    }

    void read_optional(const char* key, std::optional<double>& target) {
        seen_.insert(key);
        const auto it = doc_.find(key);
        if (it == doc_.end()) return;
        if (it->is_null()) {
            target.reset();
        } else if (it->is_number()) {
            target = it->get<double>();
        } else {
            config_error(name_ + "." + key, "must be a number or null");
        }
    }

    bool has(const char* key) const { return doc_.contains(key); }
    const json& at(const char* key) {
        seen_.insert(key);
        return doc_.at(key);
    }

    void finish() const {
        for (const auto& [key, _] : doc_.items()) {
            if (!seen_.count(key)) config_error(name_.empty() ? key : name_ + "." + key, "unknown key");
        }
    }

private:
    const json& doc_;
    std::string name_;
    std::set<std::string> seen_;
};

json optional_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

double rel_err(double value, double target) { return std::abs(value - target) / std::abs(target); }

std::string time_label(double t) {
    std::ostringstream os;
    os << t;
    return os.str();
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void check(ExperimentReport& report, const std::string& metric, double value, const std::string& key) {
    const double threshold = report.config.thresholds.at(key);
    report.checks.push_back({metric, value, threshold, passes(value, threshold)});
}

// Richardson combination of one per-level quantity.
double extrapolate(const std::vector<double>& weights, const std::vector<double>& per_level) {
    double v = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) v += weights[j] * per_level[j];
    return v;
}

void record_levels(ExperimentReport& report, const std::string& name, const std::vector<double>& per_level) {
    for (std::size_t j = 0; j < per_level.size(); ++j) {
        report.empirical[name + "_level" + std::to_string(j)] = per_level[j];
    }
}

double simulated_horizon(const ExperimentConfig& config) {
    return static_cast<double>(step_count(config.sim())) * config.dt;
}

void fill_one_sided_analytic(ExperimentReport& report, const RateAndVariance& rv) {
    const ExperimentConfig& c = report.config;
    report.analytic["q"] = rv.q;
    report.analytic["tau2"] = rv.tau2;
    report.analytic["boundary_density"] = rv.boundary_density;
    report.analytic["stationary_mean"] = stationary_mean(c.params(), c.boundary());
}

RateAndVariance analytic_constants(const ExperimentConfig& c) {
    AnalyticOptions opts;
    opts.truncation_k = c.truncation_k;
    return rate_and_variance(c.params(), c.boundary(), opts);
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
    switch (kind) {
        case ExperimentKind::Stationary: return "stationary";
        case ExperimentKind::Clt: return "clt";
        case ExperimentKind::Fclt: return "fclt";
        case ExperimentKind::Doubly: return "doubly";
    }
    return "unknown";
}

ExperimentKind parse_kind(std::string_view name) {
    for (auto kind : {ExperimentKind::Stationary, ExperimentKind::Clt, ExperimentKind::Fclt,
                      ExperimentKind::Doubly}) {
        if (to_string(kind) == name) return kind;
    }
    config_error("kind", "unknown experiment kind `" + std::string(name) + "`");
}

SimConfig ExperimentConfig::sim() const {
    SimConfig s{params(), boundary()};
    s.x0 = x0;
    s.dt = dt;
    s.horizon = horizon;
    s.seed = seed;
    s.record_full_path = false;
    s.start = start;
    return s;
}

std::vector<std::string> threshold_names(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Stationary: return {"ks_stationary", "mean_abs_err", "rate_abs_err"};
        case ExperimentKind::Clt: return {"ks_standardized"};
        case ExperimentKind::Fclt: return {"cov_rel_err", "ks_marginal", "var_rel_err"};
        case ExperimentKind::Doubly: return {"rate_abs_err"};
    }
    return {};
}

ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig c;
    c.kind = kind;
    c.seed = 12345;
    c.output_path = "reports/" + std::string(to_string(kind));
    switch (kind) {
        case ExperimentKind::Stationary:
            c.start = StartMode::Stationary;
            c.horizon = 500.0;
            c.n_paths = 64;
            c.thresholds = {{"rate_abs_err", 0.01}, {"mean_abs_err", 0.02}, {"ks_stationary", 0.02}};
            break;
        case ExperimentKind::Clt:
            c.alpha = 1.0;
            c.sigma = 1.0;
            c.start = StartMode::Stationary;
            c.horizon = 200.0;
            c.n_paths = 2000;
            c.thresholds = {{"ks_standardized", 0.05}};
            break;
        case ExperimentKind::Fclt:
            c.alpha = 1.0;
            c.sigma = 1.0;
            c.start = StartMode::Stationary;
            c.horizon = 200.0;
            c.n_paths = 1000;
            c.thresholds = {{"var_rel_err", 0.10}, {"cov_rel_err", 0.15}, {"ks_marginal", 0.06}};
            break;
        case ExperimentKind::Doubly:
            c.upper = 1.0;
            c.horizon = 500.0;
            c.n_paths = 64;
            c.thresholds = {{"rate_abs_err", 0.01}};
            break;
    }
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json doc;
    doc["version"] = kConfigVersion;
    doc["kind"] = std::string(to_string(c.kind));
    doc["model"] = {{"alpha", c.alpha}, {"gamma", c.gamma}, {"sigma", c.sigma},
                    {"lower", optional_to_json(c.lower)}, {"upper", optional_to_json(c.upper)}};
    doc["simulation"] = {{"x0", c.x0},           {"start", std::string(to_string(c.start))},
                         {"dt", c.dt},           {"horizon", c.horizon},
                         {"paths", c.n_paths},   {"seed", c.seed},
                         {"workers", c.workers}, {"levels", c.levels},
                         {"burn_in", c.burn_in}};
    doc["fclt"] = {{"n", c.fclt_n}, {"grid", c.fclt_grid}};
    doc["analytic"] = {{"truncation_k", c.truncation_k}, {"tau_override", optional_to_json(c.tau_override)}};
    doc["thresholds"] = c.thresholds;
    doc["output"] = {{"path", c.output_path}};
    return doc;
}

ExperimentConfig config_from_json(const json& doc, const ExperimentConfig& base) {
    Section top(doc, "");
    ExperimentConfig c = base;
    if (doc.contains("kind")) {
        std::string kind;
        top.read("kind", kind);
        const ExperimentKind k = parse_kind(kind);
        if (k != base.kind) c = default_config(k);
    }
    int version = kConfigVersion;
    top.read("version", version);
    if (version != kConfigVersion) config_error("version", "unsupported config version");

    if (top.has("model")) {
        Section s(top.at("model"), "model");
        s.read("alpha", c.alpha);
        s.read("gamma", c.gamma);
        s.read("sigma", c.sigma);
        s.read_optional("lower", c.lower);
        s.read_optional("upper", c.upper);
        s.finish();
    }
    if (top.has("simulation")) {
        Section s(top.at("simulation"), "simulation");
        std::string start(to_string(c.start));
        s.read("x0", c.x0);
        s.read("start", start);
        c.start = parse_start(start);
        s.read("dt", c.dt);
        s.read("horizon", c.horizon);
        s.read("paths", c.n_paths);
        s.read("seed", c.seed);
        s.read("workers", c.workers);
        s.read("levels", c.levels);
        s.read("burn_in", c.burn_in);
        s.finish();
    }
    if (top.has("fclt")) {
        Section s(top.at("fclt"), "fclt");
        s.read("n", c.fclt_n);
        s.read("grid", c.fclt_grid);
        s.finish();
    }
    if (top.has("analytic")) {
        Section s(top.at("analytic"), "analytic");
        s.read("truncation_k", c.truncation_k);
        s.read_optional("tau_override", c.tau_override);
        s.finish();
    }
    if (top.has("thresholds")) {
        const json& t = top.at("thresholds");
        if (!t.is_object()) config_error("thresholds", "must be an object");
        const auto known = threshold_names(c.kind);
        for (const auto& [key, value] : t.items()) {
            if (std::find(known.begin(), known.end(), key) == known.end()) {
                config_error("thresholds." + key, "unknown threshold for this experiment kind");
            }
            if (!value.is_number()) config_error("thresholds." + key, "must be a number");
            c.thresholds[key] = value.get<double>();
        }
    }
    if (top.has("output")) {
        Section s(top.at("output"), "output");
        s.read("path", c.output_path);
        s.finish();
    }
    top.finish();
    return c;
}

ExperimentConfig config_from_json(const json& doc) {
    if (!doc.contains("kind")) config_error("kind", "missing experiment kind");
    return config_from_json(doc, default_config(parse_kind(doc.at("kind").get<std::string>())));
}

ExperimentConfig load_config(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw Error(ErrorCode::ReadFailure, filename, "cannot open config file");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::InvalidConfig, filename, e.what());
    }
    return config_from_json(doc);
}

void validate(const ExperimentConfig& c) {
    const BoundarySpec boundary = c.boundary();
    if (c.kind == ExperimentKind::Doubly) {
        if (!boundary.is_doubly()) config_error("model.upper", "doubly experiment needs both barriers");
        if (*c.lower != 0.0) config_error("model.lower", "doubly experiment fixes the lower barrier at 0");
    } else if (boundary.is_doubly()) {
        config_error("model", "experiment needs a one-sided boundary");
    }
    if (c.n_paths == 0) throw Error(ErrorCode::InsufficientSamples, "simulation.paths", "need at least one path");
    if (c.levels < 1 || c.levels > 6) config_error("simulation.levels", "must be in [1, 6]");
    if (!(c.burn_in >= 0.0 && c.burn_in < 1.0)) config_error("simulation.burn_in", "must be in [0, 1)");
    if (c.tau_override && !(*c.tau_override > 0.0)) config_error("analytic.tau_override", "must be > 0");
    if (!(c.truncation_k > 0.0)) config_error("analytic.truncation_k", "must be > 0");
    for (const auto& name : threshold_names(c.kind)) {
        const auto it = c.thresholds.find(name);
        if (it == c.thresholds.end()) config_error("thresholds." + name, "missing threshold");
        if (!(it->second >= 0.0)) config_error("thresholds." + name, "must be >= 0");
    }
    if (c.kind == ExperimentKind::Fclt) {
        if (!(c.fclt_n > 0.0)) config_error("fclt.n", "must be > 0");
        if (c.fclt_grid.empty()) config_error("fclt.grid", "needs at least one time");
        if (!std::is_sorted(c.fclt_grid.begin(), c.fclt_grid.end()) || c.fclt_grid.front() < 0.0) {
            config_error("fclt.grid", "times must be ascending and >= 0");
        }
    }
    rou::validate(c.sim());
    if (c.kind == ExperimentKind::Fclt && c.fclt_n * c.fclt_grid.back() > simulated_horizon(c) * (1.0 + 1e-12)) {
        throw Error(ErrorCode::HorizonExceeded, "fclt.grid", "n * max(grid) exceeds the horizon");
    }
}

bool passes(double value, double threshold) noexcept { return value < threshold; }

bool ExperimentReport::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

json ExperimentReport::numeric_block() const {
    json checks_doc = json::array();
    for (const auto& c : checks) {
        checks_doc.push_back({{"metric", c.metric}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
    }
    return {{"analytic", analytic}, {"empirical", empirical}, {"checks", checks_doc}};
}

// ---------------------------------------------------------------------------

ExperimentReport run_stationary_experiment(const ExperimentConfig& config) {
    if (config.kind != ExperimentKind::Stationary) config_error("kind", "expected a stationary experiment");
    validate(config);
    Timer timer;
    ExperimentReport report;
    report.config = config;
    const RateAndVariance rv = analytic_constants(config);
    fill_one_sided_analytic(report, rv);
    const StationaryLaw law(config.params(), config.boundary());

    const double horizon = simulated_horizon(config);
    const double burn = config.burn_in * horizon;
    // Subsample y every 1/gamma after burn-in; the horizon is the last checkpoint.
    Observation observe;
    for (double t = burn; t < horizon; t += 1.0 / config.gamma) observe.checkpoints.push_back(t);
    observe.checkpoints.push_back(horizon);
    observe.average_from = burn;

    const auto samples = batch_coupled(config.sim(), config.n_paths, config.seed, config.levels, observe,
                                       {config.workers});
    const auto weights = richardson_weights(config.levels);

    std::vector<double> rate(config.levels, 0.0), average(config.levels, 0.0);
    std::vector<std::vector<double>> marginals(config.levels);
    for (const auto& s : samples) {
        for (int j = 0; j < config.levels; ++j) {
            const LevelTrace& t = s.levels[j];
            rate[j] += (config.lower ? t.l.back() : t.u.back()) / horizon;
            average[j] += t.time_average;
            marginals[j].insert(marginals[j].end(), t.y.begin(), t.y.end() - 1);
        }
    }
    for (int j = 0; j < config.levels; ++j) {
        rate[j] /= static_cast<double>(samples.size());
        average[j] /= static_cast<double>(samples.size());
    }
    const double rate_hat = extrapolate(weights, rate);
    const double average_hat = extrapolate(weights, average);
    const double ks = ks_distance_mixture(marginals, weights, [&](double y) { return law.cdf(y); });

    record_levels(report, "rate", rate);
    record_levels(report, "time_average", average);
    report.empirical["rate"] = rate_hat;
    report.empirical["time_average"] = average_hat;
    report.empirical["ks_stationary"] = ks;
    report.empirical["subsamples_per_level"] = static_cast<double>(marginals.front().size());

    check(report, "rate_abs_err", std::abs(rate_hat - rv.q), "rate_abs_err");
    check(report, "mean_abs_err", std::abs(average_hat - report.analytic["stationary_mean"]), "mean_abs_err");
    check(report, "ks_stationary", ks, "ks_stationary");
    report.wall_time = timer.seconds();
    return report;
}

ExperimentReport run_clt_experiment(const ExperimentConfig& config) {
    if (config.kind != ExperimentKind::Clt) config_error("kind", "expected a clt experiment");
    validate(config);
    Timer timer;
    ExperimentReport report;
    report.config = config;
    const RateAndVariance rv = analytic_constants(config);
    fill_one_sided_analytic(report, rv);
    const double tau = config.tau_override ? *config.tau_override : std::sqrt(rv.tau2);
    report.analytic["tau_used"] = tau;

    const double horizon = simulated_horizon(config);
    Observation observe;
    observe.checkpoints = {horizon};
    const auto samples = batch_coupled(config.sim(), config.n_paths, config.seed, config.levels, observe,
                                       {config.workers});
    const auto weights = richardson_weights(config.levels);

    std::vector<double> standardized;
    standardized.reserve(samples.size());
    std::vector<double> rate(config.levels, 0.0);
    for (const auto& s : samples) {
        std::vector<double> reg(config.levels);
        for (int j = 0; j < config.levels; ++j) {
            reg[j] = config.lower ? s.levels[j].l.back() : s.levels[j].u.back();
            rate[j] += reg[j] / horizon / static_cast<double>(samples.size());
        }
        standardized.push_back((extrapolate(weights, reg) - rv.q * horizon) / (tau * std::sqrt(horizon)));
    }
    const double ks = ks_distance(standardized, normal_cdf);
    record_levels(report, "rate", rate);
    report.empirical["rate"] = extrapolate(weights, rate);
    report.empirical["standardized_mean"] = sample_mean(standardized);
    if (standardized.size() >= 2) report.empirical["standardized_variance"] = sample_variance(standardized);
    report.empirical["ks_standardized"] = ks;
    check(report, "ks_standardized", ks, "ks_standardized");
    report.wall_time = timer.seconds();
    return report;
}

ExperimentReport run_fclt_experiment(const ExperimentConfig& config) {
    if (config.kind != ExperimentKind::Fclt) config_error("kind", "expected an fclt experiment");
    validate(config);
    Timer timer;
    ExperimentReport report;
    report.config = config;
    const RateAndVariance rv = analytic_constants(config);
    fill_one_sided_analytic(report, rv);
    const double tau = config.tau_override ? *config.tau_override : std::sqrt(rv.tau2);
    report.analytic["tau_used"] = tau;
    report.notes.push_back(
        "necessary-condition checks: finite-dimensional marginals and Brownian covariance only; "
        "convergence in C[0,inf) with the locally uniform metric is not certified");

    const double n = config.fclt_n;
    const auto& grid = config.fclt_grid;
    Observation observe;
    for (double t : grid) observe.checkpoints.push_back(n * t);
    const auto samples = batch_coupled(config.sim(), config.n_paths, config.seed, config.levels, observe,
                                       {config.workers});
    const auto weights = richardson_weights(config.levels);

    std::vector<ScaledIdleSample> scaled;
    scaled.reserve(samples.size());
    for (const auto& s : samples) {
        std::vector<double> idle(grid.size(), 0.0);
        for (int j = 0; j < config.levels; ++j) {
            const auto& reg = config.lower ? s.levels[j].l : s.levels[j].u;
            for (std::size_t i = 0; i < grid.size(); ++i) idle[i] += weights[j] * reg[i];
        }
        scaled.push_back(scale_idle_values(grid, idle, rv.q, tau, n));
    }

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        std::vector<double> values;
        values.reserve(scaled.size());
        for (const auto& s : scaled) values.push_back(s.values[i]);
        const std::string at = "@" + time_label(t);
        if (t == 0.0) {
            double worst = 0.0;
            for (double v : values) worst = std::max(worst, std::abs(v));
            report.empirical["origin_max_abs"] = worst;
            continue;
        }
        const double var = sample_variance(values);
        const double sd = std::sqrt(t);
        const double ks = ks_distance(values, [sd](double x) { return normal_cdf(x / sd); });
        report.empirical["mean" + at] = sample_mean(values);
        report.empirical["variance" + at] = var;
        report.empirical["ks_marginal" + at] = ks;
        check(report, "var_rel_err" + at, rel_err(var, t), "var_rel_err");
        check(report, "ks_marginal" + at, ks, "ks_marginal");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t k = i + 1; k < grid.size(); ++k) {
            if (grid[i] == 0.0) continue;
            const double cov = increment_covariance(scaled, grid[i], grid[k]);
            const std::string at = "@" + time_label(grid[i]) + "," + time_label(grid[k]);
            report.empirical["covariance" + at] = cov;
            check(report, "cov_rel_err" + at, rel_err(cov, std::min(grid[i], grid[k])), "cov_rel_err");
        }
    }
    // Independent increments, diagnostic only: covariance of consecutive increments.
    std::vector<double> edges{0.0};
    std::vector<std::size_t> index{std::numeric_limits<std::size_t>::max()};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] > 0.0) {
            edges.push_back(grid[i]);
            index.push_back(i);
        }
    }
    auto value_at = [&](const ScaledIdleSample& s, std::size_t k) {
        return index[k] == std::numeric_limits<std::size_t>::max() ? 0.0 : s.values[index[k]];
    };
    for (std::size_t k = 0; k + 2 < edges.size(); ++k) {
        std::vector<double> first, second;
        for (const auto& s : scaled) {
            first.push_back(value_at(s, k + 1) - value_at(s, k));
            second.push_back(value_at(s, k + 2) - value_at(s, k + 1));
        }
        if (first.size() < 2) break;
        report.empirical["increment_cov@" + time_label(edges[k]) + "-" + time_label(edges[k + 1]) + "," +
                         time_label(edges[k + 1]) + "-" + time_label(edges[k + 2])] =
            sample_covariance(first, second);
    }
    report.wall_time = timer.seconds();
    return report;
}

ExperimentReport run_doubly_experiment(const ExperimentConfig& config) {
    if (config.kind != ExperimentKind::Doubly) config_error("kind", "expected a doubly experiment");
    validate(config);
    Timer timer;
    ExperimentReport report;
    report.config = config;
    const double d = *config.upper;
    const double q = doubly_loss_rate(config.params(), d);
    report.analytic["q"] = q;

    const double horizon = simulated_horizon(config);
    Observation observe;
    observe.checkpoints = {horizon};
    observe.average_from = 0.0;
    const auto samples = batch_coupled(config.sim(), config.n_paths, config.seed, config.levels, observe,
                                       {config.workers});
    const auto weights = richardson_weights(config.levels);

    std::vector<double> loss(config.levels, 0.0), idle(config.levels, 0.0), average(config.levels, 0.0);
    const double count = static_cast<double>(samples.size());
    for (const auto& s : samples) {
        for (int j = 0; j < config.levels; ++j) {
            loss[j] += s.levels[j].u.back() / horizon / count;
            idle[j] += s.levels[j].l.back() / horizon / count;
            average[j] += s.levels[j].time_average / count;
        }
    }
    const double loss_hat = extrapolate(weights, loss);
    const double idle_hat = extrapolate(weights, idle);
    const double average_hat = extrapolate(weights, average);
    record_levels(report, "loss_rate", loss);
    record_levels(report, "idle_rate", idle);
    report.empirical["loss_rate"] = loss_hat;
    report.empirical["idle_rate"] = idle_hat;
    report.empirical["time_average"] = average_hat;
    // Stationary balance 0 = alpha - gamma E[Z] + q_L - q_U; diagnostic only.
    report.empirical["balance_abs_err"] =
        std::abs(idle_hat - (q - config.alpha + config.gamma * average_hat));
    check(report, "rate_abs_err", std::abs(loss_hat - q), "rate_abs_err");
    report.wall_time = timer.seconds();
    return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    switch (config.kind) {
        case ExperimentKind::Stationary: return run_stationary_experiment(config);
        case ExperimentKind::Clt: return run_clt_experiment(config);
        case ExperimentKind::Fclt: return run_fclt_experiment(config);
        case ExperimentKind::Doubly: return run_doubly_experiment(config);
    }
    config_error("kind", "unknown experiment kind");
}

// ---------------------------------------------------------------------------

json report_to_json(const ExperimentReport& report) {
    json doc = report.numeric_block();
    doc["config"] = config_to_json(report.config);
    doc["notes"] = report.notes;
    doc["wall_time"] = report.wall_time;
    doc["pass"] = report.passed();
    return doc;
}

ExperimentReport report_from_json(const json& doc) {
    ExperimentReport r;
    try {
        r.config = config_from_json(doc.at("config"));
        r.analytic = doc.at("analytic").get<std::map<std::string, double>>();
        r.empirical = doc.at("empirical").get<std::map<std::string, double>>();
        for (const auto& c : doc.at("checks")) {
            r.checks.push_back({c.at("metric").get<std::string>(), c.at("value").get<double>(),
                                c.at("threshold").get<double>(), c.at("pass").get<bool>()});
        }
        r.notes = doc.at("notes").get<std::vector<std::string>>();
        r.wall_time = doc.at("wall_time").get<double>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ReadFailure, "report", e.what());
    }
    return r;
}

std::string report_to_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << std::setprecision(12);
    out << "metric,value,threshold,pass\n";
    for (const auto& c : report.checks) {
        out << c.metric << ',' << c.value << ',' << c.threshold << ',' << (c.pass ? "true" : "false") << '\n';
    }
    const ExperimentConfig& cfg = report.config;
    std::vector<std::pair<std::string, double>> echo = {
        {"config.alpha", cfg.alpha},
        {"config.gamma", cfg.gamma},
        {"config.sigma", cfg.sigma},
        {"config.dt", cfg.dt},
        {"config.horizon", cfg.horizon},
        {"config.paths", static_cast<double>(cfg.n_paths)},
        {"config.seed", static_cast<double>(cfg.seed)},
        {"config.levels", static_cast<double>(cfg.levels)},
    };
    if (cfg.lower) echo.emplace_back("config.lower", *cfg.lower);
    if (cfg.upper) echo.emplace_back("config.upper", *cfg.upper);
    for (const auto& [k, v] : report.analytic) echo.emplace_back("analytic." + k, v);
    for (const auto& [k, v] : report.empirical) echo.emplace_back("empirical." + k, v);
    for (const auto& [k, v] : echo) out << k << ',' << v << ",,\n";
    return out.str();
}

void write_report(const ExperimentReport& report, const std::string& output_path) {
    const std::filesystem::path base(output_path);
    if (base.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(base.parent_path(), ec);
    }
    auto emit = [](const std::string& filename, const std::string& body) {
        std::ofstream out(filename);
        if (!out) throw Error(ErrorCode::WriteFailure, filename, "cannot open for writing");
        out << body;
        out.flush();
        if (!out) throw Error(ErrorCode::WriteFailure, filename, "write failed");
    };
    emit(output_path + ".json", report_to_json(report).dump(2) + "\n");
    emit(output_path + ".csv", report_to_csv(report));
}

}  // namespace rou
