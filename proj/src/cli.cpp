#include "rou/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "rou/analytic.hpp"
#include "rou/error.hpp"
#include "rou/harness.hpp"
#include "rou/simulate.hpp"

namespace rou {

namespace {

struct Overrides {
    std::string config_path;
    double alpha = 0, gamma = 0, sigma = 0, x0 = 0, dt = 0, horizon = 0, burn_in = 0;
    double fclt_n = 0, tau_override = 0, truncation_k = 0;
    std::string lower, upper, start, output;
    std::size_t paths = 0;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    int levels = 0;
    std::vector<double> fclt_grid;
    std::vector<std::string> thresholds;
};

std::optional<double> parse_barrier(const std::string& text, const char* flag) {
    if (text == "none") return std::nullopt;
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidConfig, flag, "expected a number or `none`, got `" + text + "`");
}

void add_model_flags(CLI::App& cmd, Overrides& o) {
    cmd.add_option("--config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    cmd.add_option("--alpha", o.alpha, "drift level alpha");
    cmd.add_option("--gamma", o.gamma, "mean-reversion speed gamma > 0");
    cmd.add_option("--sigma", o.sigma, "volatility sigma > 0");
    cmd.add_option("--lower", o.lower, "lower barrier, or `none`");
    cmd.add_option("--upper", o.upper, "upper barrier, or `none`");
    cmd.add_option("--truncation-k", o.truncation_k, "tail truncation of the variance integral");
}

void add_sim_flags(CLI::App& cmd, Overrides& o) {
    cmd.add_option("--x0", o.x0, "initial state");
    cmd.add_option("--start", o.start, "`fixed` or `stationary`")->check(CLI::IsMember({"fixed", "stationary"}));
    cmd.add_option("--dt", o.dt, "time step");
    cmd.add_option("--horizon", o.horizon, "horizon T");
    cmd.add_option("--paths", o.paths, "number of paths");
    cmd.add_option("--seed", o.seed, "master seed (also ROU_SEED)");
    cmd.add_option("--workers", o.workers, "worker threads, 0 = all cores");
    cmd.add_option("--output", o.output, "output path");
}

void add_experiment_flags(CLI::App& cmd, Overrides& o) {
    cmd.add_option("--levels", o.levels, "coupled step levels for extrapolation (1-6)");
    cmd.add_option("--burn-in", o.burn_in, "discarded fraction of the horizon");
    cmd.add_option("--fclt-n", o.fclt_n, "FCLT time scaling n");
    cmd.add_option("--fclt-grid", o.fclt_grid, "FCLT evaluation times")->delimiter(',');
    cmd.add_option("--tau-override", o.tau_override, "use this tau instead of the analytic value");
    cmd.add_option("--threshold", o.thresholds, "threshold override name=value (repeatable)");
}

bool given(const CLI::App& cmd, const char* flag) {
    const CLI::Option* opt = cmd.get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
}

// defaults < config file < ROU_SEED < flags
ExperimentConfig resolve(const CLI::App& cmd, const Overrides& o, ExperimentKind kind) {
    ExperimentConfig c = default_config(kind);
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw Error(ErrorCode::ReadFailure, o.config_path, "cannot open config file");
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorCode::InvalidConfig, o.config_path, e.what());
        }
        c = config_from_json(doc, c);
        if (c.kind != kind) {
            throw Error(ErrorCode::InvalidConfig, "kind",
                        "config file is for `" + std::string(to_string(c.kind)) + "`");
        }
    }
    if (const char* env = std::getenv("ROU_SEED"); env != nullptr && *env != '\0') {
        try {
            std::size_t used = 0;
            c.seed = std::stoull(env, &used);
            if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidConfig, "ROU_SEED", "not an unsigned integer");
        }
    }
    if (given(cmd, "--alpha")) c.alpha = o.alpha;
    if (given(cmd, "--gamma")) c.gamma = o.gamma;
    if (given(cmd, "--sigma")) c.sigma = o.sigma;
    if (given(cmd, "--lower")) c.lower = parse_barrier(o.lower, "--lower");
    if (given(cmd, "--upper")) c.upper = parse_barrier(o.upper, "--upper");
    if (given(cmd, "--truncation-k")) c.truncation_k = o.truncation_k;
    if (given(cmd, "--x0")) c.x0 = o.x0;
    if (given(cmd, "--start")) c.start = o.start == "fixed" ? StartMode::Fixed : StartMode::Stationary;
    if (given(cmd, "--dt")) c.dt = o.dt;
    if (given(cmd, "--horizon")) c.horizon = o.horizon;
    if (given(cmd, "--paths")) c.n_paths = o.paths;
    if (given(cmd, "--seed")) c.seed = o.seed;
    if (given(cmd, "--workers")) c.workers = o.workers;
    if (given(cmd, "--output")) c.output_path = o.output;
    if (given(cmd, "--levels")) c.levels = o.levels;
    if (given(cmd, "--burn-in")) c.burn_in = o.burn_in;
    if (given(cmd, "--fclt-n")) c.fclt_n = o.fclt_n;
    if (given(cmd, "--fclt-grid")) c.fclt_grid = o.fclt_grid;
    if (given(cmd, "--tau-override")) c.tau_override = o.tau_override;
    const auto known = threshold_names(kind);
    for (const auto& entry : o.thresholds) {
        const auto eq = entry.find('=');
        const std::string name = entry.substr(0, eq);
        if (eq == std::string::npos || std::find(known.begin(), known.end(), name) == known.end()) {
            throw Error(ErrorCode::InvalidConfig, "--threshold", "unknown threshold `" + entry + "`");
        }
        try {
            c.thresholds[name] = std::stod(entry.substr(eq + 1));
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidConfig, "--threshold", "bad value in `" + entry + "`");
        }
    }
    return c;
}

void print(std::ostream& out, const std::string& key, double value) {
    out << key << '=' << value << '\n';
}

int run_analytic(const ExperimentConfig& c, std::ostream& out) {
    const OUParams params = c.params();
    const BoundarySpec boundary = c.boundary();
    if (boundary.is_doubly()) {
        if (*c.lower != 0.0) throw Error(ErrorCode::InvalidConfig, "--lower", "doubly case needs lower = 0");
        print(out, "q", doubly_loss_rate(params, *c.upper));
        return 0;
    }
    AnalyticOptions opts;
    opts.truncation_k = c.truncation_k;
    const RateAndVariance rv = rate_and_variance(params, boundary, opts);
    print(out, "q", rv.q);
    print(out, "tau2", rv.tau2);
    print(out, "stationary_mean", stationary_mean(params, boundary));
    print(out, "boundary_density", rv.boundary_density);
    return 0;
}

int run_simulate(const CLI::App& cmd, const ExperimentConfig& c, std::ostream& out) {
    SimConfig sim = c.sim();
    const std::string target = given(cmd, "--output") ? c.output_path : std::string("path.csv");
    if (given(cmd, "--paths") && c.n_paths != 1) {
        const auto summaries = batch_simulate(sim, c.n_paths, c.seed, {c.workers});
        std::ofstream file(target);
        if (!file) throw Error(ErrorCode::WriteFailure, target, "cannot open for writing");
        write_summaries_csv(summaries, file);
        if (!file) throw Error(ErrorCode::WriteFailure, target, "write failed");
        print(out, "paths", static_cast<double>(summaries.size()));
        out << "output=" << target << '\n';
        return 0;
    }
    sim.record_full_path = true;
    const ReflectedPath path = simulate_path(sim);
    write_path_csv(path, target);
    print(out, "steps", static_cast<double>(path.size() - 1));
    print(out, "horizon", path.horizon);
    print(out, "y_T", path.y.back());
    print(out, "l_T", path.l.back());
    print(out, "u_T", path.u.back());
    out << "output=" << target << '\n';
    return 0;
}

int run_harness(const ExperimentConfig& c, std::ostream& out) {
    const ExperimentReport report = run_experiment(c);
    for (const auto& [k, v] : report.analytic) print(out, "analytic." + k, v);
    for (const auto& [k, v] : report.empirical) print(out, "empirical." + k, v);
    for (const auto& check : report.checks) {
        print(out, "check." + check.metric, check.value);
        print(out, "check." + check.metric + ".threshold", check.threshold);
        out << "check." << check.metric << ".pass=" << (check.pass ? "true" : "false") << '\n';
    }
    print(out, "wall_time", report.wall_time);
    if (!c.output_path.empty()) {
        write_report(report, c.output_path);
        out << "report=" << c.output_path << ".json\n";
    }
    out << "pass=" << (report.passed() ? "true" : "false") << '\n';
    return report.passed() ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Reflected Ornstein-Uhlenbeck: analytic constants, simulation and experiments", "rou"};
    app.require_subcommand(1);
    Overrides o;

    struct Entry {
        const char* name;
        const char* help;
        ExperimentKind kind;
        bool sim, experiment;
    };
    const Entry entries[] = {
        {"analytic", "print q, tau2, stationary_mean, boundary_density", ExperimentKind::Stationary, false, false},
        {"simulate", "simulate one path and write its CSV", ExperimentKind::Stationary, true, false},
        {"stationary", "rate, time-average and marginal law experiment", ExperimentKind::Stationary, true, true},
        {"clt", "central limit experiment for the regulator", ExperimentKind::Clt, true, true},
        {"fclt", "functional limit experiment (finite-dimensional checks)", ExperimentKind::Fclt, true, true},
        {"doubly", "loss rate of the process reflected on [0, d]", ExperimentKind::Doubly, true, true},
    };
    std::vector<CLI::App*> commands;
    for (const auto& e : entries) {
        CLI::App* cmd = app.add_subcommand(e.name, e.help);
        add_model_flags(*cmd, o);
        if (e.sim) add_sim_flags(*cmd, o);
        if (e.experiment) add_experiment_flags(*cmd, o);
        commands.push_back(cmd);
    }

    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        for (std::size_t i = 0; i < commands.size(); ++i) {
            const CLI::App& cmd = *commands[i];
            if (!cmd.parsed()) continue;
            const Entry& e = entries[i];
            ExperimentConfig c = resolve(cmd, o, e.kind);
            if (e.experiment) {
                validate(c);
                return run_harness(c, out);
            }
            if (e.sim) return run_simulate(cmd, c, out);
            return run_analytic(c, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

int run_cli(const std::vector<std::string>& args) { return run_cli(args, std::cout, std::cerr); }

}  // namespace rou
