#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rou/simulate.hpp"

namespace rou {

enum class ExperimentKind { Stationary, Clt, Fclt, Doubly };

std::string_view to_string(ExperimentKind kind) noexcept;
ExperimentKind parse_kind(std::string_view name);

// Everything an experiment needs. Configuration files are JSON documents with
// the sections `model`, `simulation`, `fclt`, `analytic`, `thresholds` and
// `output`; see configs/*.json. Unknown keys are rejected.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Stationary;

    double alpha = 0.0;
    double gamma = 1.0;
    double sigma = 1.4142135623730951;
    std::optional<double> lower = 0.0;
    std::optional<double> upper;

    double x0 = 0.0;
    StartMode start = StartMode::Fixed;
    double dt = 1e-3;
    double horizon = 500.0;
    std::size_t n_paths = 64;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    // Coupled levels dt, dt/4, ... combined by Richardson extrapolation.
    int levels = 3;
    // Leading fraction of the horizon discarded by stationarity statistics.
    double burn_in = 0.1;

    double fclt_n = 200.0;
    std::vector<double> fclt_grid{0.25, 0.5, 1.0};

    double truncation_k = 12.0;
    std::optional<double> tau_override;

    std::map<std::string, double> thresholds;
    std::string output_path;

    OUParams params() const { return {alpha, gamma, sigma}; }
    BoundarySpec boundary() const { return {lower, upper}; }
    SimConfig sim() const;
};

// Shipped defaults per experiment kind (the desk-scale reference settings).
ExperimentConfig default_config(ExperimentKind kind);

// Threshold names an experiment kind understands.
std::vector<std::string> threshold_names(ExperimentKind kind);

nlohmann::json config_to_json(const ExperimentConfig& config);
// Applies the keys present in `doc` on top of `base`. If `doc` names a kind
// different from base's, the defaults of that kind are used as base instead.
ExperimentConfig config_from_json(const nlohmann::json& doc, const ExperimentConfig& base);
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& filename);

// Throws InvalidConfig for inconsistent settings (negative thresholds, grid past
// the horizon, wrong boundary for the kind, ...).
void validate(const ExperimentConfig& config);

struct Check {
    std::string metric;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;

    friend bool operator==(const Check&, const Check&) = default;
};

// Pass rule used for every threshold: value strictly below the threshold.
bool passes(double value, double threshold) noexcept;

struct ExperimentReport {
    ExperimentConfig config;
    std::map<std::string, double> analytic;
    std::map<std::string, double> empirical;
    std::vector<Check> checks;
    std::vector<std::string> notes;
    double wall_time = 0.0;

    bool passed() const noexcept;
    // analytic + empirical + checks, without timing; equal configs give equal blocks.
    nlohmann::json numeric_block() const;
};

ExperimentReport run_stationary_experiment(const ExperimentConfig& config);
ExperimentReport run_clt_experiment(const ExperimentConfig& config);
ExperimentReport run_fclt_experiment(const ExperimentConfig& config);
ExperimentReport run_doubly_experiment(const ExperimentConfig& config);
ExperimentReport run_experiment(const ExperimentConfig& config);

nlohmann::json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& doc);

// Flat rows `metric,value,threshold,pass`: one per check, then echo rows
// (config, analytic, empirical) with empty threshold and pass columns.
std::string report_to_csv(const ExperimentReport& report);

// Writes <output_path>.json and <output_path>.csv. Throws WriteFailure naming
// the file that could not be written.
void write_report(const ExperimentReport& report, const std::string& output_path);

}  // namespace rou
