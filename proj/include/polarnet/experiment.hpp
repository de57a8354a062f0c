#pragma once

#include "polarnet/network.hpp"
#include "polarnet/optimizer.hpp"
#include "polarnet/snr.hpp"
#include "polarnet/types.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace polarnet {

/// Config validation failure; what() carries the offending field path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One compared policy: the same activation set and budget on every layer.
struct PolicySpec {
    std::string id;
    ActivationSet set = ActivationSet::Ball2;
    double beta = 1.0;
    int k = 1;

    ActivationPolicy expand(int layer_count) const {
        return ActivationPolicy(static_cast<std::size_t>(layer_count), LayerPolicy{set, beta, k});
    }
};

struct ScenarioConfig {
    LayerSizes layer_sizes;
    FadingSpec fading = IidGaussianFading{1.0};
    // Grid geometry; required for Rician fading, ignored for IID Gaussian.
    double interlayer_spacing_m = 0.0;
    double intralayer_spacing_m = 0.0;
    double carrier_frequency_hz = 0.0;
    std::vector<PolicySpec> policies;
    std::vector<double> noise_sigmas;  // length n + 2
    int experiments = 1;
    int outer_passes = 20;
    std::uint64_t root_seed = 0;
    std::string normalization_reference;
    long bound_mc_samples = 20000;

    void validate() const;  // throws ConfigError
};

/// Strict parse: unknown keys anywhere are errors.
ScenarioConfig parse_scenario_config(const nlohmann::json& doc);
nlohmann::json scenario_config_to_json(const ScenarioConfig& config);

/// Per-inner-iteration mean with asymmetric semi-deviations: sigma_upper is
/// the mean deviation of samples at or above the mean, sigma_lower of samples
/// below it.
struct StatsSeries {
    std::vector<double> mean;
    std::vector<double> sigma_upper;
    std::vector<double> sigma_lower;
    long samples = 0;

    bool operator==(const StatsSeries&) const = default;
};

StatsSeries aggregate_statistics(const std::vector<std::vector<double>>& traces);

struct PolicyResult {
    std::string id;
    StatsSeries series;  // traces normalized per experiment by the reference final
    double final_objective_mean = 0.0;
    double final_objective_min = 0.0;
    double final_objective_max = 0.0;
    double final_normalized_mean = 0.0;
    double mean_snr_dl = 0.0;
    double mean_snr_ul = 0.0;
    // Mean of final objective / squared DAG select-one optimum, when computed.
    std::optional<double> mean_ratio_to_dag_optimum;

    bool operator==(const PolicyResult&) const = default;
};

struct BoundComparison {
    double sigma = 0.0;
    double sphere_one_hot_bound = 0.0;   // paper formula, sphere/one-hot distributions
    double bernoulli_half_bound = 0.0;   // paper formula, Bernoulli(1/2) distribution
    MonteCarloEstimate mc_sphere;        // Monte Carlo E(|h_tot|^2) / sigma^2
    MonteCarloEstimate mc_one_hot;
    MonteCarloEstimate mc_bernoulli_half;

    bool operator==(const BoundComparison&) const = default;
};

struct Provenance {
    std::string config_hash;
    std::uint64_t root_seed = 0;
    std::string version;

    bool operator==(const Provenance&) const = default;
};

struct ScenarioReport {
    Provenance provenance;
    int layer_count = 0;
    int outer_passes = 0;
    int experiments = 0;
    std::vector<PolicyResult> policies;
    std::optional<double> dag_optimum_mean_sq;  // mean squared DAG optimum over experiments
    std::optional<BoundComparison> bounds;      // IID-Gaussian scenarios only

    bool operator==(const ScenarioReport&) const = default;
};

ScenarioReport run_scenario(const ScenarioConfig& config);

nlohmann::json report_to_json(const ScenarioReport& report);
ScenarioReport report_from_json(const nlohmann::json& doc);

enum class ReportFormat { Csv, Json };

/// CSV: one file per policy, `iteration,mean,sigma_upper,sigma_lower,samples`,
/// 12 significant digits, LF endings. JSON: a single report.json. Both
/// byte-deterministic for a given report.
void emit_report(const ScenarioReport& report, ReportFormat format,
                 const std::filesystem::path& output_dir);

}  // namespace polarnet
