#include "polarnet/experiment.hpp"

#include "polarnet/oracles.hpp"
#include "polarnet/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

namespace polarnet {

namespace {

constexpr const char* kVersion = "polarnet 0.1.0";

using json = nlohmann::ordered_json;

void reject_unknown_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                         const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.contains(it.key())) {
            throw ConfigError(path + ": unknown key '" + it.key() + "'");
        }
    }
}

const nlohmann::json& require(const nlohmann::json& obj, const std::string& key,
                              const std::string& path) {
    if (!obj.contains(key)) {
        throw ConfigError(path + ": missing required key '" + key + "'");
    }
    return obj.at(key);
}

double require_number(const nlohmann::json& obj, const std::string& key, const std::string& path) {
    const auto& v = require(obj, key, path);
    if (!v.is_number()) throw ConfigError(path + "." + key + ": expected a number");
    return v.get<double>();
}

std::string set_name(ActivationSet set) {
    switch (set) {
        case ActivationSet::Ball2: return "ball2";
        case ActivationSet::BallInf: return "ball_inf";
        case ActivationSet::AtMostK: return "at_most_k";
        case ActivationSet::SelectOne: return "select_one";
    }
    return "?";
}

ActivationSet parse_set(const std::string& name, const std::string& path) {
    if (name == "ball2") return ActivationSet::Ball2;
    if (name == "ball_inf") return ActivationSet::BallInf;
    if (name == "at_most_k") return ActivationSet::AtMostK;
    if (name == "select_one") return ActivationSet::SelectOne;
    throw ConfigError(path + ": unknown activation set '" + name + "'");
}

}  // namespace

void ScenarioConfig::validate() const {
    try {
        layer_sizes.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("layer_sizes: ") + e.what());
    }
    const int n = layer_sizes.layer_count();
    if (std::holds_alternative<RicianFading>(fading)) {
        if (std::get<RicianFading>(fading).k_factor < 0.0) {
            throw ConfigError("fading.k_factor: must be >= 0");
        }
        if (interlayer_spacing_m <= 0.0 || intralayer_spacing_m <= 0.0 ||
            carrier_frequency_hz <= 0.0) {
            throw ConfigError("geometry: positive spacings and carrier frequency are required "
                              "for Rician fading");
        }
    } else if (std::get<IidGaussianFading>(fading).sigma_h <= 0.0) {
        throw ConfigError("fading.sigma_h: must be > 0");
    }
    if (policies.empty()) throw ConfigError("policies: at least one policy required");
    std::set<std::string> ids;
    for (std::size_t p = 0; p < policies.size(); ++p) {
        const std::string path = "policies[" + std::to_string(p) + "]";
        if (policies[p].id.empty()) throw ConfigError(path + ".id: must be non-empty");
        if (!ids.insert(policies[p].id).second) {
            throw ConfigError(path + ".id: duplicate id '" + policies[p].id + "'");
        }
        if (policies[p].beta <= 0.0) throw ConfigError(path + ".beta: must be > 0");
        if (policies[p].set == ActivationSet::AtMostK && policies[p].k < 1) {
            throw ConfigError(path + ".k: must be >= 1");
        }
    }
    if (noise_sigmas.size() != static_cast<std::size_t>(n) + 2) {
        throw ConfigError("noise: expected " + std::to_string(n + 2) + " standard deviations");
    }
    for (double s : noise_sigmas) {
        if (s < 0.0) throw ConfigError("noise: standard deviations must be >= 0");
    }
    if (noise_sigmas.front() <= 0.0 && noise_sigmas.back() <= 0.0) {
        throw ConfigError("noise: at least one of the BS and UE deviations must be > 0");
    }
    if (experiments < 1) throw ConfigError("experiments: must be >= 1");
    if (outer_passes < 1) throw ConfigError("outer_passes: must be >= 1");
    if (bound_mc_samples < 1) throw ConfigError("bound_mc_samples: must be >= 1");
    if (!ids.contains(normalization_reference)) {
        throw ConfigError("normalization_reference: '" + normalization_reference +
                          "' does not name a listed policy");
    }
}

ScenarioConfig parse_scenario_config(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
    reject_unknown_keys(doc,
                        {"layer_sizes", "fading", "geometry", "policies", "noise", "experiments",
                         "outer_passes", "root_seed", "normalization_reference",
                         "bound_mc_samples"},
                        "config");

    ScenarioConfig cfg;
    const auto& sizes = require(doc, "layer_sizes", "config");
    if (!sizes.is_array()) throw ConfigError("layer_sizes: expected an array of integers");
    for (const auto& v : sizes) {
        if (!v.is_number_integer()) throw ConfigError("layer_sizes: expected integers");
        cfg.layer_sizes.sizes.push_back(v.get<int>());
    }

    const auto& fading = require(doc, "fading", "config");
    if (!fading.is_object()) throw ConfigError("fading: expected an object");
    const std::string kind = require(fading, "kind", "fading").get<std::string>();
    if (kind == "rician") {
        reject_unknown_keys(fading, {"kind", "k_factor"}, "fading");
        cfg.fading = RicianFading{require_number(fading, "k_factor", "fading")};
    } else if (kind == "iid_gaussian") {
        reject_unknown_keys(fading, {"kind", "sigma_h"}, "fading");
        cfg.fading = IidGaussianFading{require_number(fading, "sigma_h", "fading")};
    } else {
        throw ConfigError("fading.kind: expected 'rician' or 'iid_gaussian'");
    }

    if (doc.contains("geometry")) {
        const auto& geo = doc.at("geometry");
        if (!geo.is_object()) throw ConfigError("geometry: expected an object");
        reject_unknown_keys(
            geo, {"interlayer_spacing_m", "intralayer_spacing_m", "carrier_frequency_hz"},
            "geometry");
        cfg.interlayer_spacing_m = require_number(geo, "interlayer_spacing_m", "geometry");
        cfg.intralayer_spacing_m = require_number(geo, "intralayer_spacing_m", "geometry");
        cfg.carrier_frequency_hz = require_number(geo, "carrier_frequency_hz", "geometry");
    } else if (kind == "rician") {
        throw ConfigError("config: 'geometry' is required for Rician fading");
    }

    const auto& policies = require(doc, "policies", "config");
    if (!policies.is_array() || policies.empty()) {
        throw ConfigError("policies: expected a non-empty array");
    }
    for (std::size_t p = 0; p < policies.size(); ++p) {
        const std::string path = "policies[" + std::to_string(p) + "]";
        const auto& pol = policies[p];
        if (!pol.is_object()) throw ConfigError(path + ": expected an object");
        reject_unknown_keys(pol, {"id", "set", "beta", "k"}, path);
        PolicySpec spec;
        spec.id = require(pol, "id", path).get<std::string>();
        spec.set = parse_set(require(pol, "set", path).get<std::string>(), path + ".set");
        if (pol.contains("beta")) spec.beta = pol.at("beta").get<double>();
        if (pol.contains("k")) spec.k = pol.at("k").get<int>();
        cfg.policies.push_back(std::move(spec));
    }

    const auto& noise = require(doc, "noise", "config");
    if (!noise.is_object()) throw ConfigError("noise: expected an object");
    reject_unknown_keys(noise, {"sigma", "sigmas"}, "noise");
    if (noise.contains("sigma") == noise.contains("sigmas")) {
        throw ConfigError("noise: exactly one of 'sigma' and 'sigmas' is required");
    }
    if (noise.contains("sigma")) {
        cfg.noise_sigmas.assign(cfg.layer_sizes.sizes.size() + 2,
                                require_number(noise, "sigma", "noise"));
    } else {
        for (const auto& v : noise.at("sigmas")) cfg.noise_sigmas.push_back(v.get<double>());
    }

    cfg.experiments = static_cast<int>(require_number(doc, "experiments", "config"));
    cfg.outer_passes = static_cast<int>(require_number(doc, "outer_passes", "config"));
    cfg.root_seed = require(doc, "root_seed", "config").get<std::uint64_t>();
    cfg.normalization_reference =
        require(doc, "normalization_reference", "config").get<std::string>();
    if (doc.contains("bound_mc_samples")) {
        cfg.bound_mc_samples = doc.at("bound_mc_samples").get<long>();
    }

    cfg.validate();
    return cfg;
}

nlohmann::json scenario_config_to_json(const ScenarioConfig& config) {
    json doc;
    doc["layer_sizes"] = config.layer_sizes.sizes;
    if (const auto* rician = std::get_if<RicianFading>(&config.fading)) {
        doc["fading"] = {{"kind", "rician"}, {"k_factor", rician->k_factor}};
        doc["geometry"] = {{"interlayer_spacing_m", config.interlayer_spacing_m},
                           {"intralayer_spacing_m", config.intralayer_spacing_m},
                           {"carrier_frequency_hz", config.carrier_frequency_hz}};
    } else {
        doc["fading"] = {{"kind", "iid_gaussian"},
                         {"sigma_h", std::get<IidGaussianFading>(config.fading).sigma_h}};
    }
    doc["policies"] = json::array();
    for (const auto& p : config.policies) {
        json pol = {{"id", p.id}, {"set", set_name(p.set)}, {"beta", p.beta}};
        if (p.set == ActivationSet::AtMostK) pol["k"] = p.k;
        doc["policies"].push_back(std::move(pol));
    }
    doc["noise"] = {{"sigmas", config.noise_sigmas}};
    doc["experiments"] = config.experiments;
    doc["outer_passes"] = config.outer_passes;
    doc["root_seed"] = config.root_seed;
    doc["normalization_reference"] = config.normalization_reference;
    doc["bound_mc_samples"] = config.bound_mc_samples;
    return doc;
}

StatsSeries aggregate_statistics(const std::vector<std::vector<double>>& traces) {
    if (traces.empty()) {
        throw std::invalid_argument("aggregate_statistics: at least one trace required");
    }
    const std::size_t len = traces.front().size();
    for (const auto& t : traces) {
        if (t.size() != len) {
            throw std::invalid_argument("aggregate_statistics: ragged traces");
        }
    }
    StatsSeries series;
    series.samples = static_cast<long>(traces.size());
    series.mean.resize(len);
    series.sigma_upper.resize(len);
    series.sigma_lower.resize(len);
    for (std::size_t t = 0; t < len; ++t) {
        double sum = 0.0;
        for (const auto& trace : traces) sum += trace[t];
        const double mu = sum / static_cast<double>(traces.size());
        double up = 0.0, lo = 0.0;
        long n_up = 0, n_lo = 0;
        for (const auto& trace : traces) {
            const double x = trace[t];
            if (x >= mu) {
                up += x - mu;
                ++n_up;
            } else {
                lo += mu - x;
                ++n_lo;
            }
        }
        series.mean[t] = mu;
        series.sigma_upper[t] = n_up > 0 ? up / static_cast<double>(n_up) : 0.0;
        series.sigma_lower[t] = n_lo > 0 ? lo / static_cast<double>(n_lo) : 0.0;
    }
    return series;
}

namespace {

struct ExperimentOutcome {
    std::vector<std::vector<double>> traces;  // per policy
    std::vector<double> finals;               // raw |h_tot|^2
    std::vector<SnrReport> snrs;
    double dag_objective_sq = 0.0;
};

int worker_count(int experiments) {
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("POLARNET_WORKERS")) {
        workers = std::atoi(env);
    }
    workers = std::max(workers, 1);
    return std::min(workers, experiments);
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

ScenarioReport run_scenario(const ScenarioConfig& config) {
    config.validate();
    const int n = config.layer_sizes.layer_count();
    const std::size_t policy_count = config.policies.size();
    const NoiseModel noise{config.noise_sigmas};

    NetworkGeometry geometry;
    if (std::holds_alternative<RicianFading>(config.fading)) {
        geometry = build_grid_geometry(config.layer_sizes, config.interlayer_spacing_m,
                                       config.intralayer_spacing_m, config.carrier_frequency_hz);
    } else {
        geometry.layer_sizes = config.layer_sizes;
    }

    // select-one budget for the DAG reference
    std::vector<double> dag_betas(static_cast<std::size_t>(n), 1.0);
    for (const auto& p : config.policies) {
        if (p.set == ActivationSet::SelectOne) {
            dag_betas.assign(static_cast<std::size_t>(n), p.beta);
            break;
        }
    }

    std::vector<ExperimentOutcome> outcomes(static_cast<std::size_t>(config.experiments));
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto run_experiment = [&](int e) {
        const std::uint64_t seed_e = derive_seed(config.root_seed, static_cast<std::uint64_t>(e));
        // one channel realization shared by every compared policy, so the
        // per-experiment normalization is well-defined
        const ChannelStack stack =
            sample_channels(geometry, config.fading, derive_seed(seed_e, 0));

        ExperimentOutcome& out = outcomes[static_cast<std::size_t>(e)];
        out.traces.resize(policy_count);
        out.finals.resize(policy_count);
        out.snrs.resize(policy_count);
        for (std::size_t p = 0; p < policy_count; ++p) {
            const ActivationPolicy policy = config.policies[p].expand(n);
            const AmplificationProfile init =
                sample_initial_profile(policy, config.layer_sizes, derive_seed(seed_e, 1 + p));
            RunRecord rec = run_polarnet(stack, policy, init,
                                         ConvergenceCriterion{config.outer_passes, 0.0});
            out.finals[p] = rec.objective_trace.back();
            out.snrs[p] = snr(stack, rec.final_profile, noise);
            out.traces[p] = std::move(rec.objective_trace);
        }
        out.dag_objective_sq = std::pow(dag_select_one_optimum(stack, dag_betas).objective, 2);
    };

    const int workers = worker_count(config.experiments);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int e = next.fetch_add(1);
                if (e >= config.experiments) return;
                try {
                    run_experiment(e);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::size_t ref = 0;
    for (std::size_t p = 0; p < policy_count; ++p) {
        if (config.policies[p].id == config.normalization_reference) ref = p;
    }

    ScenarioReport report;
    report.layer_count = n;
    report.outer_passes = config.outer_passes;
    report.experiments = config.experiments;
    report.provenance.config_hash = fnv1a_hex(scenario_config_to_json(config).dump());
    report.provenance.root_seed = config.root_seed;
    report.provenance.version = kVersion;

    double dag_sum = 0.0;
    for (const auto& out : outcomes) dag_sum += out.dag_objective_sq;
    report.dag_optimum_mean_sq = dag_sum / static_cast<double>(config.experiments);

    for (std::size_t p = 0; p < policy_count; ++p) {
        PolicyResult result;
        result.id = config.policies[p].id;
        std::vector<std::vector<double>> normalized;
        normalized.reserve(outcomes.size());
        double final_sum = 0.0, norm_sum = 0.0, snr_dl_sum = 0.0, snr_ul_sum = 0.0;
        double ratio_sum = 0.0;
        double final_min = std::numeric_limits<double>::infinity();
        double final_max = -std::numeric_limits<double>::infinity();
        for (const auto& out : outcomes) {
            const double scale = out.finals[ref];
            std::vector<double> trace = out.traces[p];
            for (double& v : trace) v /= scale;
            norm_sum += trace.back();
            normalized.push_back(std::move(trace));
            final_sum += out.finals[p];
            final_min = std::min(final_min, out.finals[p]);
            final_max = std::max(final_max, out.finals[p]);
            snr_dl_sum += out.snrs[p].snr_dl;
            snr_ul_sum += out.snrs[p].snr_ul;
            ratio_sum += out.finals[p] / out.dag_objective_sq;
        }
        const double count = static_cast<double>(config.experiments);
        result.series = aggregate_statistics(normalized);
        result.final_objective_mean = final_sum / count;
        result.final_objective_min = final_min;
        result.final_objective_max = final_max;
        result.final_normalized_mean = norm_sum / count;
        result.mean_snr_dl = snr_dl_sum / count;
        result.mean_snr_ul = snr_ul_sum / count;
        result.mean_ratio_to_dag_optimum = ratio_sum / count;
        report.policies.push_back(std::move(result));
    }

    if (const auto* iid = std::get_if<IidGaussianFading>(&config.fading)) {
        BoundComparison bounds;
        bounds.sigma = std::min(noise.bs(), noise.ue());
        bounds.sphere_one_hot_bound =
            expected_snr_upper_bound(config.layer_sizes, iid->sigma_h, bounds.sigma,
                                     RandomAlphaDistribution::UniformSphereOrthant);
        bounds.bernoulli_half_bound =
            expected_snr_upper_bound(config.layer_sizes, iid->sigma_h, bounds.sigma,
                                     RandomAlphaDistribution::IidBernoulliHalf);
        const double inv_var = 1.0 / (bounds.sigma * bounds.sigma);
        auto mc = [&](RandomAlphaDistribution dist, std::uint64_t stream) {
            MonteCarloEstimate est =
                monte_carlo_channel_power(config.layer_sizes, iid->sigma_h, dist,
                                          config.bound_mc_samples,
                                          derive_seed(config.root_seed, 0xb0u + stream));
            est.mean *= inv_var;
            est.std_error *= inv_var;
            return est;
        };
        bounds.mc_sphere = mc(RandomAlphaDistribution::UniformSphereOrthant, 0);
        bounds.mc_one_hot = mc(RandomAlphaDistribution::UniformOneHot, 1);
        bounds.mc_bernoulli_half = mc(RandomAlphaDistribution::IidBernoulliHalf, 2);
        report.bounds = bounds;
    }

    return report;
}

nlohmann::json report_to_json(const ScenarioReport& report) {
    json doc;
    doc["provenance"] = {{"config_hash", report.provenance.config_hash},
                         {"root_seed", report.provenance.root_seed},
                         {"version", report.provenance.version}};
    doc["layer_count"] = report.layer_count;
    doc["outer_passes"] = report.outer_passes;
    doc["experiments"] = report.experiments;
    doc["policies"] = json::array();
    for (const auto& p : report.policies) {
        json pol;
        pol["id"] = p.id;
        pol["series"] = {{"mean", p.series.mean},
                         {"sigma_upper", p.series.sigma_upper},
                         {"sigma_lower", p.series.sigma_lower},
                         {"samples", p.series.samples}};
        pol["final_objective"] = {{"mean", p.final_objective_mean},
                                  {"min", p.final_objective_min},
                                  {"max", p.final_objective_max},
                                  {"normalized_mean", p.final_normalized_mean}};
        pol["snr"] = {{"mean_dl", p.mean_snr_dl}, {"mean_ul", p.mean_snr_ul}};
        if (p.mean_ratio_to_dag_optimum) {
            pol["ratio_to_dag_optimum"] = *p.mean_ratio_to_dag_optimum;
        }
        doc["policies"].push_back(std::move(pol));
    }
    if (report.dag_optimum_mean_sq) doc["dag_optimum_mean_sq"] = *report.dag_optimum_mean_sq;
    if (report.bounds) {
        const auto& b = *report.bounds;
        auto mc = [](const MonteCarloEstimate& e) {
            return json{{"mean", e.mean}, {"std_error", e.std_error}, {"samples", e.samples}};
        };
        doc["bounds"] = {{"sigma", b.sigma},
                         {"sphere_one_hot_bound", b.sphere_one_hot_bound},
                         {"bernoulli_half_bound", b.bernoulli_half_bound},
                         {"mc_sphere", mc(b.mc_sphere)},
                         {"mc_one_hot", mc(b.mc_one_hot)},
                         {"mc_bernoulli_half", mc(b.mc_bernoulli_half)}};
    }
    return doc;
}

ScenarioReport report_from_json(const nlohmann::json& doc) {
    ScenarioReport report;
    const auto& prov = doc.at("provenance");
    report.provenance.config_hash = prov.at("config_hash").get<std::string>();
    report.provenance.root_seed = prov.at("root_seed").get<std::uint64_t>();
    report.provenance.version = prov.at("version").get<std::string>();
    report.layer_count = doc.at("layer_count").get<int>();
    report.outer_passes = doc.at("outer_passes").get<int>();
    report.experiments = doc.at("experiments").get<int>();
    for (const auto& pol : doc.at("policies")) {
        PolicyResult p;
        p.id = pol.at("id").get<std::string>();
        const auto& series = pol.at("series");
        p.series.mean = series.at("mean").get<std::vector<double>>();
        p.series.sigma_upper = series.at("sigma_upper").get<std::vector<double>>();
        p.series.sigma_lower = series.at("sigma_lower").get<std::vector<double>>();
        p.series.samples = series.at("samples").get<long>();
        const auto& fin = pol.at("final_objective");
        p.final_objective_mean = fin.at("mean").get<double>();
        p.final_objective_min = fin.at("min").get<double>();
        p.final_objective_max = fin.at("max").get<double>();
        p.final_normalized_mean = fin.at("normalized_mean").get<double>();
        p.mean_snr_dl = pol.at("snr").at("mean_dl").get<double>();
        p.mean_snr_ul = pol.at("snr").at("mean_ul").get<double>();
        if (pol.contains("ratio_to_dag_optimum")) {
            p.mean_ratio_to_dag_optimum = pol.at("ratio_to_dag_optimum").get<double>();
        }
        report.policies.push_back(std::move(p));
    }
    if (doc.contains("dag_optimum_mean_sq")) {
        report.dag_optimum_mean_sq = doc.at("dag_optimum_mean_sq").get<double>();
    }
    if (doc.contains("bounds")) {
        const auto& b = doc.at("bounds");
        BoundComparison bounds;
        bounds.sigma = b.at("sigma").get<double>();
        bounds.sphere_one_hot_bound = b.at("sphere_one_hot_bound").get<double>();
        bounds.bernoulli_half_bound = b.at("bernoulli_half_bound").get<double>();
        auto mc = [](const nlohmann::json& e) {
            return MonteCarloEstimate{e.at("mean").get<double>(), e.at("std_error").get<double>(),
                                      e.at("samples").get<long>()};
        };
        bounds.mc_sphere = mc(b.at("mc_sphere"));
        bounds.mc_one_hot = mc(b.at("mc_one_hot"));
        bounds.mc_bernoulli_half = mc(b.at("mc_bernoulli_half"));
        report.bounds = bounds;
    }
    return report;
}

void emit_report(const ScenarioReport& report, ReportFormat format,
                 const std::filesystem::path& output_dir) {
    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    if (ec) {
        throw std::runtime_error("emit_report: cannot create '" + output_dir.string() +
                                 "': " + ec.message());
    }
    auto open = [](const std::filesystem::path& path) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("emit_report: cannot write '" + path.string() + "'");
        }
        return out;
    };

    if (format == ReportFormat::Json) {
        auto out = open(output_dir / "report.json");
        out << report_to_json(report).dump(2) << '\n';
        return;
    }

    for (const auto& policy : report.policies) {
        auto out = open(output_dir / (policy.id + ".csv"));
        out << "iteration,mean,sigma_upper,sigma_lower,samples\n";
        char buf[3 * 32];
        for (std::size_t t = 0; t < policy.series.mean.size(); ++t) {
            std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g", policy.series.mean[t],
                          policy.series.sigma_upper[t], policy.series.sigma_lower[t]);
            out << (t + 1) << ',' << buf << ',' << policy.series.samples << '\n';
        }
    }
}

}  // namespace polarnet
