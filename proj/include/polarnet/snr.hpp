#pragma once

#include "polarnet/types.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace polarnet {

/// Noise standard deviations sigma_0 (BS), sigma_1..sigma_n (layers),
/// sigma_{n+1} (UE); length n + 2.
struct NoiseModel {
    std::vector<double> sigmas;

    double bs() const { return sigmas.front(); }
    double ue() const { return sigmas.back(); }
    double layer(int i) const { return sigmas.at(static_cast<std::size_t>(i)); }

    static NoiseModel uniform(int layer_count, double sigma) {
        return NoiseModel{std::vector<double>(static_cast<std::size_t>(layer_count) + 2, sigma)};
    }
};

struct SnrReport {
    double channel_power = 0.0;  // |h_tot|^2
    double sigma_dl_sq = 0.0;
    double sigma_ul_sq = 0.0;
    double snr_dl = 0.0;
    double snr_ul = 0.0;
};

/// Closed-form (sigma_DL^2, sigma_UL^2): per-layer noise amplified through the
/// remaining cascade plus the terminal receiver noise. Exact for
/// circularly-symmetric Gaussian noise.
std::pair<double, double> noise_variances(const ChannelStack& stack,
                                          const AmplificationProfile& profile,
                                          const NoiseModel& noise);

SnrReport snr(const ChannelStack& stack, const AmplificationProfile& profile,
              const NoiseModel& noise);

enum class RandomAlphaDistribution {
    UniformSphereOrthant,  // uniform on the non-negative orthant of the unit sphere
    UniformOneHot,         // uniform one-hot, active level 1
    IidBernoulliHalf,      // entries 0/1 with probability 1/2
};

/// The paper-formula upper bound on joint expected SNR, verbatim:
/// sigma_H^{n+1} / sigma^2 for the sphere and one-hot distributions,
/// (m_1...m_n) sigma_H^{n+1} / (4^n sigma^2) for the Bernoulli distribution.
/// An independent telescoping derivation gives different exponents/constants
/// (sigma_H^{2(n+1)}, 2^n); reports print this bound and the Monte Carlo
/// expectation side by side rather than resolving the discrepancy.
double expected_snr_upper_bound(const LayerSizes& layer_sizes, double sigma_h, double sigma,
                                RandomAlphaDistribution dist);

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long samples = 0;

    bool operator==(const MonteCarloEstimate&) const = default;
};

/// Monte Carlo estimate of E(|h_tot|^2) over IID CN(0, sigma_H^2) channels and
/// random unit-level gain draws from the selected distribution.
MonteCarloEstimate monte_carlo_channel_power(const LayerSizes& layer_sizes, double sigma_h,
                                             RandomAlphaDistribution dist, long samples,
                                             std::uint64_t seed);

}  // namespace polarnet
