#pragma once

#include "polarnet/policy.hpp"
#include "polarnet/snr.hpp"
#include "polarnet/types.hpp"

#include <cstdint>
#include <vector>

namespace polarnet {

/// One repeater per layer, globally optimal for the select-one policy.
struct PathSolution {
    std::vector<int> indices;   // j_1..j_n, 1-based
    double objective = 0.0;     // |h_tot| under beta-scaled single activation
    double log_objective = 0.0; // sum of log-magnitudes plus sum of log betas
};

/// Exact select-one optimum by dynamic programming over log-magnitudes on the
/// layer DAG. Entries with zero magnitude are excluded (log-weight -inf); an
/// instance whose every path crosses one is degenerate. Ties break toward the
/// lexicographically smallest index sequence.
PathSolution dag_select_one_optimum(const ChannelStack& stack, const std::vector<double>& betas);

/// Enumerates every feasible discrete combination (BallInf box vertices,
/// AtMostK supports, SelectOne single activations) and returns the maximum
/// |h_tot|^2. Throws std::length_error when the combination count exceeds
/// max_combinations.
double exhaustive_discrete_optimum(const ChannelStack& stack, const ActivationPolicy& policy,
                                   std::uint64_t max_combinations = 1000000);

enum class LinkDirection { Downlink, Uplink };

struct TransmissionResult {
    std::vector<Complex> received;  // y per draw
    double noise_variance = 0.0;    // empirical variance of y - h_tot * x
};

/// Symbol-level propagation with per-layer receiver noise, the ground truth
/// behind the closed-form noise variances.
TransmissionResult simulate_transmission(const ChannelStack& stack,
                                         const AmplificationProfile& profile,
                                         const NoiseModel& noise, LinkDirection direction,
                                         Complex symbol, long draws, std::uint64_t seed);

}  // namespace polarnet
