#pragma once

#include "polarnet/rng.hpp"
#include "polarnet/types.hpp"
#include "polarnet/policy.hpp"

#include <vector>

namespace polarnet::testing {

/// Random complex Gaussian channel stack for the given layer sizes.
inline ChannelStack random_stack(const std::vector<int>& sizes, Rng& rng, double scale = 1.0) {
    ChannelStack stack;
    std::vector<int> dims;
    dims.push_back(1);
    for (int m : sizes) dims.push_back(m);
    dims.push_back(1);
    for (std::size_t hop = 0; hop + 1 < dims.size(); ++hop) {
        ComplexMatrix h(dims[hop + 1], dims[hop]);
        for (Eigen::Index r = 0; r < h.rows(); ++r) {
            for (Eigen::Index c = 0; c < h.cols(); ++c) {
                h(r, c) = scale * rng.complex_gaussian();
            }
        }
        stack.matrices.push_back(std::move(h));
    }
    return stack;
}

/// Naive path-sum evaluation of h_tot: sum over every repeater index path of
/// the product of channel entries and gains. Independent of the cascade code.
inline Complex path_sum_channel(const ChannelStack& stack, const AmplificationProfile& profile) {
    const int n = stack.layer_count();
    Complex total = 0.0;
    std::vector<int> path(static_cast<std::size_t>(n), 0);
    for (;;) {
        Complex term = stack.hop(1)(path[0], 0) * profile.layer(1)[path[0]];
        for (int i = 2; i <= n; ++i) {
            term *= stack.hop(i)(path[static_cast<std::size_t>(i) - 1],
                                 path[static_cast<std::size_t>(i) - 2]) *
                    profile.layer(i)[path[static_cast<std::size_t>(i) - 1]];
        }
        term *= stack.hop(n + 1)(0, path[static_cast<std::size_t>(n) - 1]);
        total += term;
        // odometer increment
        int i = 0;
        while (i < n) {
            if (++path[static_cast<std::size_t>(i)] < stack.layer_size(i + 1)) break;
            path[static_cast<std::size_t>(i)] = 0;
            ++i;
        }
        if (i == n) break;
    }
    return total;
}

/// Random feasible profile for a policy (uniform draws normalized in-set).
inline AmplificationProfile random_profile(const ChannelStack& stack,
                                           const ActivationPolicy& policy, Rng& rng) {
    AmplificationProfile profile;
    for (int i = 1; i <= stack.layer_count(); ++i) {
        const int m = stack.layer_size(i);
        const LayerPolicy& lp = policy[static_cast<std::size_t>(i) - 1];
        RealVector alpha(m);
        for (int j = 0; j < m; ++j) alpha[j] = rng.uniform_open();
        switch (lp.set) {
            case ActivationSet::Ball2: alpha *= lp.beta / alpha.norm(); break;
            case ActivationSet::SelectOne: alpha *= lp.beta / alpha.lpNorm<1>(); break;
            case ActivationSet::BallInf: alpha *= lp.beta / alpha.maxCoeff(); break;
            case ActivationSet::AtMostK: {
                RealVector binary = RealVector::Zero(m);
                int active = 0;
                for (int j = 0; j < m && active < lp.k; ++j) {
                    if (alpha[j] > 0.5 || m - j <= lp.k - active) {
                        binary[j] = lp.beta;
                        ++active;
                    }
                }
                if (active == 0) binary[0] = lp.beta;
                alpha = binary;
                break;
            }
        }
        profile.alphas.push_back(std::move(alpha));
    }
    return profile;
}

}  // namespace polarnet::testing
