#include "polarnet/optimizer.hpp"

#include "polarnet/cascade.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace polarnet {

RunRecord run_polarnet(const ChannelStack& stack, const ActivationPolicy& policy,
                       const AmplificationProfile& init, const ConvergenceCriterion& criterion) {
    stack.validate();
    const int n = stack.layer_count();
    if (static_cast<int>(policy.size()) != n) {
        throw std::invalid_argument("run_polarnet: policy length != layer count");
    }
    if (init.layer_count() != n) {
        throw std::invalid_argument("run_polarnet: profile length != layer count");
    }
    if (criterion.max_outer_passes < 1) {
        throw std::invalid_argument("run_polarnet: max_outer_passes must be >= 1");
    }
    if (criterion.epsilon < 0.0) {
        throw std::invalid_argument("run_polarnet: epsilon must be >= 0");
    }
    for (int i = 1; i <= n; ++i) {
        if (init.layer(i).size() != stack.layer_size(i)) {
            throw std::invalid_argument("run_polarnet: gain length mismatch at layer " +
                                        std::to_string(i));
        }
        if (!contains(policy[static_cast<std::size_t>(i) - 1], init.layer(i))) {
            throw std::invalid_argument("run_polarnet: initial gains infeasible at layer " +
                                        std::to_string(i));
        }
    }

    RunRecord rec;
    rec.final_profile = init;
    AmplificationProfile& profile = rec.final_profile;
    CascadeCache cache(stack, profile);

    const Complex h0 = total_channel(stack, profile);
    if (std::abs(h0) == 0.0) {
        throw std::invalid_argument("run_polarnet: |h_tot| must be positive at the initial point");
    }

    rec.objective_trace.reserve(static_cast<std::size_t>(criterion.max_outer_passes) *
                                static_cast<std::size_t>(n));
    bool stalled = false;

    auto update_at = [&](int i) {
        const ComplexRowVector y = observation_matrix(stack, profile, i, cache);
        const RealVector& alpha = profile.layer(i);
        RealVector next = layer_update(y, alpha, policy[static_cast<std::size_t>(i) - 1]);
        const bool changed = (next.array() != alpha.array()).any();
        if (!changed && !rec.objective_trace.empty()) {
            // unchanged gains: repeat the previous value so converged traces
            // are exactly constant rather than re-evaluated in a new fp order
            rec.objective_trace.push_back(rec.objective_trace.back());
        } else {
            if (changed) {
                profile.layer(i) = std::move(next);
                cache.mark_layer_updated(i);
            }
            const Complex h = y * profile.layer(i).cast<Complex>();
            rec.objective_trace.push_back(std::norm(h));
        }
        // stall check over the last n inner updates, on |h_tot|
        if (criterion.epsilon > 0.0 &&
            rec.objective_trace.size() > static_cast<std::size_t>(n)) {
            const double now = std::sqrt(rec.objective_trace.back());
            const double before = std::sqrt(
                rec.objective_trace[rec.objective_trace.size() - 1 - static_cast<std::size_t>(n)]);
            if (now - before <= criterion.epsilon) stalled = true;
        }
    };

    for (int pass = 0; pass < criterion.max_outer_passes && !stalled; ++pass) {
        rec.passes_used = pass + 1;
        if (pass % 2 == 0) {
            for (int i = 1; i <= n && !stalled; ++i) {
                if (i >= 2) cache.forward_step(i);
                update_at(i);
            }
        } else {
            for (int i = n; i >= 1 && !stalled; --i) {
                if (i <= n - 1) cache.backward_step(i);
                update_at(i);
            }
        }
    }
    rec.termination_reason = stalled ? TerminationReason::EpsilonStall : TerminationReason::MaxPasses;
    return rec;
}

}  // namespace polarnet
