#pragma once

#include "polarnet/policy.hpp"
#include "polarnet/types.hpp"

#include <vector>

namespace polarnet {

/// Stops after max_outer_passes, or earlier when |h_tot| has not improved by
/// more than epsilon over the last n inner updates. epsilon = 0 disables the
/// stall check so the pass budget is the operative stop.
struct ConvergenceCriterion {
    int max_outer_passes = 20;
    double epsilon = 0.0;
};

enum class TerminationReason { MaxPasses, EpsilonStall };

struct RunRecord {
    std::vector<double> objective_trace;  // |h_tot|^2 after each inner update
    AmplificationProfile final_profile;
    int passes_used = 0;
    TerminationReason termination_reason = TerminationReason::MaxPasses;
};

/// Layer-by-layer block-coordinate ascent on |h_tot|^2 with alternating
/// forward (i = 1..n) and backward (i = n..1) passes and incremental cascade
/// updates. The objective is non-decreasing across inner updates.
RunRecord run_polarnet(const ChannelStack& stack, const ActivationPolicy& policy,
                       const AmplificationProfile& init, const ConvergenceCriterion& criterion);

}  // namespace polarnet
