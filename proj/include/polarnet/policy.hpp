#pragma once

#include "polarnet/types.hpp"

#include <vector>

namespace polarnet {

enum class ActivationSet {
    Ball2,      ///< ||alpha||_2 <= beta, alpha >= 0
    BallInf,    ///< ||alpha||_inf <= beta, alpha >= 0
    AtMostK,    ///< alpha in {0, beta}^m, at most K entries active
    SelectOne,  ///< ||alpha||_1 <= beta, alpha >= 0
};

/// Constraint set for one layer's gain vector.
struct LayerPolicy {
    ActivationSet set = ActivationSet::Ball2;
    double beta = 1.0;
    int k = 1;  // only meaningful for AtMostK
};

/// One LayerPolicy per layer.
using ActivationPolicy = std::vector<LayerPolicy>;

/// Membership predicate. Norm constraints get a small relative slack;
/// discrete sets are checked exactly (updates assign 0 or beta verbatim).
bool contains(const LayerPolicy& policy, const RealVector& alpha);

/// Per-layer maximization of alpha . g over the activation set, where
/// g = Re{Y^H Y} alpha_old. Degenerate g (no positive entry) keeps alpha_old,
/// which preserves monotonicity. Ties break toward the lowest index.
RealVector update_layer_gains(const RealVector& g, const RealVector& alpha_old,
                              const LayerPolicy& policy);

/// Computes g = Re{Y^H (Y alpha)} in O(m) and dispatches to update_layer_gains.
RealVector layer_update(const ComplexRowVector& y, const RealVector& alpha,
                        const LayerPolicy& policy);

}  // namespace polarnet
