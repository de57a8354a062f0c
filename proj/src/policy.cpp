#include "polarnet/policy.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace polarnet {

namespace {
// relative slack for norm membership; keeps exactly-normalized vectors inside
constexpr double kNormSlack = 1e-9;
}

bool contains(const LayerPolicy& policy, const RealVector& alpha) {
    if ((alpha.array() < 0.0).any()) return false;
    const double limit = policy.beta * (1.0 + kNormSlack);
    switch (policy.set) {
        case ActivationSet::Ball2:
            return alpha.norm() <= limit;
        case ActivationSet::BallInf:
            return alpha.size() == 0 || alpha.maxCoeff() <= limit;
        case ActivationSet::SelectOne:
            return alpha.lpNorm<1>() <= limit;
        case ActivationSet::AtMostK: {
            int active = 0;
            for (Eigen::Index j = 0; j < alpha.size(); ++j) {
                if (alpha[j] == 0.0) continue;
                if (alpha[j] != policy.beta) return false;
                ++active;
            }
            return active <= policy.k;
        }
    }
    return false;
}

namespace {

// indices of positive entries ordered by value descending, lowest index first on ties
std::vector<Eigen::Index> positive_descending(const RealVector& g) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < g.size(); ++j) {
        if (g[j] > 0.0) idx.push_back(j);
    }
    std::stable_sort(idx.begin(), idx.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return g[a] > g[b]; });
    return idx;
}

}  // namespace

RealVector update_layer_gains(const RealVector& g, const RealVector& alpha_old,
                              const LayerPolicy& policy) {
    if (g.size() != alpha_old.size()) {
        throw std::invalid_argument("update_layer_gains: size mismatch");
    }
    switch (policy.set) {
        case ActivationSet::Ball2: {
            RealVector p = g.cwiseMax(0.0);
            const double norm = p.norm();
            if (norm == 0.0) return alpha_old;
            return (policy.beta / norm) * p;
        }
        case ActivationSet::BallInf: {
            if ((g.array() <= 0.0).all()) return alpha_old;
            RealVector out = RealVector::Zero(g.size());
            for (Eigen::Index j = 0; j < g.size(); ++j) {
                if (g[j] > 0.0) out[j] = policy.beta;
            }
            return out;
        }
        case ActivationSet::AtMostK: {
            const auto idx = positive_descending(g);
            if (idx.empty()) return alpha_old;
            RealVector out = RealVector::Zero(g.size());
            const std::size_t active = std::min<std::size_t>(idx.size(),
                                                             static_cast<std::size_t>(policy.k));
            for (std::size_t j = 0; j < active; ++j) out[idx[j]] = policy.beta;
            return out;
        }
        case ActivationSet::SelectOne: {
            const auto idx = positive_descending(g);
            if (idx.empty()) return alpha_old;
            RealVector out = RealVector::Zero(g.size());
            out[idx.front()] = policy.beta;
            return out;
        }
    }
    throw std::logic_error("update_layer_gains: unknown activation set");
}

RealVector layer_update(const ComplexRowVector& y, const RealVector& alpha,
                        const LayerPolicy& policy) {
    if (y.size() != alpha.size()) {
        throw std::invalid_argument("layer_update: size mismatch");
    }
    // g = Re{Y^H (Y alpha)}, O(m)
    const Complex h = y * alpha.cast<Complex>();
    RealVector g(alpha.size());
    for (Eigen::Index j = 0; j < alpha.size(); ++j) {
        g[j] = (std::conj(y[j]) * h).real();
    }
    return update_layer_gains(g, alpha, policy);
}

}  // namespace polarnet
