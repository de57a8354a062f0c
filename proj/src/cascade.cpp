#include "polarnet/cascade.hpp"

#include <stdexcept>
#include <string>

namespace polarnet {

Complex total_channel(const ChannelStack& stack, const AmplificationProfile& profile) {
    stack.validate();
    const int n = stack.layer_count();
    if (profile.layer_count() != n) {
        throw std::invalid_argument("total_channel: profile/stack layer mismatch");
    }
    ComplexVector v = stack.hop(1);
    for (int i = 1; i <= n; ++i) {
        const RealVector& alpha = profile.layer(i);
        if (alpha.size() != v.size()) {
            throw std::invalid_argument("total_channel: gain length mismatch at layer " +
                                        std::to_string(i));
        }
        v = stack.hop(i + 1) * v.cwiseProduct(alpha.cast<Complex>());
    }
    return v[0];
}

CascadeCache::CascadeCache(const ChannelStack& stack, const AmplificationProfile& profile)
    : stack_(&stack), profile_(&profile) {
    stack.validate();
    const int n = stack.layer_count();
    if (profile.layer_count() != n) {
        throw std::invalid_argument("CascadeCache: profile/stack layer mismatch");
    }
    fwd_.resize(static_cast<std::size_t>(n));
    bwd_.resize(static_cast<std::size_t>(n));
    fwd_clean_.assign(static_cast<std::size_t>(n), false);
    bwd_clean_.assign(static_cast<std::size_t>(n), false);
    rebuild();
}

std::size_t CascadeCache::idx(int layer) const {
    const int n = stack_->layer_count();
    if (layer < 1 || layer > n) {
        throw std::out_of_range("CascadeCache: layer " + std::to_string(layer) + " out of range");
    }
    return static_cast<std::size_t>(layer) - 1;
}

void CascadeCache::rebuild() {
    const int n = stack_->layer_count();
    fwd_[0] = stack_->hop(1);
    fwd_clean_[0] = true;
    for (int i = 2; i <= n; ++i) forward_step(i);
    bwd_[static_cast<std::size_t>(n) - 1] = stack_->hop(n + 1);
    bwd_clean_[static_cast<std::size_t>(n) - 1] = true;
    for (int i = n - 1; i >= 1; --i) backward_step(i);
}

void CascadeCache::mark_layer_updated(int layer) {
    idx(layer);
    const int n = stack_->layer_count();
    for (int k = layer + 1; k <= n; ++k) fwd_clean_[idx(k)] = false;
    for (int k = 1; k < layer; ++k) bwd_clean_[idx(k)] = false;
}

void CascadeCache::forward_step(int layer) {
    const int n = stack_->layer_count();
    if (layer < 2 || layer > n) {
        throw std::out_of_range("forward_step: layer out of range");
    }
    if (!fwd_clean_[idx(layer - 1)]) {
        throw std::logic_error("forward_step: forward entry for previous layer is stale");
    }
    const ComplexVector& prev = fwd_[idx(layer - 1)];
    const RealVector& alpha = profile_->layer(layer - 1);
    const auto& hop = stack_->hop(layer);
    fwd_[idx(layer)] = hop * prev.cwiseProduct(alpha.cast<Complex>());
    fwd_clean_[idx(layer)] = true;
    mul_adds_ += static_cast<std::uint64_t>(hop.rows()) * static_cast<std::uint64_t>(hop.cols()) +
                 static_cast<std::uint64_t>(prev.size());
}

void CascadeCache::backward_step(int layer) {
    const int n = stack_->layer_count();
    if (layer < 1 || layer > n - 1) {
        throw std::out_of_range("backward_step: layer out of range");
    }
    if (!bwd_clean_[idx(layer + 1)]) {
        throw std::logic_error("backward_step: backward entry for next layer is stale");
    }
    const ComplexRowVector& next = bwd_[idx(layer + 1)];
    const RealVector& alpha = profile_->layer(layer + 1);
    const auto& hop = stack_->hop(layer + 1);
    bwd_[idx(layer)] = next.cwiseProduct(alpha.transpose().cast<Complex>()) * hop;
    bwd_clean_[idx(layer)] = true;
    mul_adds_ += static_cast<std::uint64_t>(hop.rows()) * static_cast<std::uint64_t>(hop.cols()) +
                 static_cast<std::uint64_t>(next.size());
}

const ComplexVector& CascadeCache::forward(int layer) const {
    if (!fwd_clean_[idx(layer)]) {
        throw std::logic_error("CascadeCache: stale forward entry for layer " +
                               std::to_string(layer));
    }
    return fwd_[idx(layer)];
}

const ComplexRowVector& CascadeCache::backward(int layer) const {
    if (!bwd_clean_[idx(layer)]) {
        throw std::logic_error("CascadeCache: stale backward entry for layer " +
                               std::to_string(layer));
    }
    return bwd_[idx(layer)];
}

ComplexRowVector observation_matrix(const ChannelStack& stack, const AmplificationProfile& profile,
                                    int layer, const CascadeCache& cache) {
    const int n = stack.layer_count();
    if (layer < 1 || layer > n) {
        throw std::out_of_range("observation_matrix: layer out of range");
    }
    (void)profile;
    // Y_i = backward(i) elementwise-scaled by diag(H_{i,0})
    return cache.backward(layer).cwiseProduct(cache.forward(layer).transpose());
}

}  // namespace polarnet
