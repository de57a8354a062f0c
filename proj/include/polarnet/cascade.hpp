#pragma once

#include "polarnet/types.hpp"

#include <cstdint>
#include <vector>

namespace polarnet {

/// h_tot = H_{n+1,n} D_n ... D_1 H_{1,0}, evaluated by left-multiplication.
Complex total_channel(const ChannelStack& stack, const AmplificationProfile& profile);

/// Incremental forward/backward cascade products.
///
/// forward(i)  = H_{i,0}  (m_i x 1), the BS-to-layer-i product.
/// backward(i) = H_{n+1,n} D_n ... D_{i+1} H_{i+1,i}  (1 x m_i), the
/// layer-i-to-UE product with D_i excluded so that
/// h_tot = backward(i) * diag(alpha^(i)) * forward(i) holds exactly.
///
/// Entries go stale when a lower (backward) or higher (forward) layer's gains
/// change; mark_layer_updated tracks that and forward_step/backward_step
/// refresh exactly one entry from its neighbor.
class CascadeCache {
public:
    CascadeCache(const ChannelStack& stack, const AmplificationProfile& profile);

    /// Recompute everything; all entries clean afterwards.
    void rebuild();

    /// alpha^(layer) changed: forward(k) for k > layer and backward(k) for
    /// k < layer go stale.
    void mark_layer_updated(int layer);

    /// forward(layer) <- H_{layer,layer-1} D_{layer-1} forward(layer-1); layer >= 2.
    void forward_step(int layer);

    /// backward(layer) <- backward(layer+1) D_{layer+1} H_{layer+1,layer}; layer <= n-1.
    void backward_step(int layer);

    const ComplexVector& forward(int layer) const;     // throws std::logic_error if stale
    const ComplexRowVector& backward(int layer) const; // throws std::logic_error if stale

    bool forward_clean(int layer) const { return fwd_clean_.at(idx(layer)); }
    bool backward_clean(int layer) const { return bwd_clean_.at(idx(layer)); }

    /// Scalar multiply-add counter, for complexity assertions.
    std::uint64_t multiply_add_count() const { return mul_adds_; }

    const ChannelStack& stack() const { return *stack_; }
    const AmplificationProfile& profile() const { return *profile_; }

private:
    std::size_t idx(int layer) const;

    const ChannelStack* stack_;
    const AmplificationProfile* profile_;
    std::vector<ComplexVector> fwd_;
    std::vector<ComplexRowVector> bwd_;
    std::vector<bool> fwd_clean_;
    std::vector<bool> bwd_clean_;
    std::uint64_t mul_adds_ = 0;
};

/// Y_i with h_tot = Y_i alpha^(i); requires clean cache entries for layer i.
ComplexRowVector observation_matrix(const ChannelStack& stack, const AmplificationProfile& profile,
                                    int layer, const CascadeCache& cache);

}  // namespace polarnet
