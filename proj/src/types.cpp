#include "polarnet/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace polarnet {

void LayerSizes::validate() const {
    if (sizes.empty()) {
        throw std::invalid_argument("LayerSizes: at least one layer required");
    }
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 1) {
            throw std::invalid_argument("LayerSizes: layer " + std::to_string(i + 1) +
                                        " must hold at least one repeater");
        }
    }
}

LayerSizes ChannelStack::layer_sizes() const {
    LayerSizes out;
    for (std::size_t i = 0; i + 1 < matrices.size(); ++i) {
        out.sizes.push_back(static_cast<int>(matrices[i].rows()));
    }
    return out;
}

void ChannelStack::validate() const {
    if (matrices.size() < 2) {
        throw std::invalid_argument("ChannelStack: need at least H_{1,0} and H_{n+1,n}");
    }
    if (matrices.front().cols() != 1) {
        throw std::invalid_argument("ChannelStack: H_{1,0} must have a single column");
    }
    if (matrices.back().rows() != 1) {
        throw std::invalid_argument("ChannelStack: H_{n+1,n} must have a single row");
    }
    for (std::size_t i = 0; i + 1 < matrices.size(); ++i) {
        if (matrices[i + 1].cols() != matrices[i].rows()) {
            throw std::invalid_argument("ChannelStack: dimension chain broken between hops " +
                                        std::to_string(i) + " and " + std::to_string(i + 1));
        }
    }
    for (const auto& m : matrices) {
        if (!m.allFinite()) {
            throw std::invalid_argument("ChannelStack: non-finite channel entry");
        }
    }
}

}  // namespace polarnet
