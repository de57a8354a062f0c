#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

namespace polarnet {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using ComplexRowVector = Eigen::RowVectorXcd;
using RealVector = Eigen::VectorXd;

/// Repeaters per layer, m_1..m_n.
struct LayerSizes {
    std::vector<int> sizes;

    int layer_count() const { return static_cast<int>(sizes.size()); }

    /// Size of layer i, 1-based.
    int at(int layer) const { return sizes.at(static_cast<std::size_t>(layer) - 1); }

    /// Throws std::invalid_argument unless n >= 1 and every m_i >= 1.
    void validate() const;
};

/// Ordered channel matrices [H_{1,0}, H_{2,1}, ..., H_{n+1,n}].
/// H_{1,0} is m_1 x 1, H_{i+1,i} is m_{i+1} x m_i, H_{n+1,n} is 1 x m_n.
struct ChannelStack {
    std::vector<ComplexMatrix> matrices;

    int layer_count() const { return static_cast<int>(matrices.size()) - 1; }

    /// Channel matrix into layer `to` from layer `to - 1` (0 = BS, n+1 = UE).
    const ComplexMatrix& hop(int to) const { return matrices.at(static_cast<std::size_t>(to) - 1); }

    int layer_size(int layer) const {
        return static_cast<int>(matrices.at(static_cast<std::size_t>(layer) - 1).rows());
    }

    LayerSizes layer_sizes() const;

    /// Throws std::invalid_argument on dimension-chain breaks or non-finite entries.
    void validate() const;
};

/// Per-layer non-negative gain vectors alpha^(1)..alpha^(n).
struct AmplificationProfile {
    std::vector<RealVector> alphas;

    const RealVector& layer(int i) const { return alphas.at(static_cast<std::size_t>(i) - 1); }
    RealVector& layer(int i) { return alphas.at(static_cast<std::size_t>(i) - 1); }
    int layer_count() const { return static_cast<int>(alphas.size()); }
};

}  // namespace polarnet
