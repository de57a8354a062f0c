#pragma once

#include "polarnet/policy.hpp"
#include "polarnet/types.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace polarnet {

/// Grid deployment: layers on vertical lines, BS and UE on the axis one
/// interlayer spacing outside layers 1 and n.
struct NetworkGeometry {
    LayerSizes layer_sizes;
    double interlayer_spacing = 0.0;  // meters
    double intralayer_spacing = 0.0;  // meters
    double wavelength = 0.0;          // meters
    Eigen::Vector2d bs_position;
    Eigen::Vector2d ue_position;
    std::vector<std::vector<Eigen::Vector2d>> repeater_positions;  // [layer][repeater]
};

struct RicianFading {
    double k_factor = 0.0;  // LOS/scatter power ratio, >= 0
};

struct IidGaussianFading {
    double sigma_h = 1.0;  // per-entry standard deviation, > 0
};

using FadingSpec = std::variant<RicianFading, IidGaussianFading>;

/// Free-space path gain lambda^2 / (4 pi d)^2.
double free_space_gain(double distance, double wavelength);

NetworkGeometry build_grid_geometry(const LayerSizes& layer_sizes, double interlayer,
                                    double intralayer, double carrier_frequency);

/// Static channel realization. Rician entries carry free-space loss, a
/// distance-derived LOS phase and a power-preserving K/(K+1) scatter split;
/// IID Gaussian ignores positions. Pure function of (inputs, seed).
ChannelStack sample_channels(const NetworkGeometry& geometry, const FadingSpec& fading,
                             std::uint64_t seed);

/// Uniform (0,1) draws normalized into the feasible set: 2-norm to beta for
/// Ball2, 1-norm for SelectOne, inf-norm for BallInf. AtMostK activates the
/// min(K, m) largest draws at beta (a continuous vector is not a member).
AmplificationProfile sample_initial_profile(const ActivationPolicy& policy,
                                            const LayerSizes& layer_sizes, std::uint64_t seed);

}  // namespace polarnet
