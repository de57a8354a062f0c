#include "polarnet/network.hpp"

#include "polarnet/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace polarnet {

namespace {
constexpr double kSpeedOfLight = 299792458.0;  // m/s
}

double free_space_gain(double distance, double wavelength) {
    if (distance <= 0.0) {
        throw std::domain_error("free_space_gain: distance must be positive");
    }
    if (wavelength <= 0.0) {
        throw std::domain_error("free_space_gain: wavelength must be positive");
    }
    const double denom = 4.0 * M_PI * distance;
    return (wavelength * wavelength) / (denom * denom);
}

NetworkGeometry build_grid_geometry(const LayerSizes& layer_sizes, double interlayer,
                                    double intralayer, double carrier_frequency) {
    layer_sizes.validate();
    if (interlayer <= 0.0 || intralayer <= 0.0) {
        throw std::domain_error("build_grid_geometry: spacings must be positive");
    }
    if (carrier_frequency <= 0.0) {
        throw std::domain_error("build_grid_geometry: carrier frequency must be positive");
    }

    NetworkGeometry geo;
    geo.layer_sizes = layer_sizes;
    geo.interlayer_spacing = interlayer;
    geo.intralayer_spacing = intralayer;
    geo.wavelength = kSpeedOfLight / carrier_frequency;

    const int n = layer_sizes.layer_count();
    geo.bs_position = {0.0, 0.0};
    geo.ue_position = {(n + 1) * interlayer, 0.0};
    geo.repeater_positions.resize(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        const int m = layer_sizes.at(i);
        auto& layer = geo.repeater_positions[static_cast<std::size_t>(i) - 1];
        layer.reserve(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) {
            // repeaters centered on the axis
            const double y = (j - 0.5 * (m - 1)) * intralayer;
            layer.emplace_back(i * interlayer, y);
        }
    }
    return geo;
}

namespace {

Complex rician_entry(const Eigen::Vector2d& from, const Eigen::Vector2d& to, double wavelength,
                     double k_factor, Rng& rng) {
    const double d = (to - from).norm();
    if (d == 0.0) {
        throw std::domain_error("sample_channels: coincident node positions");
    }
    const double amp = std::sqrt(free_space_gain(d, wavelength));
    const double phase = -2.0 * M_PI * d / wavelength;
    const Complex los = std::polar(1.0, phase);
    const Complex scatter = rng.complex_gaussian();
    const double los_w = std::sqrt(k_factor / (k_factor + 1.0));
    const double scatter_w = std::sqrt(1.0 / (k_factor + 1.0));
    return amp * (los_w * los + scatter_w * scatter);
}

}  // namespace

ChannelStack sample_channels(const NetworkGeometry& geometry, const FadingSpec& fading,
                             std::uint64_t seed) {
    geometry.layer_sizes.validate();
    const int n = geometry.layer_sizes.layer_count();
    Rng rng(seed);
    ChannelStack stack;
    stack.matrices.reserve(static_cast<std::size_t>(n) + 1);

    if (const auto* iid = std::get_if<IidGaussianFading>(&fading)) {
        if (iid->sigma_h <= 0.0) {
            throw std::domain_error("sample_channels: sigma_h must be positive");
        }
        std::vector<int> dims;
        dims.push_back(1);
        for (int m : geometry.layer_sizes.sizes) dims.push_back(m);
        dims.push_back(1);
        for (std::size_t hop = 0; hop + 1 < dims.size(); ++hop) {
            ComplexMatrix h(dims[hop + 1], dims[hop]);
            for (Eigen::Index r = 0; r < h.rows(); ++r) {
                for (Eigen::Index c = 0; c < h.cols(); ++c) {
                    h(r, c) = iid->sigma_h * rng.complex_gaussian();
                }
            }
            stack.matrices.push_back(std::move(h));
        }
        return stack;
    }

    const auto& rician = std::get<RicianFading>(fading);
    if (rician.k_factor < 0.0) {
        throw std::domain_error("sample_channels: Rician K-factor must be non-negative");
    }
    // node coordinates per "layer" 0..n+1 where 0 = BS and n+1 = UE
    std::vector<std::vector<Eigen::Vector2d>> nodes;
    nodes.push_back({geometry.bs_position});
    for (const auto& layer : geometry.repeater_positions) nodes.push_back(layer);
    nodes.push_back({geometry.ue_position});

    for (std::size_t hop = 0; hop + 1 < nodes.size(); ++hop) {
        const auto& from = nodes[hop];
        const auto& to = nodes[hop + 1];
        ComplexMatrix h(static_cast<Eigen::Index>(to.size()), static_cast<Eigen::Index>(from.size()));
        for (Eigen::Index r = 0; r < h.rows(); ++r) {
            for (Eigen::Index c = 0; c < h.cols(); ++c) {
                h(r, c) = rician_entry(from[static_cast<std::size_t>(c)],
                                       to[static_cast<std::size_t>(r)], geometry.wavelength,
                                       rician.k_factor, rng);
            }
        }
        stack.matrices.push_back(std::move(h));
    }
    return stack;
}

AmplificationProfile sample_initial_profile(const ActivationPolicy& policy,
                                            const LayerSizes& layer_sizes, std::uint64_t seed) {
    layer_sizes.validate();
    if (policy.size() != static_cast<std::size_t>(layer_sizes.layer_count())) {
        throw std::invalid_argument("sample_initial_profile: policy length != layer count");
    }
    Rng rng(seed);
    AmplificationProfile profile;
    profile.alphas.reserve(policy.size());
    for (int i = 1; i <= layer_sizes.layer_count(); ++i) {
        const int m = layer_sizes.at(i);
        const LayerPolicy& lp = policy[static_cast<std::size_t>(i) - 1];
        RealVector alpha(m);
        for (int j = 0; j < m; ++j) alpha[j] = rng.uniform_open();

        switch (lp.set) {
            case ActivationSet::Ball2:
                alpha *= lp.beta / alpha.norm();
                break;
            case ActivationSet::SelectOne:
                alpha *= lp.beta / alpha.lpNorm<1>();
                break;
            case ActivationSet::BallInf:
                alpha *= lp.beta / alpha.maxCoeff();
                break;
            case ActivationSet::AtMostK: {
                // binary set: activate the min(K, m) largest draws
                std::vector<int> order(static_cast<std::size_t>(m));
                for (int j = 0; j < m; ++j) order[static_cast<std::size_t>(j)] = j;
                std::sort(order.begin(), order.end(),
                          [&](int a, int b) { return alpha[a] != alpha[b] ? alpha[a] > alpha[b] : a < b; });
                RealVector binary = RealVector::Zero(m);
                const int active = std::min(lp.k, m);
                for (int j = 0; j < active; ++j) binary[order[static_cast<std::size_t>(j)]] = lp.beta;
                alpha = binary;
                break;
            }
        }
        profile.alphas.push_back(std::move(alpha));
    }
    return profile;
}

}  // namespace polarnet
