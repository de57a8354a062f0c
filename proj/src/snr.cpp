#include "polarnet/snr.hpp"

#include "polarnet/cascade.hpp"
#include "polarnet/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace polarnet {

std::pair<double, double> noise_variances(const ChannelStack& stack,
                                          const AmplificationProfile& profile,
                                          const NoiseModel& noise) {
    stack.validate();
    const int n = stack.layer_count();
    if (profile.layer_count() != n) {
        throw std::invalid_argument("noise_variances: profile/stack layer mismatch");
    }
    if (noise.sigmas.size() != static_cast<std::size_t>(n) + 2) {
        throw std::invalid_argument("noise_variances: noise model length must be n + 2");
    }

    // DL: noise entering layer i is amplified by D_i then the remaining cascade.
    double sigma_dl_sq = noise.ue() * noise.ue();
    ComplexRowVector b = stack.hop(n + 1);  // excludes D_i, matches the cache convention
    for (int i = n; i >= 1; --i) {
        const RealVector& alpha = profile.layer(i);
        const ComplexRowVector scaled = b.cwiseProduct(alpha.transpose().cast<Complex>());
        const double s = noise.layer(i);
        sigma_dl_sq += s * s * scaled.squaredNorm();
        if (i > 1) b = scaled * stack.hop(i);
    }

    // UL: the transposed cascade toward the BS; the row norm equals
    // ||alpha^(i) o H_{i,0}||.
    double sigma_ul_sq = noise.bs() * noise.bs();
    ComplexVector f = stack.hop(1);
    for (int i = 1; i <= n; ++i) {
        const RealVector& alpha = profile.layer(i);
        const ComplexVector scaled = f.cwiseProduct(alpha.cast<Complex>());
        const double s = noise.layer(i);
        sigma_ul_sq += s * s * scaled.squaredNorm();
        if (i < n) f = stack.hop(i + 1) * scaled;
    }

    return {sigma_dl_sq, sigma_ul_sq};
}

SnrReport snr(const ChannelStack& stack, const AmplificationProfile& profile,
              const NoiseModel& noise) {
    SnrReport report;
    const Complex h = total_channel(stack, profile);
    report.channel_power = std::norm(h);
    const auto [dl, ul] = noise_variances(stack, profile, noise);
    report.sigma_dl_sq = dl;
    report.sigma_ul_sq = ul;
    if (dl == 0.0 || ul == 0.0) {
        throw std::domain_error("snr: zero noise variance gives an infinite SNR");
    }
    report.snr_dl = report.channel_power / dl;
    report.snr_ul = report.channel_power / ul;
    return report;
}

double expected_snr_upper_bound(const LayerSizes& layer_sizes, double sigma_h, double sigma,
                                RandomAlphaDistribution dist) {
    layer_sizes.validate();
    if (sigma_h <= 0.0 || sigma <= 0.0) {
        throw std::domain_error("expected_snr_upper_bound: sigma_h and sigma must be positive");
    }
    const int n = layer_sizes.layer_count();
    const double numerator = std::pow(sigma_h, n + 1);
    switch (dist) {
        case RandomAlphaDistribution::UniformSphereOrthant:
        case RandomAlphaDistribution::UniformOneHot:
            return numerator / (sigma * sigma);
        case RandomAlphaDistribution::IidBernoulliHalf: {
            double m_product = 1.0;
            for (int m : layer_sizes.sizes) m_product *= m;
            return m_product * numerator / (std::pow(4.0, n) * sigma * sigma);
        }
    }
    throw std::logic_error("expected_snr_upper_bound: unknown distribution");
}

namespace {

RealVector draw_alpha(int m, RandomAlphaDistribution dist, Rng& rng) {
    RealVector alpha = RealVector::Zero(m);
    switch (dist) {
        case RandomAlphaDistribution::UniformSphereOrthant: {
            // |gaussian| is uniform on the orthant of the sphere after normalization
            for (int j = 0; j < m; ++j) alpha[j] = std::abs(rng.gaussian());
            alpha /= alpha.norm();
            break;
        }
        case RandomAlphaDistribution::UniformOneHot:
            alpha[static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::size_t>(m)))] = 1.0;
            break;
        case RandomAlphaDistribution::IidBernoulliHalf:
            for (int j = 0; j < m; ++j) alpha[j] = rng.uniform() < 0.5 ? 1.0 : 0.0;
            break;
    }
    return alpha;
}

}  // namespace

MonteCarloEstimate monte_carlo_channel_power(const LayerSizes& layer_sizes, double sigma_h,
                                             RandomAlphaDistribution dist, long samples,
                                             std::uint64_t seed) {
    layer_sizes.validate();
    if (sigma_h <= 0.0) {
        throw std::domain_error("monte_carlo_channel_power: sigma_h must be positive");
    }
    if (samples < 1) {
        throw std::invalid_argument("monte_carlo_channel_power: samples must be >= 1");
    }
    const int n = layer_sizes.layer_count();
    Rng rng(seed);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (long s = 0; s < samples; ++s) {
        ComplexVector v(layer_sizes.at(1));
        for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = sigma_h * rng.complex_gaussian();
        for (int i = 1; i <= n; ++i) {
            const RealVector alpha = draw_alpha(layer_sizes.at(i), dist, rng);
            const ComplexVector scaled = v.cwiseProduct(alpha.cast<Complex>());
            const int rows = (i < n) ? layer_sizes.at(i + 1) : 1;
            ComplexVector next = ComplexVector::Zero(rows);
            for (Eigen::Index r = 0; r < rows; ++r) {
                Complex acc = 0.0;
                for (Eigen::Index c = 0; c < scaled.size(); ++c) {
                    acc += sigma_h * rng.complex_gaussian() * scaled[c];
                }
                next[r] = acc;
            }
            v = std::move(next);
        }
        const double power = std::norm(v[0]);
        sum += power;
        sum_sq += power * power;
    }
    MonteCarloEstimate est;
    est.samples = samples;
    est.mean = sum / static_cast<double>(samples);
    const double var = sum_sq / static_cast<double>(samples) - est.mean * est.mean;
    est.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(samples));
    return est;
}

}  // namespace polarnet
