#include "polarnet/oracles.hpp"

#include "polarnet/cascade.hpp"
#include "polarnet/rng.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace polarnet {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_mag(const Complex& z) {
    const double a = std::abs(z);
    return a == 0.0 ? kNegInf : std::log(a);
}
}  // namespace

PathSolution dag_select_one_optimum(const ChannelStack& stack, const std::vector<double>& betas) {
    stack.validate();
    const int n = stack.layer_count();
    if (betas.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("dag_select_one_optimum: betas length != layer count");
    }
    for (double b : betas) {
        if (b <= 0.0) throw std::invalid_argument("dag_select_one_optimum: betas must be positive");
    }

    // suffix[j] = best log-magnitude sum from repeater j of the current layer to the UE
    std::vector<std::vector<double>> suffix(static_cast<std::size_t>(n));
    const auto& last = stack.hop(n + 1);
    suffix[static_cast<std::size_t>(n) - 1].resize(static_cast<std::size_t>(last.cols()));
    for (Eigen::Index j = 0; j < last.cols(); ++j) {
        suffix[static_cast<std::size_t>(n) - 1][static_cast<std::size_t>(j)] = log_mag(last(0, j));
    }
    for (int i = n - 1; i >= 1; --i) {
        const auto& hop = stack.hop(i + 1);  // m_{i+1} x m_i
        auto& cur = suffix[static_cast<std::size_t>(i) - 1];
        const auto& nxt = suffix[static_cast<std::size_t>(i)];
        cur.assign(static_cast<std::size_t>(hop.cols()), kNegInf);
        for (Eigen::Index j = 0; j < hop.cols(); ++j) {
            double best = kNegInf;
            for (Eigen::Index k = 0; k < hop.rows(); ++k) {
                const double w = log_mag(hop(k, j));
                const double cand = (w == kNegInf || nxt[static_cast<std::size_t>(k)] == kNegInf)
                                        ? kNegInf
                                        : w + nxt[static_cast<std::size_t>(k)];
                if (cand > best) best = cand;
            }
            cur[static_cast<std::size_t>(j)] = best;
        }
    }

    // greedy front-to-back reconstruction, lowest index wins ties, giving the
    // lexicographically smallest optimal index sequence
    PathSolution sol;
    sol.indices.reserve(static_cast<std::size_t>(n));
    const auto& first = stack.hop(1);
    double best_total = kNegInf;
    int best_j = -1;
    for (Eigen::Index j = 0; j < first.rows(); ++j) {
        const double w = log_mag(first(j, 0));
        const double cand = (w == kNegInf || suffix[0][static_cast<std::size_t>(j)] == kNegInf)
                                ? kNegInf
                                : w + suffix[0][static_cast<std::size_t>(j)];
        if (cand > best_total) {
            best_total = cand;
            best_j = static_cast<int>(j);
        }
    }
    if (best_total == kNegInf) {
        throw std::domain_error("dag_select_one_optimum: every path crosses a zero channel entry");
    }
    sol.indices.push_back(best_j + 1);

    double log_sum = log_mag(first(best_j, 0));
    for (int i = 1; i < n; ++i) {
        const auto& hop = stack.hop(i + 1);
        const auto& nxt = suffix[static_cast<std::size_t>(i)];
        const int prev = sol.indices.back() - 1;
        double best = kNegInf;
        int pick = -1;
        for (Eigen::Index k = 0; k < hop.rows(); ++k) {
            const double w = log_mag(hop(k, prev));
            const double cand = (w == kNegInf || nxt[static_cast<std::size_t>(k)] == kNegInf)
                                    ? kNegInf
                                    : w + nxt[static_cast<std::size_t>(k)];
            if (cand > best) {
                best = cand;
                pick = static_cast<int>(k);
            }
        }
        sol.indices.push_back(pick + 1);
        log_sum += log_mag(hop(pick, prev));
    }
    log_sum += log_mag(stack.hop(n + 1)(0, sol.indices.back() - 1));

    double log_beta = 0.0;
    for (double b : betas) log_beta += std::log(b);
    sol.log_objective = log_sum + log_beta;
    sol.objective = std::exp(sol.log_objective);
    return sol;
}

namespace {

// feasible gain vectors for one layer under a discrete policy
std::vector<RealVector> discrete_candidates(const LayerPolicy& policy, int m) {
    std::vector<RealVector> out;
    switch (policy.set) {
        case ActivationSet::BallInf: {
            // box vertices; the per-layer restriction of the objective is
            // linear, so the optimum over the box lies at a vertex
            const std::uint64_t count = 1ull << m;
            out.reserve(count);
            for (std::uint64_t mask = 0; mask < count; ++mask) {
                RealVector a = RealVector::Zero(m);
                for (int j = 0; j < m; ++j) {
                    if (mask & (1ull << j)) a[j] = policy.beta;
                }
                out.push_back(std::move(a));
            }
            break;
        }
        case ActivationSet::AtMostK: {
            const std::uint64_t count = 1ull << m;
            for (std::uint64_t mask = 0; mask < count; ++mask) {
                if (std::popcount(mask) > policy.k) continue;
                RealVector a = RealVector::Zero(m);
                for (int j = 0; j < m; ++j) {
                    if (mask & (1ull << j)) a[j] = policy.beta;
                }
                out.push_back(std::move(a));
            }
            break;
        }
        case ActivationSet::SelectOne: {
            out.push_back(RealVector::Zero(m));
            for (int j = 0; j < m; ++j) {
                RealVector a = RealVector::Zero(m);
                a[j] = policy.beta;
                out.push_back(std::move(a));
            }
            break;
        }
        case ActivationSet::Ball2:
            throw std::invalid_argument(
                "exhaustive_discrete_optimum: Ball2 is continuous, not enumerable");
    }
    return out;
}

void enumerate(const ChannelStack& stack, const std::vector<std::vector<RealVector>>& candidates,
               int layer, const ComplexVector& carried, double& best) {
    const int n = stack.layer_count();
    if (layer > n) {
        best = std::max(best, std::norm(carried[0]));
        return;
    }
    for (const RealVector& alpha : candidates[static_cast<std::size_t>(layer) - 1]) {
        const ComplexVector next = stack.hop(layer + 1) * carried.cwiseProduct(alpha.cast<Complex>());
        enumerate(stack, candidates, layer + 1, next, best);
    }
}

}  // namespace

double exhaustive_discrete_optimum(const ChannelStack& stack, const ActivationPolicy& policy,
                                   std::uint64_t max_combinations) {
    stack.validate();
    const int n = stack.layer_count();
    if (static_cast<int>(policy.size()) != n) {
        throw std::invalid_argument("exhaustive_discrete_optimum: policy length != layer count");
    }
    std::vector<std::vector<RealVector>> candidates;
    candidates.reserve(static_cast<std::size_t>(n));
    std::uint64_t combinations = 1;
    for (int i = 1; i <= n; ++i) {
        const int m = stack.layer_size(i);
        if (m > 30) throw std::length_error("exhaustive_discrete_optimum: layer too wide");
        candidates.push_back(discrete_candidates(policy[static_cast<std::size_t>(i) - 1], m));
        const std::uint64_t c = candidates.back().size();
        if (combinations > max_combinations / c) {
            throw std::length_error("exhaustive_discrete_optimum: too many feasible combinations");
        }
        combinations *= c;
    }
    double best = 0.0;
    enumerate(stack, candidates, 1, stack.hop(1), best);
    return best;
}

TransmissionResult simulate_transmission(const ChannelStack& stack,
                                         const AmplificationProfile& profile,
                                         const NoiseModel& noise, LinkDirection direction,
                                         Complex symbol, long draws, std::uint64_t seed) {
    stack.validate();
    const int n = stack.layer_count();
    if (profile.layer_count() != n) {
        throw std::invalid_argument("simulate_transmission: profile/stack layer mismatch");
    }
    if (noise.sigmas.size() != static_cast<std::size_t>(n) + 2) {
        throw std::invalid_argument("simulate_transmission: noise model length must be n + 2");
    }
    if (draws < 1) {
        throw std::invalid_argument("simulate_transmission: draws must be >= 1");
    }

    // h_tot is a scalar, so the UL channel h_tot^T equals h_tot
    const Complex noiseless = total_channel(stack, profile) * symbol;

    TransmissionResult result;
    result.received.reserve(static_cast<std::size_t>(draws));
    Rng rng(seed);
    double acc = 0.0;

    for (long d = 0; d < draws; ++d) {
        Complex y;
        if (direction == LinkDirection::Downlink) {
            ComplexVector v = stack.hop(1) * symbol;
            for (int i = 1; i <= n; ++i) {
                const double s = noise.layer(i);
                for (Eigen::Index j = 0; j < v.size(); ++j) v[j] += s * rng.complex_gaussian();
                v = stack.hop(i + 1) * v.cwiseProduct(profile.layer(i).cast<Complex>());
            }
            y = v[0] + noise.ue() * rng.complex_gaussian();
        } else {
            ComplexVector v = stack.hop(n + 1).transpose() * symbol;
            for (int i = n; i >= 1; --i) {
                const double s = noise.layer(i);
                for (Eigen::Index j = 0; j < v.size(); ++j) v[j] += s * rng.complex_gaussian();
                v = stack.hop(i).transpose() * v.cwiseProduct(profile.layer(i).cast<Complex>());
            }
            y = v[0] + noise.bs() * rng.complex_gaussian();
        }
        result.received.push_back(y);
        acc += std::norm(y - noiseless);
    }
    result.noise_variance = acc / static_cast<double>(draws);
    return result;
}

}  // namespace polarnet
