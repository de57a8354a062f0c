#include "polarnet/cascade.hpp"
#include "polarnet/policy.hpp"
#include "polarnet/rng.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <complex>
#include <stdexcept>
#include <vector>

using namespace polarnet;
using polarnet::testing::path_sum_channel;
using polarnet::testing::random_stack;

namespace {

AmplificationProfile ones_profile(const ChannelStack& stack) {
    AmplificationProfile p;
    for (int i = 1; i <= stack.layer_count(); ++i) {
        p.alphas.push_back(RealVector::Ones(stack.layer_size(i)));
    }
    return p;
}

AmplificationProfile uniform_profile(const ChannelStack& stack, Rng& rng) {
    AmplificationProfile p;
    for (int i = 1; i <= stack.layer_count(); ++i) {
        RealVector a(stack.layer_size(i));
        for (Eigen::Index j = 0; j < a.size(); ++j) a[j] = rng.uniform();
        p.alphas.push_back(std::move(a));
    }
    return p;
}

}  // namespace

TEST_CASE("total_channel on hand-checkable stacks") {
    SUBCASE("n = 1, m = 1: plain product of the three scalars") {
        ChannelStack stack;
        stack.matrices = {ComplexMatrix::Constant(1, 1, Complex(2.0, 1.0)),
                          ComplexMatrix::Constant(1, 1, Complex(0.0, 3.0))};
        AmplificationProfile profile;
        profile.alphas = {RealVector::Constant(1, 0.5)};
        const Complex expected = Complex(0.0, 3.0) * 0.5 * Complex(2.0, 1.0);
        CHECK(std::abs(total_channel(stack, profile) - expected) < 1e-14);
    }
    SUBCASE("all-ones chain counts the paths") {
        Rng rng(0);
        ChannelStack stack = random_stack({3, 4}, rng);
        for (auto& m : stack.matrices) m.setOnes();
        const auto profile = ones_profile(stack);
        CHECK(std::abs(total_channel(stack, profile) - Complex(12.0, 0.0)) < 1e-12);
    }
}

TEST_CASE("total_channel matches the naive path sum (property)") {
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform_index(4));
        std::vector<int> sizes;
        for (int i = 0; i < n; ++i) sizes.push_back(1 + static_cast<int>(rng.uniform_index(4)));
        const auto stack = random_stack(sizes, rng);
        const auto profile = uniform_profile(stack, rng);
        const Complex fast = total_channel(stack, profile);
        const Complex slow = path_sum_channel(stack, profile);
        CHECK(std::abs(fast - slow) <= 1e-10 * (1.0 + std::abs(slow)));
    }
}

TEST_CASE("observation row reproduces h_tot at every layer") {
    Rng rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform_index(4));
        std::vector<int> sizes;
        for (int i = 0; i < n; ++i) sizes.push_back(1 + static_cast<int>(rng.uniform_index(5)));
        const auto stack = random_stack(sizes, rng);
        const auto profile = uniform_profile(stack, rng);
        const Complex h = total_channel(stack, profile);
        CascadeCache cache(stack, profile);
        for (int i = 1; i <= n; ++i) {
            const ComplexRowVector y = observation_matrix(stack, profile, i, cache);
            const Complex via_y = (y * profile.layer(i).cast<Complex>()).value();
            CHECK(std::abs(via_y - h) <= 1e-10 * (1.0 + std::abs(h)));
        }
    }
}

TEST_CASE("n = 1 observation row is the elementwise hop product") {
    Rng rng(5);
    const auto stack = random_stack({4}, rng);
    const auto profile = uniform_profile(stack, rng);
    CascadeCache cache(stack, profile);
    const ComplexRowVector y = observation_matrix(stack, profile, 1, cache);
    const ComplexRowVector expected =
        stack.hop(2).row(0).cwiseProduct(stack.hop(1).col(0).transpose());
    CHECK((y - expected).norm() < 1e-12);
}

TEST_CASE("incremental refresh matches a from-scratch rebuild") {
    Rng rng(31);
    const auto stack = random_stack({3, 5, 2, 4}, rng);
    auto profile = uniform_profile(stack, rng);
    CascadeCache cache(stack, profile);
    const int n = stack.layer_count();

    // simulate a few alternating passes with random single-layer changes
    for (int pass = 0; pass < 3; ++pass) {
        for (int i = 1; i <= n; ++i) {  // forward sweep
            if (i >= 2) cache.forward_step(i);
            RealVector& a = profile.layer(i);
            for (Eigen::Index j = 0; j < a.size(); ++j) a[j] = rng.uniform();
            cache.mark_layer_updated(i);
        }
        {
            CascadeCache fresh(stack, profile);
            for (int i = 1; i <= n; ++i) {
                CHECK((cache.forward(i) - fresh.forward(i)).norm() <=
                      1e-10 * (1.0 + fresh.forward(i).norm()));
            }
        }
        for (int i = n; i >= 1; --i) {  // backward sweep
            if (i <= n - 1) cache.backward_step(i);
            RealVector& a = profile.layer(i);
            for (Eigen::Index j = 0; j < a.size(); ++j) a[j] = rng.uniform();
            cache.mark_layer_updated(i);
        }
        CascadeCache fresh(stack, profile);
        for (int i = 1; i <= n; ++i) {
            CHECK((cache.backward(i) - fresh.backward(i)).norm() <=
                  1e-10 * (1.0 + fresh.backward(i).norm()));
        }
        cache.rebuild();
    }
}

TEST_CASE("stale entries throw instead of serving wrong data") {
    Rng rng(41);
    const auto stack = random_stack({3, 3, 3}, rng);
    auto profile = uniform_profile(stack, rng);
    CascadeCache cache(stack, profile);
    profile.layer(2).setConstant(0.25);
    cache.mark_layer_updated(2);
    CHECK_THROWS_AS((void)cache.forward(3), std::logic_error);
    CHECK_THROWS_AS((void)cache.backward(1), std::logic_error);
    CHECK_NOTHROW((void)cache.forward(1));
    CHECK_NOTHROW((void)cache.forward(2));
    CHECK_NOTHROW((void)cache.backward(2));
    CHECK_NOTHROW((void)cache.backward(3));
    cache.forward_step(3);
    cache.backward_step(1);
    CHECK_NOTHROW((void)cache.forward(3));
    CHECK_NOTHROW((void)cache.backward(1));
}

TEST_CASE("single refresh step costs O(m^2) multiply-adds") {
    Rng rng(53);
    for (int m : {2, 4, 8, 16}) {
        const auto stack = random_stack({m, m, m}, rng);
        const auto profile = uniform_profile(stack, rng);
        CascadeCache cache(stack, profile);
        const auto before = cache.multiply_add_count();
        cache.mark_layer_updated(1);
        cache.forward_step(2);
        const auto cost = cache.multiply_add_count() - before;
        CHECK(cost <= static_cast<std::uint64_t>(4 * m * m));
        CHECK(cost >= static_cast<std::uint64_t>(m * m));
    }
}

TEST_CASE("degenerate single-repeater layers (m_i = 1 everywhere)") {
    Rng rng(61);
    const auto stack = random_stack({1, 1, 1}, rng);
    const auto profile = uniform_profile(stack, rng);
    const Complex h = total_channel(stack, profile);
    Complex expected = stack.hop(1)(0, 0);
    for (int i = 1; i <= 3; ++i) {
        expected *= profile.layer(i)[0];
        expected *= stack.hop(i + 1)(0, 0);
    }
    CHECK(std::abs(h - expected) < 1e-12 * (1.0 + std::abs(expected)));
    CascadeCache cache(stack, profile);
    for (int i = 1; i <= 3; ++i) {
        const ComplexRowVector y = observation_matrix(stack, profile, i, cache);
        CHECK(std::abs(y[0] * profile.layer(i)[0] - h) < 1e-12 * (1.0 + std::abs(h)));
    }
}
