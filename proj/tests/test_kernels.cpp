#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "coflow/kernels.hpp"

using namespace coflow;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

bool close(double a, double b) {
    if (a == b) return true;   // covers the empty-input infinities
    const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= 1e-12 * scale;
}

}  // namespace

TEST_CASE("scalar kernel semantics") {
    kernels::force_backend(kernels::Backend::Scalar);
    const double x[] = {1.0, 2.0, 3.0, 4.0, 5.0};
    const double s[] = {2.0, 1.0, 0.5, 0.25, 0.1};
    CHECK(kernels::sum(x, 5) == 15.0);
    CHECK(kernels::sum_sq(x, 5) == 55.0);
    CHECK(kernels::max_val(x, 5) == 5.0);
    // prefixes 1,3,6,10,15 scaled: 2,3,3,2.5,1.5
    CHECK(kernels::scaled_prefix_max(x, s, 5) == 3.0);
    const double d[] = {2.0, 3.0, 5.0, 11.0, 14.0};
    // slacks: 1,0,-1,1,-1
    CHECK(kernels::min_prefix_slack(x, d, 5) == -1.0);
    CHECK(kernels::scaled_prefix_max(x, s, 0) == 0.0);
    kernels::reset_backend();
}

TEST_CASE("simd backends agree with the scalar reference") {
    const bool have_avx2 = kernels::force_backend(kernels::Backend::Avx2);
    kernels::reset_backend();
    if (!have_avx2) {
        MESSAGE("avx2 unavailable; dispatch check only");
        CHECK(kernels::active_backend() == kernels::Backend::Scalar);
        return;
    }

    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const size_t n = static_cast<size_t>(rng() % 40);
        const auto x = random_vec(rng, n, 0.0, 50.0);
        const auto s = random_vec(rng, n, 0.0, 3.0);
        const auto d = random_vec(rng, n, 0.0, 200.0);

        kernels::force_backend(kernels::Backend::Scalar);
        const double sum_ref = kernels::sum(x.data(), n);
        const double sq_ref = kernels::sum_sq(x.data(), n);
        const double max_ref = n ? kernels::max_val(x.data(), n) : 0.0;
        const double spm_ref = kernels::scaled_prefix_max(x.data(), s.data(), n);
        const double mps_ref = kernels::min_prefix_slack(x.data(), d.data(), n);

        REQUIRE(kernels::force_backend(kernels::Backend::Avx2));
        CHECK(close(kernels::sum(x.data(), n), sum_ref));
        CHECK(close(kernels::sum_sq(x.data(), n), sq_ref));
        if (n) CHECK(kernels::max_val(x.data(), n) == max_ref);
        CHECK(close(kernels::scaled_prefix_max(x.data(), s.data(), n), spm_ref));
        CHECK(close(kernels::min_prefix_slack(x.data(), d.data(), n), mps_ref));
    }
    kernels::reset_backend();
}

TEST_CASE("runtime detection picks a working backend") {
    kernels::reset_backend();
    const auto b = kernels::active_backend();
    CHECK((b == kernels::Backend::Scalar || b == kernels::Backend::Avx2));
    const double x[] = {1.0, 1.0};
    CHECK(kernels::sum(x, 2) == 2.0);
}
