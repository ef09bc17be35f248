#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string_view>
#include <cstring>

#include "quasipd/kernels.hpp"
#include "quasipd/synth.hpp"

using namespace quasipd;
using kernels::Isa;

namespace {

std::vector<double> random_vector(synth::XorShift64Star& rng, std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = lo + (hi - lo) * rng.uniform();
    return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

double naive_second_diff_sq(const std::vector<double>& x) {
    long double s = 0;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const long double d = static_cast<long double>(x[i - 1]) - 2.0L * x[i] + x[i + 1];
        s += d * d;
    }
    return static_cast<double>(s);
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar kernels match naive formulas") {
    synth::XorShift64Star rng(3);
    const auto& k = kernels::table(Isa::Scalar);
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 16u, 33u, 129u}) {
        const auto x = random_vector(rng, n, -3.0, 3.0);
        CHECK(k.second_diff_sq_sum(x.data(), n) == doctest::Approx(naive_second_diff_sq(x)).epsilon(1e-12));

        // g += s * D^T D x, compared against explicit D^T (D x)
        std::vector<double> g(n, 1.0), expect(n, 1.0);
        k.second_diff_normal_apply(x.data(), g.data(), n, 0.75);
        if (n >= 3) {
            std::vector<double> d(n - 2);
            for (std::size_t i = 0; i + 2 < n; ++i) d[i] = x[i] - 2 * x[i + 1] + x[i + 2];
            for (std::size_t i = 0; i + 2 < n; ++i) {
                expect[i] += 0.75 * d[i];
                expect[i + 1] -= 1.5 * d[i];
                expect[i + 2] += 0.75 * d[i];
            }
        }
        for (std::size_t i = 0; i < n; ++i) CHECK(g[i] == doctest::Approx(expect[i]).epsilon(1e-12));
    }
}

TEST_CASE("every available ISA agrees with the scalar reference") {
    synth::XorShift64Star rng(11);
    const auto& ref = kernels::table(Isa::Scalar);
    for (Isa isa : {Isa::Avx2, Isa::Neon}) {
        if (!kernels::isa_available(isa)) {
            MESSAGE("skipping ", std::string(kernels::isa_name(isa)), ": not available on this machine");
            continue;
        }
        const auto& k = kernels::table(isa);
        CHECK(k.isa == isa);
        for (std::size_t n = 0; n < 70; ++n) {
            CAPTURE(n);
            const auto x = random_vector(rng, n, -5.0, 5.0);
            const auto y = random_vector(rng, n, -5.0, 5.0);

            // reductions: same value up to summation order
            const double a = ref.second_diff_sq_sum(x.data(), n), b = k.second_diff_sq_sum(x.data(), n);
            CHECK(std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(a)));
            const double c = ref.sq_dev_sum(x.data(), n, 0.3), d = k.sq_dev_sum(x.data(), n, 0.3);
            CHECK(std::fabs(c - d) <= 1e-12 * std::max(1.0, std::fabs(c)));
            const double e = ref.dot(x.data(), y.data(), n), f = k.dot(x.data(), y.data(), n);
            CHECK(std::fabs(e - f) <= 1e-12 * std::max(1.0, std::fabs(e)) + 1e-12);

            // elementwise: bit for bit
            std::vector<double> g1(y), g2(y);
            ref.second_diff_normal_apply(x.data(), g1.data(), n, 1.7);
            k.second_diff_normal_apply(x.data(), g2.data(), n, 1.7);
            CHECK(bitwise_equal(g1, g2));

            if (n >= 1) {
                const auto E = random_vector(rng, n + 1, 500.0, 1500.0);
                const auto npl = random_vector(rng, n + 1, 1.0, 100.0);
                const auto p = random_vector(rng, n, 0.0, 0.05);
                std::vector<double> r1(n), r2(n);
                ref.implied_r(E.data(), npl.data(), p.data(), r1.data(), n);
                k.implied_r(E.data(), npl.data(), p.data(), r2.data(), n);
                CHECK(bitwise_equal(r1, r2));
            }
        }
    }
}

TEST_CASE("dispatch picks an available table") {
    const auto& k = kernels::active();
    CHECK(kernels::isa_available(k.isa));
    CHECK(kernels::isa_available(Isa::Scalar));
    CHECK(kernels::isa_name(Isa::Scalar) == "scalar");
    if (const char* forced = std::getenv("QUASIPD_KERNELS"); forced && std::string_view(forced) == "scalar") {
        CHECK(k.isa == Isa::Scalar);
    }
}

}
