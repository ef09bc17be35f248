#include <doctest.h>

#include "quasipd/banded.hpp"
#include "quasipd/error.hpp"
#include "quasipd/hp_filter.hpp"
#include "support.hpp"

using namespace quasipd;
using testing::dense;
using testing::values;

namespace {

// (I + lambda D^T D) t = y assembled densely.
std::vector<double> dense_hp(const std::vector<double>& y, double lambda) {
    const std::size_t n = y.size();
    std::vector<std::vector<long double>> a(n, std::vector<long double>(n, 0.0L));
    for (std::size_t i = 0; i < n; ++i) a[i][i] = 1.0L;
    for (std::size_t r = 0; r + 2 < n; ++r) {
        const long double d[3] = {1.0L, -2.0L, 1.0L};
        for (int p = 0; p < 3; ++p)
            for (int q = 0; q < 3; ++q) a[r + p][r + q] += lambda * d[p] * d[q];
    }
    return testing::dense_solve(a, std::vector<long double>(y.begin(), y.end()));
}

}  // namespace

TEST_SUITE("hp_filter") {

TEST_CASE("pentadiagonal solve matches a dense solve") {
    synth::XorShift64Star rng(5);
    for (std::size_t n : {1u, 2u, 3u, 6u, 25u}) {
        SymmetricPentadiagonal a(n);
        std::vector<std::vector<long double>> d(n, std::vector<long double>(n, 0.0L));
        for (std::size_t i = 0; i < n; ++i) {
            a.diag[i] = 10.0 + rng.uniform();
            d[i][i] = a.diag[i];
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            a.off1[i] = rng.uniform() - 0.5;
            d[i][i + 1] = d[i + 1][i] = a.off1[i];
        }
        for (std::size_t i = 0; i + 2 < n; ++i) {
            a.off2[i] = rng.uniform() - 0.5;
            d[i][i + 2] = d[i + 2][i] = a.off2[i];
        }
        std::vector<double> b(n);
        for (double& v : b) v = rng.uniform();
        const auto x = solve_pentadiagonal(a, b);
        const auto ref = testing::dense_solve(d, std::vector<long double>(b.begin(), b.end()));
        CHECK(testing::max_abs_diff(x, ref) < 1e-13);
    }
}

TEST_CASE("singular banded system is a numerical error") {
    SymmetricPentadiagonal a(4);
    a.add_second_difference_penalty(1.0);  // D^T D alone has a 2-dimensional null space
    const std::vector<double> b{1, 2, 3, 4};
    try {
        (void)solve_pentadiagonal(a, b);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Numerical);
    }
}

TEST_CASE("hp trend equals the dense solve") {
    synth::XorShift64Star rng(17);
    for (std::size_t n : {3u, 4u, 10u, 31u, 50u}) {
        for (double lambda : {0.5, 100.0, 129600.0}) {
            std::vector<double> y(n);
            for (double& v : y) v = 50.0 + 10.0 * rng.uniform();
            const auto t = hp_trend(y, {lambda});
            const auto ref = dense_hp(y, lambda);
            for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(t[i] - ref[i]) <= 1e-8 * std::fabs(ref[i]));
        }
    }
}

TEST_CASE("constant and linear inputs are fixed points") {
    for (double lambda : {1e-3, 1.0, 129600.0, 1e8}) {
        const auto c = hp_trend(std::vector<double>{5, 5, 5, 5}, {lambda});
        for (double v : c) CHECK(v == doctest::Approx(5.0).epsilon(1e-12));
        const std::vector<double> lin{1, 2, 3, 4, 5};
        const auto l = hp_trend(lin, {lambda});
        for (std::size_t i = 0; i < lin.size(); ++i) CHECK(l[i] == doctest::Approx(lin[i]).epsilon(1e-10));
    }
}

TEST_CASE("vanishing penalty returns the input and the mean is preserved") {
    synth::XorShift64Star rng(23);
    std::vector<double> y(40);
    for (double& v : y) v = rng.uniform();
    const auto t0 = hp_trend(y, {1e-12});
    CHECK(testing::max_abs_diff(t0, y) < 1e-6);
    for (double lambda : {1.0, 1600.0, 129600.0}) {
        const auto t = hp_trend(y, {lambda});
        double sy = 0, st = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            sy += y[i];
            st += t[i];
        }
        CHECK(std::fabs(sy - st) / y.size() < 1e-10);
    }
}

TEST_CASE("hp input validation") {
    CHECK_THROWS_AS(hp_trend(std::vector<double>{1, 2}, {}), Error);
    CHECK_THROWS_AS(hp_trend(std::vector<double>{1, 2, 3}, {-1.0}), Error);
}

TEST_CASE("gap filling") {
    const auto full = dense("2019-01", {1, 4, 2, 8});
    CHECK(fill_gaps(full, {}) == full);

    for (double lambda : {0.1, 129600.0}) {
        const MonthlySeries s(MonthIndex(2019, 1), {10.0, std::nullopt, 12.0});
        const auto f = fill_gaps(s, {lambda});
        CHECK(*f[1] == doctest::Approx(11.0).epsilon(1e-12));
        CHECK(*f[0] == 10.0);
        CHECK(*f[2] == 12.0);
    }
    CHECK_THROWS_AS(fill_gaps(MonthlySeries(MonthIndex(2019, 1), {std::nullopt, 10.0, 12.0}), {}), Error);
    CHECK_THROWS_AS(fill_gaps(MonthlySeries(MonthIndex(2019, 1), {10.0, 12.0, std::nullopt}), {}), Error);
}

TEST_CASE("gap filling keeps observed values and interpolates a line exactly") {
    std::vector<Observation> v;
    for (int i = 0; i < 20; ++i) v.emplace_back(3.0 + 0.5 * i);
    v[4].reset();
    v[5].reset();
    v[13].reset();
    const auto f = fill_gaps(MonthlySeries(MonthIndex(2019, 1), v), {});
    for (int i = 0; i < 20; ++i) CHECK(*f[i] == doctest::Approx(3.0 + 0.5 * i).epsilon(1e-9));
}

}
