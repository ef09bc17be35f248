#include <doctest.h>

#include "quasipd/balance.hpp"
#include "quasipd/error.hpp"
#include "quasipd/pd_filter.hpp"
#include "quasipd/synth.hpp"
#include "support.hpp"

using namespace quasipd;

namespace {

// Objective written out directly from its definition, in long double.
double oracle_objective(const std::vector<double>& P, const SegmentSeries& seg, const FilterParams& fp) {
    const auto E = seg.E.require_dense("E");
    const auto N = seg.NPL.require_dense("NPL");
    const std::size_t m = P.size();
    std::vector<long double> x(m);
    for (std::size_t i = 0; i < m; ++i) x[i] = std::log(1.0L / P[i] - 1.0L);
    long double smooth = 0, pen = 0;
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const long double d = x[i + 1] - 2 * x[i] + x[i - 1];
        smooth += d * d;
    }
    for (std::size_t i = 0; i < m; ++i) {
        const long double r = (P[i] * (static_cast<long double>(E[i]) - N[i]) - (static_cast<long double>(N[i + 1]) - N[i])) / N[i];
        pen += (r - fp.rr) * (r - fp.rr);
    }
    return static_cast<double>(smooth + fp.lambda * pen);
}

SegmentSeries random_segment(synth::XorShift64Star& rng, std::size_t n) {
    std::vector<double> E(n), P(n - 1), R(n - 1);
    for (double& e : E) e = 800.0 + 400.0 * rng.uniform();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        P[i] = 0.002 + 0.01 * rng.uniform();
        R[i] = 0.2 + 0.3 * rng.uniform();
    }
    const auto npl = forward_npl(E, 10.0 + 10.0 * rng.uniform(), P, R);
    const MonthIndex start(2015, 1);
    return SegmentSeries::make("rand", MonthlySeries::dense(start, E), MonthlySeries::dense(start, npl));
}

// Affine logit hazards with R identically RR: the objective's zero set.
synth::SynthBundle affine_bundle(int months, double rr) {
    synth::SynthSpec s;
    s.months = months;
    s.P = synth::HumpedP{0.004, 0.01, {}};
    s.R = synth::ConstantR{rr};
    return synth::generate(s);
}

}  // namespace

TEST_SUITE("pd_filter") {

TEST_CASE("logit transform round trips") {
    const std::vector<double> p{1e-6, 0.003, 0.5, 0.97};
    const auto back = from_logit(to_logit(p));
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(back[i] == doctest::Approx(p[i]).epsilon(1e-12));
    CHECK_THROWS_AS(to_logit(std::vector<double>{0.0}), Error);
    CHECK_THROWS_AS(to_logit(std::vector<double>{1.0}), Error);
}

TEST_CASE("objective matches its definition") {
    synth::XorShift64Star rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const auto seg = random_segment(rng, 5 + trial * 7);
        std::vector<double> P(seg.size() - 1);
        for (double& p : P) p = 0.001 + 0.05 * rng.uniform();
        const FilterParams fp{0.1 + 0.8 * rng.uniform(), 0.01 + 10.0 * rng.uniform()};
        const double want = oracle_objective(P, seg, fp);
        CHECK(objective(P, seg, fp) == doctest::Approx(want).epsilon(1e-11));
    }
}

TEST_CASE("objective vanishes on affine logit with R equal to RR") {
    const auto b = affine_bundle(60, 0.3442);
    CHECK(objective(b.truth.P, b.segment, {0.3442, 1.0}) <= 1e-16);
    const auto g = gradient(b.truth.P, b.segment, {0.3442, 1.0});
    for (double v : g) CHECK(std::fabs(v) < 1e-9);
}

TEST_CASE("with lambda zero an affine profile costs nothing whatever R is") {
    synth::XorShift64Star rng(1);
    const auto seg = random_segment(rng, 30);
    std::vector<double> x(29);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 5.0 - 0.03 * static_cast<double>(i);
    CHECK(objective(from_logit(x), seg, {0.5, 0.0}) <= 1e-20);
}

TEST_CASE("single interior bump adds 6 delta squared") {
    synth::XorShift64Star rng(2);
    const auto seg = random_segment(rng, 20);
    std::vector<double> x(19);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 5.0 + 0.02 * static_cast<double>(i);
    const double delta = 0.125;
    for (std::size_t k = 2; k + 2 < x.size(); ++k) {
        auto y = x;
        y[k] += delta;
        const FilterProblem prob(seg);
        CHECK(prob.objective_x(y, {0.3, 0.0}) == doctest::Approx(6.0 * delta * delta).epsilon(1e-10));
    }
}

TEST_CASE("gradient matches central differences") {
    synth::XorShift64Star rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const auto seg = random_segment(rng, 11);  // 10 hazards
        const FilterProblem prob(seg);
        const FilterParams fp{0.2 + 0.4 * rng.uniform(), 0.1 + 5.0 * rng.uniform()};
        std::vector<double> x(10);
        for (double& v : x) v = 3.0 + 3.0 * rng.uniform();
        std::vector<double> g(10);
        prob.gradient_x(x, fp, g);
        double scale = 0.0;
        for (double v : g) scale = std::max(scale, std::fabs(v));
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double h = 1e-6;
            auto up = x, dn = x;
            up[i] += h;
            dn[i] -= h;
            const double fd = (prob.objective_x(up, fp) - prob.objective_x(dn, fp)) / (2 * h);
            CHECK(std::fabs(g[i] - fd) <= 1e-5 * std::max(std::fabs(fd), 1e-3 * scale));
        }
    }
}

TEST_CASE("with lambda zero the gradient ignores RR") {
    synth::XorShift64Star rng(4);
    const auto seg = random_segment(rng, 25);
    std::vector<double> P(24);
    for (double& p : P) p = 0.001 + 0.03 * rng.uniform();
    CHECK(gradient(P, seg, {0.1, 0.0}) == gradient(P, seg, {0.9, 0.0}));
}

TEST_CASE("parameter validation") {
    const auto b = affine_bundle(20, 0.3);
    CHECK_THROWS_AS(objective(b.truth.P, b.segment, {0.0, 1.0}), Error);
    CHECK_THROWS_AS(objective(b.truth.P, b.segment, {1.0, 1.0}), Error);
    CHECK_THROWS_AS(objective(b.truth.P, b.segment, {0.3, -1.0}), Error);
    CHECK_THROWS_AS(solve(b.segment, {0.3, 0.0}), Error);
    CHECK_THROWS_AS(objective(std::vector<double>(5, 0.01), b.segment, {0.3, 1.0}), Error);
}

TEST_CASE("solve starting on the zero set stops at once") {
    const auto b = affine_bundle(130, 0.3442);
    SolverSettings s;
    s.initial = init::Explicit{b.truth.P};
    const FilterResult r = solve(b.segment, {0.3442, 1.0}, s);
    CHECK(r.iterations <= 2);
    CHECK(r.objective <= 1e-16);
}

TEST_CASE("solve recovers humped hazards") {
    const auto b = synth::generate(testing::humped_spec());
    const FilterResult r = solve(b.segment, {0.3442, 1.0});
    CHECK(r.objective <= r.initial_objective);
    CHECK(r.gradient_norm < 1e-8);
    const auto pd = annualize(r.solution.P, r.solution.start);
    CHECK(pd.start == b.true_annual_pd.start);
    CHECK(testing::pearson_r2(pd.PD, b.true_annual_pd.PD) >= 0.99);
    // R follows from P through the balance identity
    const auto R = implied_R(b.segment.E.require_dense("E"), b.segment.NPL.require_dense("NPL"), r.solution.P);
    CHECK(testing::max_abs_diff(R, r.solution.R) < 1e-12);
}

TEST_CASE("solve with noisy recoveries still tracks the truth") {
    auto spec = testing::humped_spec();
    spec.R = synth::NoisyR{0.3442, 0.05, 7};
    const auto b = synth::generate(spec);
    const FilterResult r = solve(b.segment, {0.3442, 1.0});
    const auto pd = annualize(r.solution.P, r.solution.start);
    CHECK(testing::pearson_r2(pd.PD, b.true_annual_pd.PD) >= 0.95);
}

TEST_CASE("initial guesses all reach the same minimum") {
    const auto b = synth::generate(testing::humped_spec(60));
    const FilterParams fp{0.3442, 0.5};
    const double a = solve(b.segment, fp).objective;
    SolverSettings flat;
    flat.initial = init::Flat{0.01};
    const double c = solve(b.segment, fp, flat).objective;
    CHECK(c == doctest::Approx(a).epsilon(1e-6));
}

TEST_CASE("two months: only the recovery term is left") {
    const MonthIndex start(2020, 1);
    const auto seg = SegmentSeries::make("two", MonthlySeries::dense(start, std::vector<double>{1000, 1000}),
                                         MonthlySeries::dense(start, std::vector<double>{20, 21}));
    const FilterParams fp{0.3, 1.0};
    const FilterResult r = solve(seg, fp);
    CHECK(r.solution.R[0] == doctest::Approx(0.3).epsilon(1e-6));
    // grid oracle over P_1
    double best = 1e300, best_p = 0;
    for (int k = 1; k < 200000; ++k) {
        const double p = k / 200000.0 * 0.05;
        const double f = objective(std::vector<double>{p}, seg, fp);
        if (f < best) {
            best = f;
            best_p = p;
        }
    }
    CHECK(r.solution.P[0] == doctest::Approx(best_p).epsilon(1e-4));
    CHECK(r.objective <= best + 1e-12);
}

TEST_CASE("growing lambda pulls R towards RR") {
    auto spec = testing::humped_spec(80);
    spec.R = synth::NoisyR{0.3442, 0.05, 3};
    const auto b = synth::generate(spec);
    double prev_max = 1e300, prev_ss = 1e300;
    for (int k = -4; k <= 12; ++k) {
        const double lambda = std::ldexp(1.0, k);
        const FilterResult r = solve(b.segment, {0.3442, lambda});
        double dev = 0.0, ss = 0.0;
        for (double v : r.solution.R) {
            dev = std::max(dev, std::fabs(v - 0.3442));
            ss += (v - 0.3442) * (v - 0.3442);
        }
        CAPTURE(lambda);
        CHECK(ss < prev_ss);
        // the worst month only settles into a steady decline once lambda is large
        if (k >= 6) CHECK(dev < prev_max);
        prev_max = dev;
        prev_ss = ss;
    }
}

TEST_CASE("iteration cap raises non-convergence with the last iterate") {
    const auto b = synth::generate(testing::humped_spec());
    SolverSettings s;
    s.max_iterations = 1;
    try {
        (void)solve(b.segment, {0.3442, 1.0}, s);
        FAIL("expected non-convergence");
    } catch (const NonConvergence& e) {
        CHECK(e.kind() == ErrorKind::Numerical);
        CHECK(e.last().iterations == 1);
        CHECK(e.last().solution.P.size() == b.segment.size() - 1);
    }
}

TEST_CASE("annualize closed forms") {
    const MonthIndex start(2019, 1);
    const auto c = annualize(std::vector<double>(24, 0.01), start);
    CHECK(c.start.to_string() == "2019-12");
    CHECK(c.PD.size() == 13);
    for (double v : c.PD) CHECK(std::fabs(v - (1.0 - std::pow(0.99, 12))) <= 1e-10);
    CHECK(std::fabs(c.PD[0] - 0.1136152) < 1e-7);

    for (double v : annualize(std::vector<double>(15, 0.0), start).PD) CHECK(v == 0.0);

    std::vector<double> spike(30, 0.01);
    spike[14] = 1.0;
    const auto s = annualize(spike, start);
    for (std::size_t j = 0; j < s.PD.size(); ++j) {
        const bool covers = j <= 14 && j + 11 >= 14;
        if (covers) CHECK(s.PD[j] == 1.0);
        else CHECK(s.PD[j] < 1.0);
    }
    CHECK_THROWS_AS(annualize(std::vector<double>(11, 0.01), start), Error);
    CHECK_THROWS_AS(annualize(std::vector<double>(12, 1.5), start), Error);
}

TEST_CASE("annualized PD is monotone in every hazard") {
    synth::XorShift64Star rng(12);
    std::vector<double> P(30);
    for (double& p : P) p = 0.05 * rng.uniform();
    const auto base = annualize(P, MonthIndex(2019, 1));
    for (std::size_t k = 0; k < P.size(); ++k) {
        auto Q = P;
        Q[k] += 0.01;
        const auto up = annualize(Q, MonthIndex(2019, 1));
        for (std::size_t j = 0; j < up.PD.size(); ++j) CHECK(up.PD[j] >= base.PD[j]);
    }
}

}
