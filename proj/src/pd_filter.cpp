#include "quasipd/pd_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "quasipd/banded.hpp"
#include "quasipd/kernels.hpp"

namespace quasipd {
namespace {

constexpr double kInitEpsilon = 1e-6;

void check_params(const FilterParams& params) {
    require(std::isfinite(params.rr) && params.rr > 0.0 && params.rr < 1.0, ErrorKind::Input,
            "RR must lie in (0,1), got " + std::to_string(params.rr));
    require(std::isfinite(params.lambda) && params.lambda >= 0.0, ErrorKind::Input,
            "lambda must be non-negative, got " + std::to_string(params.lambda));
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

std::vector<double> to_logit(std::span<const double> P) {
    std::vector<double> x(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) {
        require(P[i] > 0.0 && P[i] < 1.0, ErrorKind::Input, "hazard outside (0,1) at position " + std::to_string(i));
        x[i] = std::log1p(-P[i]) - std::log(P[i]);
    }
    return x;
}

std::vector<double> from_logit(std::span<const double> x) {
    std::vector<double> P(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) P[i] = 1.0 / (1.0 + std::exp(x[i]));
    return P;
}

FilterProblem::FilterProblem(const SegmentSeries& segment)
    : start_(segment.start()), e_(segment.E.require_dense("E")), npl_(segment.NPL.require_dense("NPL")) {
    require(npl_.size() >= 2, ErrorKind::Input, "segment '" + segment.segment_id + "' needs at least two months");
    exposure_ratio_.resize(npl_.size() - 1);
    for (std::size_t i = 0; i + 1 < npl_.size(); ++i) {
        if (npl_[i] <= 0.0) {
            fail(ErrorKind::Numerical, "segment '" + segment.segment_id + "': zero overdue debt at " +
                                           start_.plus(static_cast<long>(i)).to_string() + ", recovery share undefined");
        }
        exposure_ratio_[i] = (e_[i] - npl_[i]) / npl_[i];
    }
}

double FilterProblem::objective_x(std::span<const double> x, const FilterParams& params) const {
    const std::size_t m = hazard_count();
    require(x.size() == m, ErrorKind::Input, "objective: expected " + std::to_string(m) + " hazards");
    const std::vector<double> P = from_logit(x);
    for (double p : P) {
        if (!(p > 0.0 && p < 1.0)) return std::numeric_limits<double>::infinity();
    }
    std::vector<double> R(m);
    kernels::implied_r(e_, npl_, P, R);
    const double smooth = kernels::second_diff_sq_sum(x);
    return params.lambda == 0.0 ? smooth : smooth + params.lambda * kernels::sq_dev_sum(R, params.rr);
}

void FilterProblem::gradient_x(std::span<const double> x, const FilterParams& params, std::span<double> grad) const {
    const std::size_t m = hazard_count();
    require(x.size() == m && grad.size() == m, ErrorKind::Input, "gradient: size mismatch");
    std::fill(grad.begin(), grad.end(), 0.0);
    kernels::second_diff_normal_apply(x, grad, 2.0);
    if (params.lambda == 0.0) return;
    const std::vector<double> P = from_logit(x);
    std::vector<double> R(m);
    kernels::implied_r(e_, npl_, P, R);
    for (std::size_t i = 0; i < m; ++i) {
        const double dp_dx = -P[i] * (1.0 - P[i]);
        grad[i] += 2.0 * params.lambda * (R[i] - params.rr) * exposure_ratio_[i] * dp_dx;
    }
}

std::vector<double> FilterProblem::initial_hazards(const InitialGuess& guess) const {
    const std::size_t m = hazard_count();
    if (const auto* flat = std::get_if<init::Flat>(&guess)) {
        require(flat->value > 0.0 && flat->value < 1.0, ErrorKind::Input, "flat initial hazard must lie in (0,1)");
        return std::vector<double>(m, flat->value);
    }
    if (const auto* given = std::get_if<init::Explicit>(&guess)) {
        require(given->P.size() == m, ErrorKind::Input, "explicit initial hazards: expected " + std::to_string(m) + " values");
        for (double p : given->P) require(p > 0.0 && p < 1.0, ErrorKind::Input, "explicit initial hazard outside (0,1)");
        return given->P;
    }
    std::vector<double> P(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double inflow = std::max(npl_[i + 1] - npl_[i], kInitEpsilon);
        const double performing = e_[i] - npl_[i];
        const double p = performing > 0.0 ? inflow / performing : 1.0;
        P[i] = std::clamp(p, kInitEpsilon, 1.0 - kInitEpsilon);
    }
    return P;
}

double objective(std::span<const double> P, const SegmentSeries& segment, const FilterParams& params) {
    check_params(params);
    const FilterProblem problem(segment);
    return problem.objective_x(to_logit(P), params);
}

std::vector<double> gradient(std::span<const double> P, const SegmentSeries& segment, const FilterParams& params) {
    check_params(params);
    const FilterProblem problem(segment);
    std::vector<double> g(P.size());
    problem.gradient_x(to_logit(P), params, g);
    return g;
}

FilterResult solve(const SegmentSeries& segment, const FilterParams& params, const SolverSettings& settings) {
    return solve(FilterProblem(segment), params, settings);
}

// Damped Gauss-Newton on the stacked residuals (D x, sqrt(lambda) (R - RR)).
// The approximate Hessian D^T D + lambda diag(c^2) + mu I is pentadiagonal, so
// every step is one O(N) banded solve. Steps are globalized by an Armijo
// backtracking line search; mu grows when the search fails.
FilterResult solve(const FilterProblem& problem, const FilterParams& params, const SolverSettings& settings) {
    check_params(params);
    require(params.lambda > 0.0, ErrorKind::Input, "solve: lambda must be positive");
    require(settings.max_iterations >= 1, ErrorKind::Input, "solve: max_iterations must be at least 1");
    require(settings.gradient_tolerance > 0.0, ErrorKind::Input, "solve: gradient_tolerance must be positive");

    const std::size_t m = problem.hazard_count();
    std::vector<double> x = to_logit(problem.initial_hazards(settings.initial));
    std::vector<double> g(m), trial(m), step(m);
    std::vector<double> ratio(m);
    {
        const auto E = problem.E();
        const auto N = problem.NPL();
        for (std::size_t i = 0; i < m; ++i) ratio[i] = (E[i] - N[i]) / N[i];
    }

    double f = problem.objective_x(x, params);
    require(std::isfinite(f), ErrorKind::Numerical, "solve: objective not finite at the initial hazards");
    problem.gradient_x(x, params, g);

    FilterResult result;
    result.initial_objective = f;
    double mu = 0.0;
    bool converged = false;
    int iter = 0;

    auto finish = [&](int iterations) {
        result.solution.start = problem.start();
        result.solution.P = from_logit(x);
        result.solution.R = implied_R(problem.E(), problem.NPL(), result.solution.P, problem.start());
        result.objective = f;
        result.gradient_norm = max_abs(g);
        result.iterations = iterations;
    };

    while (true) {
        if (max_abs(g) < settings.gradient_tolerance) {
            converged = true;
            break;
        }
        if (iter >= settings.max_iterations) break;

        const std::vector<double> P = from_logit(x);
        SymmetricPentadiagonal hess(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double c = ratio[i] * P[i] * (1.0 - P[i]);
            hess.diag[i] = params.lambda * c * c;
        }
        hess.add_second_difference_penalty(1.0);
        const double diag_scale = std::max(1.0, max_abs(hess.diag));
        const double mu_floor = 1e-12 * diag_scale;

        bool accepted = false;
        bool stalled = false;
        while (!accepted) {
            SymmetricPentadiagonal damped = hess;
            for (double& d : damped.diag) d += std::max(mu, mu_floor);
            std::vector<double> rhs(m);
            for (std::size_t i = 0; i < m; ++i) rhs[i] = -0.5 * g[i];
            step = solve_pentadiagonal(damped, rhs);

            const double slope = kernels::dot(g, step);
            double t = 1.0;
            for (int k = 0; k < 40 && slope < 0.0; ++k, t *= 0.5) {
                for (std::size_t i = 0; i < m; ++i) trial[i] = x[i] + t * step[i];
                const double ft = problem.objective_x(trial, params);
                if (ft <= f + 1e-4 * t * slope) {
                    accepted = true;
                    break;
                }
            }
            if (accepted) {
                mu = t == 1.0 ? mu * 0.25 : std::max(mu * 2.0, mu_floor);
                break;
            }
            mu = std::max(mu * 10.0, 1e-8 * diag_scale);
            if (mu > 1e12 * diag_scale) {
                stalled = true;
                break;
            }
        }
        if (stalled) {
            // No descent left at floating-point resolution: the decrease is zero.
            converged = true;
            break;
        }

        const double f_new = problem.objective_x(trial, params);
        const double decrease = f - f_new;
        x.swap(trial);
        f = f_new;
        problem.gradient_x(x, params, g);
        ++iter;
        if (decrease <= settings.relative_decrease_tolerance * std::abs(f + decrease)) {
            converged = true;
            break;
        }
    }

    finish(iter);
    if (!converged) {
        throw NonConvergence("solve: no convergence after " + std::to_string(iter) + " iterations (gradient max-norm " +
                                 std::to_string(result.gradient_norm) + ")",
                             result);
    }
    return result;
}

AnnualPdSeries annualize(std::span<const double> P, MonthIndex start) {
    require(P.size() >= 12, ErrorKind::Input, "annualize needs at least 12 monthly hazards, got " + std::to_string(P.size()));
    for (std::size_t i = 0; i < P.size(); ++i) {
        require(P[i] >= 0.0 && P[i] <= 1.0, ErrorKind::Input, "annualize: hazard outside [0,1] at " + start.plus(static_cast<long>(i)).to_string());
    }
    AnnualPdSeries out{start.plus(11), std::vector<double>(P.size() - 11)};
    for (std::size_t i = 11; i < P.size(); ++i) {
        double survive = 1.0;
        for (std::size_t k = i - 11; k <= i; ++k) survive *= 1.0 - P[k];
        out.PD[i - 11] = 1.0 - survive;
    }
    return out;
}

}  // namespace quasipd
