#pragma once

#include <span>
#include <variant>
#include <vector>

#include "quasipd/balance.hpp"
#include "quasipd/error.hpp"
#include "quasipd/series.hpp"

namespace quasipd {

/// Free parameters of the filter: long-run recovery share RR and the weight
/// lambda of the recovery penalty against hazard smoothness.
struct FilterParams {
    double rr = 0.3;
    double lambda = 1.0;
};

namespace init {
/// P_i = clamp(max(dNPL_i, eps) / (E_i - NPL_i), eps, 1 - eps): every monthly increase
/// explained by new defaults, no recoveries.
struct FromDelta {};
struct Flat {
    double value;
};
/// Explicit starting hazards (N-1 values in (0,1)).
struct Explicit {
    std::vector<double> P;
};
}  // namespace init

using InitialGuess = std::variant<init::FromDelta, init::Flat, init::Explicit>;

struct SolverSettings {
    int max_iterations = 500;
    double gradient_tolerance = 1e-8;
    double relative_decrease_tolerance = 1e-12;
    InitialGuess initial = init::FromDelta{};
};

struct FilterResult {
    FilterSolution solution;
    double objective = 0.0;
    double initial_objective = 0.0;
    double gradient_norm = 0.0;  // max-norm in logit coordinates
    int iterations = 0;
};

/// Raised when the iteration budget runs out; carries the last iterate.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, FilterResult last)
        : Error(ErrorKind::Numerical, what), last_(std::move(last)) {}
    [[nodiscard]] const FilterResult& last() const noexcept { return last_; }

private:
    FilterResult last_;
};

/// Rolling twelve-month probability of default. `start` is the month whose
/// window is the first twelve hazards.
struct AnnualPdSeries {
    MonthIndex start;
    std::vector<double> PD;

    [[nodiscard]] MonthlySeries to_series() const { return MonthlySeries::dense(start, PD); }
};

/// Gap-free view of a segment with precomputed balance coefficients. Building
/// one validates everything the objective needs (NPL_i > 0 for i < N).
class FilterProblem {
public:
    explicit FilterProblem(const SegmentSeries& segment);

    [[nodiscard]] std::size_t hazard_count() const noexcept { return npl_.size() - 1; }
    [[nodiscard]] MonthIndex start() const noexcept { return start_; }
    [[nodiscard]] std::span<const double> E() const noexcept { return e_; }
    [[nodiscard]] std::span<const double> NPL() const noexcept { return npl_; }

    /// Objective in logit coordinates x_i = ln(1/P_i - 1). Returns +inf when
    /// some P_i rounds to 0 or 1.
    [[nodiscard]] double objective_x(std::span<const double> x, const FilterParams& params) const;
    /// Gradient in logit coordinates; `grad` must have hazard_count() entries.
    void gradient_x(std::span<const double> x, const FilterParams& params, std::span<double> grad) const;

    [[nodiscard]] std::vector<double> initial_hazards(const InitialGuess& guess) const;

private:
    MonthIndex start_;
    std::vector<double> e_;
    std::vector<double> npl_;
    std::vector<double> exposure_ratio_;  // (E_i - NPL_i) / NPL_i = dR_i/dP_i
};

std::vector<double> to_logit(std::span<const double> P);
std::vector<double> from_logit(std::span<const double> x);

/// Smoothness of ln(1/P - 1) plus lambda * sum (R_i - RR)^2 with R implied by
/// the balance equation. P must lie strictly inside (0,1).
double objective(std::span<const double> P, const SegmentSeries& segment, const FilterParams& params);

/// Analytic gradient of `objective` with respect to x_i = ln(1/P_i - 1).
std::vector<double> gradient(std::span<const double> P, const SegmentSeries& segment, const FilterParams& params);

/// Local minimizer of the objective over hazards (recoveries follow from the
/// balance equation). Requires a gap-free segment and lambda > 0.
FilterResult solve(const SegmentSeries& segment, const FilterParams& params, const SolverSettings& settings = {});
FilterResult solve(const FilterProblem& problem, const FilterParams& params, const SolverSettings& settings = {});

/// PD_i = 1 - prod_{k=i-11}^{i} (1 - P_k). Accepts P_k in [0,1]; needs 12 or more hazards.
AnnualPdSeries annualize(std::span<const double> P, MonthIndex start);

}  // namespace quasipd
