#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quasipd/pd_filter.hpp"

namespace quasipd {

enum class ExtremumKind { Min, Max };
enum class ExtremaCounting { Both, MinOnly, MaxOnly };

struct ExtremaReport {
    std::vector<MonthIndex> months;
    std::vector<ExtremumKind> kinds;

    [[nodiscard]] std::size_t count(ExtremaCounting which = ExtremaCounting::Both) const;
};

/// Interior turning points of a PD path. A candidate counts only once the path
/// has moved at least `prominence` away from it on both sides, so reported
/// extrema alternate min/max and consecutive extrema differ by >= prominence.
/// A flat top or bottom is reported at its midpoint (rounded down).
ExtremaReport count_extrema(const AnnualPdSeries& pd, double prominence);

std::vector<double> default_lambda_grid();  // 2^-12 .. 2^4

struct CalibrationSpec {
    double pd_ttc = 0.0;
    /// 1-based month n of the segment where the averaging window starts; n > 11.
    int window_start_n = 12;
    int target_extrema_m = 0;
    std::vector<double> lambda_grid = default_lambda_grid();
    double rr_tolerance = 1e-5;
    double prominence = 0.001;
    ExtremaCounting counting = ExtremaCounting::Both;
    /// Fit the grid points on worker threads. Results are identical either way.
    bool parallel = false;
};

struct RrFit {
    double rr;
    double mean_pd;
};

/// RR whose filtered PD averages to pd_ttc over months n..N at a fixed lambda.
/// Raises Error(Infeasible) with the attained range when no RR in (0.001, 0.999) works.
RrFit fit_rr(const FilterProblem& problem, double lambda, const CalibrationSpec& spec, const SolverSettings& settings = {});
RrFit fit_rr(const SegmentSeries& segment, double lambda, const CalibrationSpec& spec, const SolverSettings& settings = {});

/// Mean of the annualized PD over the calibration window.
double window_mean_pd(const AnnualPdSeries& pd, int window_start_n);

struct TraceRow {
    double lambda = 0.0;
    std::optional<double> rr;
    std::optional<double> mean_pd;
    std::optional<int> extrema;
    std::string error;  // empty when the fit succeeded
};

struct CalibrationResult {
    FilterParams params;
    double achieved_mean_pd = 0.0;
    int achieved_extrema = 0;
    std::vector<TraceRow> trace;
};

/// Raised when no lambda reaches the target extrema count; carries the trace.
class CalibrationFailure : public Error {
public:
    CalibrationFailure(const std::string& what, std::vector<TraceRow> trace)
        : Error(ErrorKind::Infeasible, what), trace_(std::move(trace)) {}
    [[nodiscard]] const std::vector<TraceRow>& trace() const noexcept { return trace_; }

private:
    std::vector<TraceRow> trace_;
};

/// For every lambda on the grid: fit RR to the TTC anchor and count extrema of
/// the resulting PD path. Returns the largest lambda whose count equals the target.
CalibrationResult calibrate(const SegmentSeries& segment, const CalibrationSpec& spec, const SolverSettings& settings = {});

}  // namespace quasipd
