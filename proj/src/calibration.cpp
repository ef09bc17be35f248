#include "quasipd/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

namespace quasipd {

std::size_t ExtremaReport::count(ExtremaCounting which) const {
    if (which == ExtremaCounting::Both) return kinds.size();
    const ExtremumKind want = which == ExtremaCounting::MinOnly ? ExtremumKind::Min : ExtremumKind::Max;
    return static_cast<std::size_t>(std::count(kinds.begin(), kinds.end(), want));
}

ExtremaReport count_extrema(const AnnualPdSeries& pd, double prominence) {
    require(prominence >= 0.0 && std::isfinite(prominence), ErrorKind::Input, "prominence must be non-negative");
    ExtremaReport report;
    const auto& v = pd.PD;
    const std::size_t n = v.size();
    if (n < 3) return report;

    int dir = 0;  // +1 while climbing towards a max candidate, -1 while falling
    std::size_t lo = 0, hi = 0;
    std::size_t first = 0, last = 0;  // candidate plateau
    auto confirm = [&](ExtremumKind kind) {
        report.months.push_back(pd.start.plus(static_cast<long>((first + last) / 2)));
        report.kinds.push_back(kind);
    };

    for (std::size_t i = 1; i < n; ++i) {
        const double x = v[i];
        if (dir == 0) {
            if (x > v[hi]) hi = i;
            if (x < v[lo]) lo = i;
            if (x > v[lo] && x - v[lo] >= prominence) {
                dir = 1;
                first = last = i;
            } else if (x < v[hi] && v[hi] - x >= prominence) {
                dir = -1;
                first = last = i;
            }
            continue;
        }
        const double c = v[first];
        const bool better = dir > 0 ? x > c : x < c;
        if (better) {
            first = last = i;
        } else if (x == c) {
            if (i == last + 1) last = i;
        } else if (std::abs(c - x) >= prominence) {
            confirm(dir > 0 ? ExtremumKind::Max : ExtremumKind::Min);
            dir = -dir;
            first = last = i;
        }
    }
    return report;
}

std::vector<double> default_lambda_grid() {
    std::vector<double> grid;
    for (int k = -12; k <= 4; ++k) grid.push_back(std::ldexp(1.0, k));
    return grid;
}

double window_mean_pd(const AnnualPdSeries& pd, int window_start_n) {
    require(window_start_n > 11, ErrorKind::Input, "window start n must exceed 11, got " + std::to_string(window_start_n));
    // PD element j closes the window of hazards j+1 .. j+12 (1-based).
    const auto from = static_cast<std::size_t>(window_start_n - 12);
    require(from < pd.PD.size(), ErrorKind::Input,
            "averaging window starting at month " + std::to_string(window_start_n) + " is empty");
    double sum = 0.0;
    for (std::size_t j = from; j < pd.PD.size(); ++j) sum += pd.PD[j];
    return sum / static_cast<double>(pd.PD.size() - from);
}

namespace {

constexpr double kRrLow = 0.001;
constexpr double kRrHigh = 0.999;
constexpr int kScanIntervals = 40;
constexpr int kBisectionSteps = 60;

struct Evaluation {
    double rr;
    double mean_pd;  // NaN when the filter failed at this RR
};

struct RrFitDetail {
    RrFit fit;
    AnnualPdSeries pd;
};

class RrObjective {
public:
    RrObjective(const FilterProblem& problem, double lambda, const CalibrationSpec& spec, const SolverSettings& settings)
        : problem_(problem), lambda_(lambda), spec_(spec), settings_(settings) {}

    std::optional<AnnualPdSeries> pd_at(double rr) const {
        try {
            const FilterResult r = solve(problem_, FilterParams{rr, lambda_}, settings_);
            return annualize(r.solution.P, r.solution.start);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Input) throw;
            return std::nullopt;
        }
    }

    Evaluation eval(double rr) const {
        const auto pd = pd_at(rr);
        return {rr, pd ? window_mean_pd(*pd, spec_.window_start_n) : std::numeric_limits<double>::quiet_NaN()};
    }

private:
    const FilterProblem& problem_;
    double lambda_;
    const CalibrationSpec& spec_;
    const SolverSettings& settings_;
};

void check_spec(const CalibrationSpec& spec) {
    require(spec.pd_ttc > 0.0 && spec.pd_ttc < 1.0, ErrorKind::Input, "pd_ttc must lie in (0,1)");
    require(spec.window_start_n > 11, ErrorKind::Input, "window start n must exceed 11");
    require(spec.target_extrema_m >= 0, ErrorKind::Input, "target extrema count must be non-negative");
    require(spec.rr_tolerance > 0.0, ErrorKind::Input, "rr_tolerance must be positive");
    require(spec.prominence >= 0.0, ErrorKind::Input, "prominence must be non-negative");
}

RrFitDetail fit_rr_detail(const FilterProblem& problem, double lambda, const CalibrationSpec& spec,
                          const SolverSettings& settings) {
    check_spec(spec);
    require(lambda > 0.0 && std::isfinite(lambda), ErrorKind::Input, "lambda must be positive");
    const RrObjective f(problem, lambda, spec, settings);
    const double target = spec.pd_ttc;

    std::vector<Evaluation> scan;
    for (int k = 0; k <= kScanIntervals; ++k) {
        scan.push_back(f.eval(kRrLow + (kRrHigh - kRrLow) * k / kScanIntervals));
    }

    double lo_seen = std::numeric_limits<double>::infinity();
    double hi_seen = -lo_seen;
    for (const auto& e : scan) {
        if (std::isnan(e.mean_pd)) continue;
        lo_seen = std::min(lo_seen, e.mean_pd);
        hi_seen = std::max(hi_seen, e.mean_pd);
    }
    require(std::isfinite(lo_seen), ErrorKind::Infeasible, "calibration infeasible: the filter failed for every RR at lambda " + std::to_string(lambda));

    // Every sign change of mean_pd - target brackets a root. A monotone response
    // has one; otherwise the root with the smallest residual wins.
    std::optional<Evaluation> best;
    auto consider = [&](const Evaluation& e) {
        if (std::isnan(e.mean_pd)) return;
        if (!best || std::abs(e.mean_pd - target) < std::abs(best->mean_pd - target)) best = e;
    };
    for (std::size_t k = 0; k + 1 < scan.size(); ++k) {
        Evaluation a = scan[k];
        Evaluation b = scan[k + 1];
        if (std::isnan(a.mean_pd) || std::isnan(b.mean_pd)) continue;
        consider(a);
        consider(b);
        if ((a.mean_pd - target) * (b.mean_pd - target) > 0.0) continue;
        for (int step = 0; step < kBisectionSteps; ++step) {
            if (std::abs(a.mean_pd - target) <= spec.rr_tolerance || std::abs(b.mean_pd - target) <= spec.rr_tolerance) break;
            const Evaluation mid = f.eval(0.5 * (a.rr + b.rr));
            if (std::isnan(mid.mean_pd)) break;
            consider(mid);
            if ((a.mean_pd - target) * (mid.mean_pd - target) <= 0.0) b = mid;
            else a = mid;
        }
        consider(a);
        consider(b);
    }

    if (!best || std::abs(best->mean_pd - target) > spec.rr_tolerance) {
        fail(ErrorKind::Infeasible, "calibration infeasible at lambda " + std::to_string(lambda) + ": attainable range of the window mean PD is [" +
                                        std::to_string(lo_seen) + ", " + std::to_string(hi_seen) + "] for RR in (0.001, 0.999), target " +
                                        std::to_string(target));
    }
    auto pd = f.pd_at(best->rr);
    require(pd.has_value(), ErrorKind::Numerical, "calibration: filter failed at the fitted RR");
    return {RrFit{best->rr, best->mean_pd}, std::move(*pd)};
}

TraceRow trace_point(const FilterProblem& problem, double lambda, const CalibrationSpec& spec, const SolverSettings& settings) {
    TraceRow row;
    row.lambda = lambda;
    try {
        const RrFitDetail d = fit_rr_detail(problem, lambda, spec, settings);
        row.rr = d.fit.rr;
        row.mean_pd = d.fit.mean_pd;
        row.extrema = static_cast<int>(count_extrema(d.pd, spec.prominence).count(spec.counting));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Input) throw;
        row.error = e.what();
    }
    return row;
}

}  // namespace

RrFit fit_rr(const FilterProblem& problem, double lambda, const CalibrationSpec& spec, const SolverSettings& settings) {
    return fit_rr_detail(problem, lambda, spec, settings).fit;
}

RrFit fit_rr(const SegmentSeries& segment, double lambda, const CalibrationSpec& spec, const SolverSettings& settings) {
    return fit_rr(FilterProblem(segment), lambda, spec, settings);
}

CalibrationResult calibrate(const SegmentSeries& segment, const CalibrationSpec& spec, const SolverSettings& settings) {
    check_spec(spec);
    require(!spec.lambda_grid.empty(), ErrorKind::Input, "lambda grid is empty");
    for (std::size_t k = 0; k < spec.lambda_grid.size(); ++k) {
        require(spec.lambda_grid[k] > 0.0, ErrorKind::Input, "lambda grid values must be positive");
        require(k == 0 || spec.lambda_grid[k] > spec.lambda_grid[k - 1], ErrorKind::Input, "lambda grid must be strictly increasing");
    }
    const FilterProblem problem(segment);

    std::vector<TraceRow> trace(spec.lambda_grid.size());
    if (spec.parallel) {
        std::vector<std::future<TraceRow>> jobs;
        for (double lambda : spec.lambda_grid) {
            jobs.push_back(std::async(std::launch::async, [&, lambda] { return trace_point(problem, lambda, spec, settings); }));
        }
        for (std::size_t k = 0; k < jobs.size(); ++k) trace[k] = jobs[k].get();
    } else {
        for (std::size_t k = 0; k < trace.size(); ++k) trace[k] = trace_point(problem, spec.lambda_grid[k], spec, settings);
    }

    for (std::size_t k = trace.size(); k-- > 0;) {
        const TraceRow& row = trace[k];
        if (row.extrema && *row.extrema == spec.target_extrema_m) {
            CalibrationResult out;
            out.params = FilterParams{*row.rr, row.lambda};
            out.achieved_mean_pd = *row.mean_pd;
            out.achieved_extrema = *row.extrema;
            out.trace = std::move(trace);
            return out;
        }
    }
    throw CalibrationFailure("calibration: no lambda on the grid yields " + std::to_string(spec.target_extrema_m) + " extrema",
                             std::move(trace));
}

}  // namespace quasipd
