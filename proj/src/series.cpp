#include "quasipd/series.hpp"

#include <algorithm>
#include <cmath>

#include "quasipd/error.hpp"

namespace quasipd {

MonthlySeries::MonthlySeries(MonthIndex start, std::vector<Observation> values)
    : start_(start), values_(std::move(values)) {
    require(!values_.empty(), ErrorKind::Input, "monthly series must have at least one month");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] && !std::isfinite(*values_[i])) {
            fail(ErrorKind::Input, "non-finite value at " + start_.plus(static_cast<long>(i)).to_string());
        }
    }
}

MonthlySeries MonthlySeries::dense(MonthIndex start, std::span<const double> values) {
    return MonthlySeries(start, std::vector<Observation>(values.begin(), values.end()));
}

Observation MonthlySeries::at(MonthIndex m) const {
    const auto off = m.months_since(start_);
    if (off < 0 || off >= static_cast<std::int64_t>(values_.size())) return std::nullopt;
    return values_[static_cast<std::size_t>(off)];
}

std::size_t MonthlySeries::present_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(), [](const Observation& v) { return v.has_value(); }));
}

std::vector<double> MonthlySeries::require_dense(std::string_view what) const {
    std::vector<double> out;
    out.reserve(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!values_[i]) {
            fail(ErrorKind::Input, std::string(what) + ": missing observation at " +
                                       start_.plus(static_cast<long>(i)).to_string() + " (run gap filling first)");
        }
        out.push_back(*values_[i]);
    }
    return out;
}

MonthlySeries MonthlySeries::slice(MonthIndex from, MonthIndex to) const {
    require(from >= start_ && to <= last() && from <= to, ErrorKind::Input,
            "slice " + from.to_string() + ".." + to.to_string() + " outside series span");
    const auto b = static_cast<std::size_t>(from.months_since(start_));
    const auto e = static_cast<std::size_t>(to.months_since(start_)) + 1;
    return MonthlySeries(from, std::vector<Observation>(values_.begin() + static_cast<long>(b), values_.begin() + static_cast<long>(e)));
}

SegmentSeries SegmentSeries::make(std::string segment_id, MonthlySeries E, MonthlySeries NPL) {
    require(E.start() == NPL.start() && E.size() == NPL.size(), ErrorKind::Input,
            "segment '" + segment_id + "': E and NPL spans differ");
    for (std::size_t i = 0; i < E.size(); ++i) {
        if (!E[i] || !NPL[i]) continue;
        const std::string month = E.start().plus(static_cast<long>(i)).to_string();
        require(*E[i] > 0.0, ErrorKind::Input, "segment '" + segment_id + "': E must be positive at " + month);
        require(*NPL[i] >= 0.0, ErrorKind::Input, "segment '" + segment_id + "': negative NPL at " + month);
        require(*NPL[i] <= *E[i], ErrorKind::Input, "segment '" + segment_id + "': NPL exceeds E at " + month);
    }
    return SegmentSeries{std::move(segment_id), std::move(E), std::move(NPL)};
}

std::pair<MonthlySeries, MonthlySeries> align(const MonthlySeries& a, const MonthlySeries& b) {
    const MonthIndex from = std::max(a.start(), b.start());
    const MonthIndex to = std::min(a.last(), b.last());
    require(from <= to, ErrorKind::Input,
            "series spans do not overlap: " + a.start().to_string() + ".." + a.last().to_string() + " vs " +
                b.start().to_string() + ".." + b.last().to_string());
    return {a.slice(from, to), b.slice(from, to)};
}

namespace {

template <class Op>
MonthlySeries combine(const MonthlySeries& a, const MonthlySeries& b, Op op) {
    require(a.start() == b.start() && a.size() == b.size(), ErrorKind::Input, "series are not aligned");
    std::vector<Observation> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] && b[i]) out[i] = op(*a[i], *b[i]);
    }
    return MonthlySeries(a.start(), std::move(out));
}

}  // namespace

MonthlySeries subtract(const MonthlySeries& a, const MonthlySeries& b) {
    return combine(a, b, [](double x, double y) { return x - y; });
}

MonthlySeries add(const MonthlySeries& a, const MonthlySeries& b) {
    return combine(a, b, [](double x, double y) { return x + y; });
}

MonthlySeries weighted_sum(std::span<const MonthlySeries> series, std::span<const double> weights) {
    require(series.size() == weights.size(), ErrorKind::Input,
            "weighted_sum: " + std::to_string(series.size()) + " series but " + std::to_string(weights.size()) + " weights");
    require(!series.empty(), ErrorKind::Input, "weighted_sum: no series");
    for (double w : weights) require(w >= 0.0 && std::isfinite(w), ErrorKind::Input, "weighted_sum: negative weight");
    const MonthlySeries& first = series.front();
    for (const auto& s : series) {
        require(s.start() == first.start() && s.size() == first.size(), ErrorKind::Input, "weighted_sum: series are not aligned");
    }
    std::vector<Observation> out(first.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        double acc = 0.0;
        bool complete = true;
        for (std::size_t k = 0; k < series.size() && complete; ++k) {
            if (!series[k][i]) complete = false;
            else acc += weights[k] * *series[k][i];
        }
        if (complete) out[i] = acc;
    }
    return MonthlySeries(first.start(), std::move(out));
}

MeanCv mean_and_cv(const MonthlySeries& s) {
    std::vector<double> xs;
    for (const auto& v : s.values()) if (v) xs.push_back(*v);
    require(!xs.empty(), ErrorKind::Input, "mean_and_cv: series has no present values");
    require(xs.size() >= 2, ErrorKind::Input, "mean_and_cv: need at least two present values");
    // Shifted by the first value so that a constant series has exactly zero spread.
    const double shift = xs.front();
    double offset = 0.0;
    for (double x : xs) offset += x - shift;
    const double mean = shift + offset / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    require(mean != 0.0, ErrorKind::Numerical, "mean_and_cv: zero mean, coefficient of variation undefined");
    const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    return {mean, sd / mean};
}

}  // namespace quasipd
