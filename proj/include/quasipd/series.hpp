#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "quasipd/month.hpp"

namespace quasipd {

using Observation = std::optional<double>;

/// Monthly series contiguous in calendar months from `start()`. Absent entries
/// are missing observations; present entries are finite.
class MonthlySeries {
public:
    MonthlySeries(MonthIndex start, std::vector<Observation> values);

    /// Gap-free series from dense values.
    static MonthlySeries dense(MonthIndex start, std::span<const double> values);

    [[nodiscard]] MonthIndex start() const noexcept { return start_; }
    [[nodiscard]] MonthIndex last() const noexcept { return start_.plus(static_cast<long>(values_.size()) - 1); }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] const std::vector<Observation>& values() const noexcept { return values_; }
    [[nodiscard]] const Observation& operator[](std::size_t i) const { return values_[i]; }

    /// Observation at a calendar month; nullopt outside the span.
    [[nodiscard]] Observation at(MonthIndex m) const;

    [[nodiscard]] std::size_t present_count() const noexcept;
    [[nodiscard]] bool gap_free() const noexcept { return present_count() == values_.size(); }

    /// Dense copy of the values. Throws Error(Input) naming the first missing month.
    [[nodiscard]] std::vector<double> require_dense(std::string_view what) const;

    /// Sub-span [from, to], both inclusive and inside the series span.
    [[nodiscard]] MonthlySeries slice(MonthIndex from, MonthIndex to) const;

    bool operator==(const MonthlySeries&) const = default;

private:
    MonthIndex start_;
    std::vector<Observation> values_;
};

/// Total debt E and overdue debt NPL of one credit segment on a shared span.
struct SegmentSeries {
    std::string segment_id;
    MonthlySeries E;
    MonthlySeries NPL;

    /// Checks shared span and, wherever both are present, E > 0 and E >= NPL >= 0.
    /// Throws Error(Input) naming the offending month.
    static SegmentSeries make(std::string segment_id, MonthlySeries E, MonthlySeries NPL);

    [[nodiscard]] MonthIndex start() const noexcept { return E.start(); }
    [[nodiscard]] std::size_t size() const noexcept { return E.size(); }
};

/// Restricts both series to their common calendar span. Throws Error(Input) if disjoint.
std::pair<MonthlySeries, MonthlySeries> align(const MonthlySeries& a, const MonthlySeries& b);

/// Elementwise a - b over identical spans; missing if either operand is missing.
MonthlySeries subtract(const MonthlySeries& a, const MonthlySeries& b);
MonthlySeries add(const MonthlySeries& a, const MonthlySeries& b);

/// Elementwise sum of w_k * s_k. Weights need not sum to one.
MonthlySeries weighted_sum(std::span<const MonthlySeries> series, std::span<const double> weights);

struct MeanCv {
    double mean;
    double cv;  // sample standard deviation over mean
};

/// Mean and coefficient of variation over present values (sample n-1 deviation).
MeanCv mean_and_cv(const MonthlySeries& s);

}  // namespace quasipd
