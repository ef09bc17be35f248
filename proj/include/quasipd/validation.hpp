#pragma once

#include <string>

#include "quasipd/pd_filter.hpp"
#include "quasipd/series.hpp"

namespace quasipd {

/// Observed annual default frequencies for one segment, values in [0,1].
struct ReferenceDfSeries {
    std::string segment_id;
    MonthlySeries DF;
};

struct ValidationReport {
    double r_squared = 0.0;
    int aligned_months = 0;
    double mean_model = 0.0;
    double mean_reference = 0.0;
};

/// Squared Pearson correlation of model PD and reference DF over the months
/// where both are present. Needs at least 3 such months and non-constant series.
ValidationReport validate(const AnnualPdSeries& pd, const ReferenceDfSeries& reference);

/// Squared correlation of two equally long vectors; Error(Numerical) if either is constant.
double squared_correlation(std::span<const double> a, std::span<const double> b);

/// Total retail lending minus mortgage lending, month by month.
SegmentSeries build_retail_ex_mortgage(const SegmentSeries& total_loans, const SegmentSeries& mortgage);

}  // namespace quasipd
