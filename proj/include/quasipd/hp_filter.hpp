#pragma once

#include <span>
#include <vector>

#include "quasipd/series.hpp"

namespace quasipd {

/// Hodrick-Prescott smoothing weight. 129600 is the usual monthly choice.
struct HpParams {
    double lambda_hp = 129600.0;
};

/// Minimizer of sum (y_i - t_i)^2 + lambda_hp * sum (t_{i+1} - 2 t_i + t_{i-1})^2,
/// i.e. the solution of (I + lambda_hp D^T D) t = y.
std::vector<double> hp_trend(std::span<const double> y, const HpParams& params);

/// Imputes missing months with the HP trend fitted to the present months only.
/// Present months keep their original values. Leading or trailing gaps are refused.
MonthlySeries fill_gaps(const MonthlySeries& s, const HpParams& params);

}  // namespace quasipd
