#pragma once

#include <span>
#include <vector>

#include "quasipd/month.hpp"

namespace quasipd {

/// Monthly hazards P and recovery shares R. Entry i drives the move from
/// month i to month i+1, so a segment of N months carries N-1 of each.
struct FilterSolution {
    MonthIndex start;
    std::vector<double> P;
    std::vector<double> R;
};

/// Runs NPL_{i+1} = NPL_i + P_i (E_i - NPL_i) - R_i NPL_i forward from NPL_1.
/// E has N entries, P and R N-1. A path leaving [0, E_i] raises Error(Infeasible)
/// naming the month (relative to `start`).
std::vector<double> forward_npl(std::span<const double> E, double npl_first, std::span<const double> P,
                                std::span<const double> R, MonthIndex start = MonthIndex());

/// Recovery shares that make the balance equation hold exactly for hazards P.
/// Any NPL_i = 0 with i < N raises Error(Numerical) naming the month.
std::vector<double> implied_R(std::span<const double> E, std::span<const double> NPL, std::span<const double> P,
                              MonthIndex start = MonthIndex());

}  // namespace quasipd
