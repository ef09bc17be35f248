#include "quasipd/hp_filter.hpp"

#include <cmath>

#include "quasipd/banded.hpp"
#include "quasipd/error.hpp"
#include "quasipd/kernels.hpp"

namespace quasipd {
namespace {

void check_params(const HpParams& params) {
    require(params.lambda_hp > 0.0 && std::isfinite(params.lambda_hp), ErrorKind::Input, "lambda_hp must be positive");
}

// Solves (A + lambda D^T D) t = A y0 as a correction t = y0 + d, so that
// inputs with zero second differences come back unchanged bit for bit.
std::vector<double> solve_correction(SymmetricPentadiagonal a, const std::vector<double>& y0, double lambda) {
    std::vector<double> rhs(y0.size(), 0.0);
    kernels::second_diff_normal_apply(y0, rhs, -lambda);
    a.add_second_difference_penalty(lambda);
    std::vector<double> d = solve_pentadiagonal(a, rhs);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += y0[i];
    return d;
}

}  // namespace

std::vector<double> hp_trend(std::span<const double> y, const HpParams& params) {
    check_params(params);
    require(y.size() >= 3, ErrorKind::Input, "hp_trend needs at least 3 observations");
    for (double v : y) require(std::isfinite(v), ErrorKind::Input, "hp_trend: non-finite input");

    SymmetricPentadiagonal a(y.size());
    for (double& d : a.diag) d = 1.0;
    std::vector<double> t = solve_correction(std::move(a), std::vector<double>(y.begin(), y.end()), params.lambda_hp);

    // The exact trend has the same sum as y. Round-off in the solve breaks
    // that at the 1e-10 level for lambda ~ 1e5; put it back with a shift.
    long double gap = 0.0L;
    for (std::size_t i = 0; i < y.size(); ++i) gap += static_cast<long double>(y[i]) - t[i];
    const double shift = static_cast<double>(gap / static_cast<long double>(y.size()));
    if (shift != 0.0) {
        for (double& v : t) v += shift;
    }
    return t;
}

MonthlySeries fill_gaps(const MonthlySeries& s, const HpParams& params) {
    check_params(params);
    if (s.gap_free()) return s;
    const std::size_t n = s.size();
    require(s[0].has_value(), ErrorKind::Input, "fill_gaps: leading gap at " + s.start().to_string() + " (extrapolation refused)");
    require(s[n - 1].has_value(), ErrorKind::Input, "fill_gaps: trailing gap at " + s.last().to_string() + " (extrapolation refused)");
    require(n >= 3, ErrorKind::Input, "fill_gaps needs at least 3 months");

    // Start from straight-line interpolation across each gap.
    SymmetricPentadiagonal a(n);
    std::vector<double> y0(n);
    std::size_t prev = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!s[i]) continue;
        a.diag[i] = 1.0;
        y0[i] = *s[i];
        for (std::size_t k = prev + 1; k < i; ++k) {
            const double w = static_cast<double>(k - prev) / static_cast<double>(i - prev);
            y0[k] = (1.0 - w) * y0[prev] + w * y0[i];
        }
        prev = i;
    }
    const std::vector<double> trend = solve_correction(std::move(a), y0, params.lambda_hp);

    std::vector<Observation> out(s.values());
    for (std::size_t i = 0; i < n; ++i) {
        if (!out[i]) out[i] = trend[i];
    }
    return MonthlySeries(s.start(), std::move(out));
}

}  // namespace quasipd
