#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quasipd/series.hpp"

namespace quasipd {

/// Regressors by column; the intercept is implicit and always fitted.
class DesignMatrix {
public:
    DesignMatrix(std::vector<std::string> names, std::vector<std::vector<double>> columns);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t columns() const noexcept { return columns_.size(); }
    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
    [[nodiscard]] const std::vector<double>& column(std::size_t j) const { return columns_.at(j); }

private:
    std::vector<std::string> names_;
    std::vector<std::vector<double>> columns_;
    std::size_t rows_ = 0;
};

struct RegressionReport {
    std::vector<std::string> names;  // "intercept" first
    std::vector<double> coefficients;
    double r_squared = 0.0;
    double bp_statistic = 0.0;
    double bp_p_value = 1.0;
    std::vector<double> residuals;
    std::vector<double> fitted;
};

/// Least squares by Householder QR. A column whose pivot falls below 1e-10 of
/// its own norm is reported as collinear (Error(Numerical)).
RegressionReport fit_ols(const DesignMatrix& X, std::span<const double> y);

struct BreuschPagan {
    double statistic;
    double p_value;
};

/// n * R^2 of the regression of squared residuals on X, referred to a
/// chi-square with X.columns() degrees of freedom.
BreuschPagan breusch_pagan(const DesignMatrix& X, std::span<const double> residuals);

/// Upper tail P(chi2_dof > x).
double chi_square_sf(double x, double dof);

/// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

/// Delays a series by `months` on its own span: out(t) = in(t - months); the
/// first `months` entries become missing.
MonthlySeries lag(const MonthlySeries& series, int months);

/// Prediction intercept + sum beta_j x_j for every row of X.
std::vector<double> predict(const RegressionReport& model, const DesignMatrix& X);

struct AssembledRegression {
    DesignMatrix X;
    std::vector<double> y;
    std::vector<MonthIndex> months;
};

/// Aligns a target with named factors (each optionally lagged) and keeps the
/// months where every value is present.
AssembledRegression assemble(const MonthlySeries& target, const std::vector<std::pair<std::string, MonthlySeries>>& factors,
                             const std::map<std::string, int>& lags);

}  // namespace quasipd
