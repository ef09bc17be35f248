#include "quasipd/macromodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "quasipd/error.hpp"
#include "quasipd/kernels.hpp"

namespace quasipd {

DesignMatrix::DesignMatrix(std::vector<std::string> names, std::vector<std::vector<double>> columns)
    : names_(std::move(names)), columns_(std::move(columns)) {
    require(names_.size() == columns_.size(), ErrorKind::Input, "design matrix: names and columns differ in count");
    std::set<std::string> seen;
    for (const auto& n : names_) {
        require(n != "intercept", ErrorKind::Input, "design matrix: 'intercept' is reserved");
        require(seen.insert(n).second, ErrorKind::Input, "design matrix: duplicate column name '" + n + "'");
    }
    rows_ = columns_.empty() ? 0 : columns_.front().size();
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        require(columns_[j].size() == rows_, ErrorKind::Input, "design matrix: column '" + names_[j] + "' has a different length");
        for (double v : columns_[j]) require(std::isfinite(v), ErrorKind::Input, "design matrix: missing or non-finite cell in '" + names_[j] + "'");
    }
}

namespace {

struct OlsCore {
    std::vector<double> beta;
    std::vector<double> residuals;
    std::vector<double> fitted;
    double r_squared;
    double sst;
};

OlsCore ols_core(const DesignMatrix& X, std::span<const double> y) {
    const std::size_t n = y.size();
    const std::size_t p = X.columns() + 1;
    require(X.columns() == 0 || X.rows() == n, ErrorKind::Input, "regression: design rows and observations differ");
    require(n > p, ErrorKind::Input, "regression: need more observations (" + std::to_string(n) + ") than regressors plus one (" + std::to_string(p) + ")");

    // Column-major copy with the intercept in front.
    std::vector<std::vector<double>> a(p);
    a[0].assign(n, 1.0);
    for (std::size_t j = 1; j < p; ++j) a[j] = X.column(j - 1);
    std::vector<double> norms(p);
    for (std::size_t j = 0; j < p; ++j) norms[j] = std::sqrt(kernels::dot(a[j], a[j]));
    std::vector<double> qty(y.begin(), y.end());
    std::vector<double> rdiag(p);

    for (std::size_t k = 0; k < p; ++k) {
        auto& col = a[k];
        double s = 0.0;
        for (std::size_t i = k; i < n; ++i) s += col[i] * col[i];
        const double alpha = std::sqrt(s);
        if (!(alpha > 1e-10 * norms[k])) {
            const std::string name = k == 0 ? "intercept" : X.names()[k - 1];
            fail(ErrorKind::Numerical, "regression: column '" + name + "' is collinear with the preceding columns");
        }
        const double rkk = col[k] > 0.0 ? -alpha : alpha;
        // Householder vector v = col[k:] - rkk e_k, stored in place.
        col[k] -= rkk;
        double vnorm2 = 0.0;
        for (std::size_t i = k; i < n; ++i) vnorm2 += col[i] * col[i];
        auto reflect = [&](std::vector<double>& target) {
            double d = 0.0;
            for (std::size_t i = k; i < n; ++i) d += col[i] * target[i];
            const double f = 2.0 * d / vnorm2;
            for (std::size_t i = k; i < n; ++i) target[i] -= f * col[i];
        };
        for (std::size_t j = k + 1; j < p; ++j) reflect(a[j]);
        reflect(qty);
        rdiag[k] = rkk;
    }

    std::vector<double> beta(p);
    for (std::size_t k = p; k-- > 0;) {
        double s = qty[k];
        for (std::size_t j = k + 1; j < p; ++j) s -= a[j][k] * beta[j];
        beta[k] = s / rdiag[k];
    }

    OlsCore out;
    out.beta = beta;
    out.fitted.assign(n, beta[0]);
    for (std::size_t j = 1; j < p; ++j) {
        const auto& c = X.column(j - 1);
        for (std::size_t i = 0; i < n; ++i) out.fitted[i] += beta[j] * c[i];
    }
    out.residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.residuals[i] = y[i] - out.fitted[i];
    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(n);
    out.sst = kernels::sq_dev_sum(y, ybar);
    const double ssr = kernels::dot(out.residuals, out.residuals);
    // A constant target leaves nothing to explain.
    out.r_squared = out.sst > 0.0 ? std::clamp(1.0 - ssr / out.sst, 0.0, 1.0) : 0.0;
    return out;
}

}  // namespace

RegressionReport fit_ols(const DesignMatrix& X, std::span<const double> y) {
    for (double v : y) require(std::isfinite(v), ErrorKind::Input, "regression: non-finite observation");
    OlsCore core = ols_core(X, y);
    RegressionReport out;
    out.names.push_back("intercept");
    out.names.insert(out.names.end(), X.names().begin(), X.names().end());
    out.coefficients = std::move(core.beta);
    out.r_squared = core.r_squared;
    out.residuals = std::move(core.residuals);
    out.fitted = std::move(core.fitted);
    const BreuschPagan bp = breusch_pagan(X, out.residuals);
    out.bp_statistic = bp.statistic;
    out.bp_p_value = bp.p_value;
    return out;
}

BreuschPagan breusch_pagan(const DesignMatrix& X, std::span<const double> residuals) {
    require(X.columns() == 0 || residuals.size() == X.rows(), ErrorKind::Input, "breusch_pagan: residual count differs from design rows");
    require(X.columns() >= 1, ErrorKind::Input, "breusch_pagan: needs at least one regressor");
    std::vector<double> u(residuals.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = residuals[i] * residuals[i];
    if (std::all_of(u.begin(), u.end(), [&](double v) { return v == u.front(); })) return {0.0, 1.0};
    const OlsCore aux = ols_core(X, u);
    const double stat = static_cast<double>(u.size()) * aux.r_squared;
    return {stat, chi_square_sf(stat, static_cast<double>(X.columns()))};
}

// Series and continued-fraction forms of the incomplete gamma function, each
// used where it converges fast (x < a + 1 and x >= a + 1 respectively).
namespace {

double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 1000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_continued_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_p(double a, double x) {
    require(a > 0.0 && x >= 0.0, ErrorKind::Input, "incomplete gamma: need a > 0 and x >= 0");
    if (x == 0.0) return 0.0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_continued_fraction(a, x);
}

double gamma_q(double a, double x) {
    require(a > 0.0 && x >= 0.0, ErrorKind::Input, "incomplete gamma: need a > 0 and x >= 0");
    if (x == 0.0) return 1.0;
    return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_continued_fraction(a, x);
}

double chi_square_sf(double x, double dof) {
    require(dof > 0.0, ErrorKind::Input, "chi-square: degrees of freedom must be positive");
    if (x <= 0.0) return 1.0;
    return std::clamp(gamma_q(0.5 * dof, 0.5 * x), 0.0, 1.0);
}

MonthlySeries lag(const MonthlySeries& series, int months) {
    require(months >= 0, ErrorKind::Input, "lag must be non-negative");
    std::vector<Observation> out(series.size());
    for (std::size_t i = static_cast<std::size_t>(months); i < series.size(); ++i) out[i] = series[i - static_cast<std::size_t>(months)];
    return MonthlySeries(series.start(), std::move(out));
}

std::vector<double> predict(const RegressionReport& model, const DesignMatrix& X) {
    require(model.coefficients.size() == X.columns() + 1, ErrorKind::Input, "predict: coefficient count differs from design columns");
    for (std::size_t j = 0; j < X.columns(); ++j) {
        require(X.names()[j] == model.names[j + 1], ErrorKind::Input, "predict: column '" + X.names()[j] + "' not in model order");
    }
    std::vector<double> out(X.rows(), model.coefficients[0]);
    for (std::size_t j = 0; j < X.columns(); ++j) {
        const auto& c = X.column(j);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += model.coefficients[j + 1] * c[i];
    }
    return out;
}

AssembledRegression assemble(const MonthlySeries& target, const std::vector<std::pair<std::string, MonthlySeries>>& factors,
                             const std::map<std::string, int>& lags) {
    for (const auto& [name, months] : lags) {
        const bool known = std::any_of(factors.begin(), factors.end(), [&](const auto& f) { return f.first == name; });
        require(known, ErrorKind::Input, "lag given for unknown factor '" + name + "'");
    }
    std::vector<MonthlySeries> shifted;
    for (const auto& [name, s] : factors) {
        const auto it = lags.find(name);
        shifted.push_back(it == lags.end() ? s : lag(s, it->second));
    }
    std::vector<std::vector<double>> cols(factors.size());
    std::vector<double> y;
    std::vector<MonthIndex> months;
    for (MonthIndex m = target.start(); m <= target.last(); m = m.next()) {
        const Observation t = target.at(m);
        if (!t) continue;
        bool complete = true;
        for (const auto& s : shifted) complete = complete && s.at(m).has_value();
        if (!complete) continue;
        y.push_back(*t);
        months.push_back(m);
        for (std::size_t j = 0; j < shifted.size(); ++j) cols[j].push_back(*shifted[j].at(m));
    }
    std::vector<std::string> names;
    for (const auto& f : factors) names.push_back(f.first);
    return AssembledRegression{DesignMatrix(std::move(names), std::move(cols)), std::move(y), std::move(months)};
}

}  // namespace quasipd
