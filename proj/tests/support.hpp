#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "quasipd/month.hpp"
#include "quasipd/series.hpp"
#include "quasipd/synth.hpp"

namespace testing {

using quasipd::MonthIndex;
using quasipd::MonthlySeries;

inline MonthlySeries dense(const char* start, std::vector<double> v) {
    return MonthlySeries::dense(MonthIndex::parse(start), v);
}

inline std::vector<double> values(const MonthlySeries& s) { return s.require_dense("test"); }

// Fresh directory under the system temp dir, unique per name.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("quasipd_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Dense Gaussian elimination with partial pivoting. Used as an oracle against
// the banded and QR code paths.
inline std::vector<double> dense_solve(std::vector<std::vector<long double>> a, std::vector<long double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(a[i][k]) > std::fabs(a[piv][k])) piv = i;
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const long double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        long double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
        x[k] = static_cast<double>(s / a[k][k]);
    }
    return x;
}

// OLS by normal equations in long double; returns coefficients for [1, cols...].
inline std::vector<double> naive_ols(const std::vector<std::vector<double>>& cols, const std::vector<double>& y) {
    const std::size_t n = y.size(), k = cols.size() + 1;
    auto col = [&](std::size_t j, std::size_t i) -> long double { return j == 0 ? 1.0L : cols[j - 1][i]; };
    std::vector<std::vector<long double>> xtx(k, std::vector<long double>(k, 0.0L));
    std::vector<long double> xty(k, 0.0L);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b)
            for (std::size_t i = 0; i < n; ++i) xtx[a][b] += col(a, i) * col(b, i);
        for (std::size_t i = 0; i < n; ++i) xty[a] += col(a, i) * y[i];
    }
    return dense_solve(xtx, xty);
}

inline double naive_r_squared(const std::vector<std::vector<double>>& cols, const std::vector<double>& y) {
    const auto beta = naive_ols(cols, y);
    long double mean = 0.0L;
    for (double v : y) mean += v;
    mean /= y.size();
    long double sse = 0.0L, sst = 0.0L;
    for (std::size_t i = 0; i < y.size(); ++i) {
        long double fit = beta[0];
        for (std::size_t j = 0; j < cols.size(); ++j) fit += beta[j + 1] * cols[j][i];
        sse += (y[i] - fit) * (y[i] - fit);
        sst += (y[i] - mean) * (y[i] - mean);
    }
    return static_cast<double>(1.0L - sse / sst);
}

// Pearson correlation squared, two-pass.
inline double pearson_r2(const std::vector<double>& a, const std::vector<double>& b) {
    long double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= a.size();
    mb /= b.size();
    long double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return static_cast<double>(sab * sab / (saa * sbb));
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

// A fixture whose true hazards are smooth and R constant: the filter's home turf.
inline quasipd::synth::SynthSpec humped_spec(int months = 130) {
    quasipd::synth::SynthSpec s = quasipd::synth::default_spec();
    s.months = months;
    return s;
}

}  // namespace testing
