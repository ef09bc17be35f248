#include "quasipd/banded.hpp"

#include <algorithm>
#include <cmath>

#include "quasipd/error.hpp"

namespace quasipd {

void SymmetricPentadiagonal::add_second_difference_penalty(double scale) {
    const std::size_t n = size();
    if (n < 3) return;
    // Row k of D has (1, -2, 1) at columns k, k+1, k+2.
    for (std::size_t k = 0; k + 2 < n; ++k) {
        diag[k] += scale;
        diag[k + 1] += 4.0 * scale;
        diag[k + 2] += scale;
        off1[k] += -2.0 * scale;
        off1[k + 1] += -2.0 * scale;
        off2[k] += scale;
    }
}

std::vector<double> solve_pentadiagonal(const SymmetricPentadiagonal& a, std::span<const double> rhs) {
    const std::size_t n = a.size();
    require(rhs.size() == n, ErrorKind::Input, "pentadiagonal solve: rhs size mismatch");
    if (n == 0) return {};

    double scale = 0.0;
    for (double v : a.diag) scale = std::max(scale, std::abs(v));
    const double pivot_floor = scale * 1e-14;

    std::vector<double> d(n), l1(n, 0.0), l2(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double di = a.diag[i];
        if (i >= 1) di -= l1[i - 1] * l1[i - 1] * d[i - 1];
        if (i >= 2) di -= l2[i - 2] * l2[i - 2] * d[i - 2];
        if (!(di > pivot_floor)) {
            fail(ErrorKind::Numerical, "pentadiagonal solve: matrix not positive definite (pivot " + std::to_string(i) + ")");
        }
        d[i] = di;
        if (i + 1 < n) {
            double v = a.off1[i];
            if (i >= 1) v -= l2[i - 1] * d[i - 1] * l1[i - 1];
            l1[i] = v / di;
        }
        if (i + 2 < n) l2[i] = a.off2[i] / di;
    }

    std::vector<double> x(rhs.begin(), rhs.end());
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= 1) x[i] -= l1[i - 1] * x[i - 1];
        if (i >= 2) x[i] -= l2[i - 2] * x[i - 2];
    }
    for (std::size_t i = 0; i < n; ++i) x[i] /= d[i];
    for (std::size_t i = n; i-- > 0;) {
        if (i + 1 < n) x[i] -= l1[i] * x[i + 1];
        if (i + 2 < n) x[i] -= l2[i] * x[i + 2];
    }
    return x;
}

}  // namespace quasipd
