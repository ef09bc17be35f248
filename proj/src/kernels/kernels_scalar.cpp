#include "kernels_internal.hpp"

namespace quasipd::kernels::detail {
namespace {

double second_diff_sq_sum(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const double d = second_diff_at(x, k);
        s += d * d;
    }
    return s;
}

void second_diff_normal_apply(const double* x, double* g, std::size_t n, double scale) {
    if (n < 3) return;
    for (std::size_t i = 0; i < n; ++i) {
        const double row = is_edge_row(n, i) ? normal_row_edge(x, n, i) : normal_row_interior(x, i);
        g[i] += scale * row;
    }
}

double sq_dev_sum(const double* v, std::size_t n, double center) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = v[i] - center;
        s += d * d;
    }
    return s;
}

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void implied_r(const double* e, const double* npl, const double* p, double* r, std::size_t m) {
    for (std::size_t i = 0; i < m; ++i) r[i] = (p[i] * (e[i] - npl[i]) - (npl[i + 1] - npl[i])) / npl[i];
}

}  // namespace

const KernelTable kScalarTable{
    Isa::Scalar, &second_diff_sq_sum, &second_diff_normal_apply, &sq_dev_sum, &dot, &implied_r,
};

}  // namespace quasipd::kernels::detail
