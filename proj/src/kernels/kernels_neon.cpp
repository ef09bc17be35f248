#include <arm_neon.h>

#include "kernels_internal.hpp"

namespace quasipd::kernels::detail {
namespace {

double second_diff_sq_sum(const double* x, std::size_t n) {
    if (n < 3) return 0.0;
    const float64x2_t two = vdupq_n_f64(2.0);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 2) {
        const float64x2_t a = vld1q_f64(x + k);
        const float64x2_t b = vld1q_f64(x + k + 1);
        const float64x2_t c = vld1q_f64(x + k + 2);
        const float64x2_t d = vsubq_f64(vaddq_f64(a, c), vmulq_f64(two, b));
        acc = vaddq_f64(acc, vmulq_f64(d, d));
    }
    double s = vaddvq_f64(acc);
    for (; k + 2 < n; ++k) {
        const double d = second_diff_at(x, k);
        s += d * d;
    }
    return s;
}

void second_diff_normal_apply(const double* x, double* g, std::size_t n, double scale) {
    if (n < 3) return;
    for (std::size_t i = 0; i < 2 && i < n; ++i) g[i] += scale * normal_row_edge(x, n, i);
    const float64x2_t four = vdupq_n_f64(4.0);
    const float64x2_t six = vdupq_n_f64(6.0);
    const float64x2_t sc = vdupq_n_f64(scale);
    std::size_t i = 2;
    for (; i + 4 <= n; i += 2) {
        const float64x2_t outer = vaddq_f64(vld1q_f64(x + i - 2), vld1q_f64(x + i + 2));
        const float64x2_t inner = vaddq_f64(vld1q_f64(x + i - 1), vld1q_f64(x + i + 1));
        const float64x2_t row = vaddq_f64(vsubq_f64(outer, vmulq_f64(four, inner)), vmulq_f64(six, vld1q_f64(x + i)));
        vst1q_f64(g + i, vaddq_f64(vld1q_f64(g + i), vmulq_f64(sc, row)));
    }
    for (; i < n; ++i) {
        const double row = is_edge_row(n, i) ? normal_row_edge(x, n, i) : normal_row_interior(x, i);
        g[i] += scale * row;
    }
}

double sq_dev_sum(const double* v, std::size_t n, double center) {
    const float64x2_t c = vdupq_n_f64(center);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(v + i), c);
        acc = vaddq_f64(acc, vmulq_f64(d, d));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = v[i] - center;
        s += d * d;
    }
    return s;
}

double dot(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void implied_r(const double* e, const double* npl, const double* p, double* r, std::size_t m) {
    std::size_t i = 0;
    for (; i + 2 <= m; i += 2) {
        const float64x2_t nv = vld1q_f64(npl + i);
        const float64x2_t inflow = vmulq_f64(vld1q_f64(p + i), vsubq_f64(vld1q_f64(e + i), nv));
        const float64x2_t delta = vsubq_f64(vld1q_f64(npl + i + 1), nv);
        vst1q_f64(r + i, vdivq_f64(vsubq_f64(inflow, delta), nv));
    }
    for (; i < m; ++i) r[i] = (p[i] * (e[i] - npl[i]) - (npl[i + 1] - npl[i])) / npl[i];
}

}  // namespace

const KernelTable kNeonTable{
    Isa::Neon, &second_diff_sq_sum, &second_diff_normal_apply, &sq_dev_sum, &dot, &implied_r,
};

}  // namespace quasipd::kernels::detail
