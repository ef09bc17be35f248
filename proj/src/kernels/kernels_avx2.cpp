// Compiled with -mavx2 and without FMA so that elementwise results match the
// scalar reference bit for bit.
#include <immintrin.h>

#include "kernels_internal.hpp"

namespace quasipd::kernels::detail {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double second_diff_sq_sum(const double* x, std::size_t n) {
    if (n < 3) return 0.0;
    const __m256d two = _mm256_set1_pd(2.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 6 <= n; k += 4) {
        const __m256d a = _mm256_loadu_pd(x + k);
        const __m256d b = _mm256_loadu_pd(x + k + 1);
        const __m256d c = _mm256_loadu_pd(x + k + 2);
        const __m256d d = _mm256_sub_pd(_mm256_add_pd(a, c), _mm256_mul_pd(two, b));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double s = hsum(acc);
    for (; k + 2 < n; ++k) {
        const double d = second_diff_at(x, k);
        s += d * d;
    }
    return s;
}

void second_diff_normal_apply(const double* x, double* g, std::size_t n, double scale) {
    if (n < 3) return;
    for (std::size_t i = 0; i < 2 && i < n; ++i) g[i] += scale * normal_row_edge(x, n, i);

    const __m256d four = _mm256_set1_pd(4.0);
    const __m256d six = _mm256_set1_pd(6.0);
    const __m256d sc = _mm256_set1_pd(scale);
    std::size_t i = 2;
    for (; i + 6 <= n; i += 4) {
        const __m256d xm2 = _mm256_loadu_pd(x + i - 2);
        const __m256d xm1 = _mm256_loadu_pd(x + i - 1);
        const __m256d x0 = _mm256_loadu_pd(x + i);
        const __m256d xp1 = _mm256_loadu_pd(x + i + 1);
        const __m256d xp2 = _mm256_loadu_pd(x + i + 2);
        const __m256d outer = _mm256_add_pd(xm2, xp2);
        const __m256d inner = _mm256_add_pd(xm1, xp1);
        const __m256d row = _mm256_add_pd(_mm256_sub_pd(outer, _mm256_mul_pd(four, inner)), _mm256_mul_pd(six, x0));
        _mm256_storeu_pd(g + i, _mm256_add_pd(_mm256_loadu_pd(g + i), _mm256_mul_pd(sc, row)));
    }
    for (; i < n; ++i) {
        const double row = is_edge_row(n, i) ? normal_row_edge(x, n, i) : normal_row_interior(x, i);
        g[i] += scale * row;
    }
}

double sq_dev_sum(const double* v, std::size_t n, double center) {
    const __m256d c = _mm256_set1_pd(center);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v + i), c);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double d = v[i] - center;
        s += d * d;
    }
    return s;
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void implied_r(const double* e, const double* npl, const double* p, double* r, std::size_t m) {
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
        const __m256d ev = _mm256_loadu_pd(e + i);
        const __m256d nv = _mm256_loadu_pd(npl + i);
        const __m256d nn = _mm256_loadu_pd(npl + i + 1);
        const __m256d pv = _mm256_loadu_pd(p + i);
        const __m256d inflow = _mm256_mul_pd(pv, _mm256_sub_pd(ev, nv));
        _mm256_storeu_pd(r + i, _mm256_div_pd(_mm256_sub_pd(inflow, _mm256_sub_pd(nn, nv)), nv));
    }
    for (; i < m; ++i) r[i] = (p[i] * (e[i] - npl[i]) - (npl[i + 1] - npl[i])) / npl[i];
}

}  // namespace

const KernelTable kAvx2Table{
    Isa::Avx2, &second_diff_sq_sum, &second_diff_normal_apply, &sq_dev_sum, &dot, &implied_r,
};

}  // namespace quasipd::kernels::detail
