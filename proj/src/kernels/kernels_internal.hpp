#pragma once

#include <cstddef>

#include "quasipd/kernels.hpp"

namespace quasipd::kernels::detail {

extern const KernelTable kScalarTable;
#if defined(QUASIPD_HAVE_AVX2_KERNELS)
extern const KernelTable kAvx2Table;
#endif
#if defined(QUASIPD_HAVE_NEON_KERNELS)
extern const KernelTable kNeonTable;
#endif

// Shared by all variants so that the non-vectorized boundary rows are identical.
inline double second_diff_at(const double* x, std::size_t k) { return x[k] + x[k + 2] - 2.0 * x[k + 1]; }

inline double normal_row_edge(const double* x, std::size_t n, std::size_t i) {
    double s = 0.0;
    if (i + 2 < n) s += second_diff_at(x, i);
    if (i >= 1 && i + 1 < n) s += -2.0 * second_diff_at(x, i - 1);
    if (i >= 2) s += second_diff_at(x, i - 2);
    return s;
}

inline double normal_row_interior(const double* x, std::size_t i) {
    return ((x[i - 2] + x[i + 2]) - 4.0 * (x[i - 1] + x[i + 1])) + 6.0 * x[i];
}

// Rows of D^T D that need the edge form: the first two and last two.
inline bool is_edge_row(std::size_t n, std::size_t i) { return i < 2 || i + 2 >= n; }

}  // namespace quasipd::kernels::detail
