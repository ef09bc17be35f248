#pragma once

// Data-parallel inner loops of the estimator. Every kernel has a scalar
// reference implementation; vector variants (AVX2 on x86-64, NEON on AArch64)
// are selected once at runtime from the host CPU and must agree with the
// reference (bitwise for elementwise kernels, to rounding for reductions).
//
// Setting QUASIPD_KERNELS=scalar in the environment forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace quasipd::kernels {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
    Isa isa;
    /// sum_{i=1}^{n-2} (x[i+1] + x[i-1] - 2 x[i])^2
    double (*second_diff_sq_sum)(const double* x, std::size_t n);
    /// g[i] += scale * (D^T D x)[i] where D is the second-difference operator
    void (*second_diff_normal_apply)(const double* x, double* g, std::size_t n, double scale);
    /// sum (v[i] - center)^2
    double (*sq_dev_sum)(const double* v, std::size_t n, double center);
    double (*dot)(const double* a, const double* b, std::size_t n);
    /// r[i] = (p[i] * (e[i] - npl[i]) - (npl[i+1] - npl[i])) / npl[i], i < m
    void (*implied_r)(const double* e, const double* npl, const double* p, double* r, std::size_t m);
};

[[nodiscard]] std::string_view isa_name(Isa isa) noexcept;
[[nodiscard]] bool isa_available(Isa isa) noexcept;

/// Table for a specific ISA; falls back to scalar when unavailable.
[[nodiscard]] const KernelTable& table(Isa isa) noexcept;

/// Table chosen for this process (resolved once).
[[nodiscard]] const KernelTable& active() noexcept;

// Convenience wrappers over the active table.
double second_diff_sq_sum(std::span<const double> x);
void second_diff_normal_apply(std::span<const double> x, std::span<double> g, double scale);
double sq_dev_sum(std::span<const double> v, double center);
double dot(std::span<const double> a, std::span<const double> b);
void implied_r(std::span<const double> e, std::span<const double> npl, std::span<const double> p,
               std::span<double> r);

}  // namespace quasipd::kernels
