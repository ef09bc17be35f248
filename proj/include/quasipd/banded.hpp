#pragma once

#include <span>
#include <vector>

namespace quasipd {

/// Symmetric matrix with bandwidth two, stored by diagonals:
/// diag[i] = A(i,i), off1[i] = A(i,i+1), off2[i] = A(i,i+2).
struct SymmetricPentadiagonal {
    std::vector<double> diag;
    std::vector<double> off1;
    std::vector<double> off2;

    explicit SymmetricPentadiagonal(std::size_t n) : diag(n, 0.0), off1(n > 0 ? n - 1 : 0, 0.0), off2(n > 1 ? n - 2 : 0, 0.0) {}

    [[nodiscard]] std::size_t size() const noexcept { return diag.size(); }

    /// Adds scale * D^T D, D the (n-2) x n second-difference operator.
    void add_second_difference_penalty(double scale);
};

/// Solves A x = rhs by banded LDL^T elimination in O(n). A must be positive
/// definite; a non-positive pivot raises Error(Numerical).
std::vector<double> solve_pentadiagonal(const SymmetricPentadiagonal& a, std::span<const double> rhs);

}  // namespace quasipd
