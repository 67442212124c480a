#pragma once

#include <optional>
#include <vector>

#include "pgcl/rational.hpp"

namespace pgcl {

/// Solves A x = b by Gauss-Jordan elimination in exact rationals.
/// Returns nullopt when A is singular. A is row-major n x n.
inline std::optional<std::vector<Rational>> solve_linear(std::vector<std::vector<Rational>> a,
                                                         std::vector<Rational> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        const Rational inv = Rational(1) / a[col][col];
        for (std::size_t j = col; j < n; ++j) a[col][j] *= inv;
        b[col] *= inv;
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0) continue;
            const Rational f = a[row][col];
            for (std::size_t j = col; j < n; ++j) a[row][j] -= f * a[col][j];
            b[row] -= f * b[col];
        }
    }
    return b;
}

}  // namespace pgcl
