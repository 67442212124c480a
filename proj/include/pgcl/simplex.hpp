#pragma once

#include <vector>

#include "pgcl/rational.hpp"

namespace pgcl {

struct LpResult {
    Rational value;
    std::vector<Rational> x;
};

/// Maximizes c.x subject to A x <= b, x >= 0, in exact rationals.
/// Requires b >= 0 so the origin is feasible (no phase I). Pivoting follows
/// Bland's rule, which cannot cycle. Throws when the problem is unbounded;
/// callers pose box-bounded problems.
inline LpResult simplex_max(const std::vector<std::vector<Rational>>& a,
                            const std::vector<Rational>& b, const std::vector<Rational>& c) {
    const std::size_t m = a.size(), n = c.size();
    // tableau rows: [A | I | rhs]; reduced-cost row holds current c
    std::vector<std::vector<Rational>> t(m, std::vector<Rational>(n + m + 1, Rational(0)));
    for (std::size_t i = 0; i < m; ++i) {
        if (b[i] < 0) throw SemanticError("internal: simplex needs nonnegative rhs");
        for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
        t[i][n + i] = 1;
        t[i][n + m] = b[i];
    }
    std::vector<Rational> rc(n + m, Rational(0));
    for (std::size_t j = 0; j < n; ++j) rc[j] = c[j];
    Rational value(0);
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    for (;;) {
        std::size_t enter = n + m;
        for (std::size_t j = 0; j < n + m; ++j)
            if (rc[j] > 0) {
                enter = j;
                break;
            }
        if (enter == n + m) break;

        std::size_t leave = m;
        Rational best(0);
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] <= 0) continue;
            Rational ratio = t[i][n + m] / t[i][enter];
            if (leave == m || ratio < best ||
                (ratio == best && basis[i] < basis[leave]))
            {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m) throw SemanticError("internal: LP unbounded");

        const Rational piv = t[leave][enter];
        for (auto& v : t[leave]) v /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            const Rational f = t[i][enter];
            for (std::size_t j = 0; j <= n + m; ++j) t[i][j] -= f * t[leave][j];
        }
        const Rational fr = rc[enter];
        for (std::size_t j = 0; j < n + m; ++j) rc[j] -= fr * t[leave][j];
        value += fr * t[leave][n + m];
        basis[leave] = enter;
    }

    LpResult out;
    out.value = value;
    out.x.assign(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) out.x[basis[i]] = t[i][n + m];
    return out;
}

}  // namespace pgcl
