#pragma once

#include <optional>
#include <vector>

#include "melnikov/rational.hpp"

namespace melnikov {

using Matrix = std::vector<std::vector<Rational>>;
using Vector = std::vector<Rational>;

/// Row-reduce in place; returns pivot columns.
inline std::vector<std::size_t> rref(Matrix& m, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
        std::size_t p = row;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[row]);
        const Rational inv = 1 / m[row][c];
        for (auto& v : m[row]) v *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][c] == 0) continue;
            const Rational f = m[r][c];
            for (std::size_t cc = c; cc < m[r].size(); ++cc) m[r][cc] -= f * m[row][cc];
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

/// Basis of {v : A v = 0}.
inline std::vector<Vector> nullspace(Matrix a, std::size_t cols) {
    auto piv = rref(a, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : piv) is_pivot[c] = true;
    std::vector<Vector> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        Vector v(cols, Rational(0));
        v[f] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -a[r][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// One solution of A v = b with free variables set to zero, or nothing.
inline std::optional<Vector> solve(Matrix a, const Vector& b, std::size_t cols) {
    for (std::size_t r = 0; r < a.size(); ++r) a[r].push_back(b[r]);
    auto piv = rref(a, cols);
    for (std::size_t r = piv.size(); r < a.size(); ++r)
        if (a[r][cols] != 0) return std::nullopt;
    Vector v(cols, Rational(0));
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = a[r][cols];
    return v;
}

}  // namespace melnikov
