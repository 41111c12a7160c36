#pragma once

#include <random>
#include <vector>

#include "melnikov/linsolve.hpp"
#include "melnikov/reduction.hpp"

namespace support {

using namespace melnikov;

/// Basis of polynomial one-forms of degree <= n: x^i y^j dx and x^i y^j dy.
inline std::vector<OneForm> monomial_forms(int n) {
    std::vector<OneForm> out;
    for (int d = 0; d <= n; ++d)
        for (int i = 0; i <= d; ++i) {
            out.push_back({WeightedPoly::mono(i, d - i), {}});
            out.push_back({{}, WeightedPoly::mono(i, d - i)});
        }
    return out;
}

inline OneForm combine(const std::vector<OneForm>& basis, const Vector& c) {
    OneForm w;
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (c[i] != 0) w += WeightedPoly(c[i]) * basis[i];
    return w;
}

/// Rows of the linear map coefficients -> (alpha, beta, gamma) of M_1.
inline Matrix m1_matrix(const std::vector<OneForm>& basis, const HamiltonianSpec& sp, Annulus a) {
    const bool sym = sp.symmetric_annulus(a);
    std::map<std::pair<int, int>, std::vector<Rational>> rows;
    for (std::size_t col = 0; col < basis.size(); ++col) {
        auto dec = reduce_ext({{0, normal_form(basis[col], sp)}}, sp, sym);
        auto r = dec.residual_at(0);
        for (int s = 0; s < 3; ++s)
            for (const auto& [e, c] : r[s].terms()) {
                auto& row = rows[{s, e}];
                row.resize(basis.size());
                row[col] = c;
            }
    }
    Matrix m;
    for (auto& [key, row] : rows) {
        row.resize(basis.size());
        m.push_back(row);
    }
    return m;
}

/// Random degree-n perturbation with M_1 identically zero on the annulus.
inline OneForm random_m1_zero(std::mt19937& rng, int n, const HamiltonianSpec& sp, Annulus a) {
    auto basis = monomial_forms(n);
    auto ker = nullspace(m1_matrix(basis, sp, a), basis.size());
    std::uniform_int_distribution<int> coef(-4, 4);
    Vector c(basis.size(), Rational(0));
    for (const auto& v : ker) {
        Rational s = coef(rng);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += s * v[i];
    }
    return combine(basis, c);
}

/// Random degree-n perturbation with every coefficient drawn from [-4, 4].
inline OneForm random_form(std::mt19937& rng, int n) {
    auto basis = monomial_forms(n);
    std::uniform_int_distribution<int> coef(-4, 4);
    Vector c(basis.size());
    for (auto& v : c) v = coef(rng);
    return combine(basis, c);
}

}  // namespace support
