#pragma once

#include <cmath>
#include <vector>

#include "melnikov/numerics/oval.hpp"
#include "melnikov/numerics/shooting.hpp"
#include "melnikov/numerics/zeros.hpp"

namespace melnikov {

/// Least-squares fit g(t) ~ a + b t ln^2|t| + c t ln|t| + d t near t = 0^-.
struct LogFit {
    double a = 0, b = 0, c = 0, d = 0;
    double max_residual = 0;
    std::vector<double> t, values;
};

inline LogFit fit_log_expansion(const std::vector<double>& t, const std::vector<double>& v) {
    std::vector<std::vector<double>> A;
    for (double s : t) {
        const double l = std::log(std::abs(s));
        A.push_back({1.0, s * l * l, s * l, s});
    }
    const auto x = least_squares(A, v);
    LogFit f{x[0], x[1], x[2], x[3], 0, t, v};
    for (std::size_t i = 0; i < t.size(); ++i) {
        double m = 0;
        for (int j = 0; j < 4; ++j) m += A[i][j] * x[j];
        f.max_residual = std::max(f.max_residual, std::abs(m - v[i]));
    }
    return f;
}

/// Samples of I_* on a logarithmic grid in [-1e-2, -1e-4] and their fit.
inline LogFit istar_asymptotics(int samples = 24) {
    std::vector<double> t, v;
    for (int i = 0; i < samples; ++i) {
        const double s = -std::pow(10.0, -2.0 - 2.0 * i / (samples - 1));
        t.push_back(s);
        v.push_back(moment_star(trace_oval(d4_spec(), s, Annulus::Center)));
    }
    return fit_log_expansion(t, v);
}

/// t M3(t) = c_{-1} t I_{-1} + (c0 t + c1) I0 + c* I_* sampled near 0^-: its t ln^2 coefficient
/// comes from the I_* term alone.
inline LogFit d4_tm3_asymptotics(const D4GenFn& g, int samples = 24) {
    std::vector<double> t, v;
    for (int i = 0; i < samples; ++i) {
        const double s = -std::pow(10.0, -2.0 - 2.0 * i / (samples - 1));
        t.push_back(s);
        v.push_back(s * evaluate(g, s));
    }
    return fit_log_expansion(t, v);
}

}  // namespace melnikov
