#pragma once
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <vector>

#include "geospread/oscillator.hpp"

namespace testsupport {

inline double rel_err(double value, double reference) {
    return std::fabs(value - reference) / std::max(std::fabs(reference), 1e-300);
}

/// ranks with tie averaging
inline std::vector<double> ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]])
            ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    return pearson(ranks(x), ranks(y));
}

/// Literal transcription of the metric-derived spread equation as a double
/// sum; the oracle the factored library evaluator is checked against.
inline std::vector<double> jacobi_accel_reference(const geospread::OscillatorConfig& cfg,
                                                  const geospread::PhasePoint& p,
                                                  const std::vector<double>& xi,
                                                  const std::vector<double>& xi_dot) {
    const std::size_t n = cfg.n();
    const double w2 = cfg.omega() * cfg.omega();
    const double kin = p.kinetic;
    double qd_q = 0.0;
    for (std::size_t m = 0; m < n; ++m)
        qd_q += p.q_dot[m] * p.q[m];
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = -w2 * xi[k];
        for (std::size_t j = 0; j < n; ++j) {
            const double mix_dot = (p.q[k] * p.q_dot[j] - p.q[j] * p.q_dot[k]) * xi_dot[j];
            const double mix =
                (w2 * p.q[k] * p.q[j] - p.q_dot[k] * p.q_dot[j] -
                 (w2 / kin) * qd_q * p.q_dot[k] * p.q[j]) *
                xi[j];
            acc -= (w2 / kin) * (mix_dot + mix);
        }
        out[k] = acc;
    }
    return out;
}

inline std::vector<double> random_unit_vector(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> v(n);
    double norm2 = 0.0;
    for (auto& x : v) {
        x = gauss(rng);
        norm2 += x * x;
    }
    for (auto& x : v)
        x /= std::sqrt(norm2);
    return v;
}

} // namespace testsupport
