#pragma once
#include <cstddef>
#include <vector>

#include "geospread/errors.hpp"

namespace geospread {

/// sin(pi*x) with exact zeros at integer x and exact +/-1 at half-integers.
/// Plain std::sin(M_PI*x) leaves ~1e-16 residue at the zeros, which would
/// turn the removable singularities of the fluctuation formula into noise.
double sin_pi(double x);
/// cos(pi*x), same exactness guarantees as sin_pi.
double cos_pi(double x);

/**
 * Ensemble of N identical uncoupled harmonic oscillators,
 *   q^k(t) = C cos(w t + theta_k),  theta_k = k 2*pi*f/N,  k = 1..N.
 *
 * f in [0,1] is the fraction of the phase circle over which the phases are
 * spread; it tunes the kinetic-energy fluctuation. C defaults to 1 and is
 * uniform across the ensemble.
 */
class OscillatorConfig {
public:
    OscillatorConfig(std::size_t n_osc, double omega, double phase_fraction,
                     double amplitude = 1.0);

    std::size_t n() const { return n_; }
    double omega() const { return omega_; }
    double amplitude() const { return amplitude_; }
    double phase_fraction() const { return phase_fraction_; }

    /// theta_k = k*2*pi*f/N, k = 1..N (each in [0, 2*pi]).
    const std::vector<double>& phases() const { return phases_; }
    const std::vector<double>& cos_phases() const { return cos_phases_; }
    const std::vector<double>& sin_phases() const { return sin_phases_; }

    double period() const;        ///< 2*pi/omega
    double mean_kinetic() const;  ///< <T> = N (omega C / 2)^2
    double total_energy() const;  ///< E = N omega^2 C^2 / 2

private:
    std::size_t n_;
    double omega_;
    double phase_fraction_;
    double amplitude_;
    std::vector<double> phases_, cos_phases_, sin_phases_;
};

/// Standalone phase table, theta_k = k*2*pi*f/N.
std::vector<double> phases(std::size_t n_osc, double phase_fraction);

/// Instantaneous point on the analytic trajectory.
struct PhasePoint {
    double t = 0.0;
    std::vector<double> q;
    std::vector<double> q_dot;
    double kinetic = 0.0;  ///< T = (1/2) sum_k q_dot_k^2
};

PhasePoint trajectory(const OscillatorConfig& config, double t);
/// Allocation-free variant; resizes `out` if needed.
void trajectory_into(const OscillatorConfig& config, double t, PhasePoint& out);

/// V(q) = (1/2) omega^2 sum_k q_k^2.
double potential_energy(const OscillatorConfig& config, const std::vector<double>& q);

/// Signed modulation amplitude r(N,f) = sin(2*pi*f) / (N sin(2*pi*f/N)),
/// so that T(t) = <T> [1 - r cos(2 w t + Phi)] and sigma = r^2/2.
/// Removable singularities (f=0; N=1; N=2,f=1) are taken by analytic limit.
double fluctuation_amplitude(std::size_t n_osc, double phase_fraction);

/// Normalized kinetic-energy variance sigma(N,f) = (<T^2>-<T>^2)/<T>^2.
double sigma(std::size_t n_osc, double phase_fraction);

/// N -> infinity value of sigma: (sin(2*pi*f)/(sqrt(2)*2*pi*f))^2.
/// At f = 0 returns the limit value 1/2.
double sigma_limit(double phase_fraction);

/// Closed-form kinetic energy <T> [1 - r cos(2 w t + Phi)],
/// Phi = 2*pi*f*(N+1)/N.
double kinetic_closed_form(const OscillatorConfig& config, double t);

struct FluctuationStats {
    double sigma;         ///< normalized variance
    double sigma_sqrt;    ///< sqrt(sigma)
    double mean_kinetic;  ///< <T> = N (omega C / 2)^2
    double mean_phase;    ///< Phi = 2*pi*f*(N+1)/N
};

FluctuationStats fluctuation_stats(const OscillatorConfig& config);

/// Time-average oracle for sigma, independent of the closed form: uniform
/// endpoint-excluded sampling of T(t) from trajectory() over exactly one
/// fluctuation period pi/omega.
struct NumericFluctuation {
    double sigma;         ///< (<T^2>-<T>^2)/<T>^2
    double variance;      ///< <T^2>-<T>^2 (energy^2)
    double mean_kinetic;  ///< sampled <T>
};

NumericFluctuation sigma_numeric(const OscillatorConfig& config, std::size_t samples);

/// Jacobi-metric arc length s(t) = integral_0^t 2 T dt' along the physical
/// trajectory, trapezoidal rule with step <= dt. Monotone non-decreasing.
double arc_length(const OscillatorConfig& config, double t, double dt);

} // namespace geospread
