#pragma once
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "geospread/spread_rhs.hpp"

namespace geospread {

enum class Metric { Eisenhart, JacobiGeneric, JacobiClosed };
enum class Xi0Policy { DeterministicBasis, SeededRandomUnit };
enum class LambdaUnits { PerTime, PerArcLength };

const char* to_string(Metric m);
const char* to_string(Xi0Policy p);
const char* to_string(LambdaUnits u);

/**
 * Fixed-step integration parameters. Times are stored in units of the
 * oscillation period 2*pi/omega so a parameter set carries across omega
 * sweeps unchanged; epsilon_t is relative to the mean kinetic energy.
 */
struct IntegrationParams {
    double dt_periods = 1.0 / 200.0;  ///< time step / period
    double t_max_periods = 500.0;     ///< total integration time / period
    double renorm_periods = 1.0;      ///< renormalization interval / period
    double epsilon_t_rel = 1e-12;     ///< kinetic floor eps_T / <T>
    Xi0Policy xi0_policy = Xi0Policy::DeterministicBasis;
    std::uint64_t seed = 0;
    Metric metric = Metric::JacobiGeneric;
    LambdaUnits lambda_units = LambdaUnits::PerTime;

    /// Throws InvalidParameter unless dt > 0, t_max >= 100 dt,
    /// renorm_interval >= dt and epsilon_t > 0.
    void validate() const;
};

/**
 * Largest-exponent estimate with its convergence record.
 * lambda is per unit time or per unit arc length, per IntegrationParams.
 * On divergence (any component beyond 1e300, or a non-finite step) the flag
 * is set and lambda is NaN rather than a fabricated number.
 */
struct LyapunovEstimate {
    double lambda = 0.0;
    std::vector<std::pair<double, double>> series;  ///< (t, running lambda)
    std::size_t renorm_count = 0;
    double min_kinetic = 0.0;
    double arc_length_total = 0.0;
    bool diverged = false;
    double t_end = 0.0;  ///< integrated time reached (= t_max unless diverged)
};

/// Composite norm ||(omega*xi, xi_dot)||; the omega weight puts both blocks
/// in units of 1/time so the norm is dimensionally consistent.
double composite_norm(const SpreadState& state, double omega);

/// Rescales (xi, xi_dot) to unit composite norm and adds log(norm) to
/// state.log_norm. Returns the log increment. Throws ZeroNormState.
double renormalize(SpreadState& state, double omega);

/// One classical RK4 step of the first-order system (xi, xi_dot) starting at
/// state.t; t advances by dt, log_norm is untouched. Propagates
/// SingularKineticEnergy from the RHS; throws NonFiniteState if any output
/// component is not finite.
SpreadState step_rk4(const SpreadRhs& rhs, const SpreadState& state, double dt);

std::unique_ptr<SpreadRhs> make_rhs(const OscillatorConfig& config, Metric metric,
                                    double kinetic_floor);

/// Integrates the spread dynamics selected by params.metric and returns the
/// exponent estimate with diagnostics.
LyapunovEstimate estimate_lambda(const OscillatorConfig& config, const IntegrationParams& params);

/// Engine variant taking an explicit RHS (synthetic dynamics in tests).
LyapunovEstimate estimate_lambda(const OscillatorConfig& config, const IntegrationParams& params,
                                 const SpreadRhs& rhs);

/// Least-squares slope of lambda(t) over the trailing tail_fraction of the
/// series; a near-zero slope signals convergence. Throws InsufficientSeries
/// when the series has fewer than 10 entries.
double lambda_series_tail_slope(const LyapunovEstimate& estimate, double tail_fraction);

/// splitmix64-style mixer for deriving per-point RNG streams from a global
/// seed; deterministic and independent of worker scheduling.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

} // namespace geospread
