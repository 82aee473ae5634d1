#include "geospread/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace geospread {

namespace {
constexpr double kDivergenceGuard = 1e300;
} // namespace

const char* to_string(Metric m) {
    switch (m) {
        case Metric::Eisenhart: return "eisenhart";
        case Metric::JacobiGeneric: return "jacobi-generic";
        case Metric::JacobiClosed: return "jacobi-closed";
    }
    return "?";
}

const char* to_string(Xi0Policy p) {
    return p == Xi0Policy::DeterministicBasis ? "deterministic-basis" : "seeded-random-unit";
}

const char* to_string(LambdaUnits u) {
    return u == LambdaUnits::PerTime ? "per-time" : "per-arc-length";
}

void IntegrationParams::validate() const {
    if (!(dt_periods > 0.0))
        throw InvalidParameter("dt must be positive");
    if (!(t_max_periods >= 100.0 * dt_periods))
        throw InvalidParameter("t_max must be at least 100 dt");
    if (!(renorm_periods >= dt_periods))
        throw InvalidParameter("renormalization interval must be at least dt");
    if (!(epsilon_t_rel > 0.0))
        throw InvalidParameter("kinetic-energy floor must be positive");
}

double composite_norm(const SpreadState& state, double omega) {
    double s = 0.0;
    for (double x : state.xi)
        s += omega * omega * x * x;
    for (double v : state.xi_dot)
        s += v * v;
    return std::sqrt(s);
}

double renormalize(SpreadState& state, double omega) {
    const double norm = composite_norm(state, omega);
    if (norm == 0.0)
        throw ZeroNormState();
    const double inv = 1.0 / norm;
    for (double& x : state.xi)
        x *= inv;
    for (double& v : state.xi_dot)
        v *= inv;
    const double log_inc = std::log(norm);
    state.log_norm += log_inc;
    return log_inc;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

namespace {

/// Classical RK4 stepper with reusable stage buffers.
class Rk4Stepper {
public:
    explicit Rk4Stepper(std::size_t n)
        : sx_(n), sv_(n), a_(n), acc_x_(n), acc_v_(n) {}

    void step(const SpreadRhs& rhs, SpreadState& state, double t, double dt) {
        const std::size_t n = state.xi.size();
        auto& x = state.xi;
        auto& v = state.xi_dot;

        // stage 1
        rhs.accel(t, x, v, a_);
        for (std::size_t i = 0; i < n; ++i) {
            acc_x_[i] = v[i];
            acc_v_[i] = a_[i];
            sx_[i] = x[i] + 0.5 * dt * v[i];
            sv_[i] = v[i] + 0.5 * dt * a_[i];
        }
        // stage 2
        rhs.accel(t + 0.5 * dt, sx_, sv_, a_);
        for (std::size_t i = 0; i < n; ++i) {
            acc_x_[i] += 2.0 * sv_[i];
            acc_v_[i] += 2.0 * a_[i];
            const double next_x = x[i] + 0.5 * dt * sv_[i];
            sv_[i] = v[i] + 0.5 * dt * a_[i];
            sx_[i] = next_x;
        }
        // stage 3
        rhs.accel(t + 0.5 * dt, sx_, sv_, a_);
        for (std::size_t i = 0; i < n; ++i) {
            acc_x_[i] += 2.0 * sv_[i];
            acc_v_[i] += 2.0 * a_[i];
            sx_[i] = x[i] + dt * sv_[i];
            sv_[i] = v[i] + dt * a_[i];
        }
        // stage 4
        rhs.accel(t + dt, sx_, sv_, a_);
        bool finite = true;
        for (std::size_t i = 0; i < n; ++i) {
            acc_x_[i] += sv_[i];
            acc_v_[i] += a_[i];
            x[i] += dt / 6.0 * acc_x_[i];
            v[i] += dt / 6.0 * acc_v_[i];
            finite = finite && std::isfinite(x[i]) && std::isfinite(v[i]);
        }
        state.t = t + dt;
        if (!finite)
            throw NonFiniteState(state.t);
    }

private:
    std::vector<double> sx_, sv_, a_, acc_x_, acc_v_;
};

SpreadState initial_state(const OscillatorConfig& config, const IntegrationParams& params) {
    SpreadState st;
    st.xi.assign(config.n(), 0.0);
    st.xi_dot.assign(config.n(), 0.0);
    if (params.xi0_policy == Xi0Policy::DeterministicBasis) {
        st.xi[0] = 1.0;
    } else {
        std::mt19937_64 rng(params.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (double& x : st.xi)
            x = gauss(rng) / config.omega();
        for (double& v : st.xi_dot)
            v = gauss(rng);
    }
    renormalize(st, config.omega());
    st.log_norm = 0.0;  // the pre-normalization does not count toward lambda
    return st;
}

double max_abs(const SpreadState& st) {
    double m = 0.0;
    for (double x : st.xi)
        m = std::max(m, std::fabs(x));
    for (double v : st.xi_dot)
        m = std::max(m, std::fabs(v));
    return m;
}

} // namespace

SpreadState step_rk4(const SpreadRhs& rhs, const SpreadState& state, double dt) {
    if (!(dt > 0.0))
        throw InvalidParameter("step_rk4 needs dt > 0");
    if (state.xi.size() != rhs.dim() || state.xi_dot.size() != rhs.dim())
        throw DimensionMismatch("spread state dimension does not match RHS");
    SpreadState next = state;
    Rk4Stepper stepper(state.xi.size());
    stepper.step(rhs, next, state.t, dt);
    return next;
}

std::unique_ptr<SpreadRhs> make_rhs(const OscillatorConfig& config, Metric metric,
                                    double kinetic_floor) {
    switch (metric) {
        case Metric::Eisenhart:
            return std::make_unique<EisenhartRhs>(config);
        case Metric::JacobiGeneric:
            return std::make_unique<JacobiGenericRhs>(config, kinetic_floor);
        case Metric::JacobiClosed:
            return std::make_unique<JacobiClosedRhs>(config, kinetic_floor);
    }
    throw InvalidParameter("unknown metric");
}

LyapunovEstimate estimate_lambda(const OscillatorConfig& config,
                                 const IntegrationParams& params) {
    const double floor = params.epsilon_t_rel * config.mean_kinetic();
    const auto rhs = make_rhs(config, params.metric, floor);
    return estimate_lambda(config, params, *rhs);
}

LyapunovEstimate estimate_lambda(const OscillatorConfig& config, const IntegrationParams& params,
                                 const SpreadRhs& rhs) {
    params.validate();
    if (rhs.dim() != config.n())
        throw DimensionMismatch("RHS dimension does not match config");

    const double omega = config.omega();
    const double period = config.period();
    const double dt = params.dt_periods * period;
    const auto total_steps =
        static_cast<long long>(std::llround(params.t_max_periods / params.dt_periods));
    const auto renorm_every = std::max<long long>(
        1, static_cast<long long>(std::llround(params.renorm_periods / params.dt_periods)));

    SpreadState state = initial_state(config, params);
    Rk4Stepper stepper(config.n());

    LyapunovEstimate est;
    est.min_kinetic = kinetic_closed_form(config, 0.0);
    double arc = 0.0;
    double kin_prev = est.min_kinetic;

    auto horizon = [&](double t, double s) {
        return params.lambda_units == LambdaUnits::PerTime ? t : s;
    };

    for (long long i = 0; i < total_steps; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double t_next = static_cast<double>(i + 1) * dt;
        try {
            stepper.step(rhs, state, t, dt);
        } catch (const NonFiniteState& e) {
            est.diverged = true;
            est.t_end = e.time();
            break;
        }
        // trajectory bookkeeping on the step grid: kinetic minimum and the
        // trapezoidal arc length s = int 2T dt
        const double kin_mid = kinetic_closed_form(config, t + 0.5 * dt);
        const double kin_next = kinetic_closed_form(config, t_next);
        est.min_kinetic = std::min({est.min_kinetic, kin_mid, kin_next});
        arc += dt * (kin_prev + kin_next);
        kin_prev = kin_next;
        est.t_end = t_next;

        if (max_abs(state) > kDivergenceGuard) {
            est.diverged = true;
            break;
        }
        if ((i + 1) % renorm_every == 0) {
            renormalize(state, omega);
            ++est.renorm_count;
            est.series.emplace_back(t_next, state.log_norm / horizon(t_next, arc));
        }
    }

    est.arc_length_total = arc;
    if (est.diverged) {
        est.lambda = std::numeric_limits<double>::quiet_NaN();
        return est;
    }
    const double total_log = state.log_norm + std::log(composite_norm(state, omega));
    est.lambda = total_log / horizon(est.t_end, arc);
    if (est.series.empty() || est.series.back().first < est.t_end)
        est.series.emplace_back(est.t_end, est.lambda);
    else
        est.series.back().second = est.lambda;
    return est;
}

double lambda_series_tail_slope(const LyapunovEstimate& estimate, double tail_fraction) {
    const auto& s = estimate.series;
    if (s.size() < 10)
        throw InsufficientSeries("lambda series needs at least 10 entries");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw InvalidParameter("tail_fraction must lie in (0, 1]");
    const std::size_t m =
        std::max<std::size_t>(2, static_cast<std::size_t>(tail_fraction * s.size()));
    const std::size_t begin = s.size() - m;
    double mean_t = 0.0, mean_l = 0.0;
    for (std::size_t i = begin; i < s.size(); ++i) {
        mean_t += s[i].first;
        mean_l += s[i].second;
    }
    mean_t /= static_cast<double>(m);
    mean_l /= static_cast<double>(m);
    double num = 0.0, den = 0.0;
    for (std::size_t i = begin; i < s.size(); ++i) {
        const double dt_i = s[i].first - mean_t;
        num += dt_i * (s[i].second - mean_l);
        den += dt_i * dt_i;
    }
    return num / den;
}

} // namespace geospread
