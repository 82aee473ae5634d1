#include "geospread/oscillator.hpp"

#include <cmath>
#include <string>

namespace geospread {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
} // namespace

SingularKineticEnergy::SingularKineticEnergy(double t, double kinetic)
    : std::runtime_error("kinetic energy " + std::to_string(kinetic) +
                         " at or below floor at t = " + std::to_string(t)),
      t_(t),
      kinetic_(kinetic) {}

NonFiniteState::NonFiniteState(double t)
    : std::runtime_error("non-finite spread state at t = " + std::to_string(t)), t_(t) {}

double sin_pi(double x) {
    double r = std::remainder(x, 2.0);  // r in [-1, 1], exact
    if (r > 0.5)
        r = 1.0 - r;
    else if (r < -0.5)
        r = -1.0 - r;
    return std::sin(M_PI * r);
}

double cos_pi(double x) {
    double r = std::remainder(x, 2.0);
    r = std::fabs(r);           // cos is even
    double sign = 1.0;
    if (r > 0.5) {              // cos(pi r) = -cos(pi (1-r))
        r = 1.0 - r;
        sign = -1.0;
    }
    return sign * std::cos(M_PI * r);
}

static void validate_count_fraction(std::size_t n_osc, double f) {
    if (n_osc == 0)
        throw InvalidParameter("n_osc must be >= 1");
    if (!(f >= 0.0 && f <= 1.0))
        throw InvalidParameter("phase_fraction must lie in [0, 1], got " + std::to_string(f));
}

OscillatorConfig::OscillatorConfig(std::size_t n_osc, double omega, double phase_fraction,
                                   double amplitude)
    : n_(n_osc), omega_(omega), phase_fraction_(phase_fraction), amplitude_(amplitude) {
    validate_count_fraction(n_osc, phase_fraction);
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw InvalidParameter("omega must be positive and finite");
    if (!(amplitude > 0.0) || !std::isfinite(amplitude))
        throw InvalidParameter("amplitude must be positive and finite");
    phases_ = geospread::phases(n_, phase_fraction_);
    cos_phases_.resize(n_);
    sin_phases_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) {
        cos_phases_[k] = std::cos(phases_[k]);
        sin_phases_[k] = std::sin(phases_[k]);
    }
}

double OscillatorConfig::period() const { return kTwoPi / omega_; }

double OscillatorConfig::mean_kinetic() const {
    const double half_amp = omega_ * amplitude_ / 2.0;
    return static_cast<double>(n_) * half_amp * half_amp;
}

double OscillatorConfig::total_energy() const {
    return static_cast<double>(n_) * omega_ * omega_ * amplitude_ * amplitude_ / 2.0;
}

std::vector<double> phases(std::size_t n_osc, double phase_fraction) {
    validate_count_fraction(n_osc, phase_fraction);
    const double step = kTwoPi * phase_fraction / static_cast<double>(n_osc);
    std::vector<double> theta(n_osc);
    for (std::size_t k = 0; k < n_osc; ++k)
        theta[k] = static_cast<double>(k + 1) * step;
    return theta;
}

void trajectory_into(const OscillatorConfig& config, double t, PhasePoint& out) {
    const std::size_t n = config.n();
    out.t = t;
    out.q.resize(n);
    out.q_dot.resize(n);
    // q^k = C cos(wt + theta_k), expanded against the cached phase table so a
    // single sincos serves the whole ensemble.
    const double c = std::cos(config.omega() * t);
    const double s = std::sin(config.omega() * t);
    const double amp = config.amplitude();
    const double vel = -config.amplitude() * config.omega();
    const auto& cp = config.cos_phases();
    const auto& sp = config.sin_phases();
    double twice_kin = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        out.q[k] = amp * (c * cp[k] - s * sp[k]);
        out.q_dot[k] = vel * (s * cp[k] + c * sp[k]);
        twice_kin += out.q_dot[k] * out.q_dot[k];
    }
    out.kinetic = 0.5 * twice_kin;
}

PhasePoint trajectory(const OscillatorConfig& config, double t) {
    PhasePoint p;
    trajectory_into(config, t, p);
    return p;
}

double potential_energy(const OscillatorConfig& config, const std::vector<double>& q) {
    double sum = 0.0;
    for (double qi : q)
        sum += qi * qi;
    return 0.5 * config.omega() * config.omega() * sum;
}

double fluctuation_amplitude(std::size_t n_osc, double phase_fraction) {
    validate_count_fraction(n_osc, phase_fraction);
    if (n_osc == 1)
        return 1.0;  // T = <T>(1 - cos(2wt + 2 theta_1)) for a single oscillator
    if (phase_fraction == 0.0)
        return 1.0;  // all in phase
    const double nd = static_cast<double>(n_osc);
    const double denom = nd * sin_pi(2.0 * phase_fraction / nd);
    if (denom == 0.0) {
        // Only reachable at the boundary (N=2, f=1 among representable inputs);
        // the 0/0 ratio has the analytic limit cos(2*pi*f)/cos(2*pi*f/N).
        return cos_pi(2.0 * phase_fraction) / cos_pi(2.0 * phase_fraction / nd);
    }
    return sin_pi(2.0 * phase_fraction) / denom;
}

double sigma(std::size_t n_osc, double phase_fraction) {
    const double r = fluctuation_amplitude(n_osc, phase_fraction);
    return 0.5 * r * r;
}

double sigma_limit(double phase_fraction) {
    if (!(phase_fraction >= 0.0 && phase_fraction <= 1.0))
        throw InvalidParameter("phase_fraction must lie in [0, 1]");
    if (phase_fraction == 0.0)
        return 0.5;  // sinc limit
    const double r = sin_pi(2.0 * phase_fraction) / (kTwoPi * phase_fraction);
    return 0.5 * r * r;
}

double kinetic_closed_form(const OscillatorConfig& config, double t) {
    const double r = fluctuation_amplitude(config.n(), config.phase_fraction());
    const double phi =
        kTwoPi * config.phase_fraction() * static_cast<double>(config.n() + 1) /
        static_cast<double>(config.n());
    return config.mean_kinetic() *
           (1.0 - r * std::cos(2.0 * config.omega() * t + phi));
}

FluctuationStats fluctuation_stats(const OscillatorConfig& config) {
    FluctuationStats st;
    st.sigma = sigma(config.n(), config.phase_fraction());
    st.sigma_sqrt = std::sqrt(st.sigma);
    st.mean_kinetic = config.mean_kinetic();
    st.mean_phase = kTwoPi * config.phase_fraction() *
                    static_cast<double>(config.n() + 1) / static_cast<double>(config.n());
    return st;
}

NumericFluctuation sigma_numeric(const OscillatorConfig& config, std::size_t samples) {
    if (samples < 100)
        throw InvalidParameter("sigma_numeric needs samples >= 100");
    // T(t) is exactly periodic with period pi/omega, so one endpoint-excluded
    // uniform period gives the exact average without windowing bias.
    const double period_t = M_PI / config.omega();
    const double h = period_t / static_cast<double>(samples);
    PhasePoint p;
    std::vector<double> kin(samples);
    double mean = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        trajectory_into(config, static_cast<double>(i) * h, p);
        kin[i] = p.kinetic;
        mean += p.kinetic;
    }
    mean /= static_cast<double>(samples);
    // centered second pass avoids the <T^2>-<T>^2 cancellation at small sigma
    double var = 0.0;
    for (double k : kin) {
        const double d = k - mean;
        var += d * d;
    }
    var /= static_cast<double>(samples);
    NumericFluctuation out;
    out.variance = var;
    out.mean_kinetic = mean;
    out.sigma = var / (mean * mean);
    return out;
}

double arc_length(const OscillatorConfig& config, double t, double dt) {
    if (!(t >= 0.0))
        throw InvalidParameter("arc_length needs t >= 0");
    if (!(dt > 0.0))
        throw InvalidParameter("arc_length needs dt > 0");
    if (t == 0.0)
        return 0.0;
    const auto steps = static_cast<std::size_t>(std::ceil(t / dt));
    const double h = t / static_cast<double>(steps);
    double sum = 0.0;
    double prev = 2.0 * kinetic_closed_form(config, 0.0);
    for (std::size_t i = 1; i <= steps; ++i) {
        const double cur = 2.0 * kinetic_closed_form(config, static_cast<double>(i) * h);
        sum += 0.5 * h * (prev + cur);
        prev = cur;
    }
    return sum;
}

} // namespace geospread
