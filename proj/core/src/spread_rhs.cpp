#include "geospread/spread_rhs.hpp"

#include <cmath>
#include <random>

namespace geospread {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_dims(const OscillatorConfig& config, const SpreadState& state) {
    if (state.xi.size() != config.n() || state.xi_dot.size() != config.n())
        throw DimensionMismatch("spread state dimension does not match config");
}

double mean_phase(const OscillatorConfig& config) {
    return kTwoPi * config.phase_fraction() * static_cast<double>(config.n() + 1) /
           static_cast<double>(config.n());
}

} // namespace

std::vector<double> eisenhart_accel(const OscillatorConfig& config, const SpreadState& state) {
    check_dims(config, state);
    const double w2 = config.omega() * config.omega();
    std::vector<double> out(config.n());
    for (std::size_t k = 0; k < config.n(); ++k)
        out[k] = -w2 * state.xi[k];
    return out;
}

void jacobi_accel_generic_into(const OscillatorConfig& config, const PhasePoint& point,
                               const std::vector<double>& xi, const std::vector<double>& xi_dot,
                               std::vector<double>& accel_out, double kinetic_floor) {
    const std::size_t n = config.n();
    if (point.q.size() != n || xi.size() != n || xi_dot.size() != n)
        throw DimensionMismatch("phase point / spread state dimension does not match config");
    const double kin = point.kinetic;
    if (!(kin > kinetic_floor))
        throw SingularKineticEnergy(point.t, kin);

    const double w2 = config.omega() * config.omega();
    const auto& q = point.q;
    const auto& qd = point.q_dot;

    // The j-contractions of the mixing terms share five scalars across k.
    double qd_xid = 0.0, q_xid = 0.0, q_xi = 0.0, qd_xi = 0.0, qd_q = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        qd_xid += qd[j] * xi_dot[j];
        q_xid += q[j] * xi_dot[j];
        q_xi += q[j] * xi[j];
        qd_xi += qd[j] * xi[j];
        qd_q += qd[j] * q[j];
    }

    const double w2_t = w2 / kin;
    accel_out.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        accel_out[k] = -w2 * xi[k] -
                       w2_t * (q[k] * qd_xid - qd[k] * q_xid + w2 * q[k] * q_xi -
                               qd[k] * qd_xi - w2_t * qd_q * qd[k] * q_xi);
    }
}

std::vector<double> jacobi_accel_generic(const OscillatorConfig& config, const PhasePoint& point,
                                         const SpreadState& state, double kinetic_floor) {
    check_dims(config, state);
    std::vector<double> out;
    jacobi_accel_generic_into(config, point, state.xi, state.xi_dot, out, kinetic_floor);
    return out;
}

CouplingMatrices couplings(const OscillatorConfig& config, double t, double kinetic_floor) {
    const std::size_t n = config.n();
    const double kin = kinetic_closed_form(config, t);
    if (!(kin > kinetic_floor))
        throw SingularKineticEnergy(t, kin);

    const double w = config.omega();
    const double c2 = config.amplitude() * config.amplitude();
    const double pref = w * w * c2 / kin;                       // w^2 C^2 / T
    const double kpref = -pref * pref / 2.0;                    // -w^4 C^4 / 2T^2
    const double drive = std::sin(2.0 * w * t + mean_phase(config));
    const auto& theta = config.phases();

    CouplingMatrices m;
    m.n = n;
    m.t = t;
    m.i_mat.resize(n * n);
    m.j_mat.resize(n * n);
    m.k_mat.resize(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            const double diff = (k == j) ? 0.0 : std::sin(theta[k] - theta[j]);
            const double sum_arg = 2.0 * w * t + theta[k] + theta[j];
            m.i_mat[k * n + j] = pref * diff;
            m.j_mat[k * n + j] = pref * std::cos(sum_arg);
            m.k_mat[k * n + j] = kpref * drive * (std::sin(sum_arg) - diff);
        }
    }
    return m;
}

std::vector<double> jacobi_accel_closed(const OscillatorConfig& config, double t,
                                        const SpreadState& state, double kinetic_floor,
                                        double coupling_scale) {
    check_dims(config, state);
    const std::size_t n = config.n();
    const double w = config.omega();
    const double w2 = w * w;
    const CouplingMatrices m = couplings(config, t, kinetic_floor);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        double mix_dot = 0.0, mix = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            mix_dot += m.i_mat[k * n + j] * state.xi_dot[j];
            mix += (m.j_mat[k * n + j] + m.k_mat[k * n + j]) * state.xi[j];
        }
        out[k] = -w2 * state.xi[k] - coupling_scale * (w * mix_dot + w2 * mix);
    }
    return out;
}

EisenhartRhs::EisenhartRhs(const OscillatorConfig& config)
    : n_(config.n()), omega_sq_(config.omega() * config.omega()) {}

void EisenhartRhs::accel(double /*t*/, const std::vector<double>& xi,
                         const std::vector<double>& /*xi_dot*/,
                         std::vector<double>& accel_out) const {
    accel_out.resize(n_);
    for (std::size_t k = 0; k < n_; ++k)
        accel_out[k] = -omega_sq_ * xi[k];
}

JacobiGenericRhs::JacobiGenericRhs(const OscillatorConfig& config, double kinetic_floor)
    : config_(config), kinetic_floor_(kinetic_floor) {}

void JacobiGenericRhs::accel(double t, const std::vector<double>& xi,
                             const std::vector<double>& xi_dot,
                             std::vector<double>& accel_out) const {
    trajectory_into(config_, t, scratch_);
    jacobi_accel_generic_into(config_, scratch_, xi, xi_dot, accel_out, kinetic_floor_);
}

JacobiClosedRhs::JacobiClosedRhs(const OscillatorConfig& config, double kinetic_floor,
                                 double coupling_scale)
    : config_(config), kinetic_floor_(kinetic_floor), coupling_scale_(coupling_scale) {}

void JacobiClosedRhs::accel(double t, const std::vector<double>& xi,
                            const std::vector<double>& xi_dot,
                            std::vector<double>& accel_out) const {
    SpreadState st;
    st.t = t;
    st.xi = xi;
    st.xi_dot = xi_dot;
    accel_out = jacobi_accel_closed(config_, t, st, kinetic_floor_, coupling_scale_);
}

namespace {

// Coefficient blocks of the metric-derived RHS, written so that
//   accel_k = -w^2 xi_k - sum_j [ Ci(k,j) xi'_j + (Cj(k,j) + Ck(k,j)) xi_j ].
struct GenericBlocks {
    std::vector<double> ci, cj, ck;  // row-major n x n
};

GenericBlocks generic_blocks(const OscillatorConfig& config, const PhasePoint& p) {
    const std::size_t n = config.n();
    const double w2 = config.omega() * config.omega();
    const double w2_t = w2 / p.kinetic;
    double qd_q = 0.0;
    for (std::size_t m = 0; m < n; ++m)
        qd_q += p.q_dot[m] * p.q[m];
    GenericBlocks b;
    b.ci.resize(n * n);
    b.cj.resize(n * n);
    b.ck.resize(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            b.ci[k * n + j] = w2_t * (p.q[k] * p.q_dot[j] - p.q[j] * p.q_dot[k]);
            b.cj[k * n + j] = w2_t * (w2 * p.q[k] * p.q[j] - p.q_dot[k] * p.q_dot[j]);
            b.ck[k * n + j] = -w2_t * w2_t * qd_q * p.q_dot[k] * p.q[j];
        }
    }
    return b;
}

double frob(const std::vector<double>& a) {
    double s = 0.0;
    for (double x : a)
        s += x * x;
    return std::sqrt(s);
}

double rel_block_dev(const std::vector<double>& a, const std::vector<double>& b) {
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        diff += d * d;
    }
    const double scale = std::max({frob(a), frob(b), 1e-300});
    return std::sqrt(diff) / scale;
}

} // namespace

RhsComparison compare_rhs(const OscillatorConfig& config, const std::vector<double>& sample_times,
                          std::size_t trials, std::uint64_t seed) {
    if (sample_times.empty())
        throw InvalidParameter("compare_rhs needs at least one sample time");
    const std::size_t n = config.n();
    const double w = config.omega();
    const double w2 = w * w;
    const double floor = 1e-12 * config.mean_kinetic();

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    RhsComparison rep;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const double t = sample_times[trial % sample_times.size()];
        PhasePoint p = trajectory(config, t);
        if (!(p.kinetic > floor)) {
            ++rep.skipped;
            continue;
        }

        SpreadState st;
        st.t = t;
        st.xi.resize(n);
        st.xi_dot.resize(n);
        double norm2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            st.xi[k] = gauss(rng);
            st.xi_dot[k] = gauss(rng);
            norm2 += st.xi[k] * st.xi[k] + st.xi_dot[k] * st.xi_dot[k];
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t k = 0; k < n; ++k) {
            st.xi[k] *= inv;
            st.xi_dot[k] *= inv;
        }

        const std::vector<double> ag = jacobi_accel_generic(config, p, st, floor);
        const std::vector<double> ac = jacobi_accel_closed(config, t, st, floor);
        double diff2 = 0.0, ref2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double d = ag[k] - ac[k];
            diff2 += d * d;
            ref2 += ag[k] * ag[k];
        }
        rep.max_total =
            std::max(rep.max_total, std::sqrt(diff2) / std::max(std::sqrt(ref2), 1e-300));

        const GenericBlocks gb = generic_blocks(config, p);
        const CouplingMatrices cm = couplings(config, t, floor);
        std::vector<double> ci(n * n), cj(n * n), ck(n * n);
        for (std::size_t e = 0; e < n * n; ++e) {
            ci[e] = w * cm.i_mat[e];
            cj[e] = w2 * cm.j_mat[e];
            ck[e] = w2 * cm.k_mat[e];
        }
        rep.max_i_block = std::max(rep.max_i_block, rel_block_dev(gb.ci, ci));
        rep.max_j_block = std::max(rep.max_j_block, rel_block_dev(gb.cj, cj));
        rep.max_k_block = std::max(rep.max_k_block, rel_block_dev(gb.ck, ck));
        ++rep.samples;
    }
    return rep;
}

} // namespace geospread
