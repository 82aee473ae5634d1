#pragma once
#include <cstdint>
#include <cstddef>
#include <vector>

#include "geospread/oscillator.hpp"

namespace geospread {

/// Geodesic-spread state: spread vector xi, its time derivative, and the
/// accumulated log of renormalization factors.
struct SpreadState {
    double t = 0.0;
    std::vector<double> xi;
    std::vector<double> xi_dot;
    double log_norm = 0.0;
};

/// Right-hand side of a second-order spread ODE, d^2 xi / dt^2 = accel(t, xi, xi').
class SpreadRhs {
public:
    virtual ~SpreadRhs() = default;
    virtual std::size_t dim() const = 0;
    virtual void accel(double t, const std::vector<double>& xi,
                       const std::vector<double>& xi_dot,
                       std::vector<double>& accel_out) const = 0;
};

/// Eisenhart-metric spread dynamics: d^2 xi^k/dt^2 = -w^2 xi^k
/// (the tangent dynamics of the ensemble; no mixing, no t-dependence).
std::vector<double> eisenhart_accel(const OscillatorConfig& config, const SpreadState& state);

/**
 * Jacobi-metric spread dynamics evaluated directly from the metric:
 *
 *   xi_k'' = -w^2 xi_k - (w^2/T) sum_j [ (q_k qd_j - q_j qd_k) xi_j'
 *            + ( w^2 q_k q_j - qd_k qd_j - (w^2/T)(sum_m qd_m q_m) qd_k q_j ) xi_j ]
 *
 * with q, qd, T taken from the supplied PhasePoint. The j-sums are rank-1
 * contractions, so the evaluation is O(N).
 *
 * Throws SingularKineticEnergy when point.kinetic <= kinetic_floor.
 */
std::vector<double> jacobi_accel_generic(const OscillatorConfig& config, const PhasePoint& point,
                                         const SpreadState& state, double kinetic_floor = 0.0);

/// In-place variant used by the propagation hot loop.
void jacobi_accel_generic_into(const OscillatorConfig& config, const PhasePoint& point,
                               const std::vector<double>& xi, const std::vector<double>& xi_dot,
                               std::vector<double>& accel_out, double kinetic_floor);

/**
 * Coupling matrices of the reduced Jacobi spread equation:
 *   I^k_j =  (w^2 C^2 / T)   sin(theta_k - theta_j)
 *   J^k_j =  (w^2 C^2 / T)   cos(2 w t + theta_k + theta_j)
 *   K^k_j = -(w^4 C^4 / 2T^2) sin(2 w t + Phi)
 *             [ sin(2 w t + theta_k + theta_j) - sin(theta_k - theta_j) ]
 * with T from the closed form and Phi = 2 pi f (N+1)/N. Dense N x N,
 * materialized per evaluation time. I is antisymmetric, J symmetric.
 */
struct CouplingMatrices {
    std::size_t n = 0;
    double t = 0.0;
    std::vector<double> i_mat, j_mat, k_mat;  // row-major

    double i(std::size_t k, std::size_t j) const { return i_mat[k * n + j]; }
    double j(std::size_t k, std::size_t j) const { return j_mat[k * n + j]; }
    double k(std::size_t k, std::size_t j) const { return k_mat[k * n + j]; }
};

CouplingMatrices couplings(const OscillatorConfig& config, double t, double kinetic_floor = 0.0);

/// Reduced-form Jacobi dynamics:
///   xi_k'' = -w^2 xi_k - w sum_j I^k_j xi_j' - w^2 sum_j (J^k_j + K^k_j) xi_j.
/// coupling_scale multiplies I, J, K (scale 0 reduces to the Eisenhart RHS,
/// used by tests).
std::vector<double> jacobi_accel_closed(const OscillatorConfig& config, double t,
                                        const SpreadState& state, double kinetic_floor = 0.0,
                                        double coupling_scale = 1.0);

class EisenhartRhs : public SpreadRhs {
public:
    explicit EisenhartRhs(const OscillatorConfig& config);
    std::size_t dim() const override { return n_; }
    void accel(double t, const std::vector<double>& xi, const std::vector<double>& xi_dot,
               std::vector<double>& accel_out) const override;

private:
    std::size_t n_;
    double omega_sq_;
};

class JacobiGenericRhs : public SpreadRhs {
public:
    JacobiGenericRhs(const OscillatorConfig& config, double kinetic_floor);
    std::size_t dim() const override { return config_.n(); }
    void accel(double t, const std::vector<double>& xi, const std::vector<double>& xi_dot,
               std::vector<double>& accel_out) const override;

private:
    OscillatorConfig config_;
    double kinetic_floor_;
    mutable PhasePoint scratch_;  // one instance per integration run
};

class JacobiClosedRhs : public SpreadRhs {
public:
    JacobiClosedRhs(const OscillatorConfig& config, double kinetic_floor,
                    double coupling_scale = 1.0);
    std::size_t dim() const override { return config_.n(); }
    void accel(double t, const std::vector<double>& xi, const std::vector<double>& xi_dot,
               std::vector<double>& accel_out) const override;

private:
    OscillatorConfig config_;
    double kinetic_floor_;
    double coupling_scale_;
};

/**
 * Consistency audit between the metric-derived RHS and the reduced closed
 * form, on identical random unit states. Deviations are reported for the
 * full acceleration and separately per coefficient block (xi'-coupling /
 * J-type / K-type), relative Frobenius norms, so a discrepancy localizes to
 * a single coupling. The I and J blocks follow from the metric-derived form
 * by trigonometric identity; the K block of the reduced form does not, and
 * the audit quantifies by how much.
 */
struct RhsComparison {
    std::size_t samples = 0;   ///< evaluated samples
    std::size_t skipped = 0;   ///< samples skipped for T at/below floor
    double max_total = 0.0;    ///< max ||a_generic - a_closed|| / ||a_generic||
    double max_i_block = 0.0;  ///< xi'-coupling block
    double max_j_block = 0.0;
    double max_k_block = 0.0;
};

RhsComparison compare_rhs(const OscillatorConfig& config, const std::vector<double>& sample_times,
                          std::size_t trials, std::uint64_t seed = 0x9E3779B9u);

} // namespace geospread
