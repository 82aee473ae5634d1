#pragma once
#include <string>
#include <vector>

#include "geospread/propagation.hpp"

namespace geospread {

struct GridPoint {
    std::size_t n_osc;
    double f;
    double omega;
};

/// One experiment: a (N, f, omega) grid plus the shared integration
/// parameter template. Points are embarrassingly parallel; rows come back
/// sorted by (n_osc, f, omega) regardless of execution order.
struct SweepSpec {
    std::vector<GridPoint> grid;
    IntegrationParams params;
    std::string label;
    bool integrate = true;            ///< false: fluctuation table only (fig1)
    bool numeric_variance = false;    ///< true: abs variance via the time-average oracle
    std::size_t variance_samples = 10000;
};

struct SweepRow {
    std::size_t n_osc = 0;
    double f = 0.0;
    double omega = 0.0;
    double sigma = 0.0;
    double sqrt_sigma = 0.0;
    double abs_variance = 0.0;  ///< <T^2>-<T>^2
    double lambda = 0.0;        ///< NaN when not computed (fig1, aborts, divergence)
    std::size_t renorm_count = 0;
    double min_kinetic = 0.0;
    bool diverged = false;
    /// Integrated simulation time reached (t_max when completed, the abort
    /// time otherwise). Deterministic by construction so CSV output is
    /// byte-reproducible; wall time lives in the run-metadata sidecar.
    double runtime_s = 0.0;
};

struct SweepResult {
    std::string label;
    std::vector<SweepRow> rows;
};

/// Runs every grid point, possibly on `jobs` worker threads (0 = hardware
/// concurrency). Per-point singular aborts are recorded in the row (NaN
/// lambda) and the sweep continues.
SweepResult run_sweep(const SweepSpec& spec, unsigned jobs = 0);

/// sigma(N, f) table on f in [0, 1] with step 1/720; no integration.
SweepSpec fig1_spec(std::size_t n_osc = 10, double omega = 6.283185307179586);
/// Jacobi-generic lambda over N = 2+j^2 (j=1..14) x f = 0.05..0.45 step 0.05.
SweepSpec fig2_spec();
/// N=2: lambda and the absolute kinetic-energy variance over an f grid.
SweepSpec fig3_spec();
/// N=10, f=1 (sigma = 0): lambda versus omega in {pi, 2pi, ..., 10pi}.
SweepSpec fig4_spec();
/// Same grid as fig2 under the Eisenhart metric (stability control).
SweepSpec eisenhart_control_spec();

SweepResult run_fig1(unsigned jobs = 0);
SweepResult run_fig2(unsigned jobs = 0);
SweepResult run_fig3(unsigned jobs = 0);
SweepResult run_fig4(unsigned jobs = 0);
SweepResult run_eisenhart_control(unsigned jobs = 0);

/// Blockwise RHS consistency audit across a config grid.
struct AuditRow {
    std::size_t n_osc;
    double f;
    double omega;
    RhsComparison cmp;
};

struct AuditReport {
    std::vector<AuditRow> rows;
};

std::vector<GridPoint> default_audit_grid();
AuditReport run_audit(const std::vector<GridPoint>& grid, std::size_t trials,
                      std::uint64_t seed = 0x9E3779B9u);

} // namespace geospread
