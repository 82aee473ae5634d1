#include "geospread/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <tuple>

namespace geospread {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

SweepRow eval_point(const SweepSpec& spec, const GridPoint& pt, std::size_t index) {
    const OscillatorConfig config(pt.n_osc, pt.omega, pt.f);
    const FluctuationStats stats = fluctuation_stats(config);

    SweepRow row;
    row.n_osc = pt.n_osc;
    row.f = pt.f;
    row.omega = pt.omega;
    row.sigma = stats.sigma;
    row.sqrt_sigma = stats.sigma_sqrt;
    row.lambda = std::numeric_limits<double>::quiet_NaN();
    row.min_kinetic =
        stats.mean_kinetic *
        (1.0 - std::fabs(fluctuation_amplitude(pt.n_osc, pt.f)));

    if (spec.numeric_variance)
        row.abs_variance = sigma_numeric(config, spec.variance_samples).variance;
    else
        row.abs_variance = stats.sigma * stats.mean_kinetic * stats.mean_kinetic;

    if (!spec.integrate)
        return row;

    IntegrationParams params = spec.params;
    if (params.xi0_policy == Xi0Policy::SeededRandomUnit)
        params.seed = mix_seed(spec.params.seed, index);
    try {
        const LyapunovEstimate est = estimate_lambda(config, params);
        row.lambda = est.lambda;
        row.renorm_count = est.renorm_count;
        row.min_kinetic = est.min_kinetic;
        row.diverged = est.diverged;
        row.runtime_s = est.t_end;
    } catch (const SingularKineticEnergy& e) {
        row.min_kinetic = e.kinetic();
        row.runtime_s = e.time();
    }
    return row;
}

} // namespace

SweepResult run_sweep(const SweepSpec& spec, unsigned jobs) {
    if (spec.grid.empty())
        throw InvalidParameter("sweep grid must be non-empty");
    {
        auto keys = spec.grid;
        std::sort(keys.begin(), keys.end(), [](const GridPoint& a, const GridPoint& b) {
            return std::tie(a.n_osc, a.f, a.omega) < std::tie(b.n_osc, b.f, b.omega);
        });
        const auto dup = std::adjacent_find(
            keys.begin(), keys.end(), [](const GridPoint& a, const GridPoint& b) {
                return a.n_osc == b.n_osc && a.f == b.f && a.omega == b.omega;
            });
        if (dup != keys.end())
            throw InvalidParameter("sweep grid points must be unique");
    }
    if (spec.integrate)
        spec.params.validate();

    if (jobs == 0)
        jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, spec.grid.size());

    std::vector<SweepRow> rows(spec.grid.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < spec.grid.size(); ++i)
            rows[i] = eval_point(spec, spec.grid[i], i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= spec.grid.size())
                    return;
                rows[i] = eval_point(spec, spec.grid[i], i);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (unsigned w = 0; w < jobs; ++w)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }

    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return std::tie(a.n_osc, a.f, a.omega) < std::tie(b.n_osc, b.f, b.omega);
    });

    SweepResult result;
    result.label = spec.label;
    result.rows = std::move(rows);
    return result;
}

SweepSpec fig1_spec(std::size_t n_osc, double omega) {
    SweepSpec spec;
    spec.label = "fig1";
    spec.integrate = false;
    for (int k = 0; k <= 720; ++k)
        spec.grid.push_back({n_osc, static_cast<double>(k) / 720.0, omega});
    return spec;
}

SweepSpec fig2_spec() {
    SweepSpec spec;
    spec.label = "fig2";
    spec.params.metric = Metric::JacobiGeneric;
    // the weakly unstable f >= 0.35 families need the longer horizon for the
    // running estimate to settle enough that equal-sigma points superpose
    spec.params.t_max_periods = 2000.0;
    for (int j = 1; j <= 14; ++j) {
        const auto n = static_cast<std::size_t>(2 + j * j);
        for (int m = 1; m <= 9; ++m)
            spec.grid.push_back({n, static_cast<double>(m) / 20.0, kTwoPi});
    }
    return spec;
}

SweepSpec fig3_spec() {
    SweepSpec spec;
    spec.label = "fig3";
    spec.params.metric = Metric::JacobiGeneric;
    spec.numeric_variance = true;
    for (int k = 0; k < 25; ++k)
        spec.grid.push_back({2, static_cast<double>(2 * k + 1) / 100.0, kTwoPi});
    return spec;
}

SweepSpec fig4_spec() {
    SweepSpec spec;
    spec.label = "fig4";
    spec.params.metric = Metric::JacobiGeneric;
    for (int k = 1; k <= 10; ++k)
        spec.grid.push_back({10, 1.0, static_cast<double>(k) * M_PI});
    return spec;
}

SweepSpec eisenhart_control_spec() {
    SweepSpec spec = fig2_spec();
    spec.label = "eisenhart-control";
    spec.params = IntegrationParams{};  // control runs at the 500-period default
    spec.params.metric = Metric::Eisenhart;
    return spec;
}

SweepResult run_fig1(unsigned jobs) { return run_sweep(fig1_spec(), jobs); }
SweepResult run_fig2(unsigned jobs) { return run_sweep(fig2_spec(), jobs); }
SweepResult run_fig3(unsigned jobs) { return run_sweep(fig3_spec(), jobs); }
SweepResult run_fig4(unsigned jobs) { return run_sweep(fig4_spec(), jobs); }
SweepResult run_eisenhart_control(unsigned jobs) {
    return run_sweep(eisenhart_control_spec(), jobs);
}

std::vector<GridPoint> default_audit_grid() {
    return {
        {2, 0.25, kTwoPi}, {3, 0.30, kTwoPi}, {5, 0.10, kTwoPi},
        {7, 0.05, kTwoPi}, {10, 0.45, kTwoPi}, {10, 1.00, kTwoPi},
    };
}

AuditReport run_audit(const std::vector<GridPoint>& grid, std::size_t trials,
                      std::uint64_t seed) {
    if (grid.empty())
        throw InvalidParameter("audit grid must be non-empty");
    if (trials == 0)
        throw InvalidParameter("audit needs trials >= 1");
    AuditReport report;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& pt = grid[i];
        const OscillatorConfig config(pt.n_osc, pt.omega, pt.f);
        // sample times spread over one fluctuation period; times at which T
        // sits below the floor are skipped and counted by compare_rhs
        std::vector<double> times;
        const std::size_t n_times = std::min<std::size_t>(trials, 16);
        for (std::size_t k = 0; k < n_times; ++k)
            times.push_back((static_cast<double>(k) + 0.13) * M_PI /
                            (config.omega() * static_cast<double>(n_times)));
        AuditRow row{pt.n_osc, pt.f, pt.omega,
                     compare_rhs(config, times, trials, mix_seed(seed, i))};
        report.rows.push_back(row);
    }
    return report;
}

} // namespace geospread
