#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "geospread/csv_io.hpp"
#include "geospread/propagation.hpp"
#include "geospread/sweeps.hpp"

namespace geospread::cli {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Options {
    std::size_t n = 10;
    double f = 0.25;
    double omega = kTwoPi;
    IntegrationParams params;
    unsigned jobs = 0;
    std::size_t trials = 100;
    std::string out;
    std::string plot;
    std::string series;
};

const std::map<std::string, Metric> kMetricMap{
    {"eisenhart", Metric::Eisenhart},
    {"jacobi-generic", Metric::JacobiGeneric},
    {"jacobi-closed", Metric::JacobiClosed},
};
const std::map<std::string, Xi0Policy> kXi0Map{
    {"deterministic-basis", Xi0Policy::DeterministicBasis},
    {"seeded-random-unit", Xi0Policy::SeededRandomUnit},
};
const std::map<std::string, LambdaUnits> kUnitsMap{
    {"per-time", LambdaUnits::PerTime},
    {"per-arc-length", LambdaUnits::PerArcLength},
};

void add_integration_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--metric", o.params.metric, "Spread dynamics metric")
        ->transform(CLI::CheckedTransformer(kMetricMap, CLI::ignore_case))
        ->default_str(to_string(o.params.metric));
    cmd->add_option("--dt-per-period", o.params.dt_periods,
                    "Time step as a fraction of the period 2*pi/omega")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--t-max-periods", o.params.t_max_periods,
                    "Total integration time in periods")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--renorm-periods", o.params.renorm_periods,
                    "Renormalization interval in periods")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--xi0", o.params.xi0_policy, "Initial spread-vector policy")
        ->transform(CLI::CheckedTransformer(kXi0Map, CLI::ignore_case))
        ->default_str(to_string(o.params.xi0_policy));
    cmd->add_option("--seed", o.params.seed, "RNG seed for seeded-random-unit starts")
        ->capture_default_str();
    cmd->add_option("--lambda-units", o.params.lambda_units,
                    "Exponent normalization: per unit time or per unit arc length")
        ->transform(CLI::CheckedTransformer(kUnitsMap, CLI::ignore_case))
        ->default_str(to_string(o.params.lambda_units));
}

void add_point_flags(CLI::App* cmd, Options& o, bool with_f = true) {
    cmd->add_option("--n", o.n, "Number of oscillators N")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    if (with_f)
        cmd->add_option("--f", o.f, "Phase-circle fraction f")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
    cmd->add_option("--omega", o.omega, "Angular frequency omega")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

nlohmann::json params_json(const IntegrationParams& p) {
    return {
        {"dt_periods", p.dt_periods},
        {"t_max_periods", p.t_max_periods},
        {"renorm_periods", p.renorm_periods},
        {"epsilon_t_rel", p.epsilon_t_rel},
        {"xi0_policy", to_string(p.xi0_policy)},
        {"seed", p.seed},
        {"metric", to_string(p.metric)},
        {"lambda_units", to_string(p.lambda_units)},
        {"norm", "composite ||(omega*xi, xi_dot)||"},
    };
}

void write_sidecar(const std::string& out, const std::string& subcommand,
                   const nlohmann::json& detail, double wall_s) {
    nlohmann::json meta{
        {"tool", "geospread"},
        {"version", kVersion},
        {"subcommand", subcommand},
        {"wall_time_s", wall_s},
        {"output", out},
    };
    meta.update(detail);
    const std::string path = out + ".meta.json";
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw IoError("cannot open " + path + " for writing");
    os << meta.dump(2) << '\n';
}

int run_sigma_cmd(const Options& o) {
    const OscillatorConfig config(o.n, o.omega, o.f);
    const FluctuationStats st = fluctuation_stats(config);
    std::cout << "sigma         = " << format_double(st.sigma) << '\n'
              << "sqrt_sigma    = " << format_double(st.sigma_sqrt) << '\n'
              << "sigma_limit   = " << format_double(sigma_limit(o.f)) << '\n'
              << "mean_kinetic  = " << format_double(st.mean_kinetic) << '\n'
              << "mean_phase    = " << format_double(st.mean_phase) << '\n'
              << "abs_variance  = "
              << format_double(st.sigma * st.mean_kinetic * st.mean_kinetic) << '\n';
    if (!o.out.empty()) {
        SweepResult res;
        res.label = "sigma";
        SweepRow row;
        row.n_osc = o.n;
        row.f = o.f;
        row.omega = o.omega;
        row.sigma = st.sigma;
        row.sqrt_sigma = st.sigma_sqrt;
        row.abs_variance = st.sigma * st.mean_kinetic * st.mean_kinetic;
        row.lambda = std::numeric_limits<double>::quiet_NaN();
        row.min_kinetic =
            st.mean_kinetic * (1.0 - std::fabs(fluctuation_amplitude(o.n, o.f)));
        res.rows.push_back(row);
        write_sweep_csv(res, o.out);
        write_sidecar(o.out, "sigma",
                      {{"n_osc", o.n}, {"phase_fraction", o.f}, {"omega", o.omega}}, 0.0);
    }
    return 0;
}

int run_lambda_cmd(const Options& o) {
    const OscillatorConfig config(o.n, o.omega, o.f);
    const auto t0 = std::chrono::steady_clock::now();
    LyapunovEstimate est;
    try {
        est = estimate_lambda(config, o.params);
    } catch (const SingularKineticEnergy& e) {
        std::cerr << "aborted: " << e.what() << '\n';
        return kExitSingular;
    }
    const double wall = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - t0).count();

    std::cout << "lambda            = " << format_double(est.lambda) << '\n'
              << "units             = " << to_string(o.params.lambda_units) << '\n'
              << "metric            = " << to_string(o.params.metric) << '\n'
              << "renormalizations  = " << est.renorm_count << '\n'
              << "min_kinetic       = " << format_double(est.min_kinetic) << '\n'
              << "arc_length        = " << format_double(est.arc_length_total) << '\n'
              << "integrated_time   = " << format_double(est.t_end) << '\n'
              << "diverged          = " << (est.diverged ? "true" : "false") << '\n';

    if (!o.series.empty())
        write_series_csv(est, o.series);
    if (!o.out.empty()) {
        const FluctuationStats st = fluctuation_stats(config);
        SweepResult res;
        res.label = "lambda";
        SweepRow row;
        row.n_osc = o.n;
        row.f = o.f;
        row.omega = o.omega;
        row.sigma = st.sigma;
        row.sqrt_sigma = st.sigma_sqrt;
        row.abs_variance = st.sigma * st.mean_kinetic * st.mean_kinetic;
        row.lambda = est.lambda;
        row.renorm_count = est.renorm_count;
        row.min_kinetic = est.min_kinetic;
        row.diverged = est.diverged;
        row.runtime_s = est.t_end;
        res.rows.push_back(row);
        write_sweep_csv(res, o.out);
        write_sidecar(o.out, "lambda",
                      {{"n_osc", o.n},
                       {"phase_fraction", o.f},
                       {"omega", o.omega},
                       {"params", params_json(o.params)}},
                      wall);
    }
    return 0;
}

int run_sweep_cmd(const std::string& name, SweepSpec spec, const Options& o,
                  std::optional<PlotKind> plot_kind) {
    spec.params = o.params;
    const auto t0 = std::chrono::steady_clock::now();
    const SweepResult result = run_sweep(spec, o.jobs);
    const double wall = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - t0).count();

    write_sweep_csv(result, o.out);
    std::size_t diverged = 0, aborted = 0;
    for (const auto& r : result.rows) {
        if (r.diverged)
            ++diverged;
        else if (spec.integrate && std::isnan(r.lambda))
            ++aborted;
    }
    write_sidecar(o.out, name,
                  {{"label", spec.label},
                   {"grid_points", spec.grid.size()},
                   {"jobs", o.jobs},
                   {"diverged_points", diverged},
                   {"aborted_points", aborted},
                   {"params", params_json(spec.params)}},
                  wall);
    if (!o.plot.empty() && plot_kind)
        write_plot_script(*plot_kind, o.plot, o.out);
    std::cout << "wrote " << result.rows.size() << " rows to " << o.out;
    if (diverged > 0)
        std::cout << " (" << diverged << " diverged)";
    if (aborted > 0)
        std::cout << " (" << aborted << " aborted)";
    std::cout << '\n';
    return 0;
}

int run_audit_cmd(const Options& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const AuditReport report = run_audit(default_audit_grid(), o.trials, o.params.seed);
    const double wall = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - t0).count();
    write_audit_csv(report, o.out);
    write_sidecar(o.out, "audit",
                  {{"trials", o.trials}, {"configs", report.rows.size()},
                   {"seed", o.params.seed}},
                  wall);
    double max_i = 0, max_j = 0, max_k = 0;
    for (const auto& r : report.rows) {
        max_i = std::max(max_i, r.cmp.max_i_block);
        max_j = std::max(max_j, r.cmp.max_j_block);
        max_k = std::max(max_k, r.cmp.max_k_block);
    }
    std::cout << "wrote " << report.rows.size() << " rows to " << o.out << '\n'
              << "max xi'-coupling deviation = " << format_double(max_i) << '\n'
              << "max J-coupling deviation   = " << format_double(max_j) << '\n'
              << "max K-coupling deviation   = " << format_double(max_k)
              << "  (differs from the metric-derived block)\n";
    return 0;
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"geodesic-spread stability toolkit for harmonic-oscillator ensembles"};
    app.set_version_flag("--version", std::string("geospread ") + kVersion);
    app.require_subcommand(1);

    Options sigma_o, lambda_o, fig1_o, fig2_o, fig3_o, fig4_o, ctrl_o, audit_o;

    auto* sigma_cmd =
        app.add_subcommand("sigma", "Kinetic-energy fluctuation statistics for one config");
    add_point_flags(sigma_cmd, sigma_o);
    sigma_cmd->add_option("--out", sigma_o.out, "Optional one-row CSV output path");

    auto* lambda_cmd =
        app.add_subcommand("lambda", "Estimate the stability exponent for one config");
    lambda_o.n = 2;
    lambda_o.f = 0.05;
    add_point_flags(lambda_cmd, lambda_o);
    add_integration_flags(lambda_cmd, lambda_o);
    lambda_cmd->add_option("--out", lambda_o.out, "Optional one-row CSV output path");
    lambda_cmd->add_option("--series", lambda_o.series,
                           "Optional CSV path for the running lambda(t) series");

    auto* fig1_cmd = app.add_subcommand(
        "fig1", "Fluctuation table sigma(f) on a 1/720 grid (no integration)");
    add_point_flags(fig1_cmd, fig1_o, /*with_f=*/false);
    fig1_o.out = "fig1.csv";
    fig1_cmd->add_option("--out", fig1_o.out, "CSV output path")->capture_default_str();
    fig1_cmd->add_option("--plot", fig1_o.plot, "Emit a polar gnuplot script to this path");

    auto* fig2_cmd = app.add_subcommand(
        "fig2", "Exponent collapse sweep: lambda vs sqrt(sigma) on the N = 2+j^2 grid");
    fig2_o.params = fig2_spec().params;
    add_integration_flags(fig2_cmd, fig2_o);
    fig2_cmd->add_option("--jobs", fig2_o.jobs, "Worker threads (0 = hardware)")
        ->capture_default_str();
    fig2_o.out = "fig2.csv";
    fig2_cmd->add_option("--out", fig2_o.out, "CSV output path")->capture_default_str();
    fig2_cmd->add_option("--plot", fig2_o.plot, "Emit a scatter gnuplot script to this path");

    auto* fig3_cmd = app.add_subcommand(
        "fig3", "Two-oscillator sweep: lambda and absolute variance vs f");
    fig3_o.params = fig3_spec().params;
    add_integration_flags(fig3_cmd, fig3_o);
    fig3_cmd->add_option("--jobs", fig3_o.jobs, "Worker threads (0 = hardware)")
        ->capture_default_str();
    fig3_o.out = "fig3.csv";
    fig3_cmd->add_option("--out", fig3_o.out, "CSV output path")->capture_default_str();
    fig3_cmd->add_option("--plot", fig3_o.plot, "Emit a dual-axis gnuplot script to this path");

    auto* fig4_cmd = app.add_subcommand(
        "fig4", "Constant-kinetic-energy sweep: lambda vs omega at N=10, f=1");
    fig4_o.params = fig4_spec().params;
    add_integration_flags(fig4_cmd, fig4_o);
    fig4_cmd->add_option("--jobs", fig4_o.jobs, "Worker threads (0 = hardware)")
        ->capture_default_str();
    fig4_o.out = "fig4.csv";
    fig4_cmd->add_option("--out", fig4_o.out, "CSV output path")->capture_default_str();
    fig4_cmd->add_option("--plot", fig4_o.plot, "Emit a line-plot gnuplot script to this path");

    auto* ctrl_cmd = app.add_subcommand(
        "eisenhart-control", "Stability control: the fig2 grid under the Eisenhart metric");
    ctrl_o.params = eisenhart_control_spec().params;
    add_integration_flags(ctrl_cmd, ctrl_o);
    ctrl_cmd->add_option("--jobs", ctrl_o.jobs, "Worker threads (0 = hardware)")
        ->capture_default_str();
    ctrl_o.out = "eisenhart-control.csv";
    ctrl_cmd->add_option("--out", ctrl_o.out, "CSV output path")->capture_default_str();

    auto* audit_cmd = app.add_subcommand(
        "audit", "Blockwise consistency audit between the two Jacobi RHS forms");
    audit_cmd->add_option("--trials", audit_o.trials, "Random states per config")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    audit_cmd->add_option("--seed", audit_o.params.seed, "RNG seed")->capture_default_str();
    audit_o.out = "audit.csv";
    audit_cmd->add_option("--out", audit_o.out, "CSV output path")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sigma_cmd->parsed())
            return run_sigma_cmd(sigma_o);
        if (lambda_cmd->parsed()) {
            lambda_o.params.validate();
            return run_lambda_cmd(lambda_o);
        }
        if (fig1_cmd->parsed()) {
            SweepSpec spec = fig1_spec(fig1_o.n, fig1_o.omega);
            const auto t0 = std::chrono::steady_clock::now();
            const SweepResult result = run_sweep(spec, fig1_o.jobs);
            const double wall = std::chrono::duration<double>(
                std::chrono::steady_clock::now() - t0).count();
            write_sweep_csv(result, fig1_o.out);
            write_sidecar(fig1_o.out, "fig1",
                          {{"label", spec.label},
                           {"grid_points", spec.grid.size()},
                           {"n_osc", fig1_o.n},
                           {"omega", fig1_o.omega}},
                          wall);
            if (!fig1_o.plot.empty())
                write_plot_script(PlotKind::Fig1, fig1_o.plot, fig1_o.out);
            std::cout << "wrote " << result.rows.size() << " rows to " << fig1_o.out << '\n';
            return 0;
        }
        if (fig2_cmd->parsed()) {
            fig2_o.params.validate();
            return run_sweep_cmd("fig2", fig2_spec(), fig2_o, PlotKind::Fig2);
        }
        if (fig3_cmd->parsed()) {
            fig3_o.params.validate();
            return run_sweep_cmd("fig3", fig3_spec(), fig3_o, PlotKind::Fig3);
        }
        if (fig4_cmd->parsed()) {
            fig4_o.params.validate();
            return run_sweep_cmd("fig4", fig4_spec(), fig4_o, PlotKind::Fig4);
        }
        if (ctrl_cmd->parsed()) {
            ctrl_o.params.validate();
            return run_sweep_cmd("eisenhart-control", eisenhart_control_spec(), ctrl_o,
                                 std::nullopt);
        }
        if (audit_cmd->parsed())
            return run_audit_cmd(audit_o);
    } catch (const InvalidParameter& e) {
        std::cerr << "invalid parameter: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    }
    return 0;
}

} // namespace geospread::cli
