#pragma once
#include <filesystem>
#include <string>

#include "geospread/propagation.hpp"
#include "geospread/sweeps.hpp"

namespace geospread {

/// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double value);

/// Sweep CSV, schema:
///   n_osc,f,omega,sigma,sqrt_sigma,abs_variance,lambda,renorm_count,min_kinetic,diverged,runtime_s
/// One data row per point, newline-terminated, UTF-8. An empty result
/// produces a header-only file. Identical results produce identical bytes.
std::string sweep_csv(const SweepResult& result);
void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path);

/// Audit CSV, schema:
///   n_osc,f,omega,samples,skipped,dev_total,dev_i,dev_j,dev_k
std::string audit_csv(const AuditReport& report);
void write_audit_csv(const AuditReport& report, const std::filesystem::path& path);

/// Running-estimate series, schema: t,lambda
std::string series_csv(const LyapunovEstimate& estimate);
void write_series_csv(const LyapunovEstimate& estimate, const std::filesystem::path& path);

enum class PlotKind { Fig1, Fig2, Fig3, Fig4 };

/// Self-contained gnuplot script rendering the named CSV (referenced by the
/// given path string, normally relative to the script). The script is data;
/// nothing here executes it.
std::string plot_script(PlotKind kind, const std::string& csv_path);
void write_plot_script(PlotKind kind, const std::filesystem::path& script_path,
                       const std::filesystem::path& csv_path);

} // namespace geospread
