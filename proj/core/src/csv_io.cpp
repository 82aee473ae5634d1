#include "geospread/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

namespace geospread {

namespace {

const char* kSweepHeader =
    "n_osc,f,omega,sigma,sqrt_sigma,abs_variance,lambda,renorm_count,min_kinetic,"
    "diverged,runtime_s\n";

void write_text(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out)
        throw IoError("write failed for " + path.string());
}

std::string relative_or_filename(const std::filesystem::path& csv,
                                 const std::filesystem::path& script) {
    std::error_code ec;
    const auto base = script.has_parent_path() ? script.parent_path()
                                               : std::filesystem::path(".");
    auto rel = std::filesystem::relative(csv, base, ec);
    if (ec || rel.empty())
        return csv.filename().string();
    return rel.generic_string();
}

} // namespace

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string sweep_csv(const SweepResult& result) {
    std::string out = kSweepHeader;
    for (const auto& r : result.rows) {
        out += std::to_string(r.n_osc);
        out += ',';
        out += format_double(r.f);
        out += ',';
        out += format_double(r.omega);
        out += ',';
        out += format_double(r.sigma);
        out += ',';
        out += format_double(r.sqrt_sigma);
        out += ',';
        out += format_double(r.abs_variance);
        out += ',';
        out += format_double(r.lambda);
        out += ',';
        out += std::to_string(r.renorm_count);
        out += ',';
        out += format_double(r.min_kinetic);
        out += ',';
        out += r.diverged ? '1' : '0';
        out += ',';
        out += format_double(r.runtime_s);
        out += '\n';
    }
    return out;
}

void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path) {
    write_text(sweep_csv(result), path);
}

std::string audit_csv(const AuditReport& report) {
    std::string out = "n_osc,f,omega,samples,skipped,dev_total,dev_i,dev_j,dev_k\n";
    for (const auto& r : report.rows) {
        out += std::to_string(r.n_osc);
        out += ',';
        out += format_double(r.f);
        out += ',';
        out += format_double(r.omega);
        out += ',';
        out += std::to_string(r.cmp.samples);
        out += ',';
        out += std::to_string(r.cmp.skipped);
        out += ',';
        out += format_double(r.cmp.max_total);
        out += ',';
        out += format_double(r.cmp.max_i_block);
        out += ',';
        out += format_double(r.cmp.max_j_block);
        out += ',';
        out += format_double(r.cmp.max_k_block);
        out += '\n';
    }
    return out;
}

void write_audit_csv(const AuditReport& report, const std::filesystem::path& path) {
    write_text(audit_csv(report), path);
}

std::string series_csv(const LyapunovEstimate& estimate) {
    std::string out = "t,lambda\n";
    for (const auto& [t, lam] : estimate.series) {
        out += format_double(t);
        out += ',';
        out += format_double(lam);
        out += '\n';
    }
    return out;
}

void write_series_csv(const LyapunovEstimate& estimate, const std::filesystem::path& path) {
    write_text(series_csv(estimate), path);
}

std::string plot_script(PlotKind kind, const std::string& csv_path) {
    std::string s;
    s += "# gnuplot script; run: gnuplot <this file>\n";
    s += "set datafile separator comma\n";
    s += "set key autotitle columnhead\n";
    s += "set terminal pngcairo size 900,700\n";
    const std::string data = "\"" + csv_path + "\"";
    switch (kind) {
        case PlotKind::Fig1:
            s += "set output \"fig1.png\"\n";
            s += "set polar\n";
            s += "set angles radians\n";
            s += "set grid polar\n";
            s += "set size square\n";
            s += "# angle = 2*pi*f, radius = sigma\n";
            s += "plot " + data + " using (2*pi*$2):4 with lines lw 2 title \"sigma\"\n";
            break;
        case PlotKind::Fig2:
            s += "set output \"fig2.png\"\n";
            s += "set xlabel \"sqrt(sigma)\"\n";
            s += "set ylabel \"lambda\"\n";
            s += "plot " + data + " using 5:7 with points pt 7 ps 0.7 title \"lambda\"\n";
            break;
        case PlotKind::Fig3:
            s += "set output \"fig3.png\"\n";
            s += "set xlabel \"f\"\n";
            s += "set ylabel \"lambda\"\n";
            s += "set y2label \"kinetic-energy variance\"\n";
            s += "set ytics nomirror\n";
            s += "set y2tics\n";
            s += "plot " + data + " using 2:7 with linespoints axes x1y1 title \"lambda\", \\\n";
            s += "     " + data +
                 " using 2:6 with linespoints axes x1y2 title \"variance\"\n";
            break;
        case PlotKind::Fig4:
            s += "set output \"fig4.png\"\n";
            s += "set xlabel \"omega\"\n";
            s += "set ylabel \"lambda\"\n";
            s += "plot " + data + " using 3:7 with linespoints pt 7 title \"lambda\"\n";
            break;
    }
    return s;
}

void write_plot_script(PlotKind kind, const std::filesystem::path& script_path,
                       const std::filesystem::path& csv_path) {
    write_text(plot_script(kind, relative_or_filename(csv_path, script_path)), script_path);
}

} // namespace geospread
