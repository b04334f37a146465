#include "cnlse/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

#include "cnlse/errors.hpp"

namespace fs = std::filesystem;

namespace cnlse {

namespace {

std::string fmt(double value, int precision) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*g", precision, value);
    return buffer;
}

std::string snapshot_name(double t) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "snapshot_t%.6f.csv", t);
    return buffer;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

std::string timeseries_csv(const RunRecord& record, int p) {
    std::ostringstream out;
    const bool with_error = !record.errors.empty();
    const bool with_iterations = !record.iterations.empty();
    out << "t,I_u,I_v,max_abs_u,max_abs_v";
    if (with_error) out << ",error_l2,error_max";
    if (with_iterations) out << ",iterations";
    out << '\n';
    for (std::size_t j = 0; j < record.times.size(); ++j) {
        out << fmt(record.times[j], p) << ',' << fmt(record.invariants[j].i_u, p) << ','
            << fmt(record.invariants[j].i_v, p) << ',' << fmt(record.amplitudes[j].u, p) << ','
            << fmt(record.amplitudes[j].v, p);
        if (with_error) out << ',' << fmt(record.errors[j].l2, p) << ',' << fmt(record.errors[j].max, p);
        if (with_iterations) out << ',' << record.iterations[j];
        out << '\n';
    }
    return out.str();
}

std::string snapshot_csv(const FieldState& state, const Grid& grid, int p) {
    std::ostringstream out;
    out << "x,re_u,im_u,abs_u,re_v,im_v,abs_v\n";
    for (std::size_t i = 0; i < state.size(); ++i) {
        const Complex u = state.u[i];
        const Complex v = state.v[i];
        out << fmt(grid.node(i), p) << ',' << fmt(u.real(), p) << ',' << fmt(u.imag(), p) << ','
            << fmt(std::abs(u), p) << ',' << fmt(v.real(), p) << ',' << fmt(v.imag(), p) << ','
            << fmt(std::abs(v), p) << '\n';
    }
    return out.str();
}

struct SnapshotColumns {
    std::vector<double> x, abs_u, abs_v;
};

SnapshotColumns read_snapshot(const fs::path& path) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line) || line != "x,re_u,im_u,abs_u,re_v,im_v,abs_v") {
        throw ValidationError(path.string() + ": unexpected snapshot header");
    }
    SnapshotColumns cols;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> v;
        std::istringstream row(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(row, cell, ',')) {
            char* end = nullptr;
            v.push_back(std::strtod(cell.c_str(), &end));
            numeric = numeric && !cell.empty() && *end == '\0';
        }
        if (v.size() != 7 || !numeric) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                                  ": expected 7 numeric columns");
        }
        cols.x.push_back(v[0]);
        cols.abs_u.push_back(v[3]);
        cols.abs_v.push_back(v[6]);
    }
    return cols;
}

/// snapshot time -> file, parsed from the file names.
std::map<double, fs::path> list_snapshots(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError(dir.string() + " is not a readable directory");
    std::map<double, fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        const std::string name = entry.path().filename().string();
        constexpr std::string_view prefix = "snapshot_t";
        constexpr std::string_view suffix = ".csv";
        if (!name.starts_with(prefix) || !name.ends_with(suffix)) continue;
        const std::string number =
            name.substr(prefix.size(), name.size() - prefix.size() - suffix.size());
        char* end = nullptr;
        const double t = std::strtod(number.c_str(), &end);
        if (number.empty() || *end != '\0') continue;
        out.emplace(t, entry.path());
    }
    if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
    return out;
}

}  // namespace

void OutputPlan::validate() const {
    if (snapshot_every < 1) throw ValidationError("snapshot cadence must be >= 1");
    if (precision < 6 || precision > 17) throw ValidationError("precision must be in [6, 17]");
}

std::string format_summary(const Scenario& scenario, const RunRecord& record,
                           const RunSummary& summary, int p) {
    std::ostringstream out;
    const bool completed = record.completed();
    out << "name=" << scenario.name << '\n';
    out << "scheme=" << to_string(scenario.scheme) << '\n';
    out << "termination=" << to_string(record.termination.kind) << '\n';
    out << "failed_step=" << (completed ? std::string("none") : std::to_string(record.termination.step))
        << '\n';
    if (!completed) out << "message=" << record.termination.message << '\n';
    out << "steps_completed=" << record.steps_completed << '\n';
    out << "final_time=" << fmt(record.times.back(), p) << '\n';
    out << "tau=" << fmt(scenario.grid.tau(), p) << '\n';
    out << "h=" << fmt(scenario.grid.h(), p) << '\n';
    out << "rho=" << fmt(summary.budget.rho, p) << '\n';
    out << "rho_tau=" << fmt(summary.budget.rho_tau, p) << '\n';
    out << "threshold=" << fmt(summary.budget.threshold, p) << '\n';
    out << "verdict=" << to_string(summary.budget.verdict) << '\n';
    out << "q_final=" << fmt(summary.q_final, p) << '\n';
    out << "max_drift=" << fmt(record.max_drift, p) << '\n';
    if (scenario.scheme == Scheme::Implicit) {
        out << "median_iterations=" << fmt(summary.median_iterations, p) << '\n';
    }
    if (!record.errors.empty()) {
        double worst = 0.0;
        for (const auto& e : record.errors) worst = std::max(worst, e.max);
        out << "max_error=" << fmt(worst, p) << '\n';
    }
    return out.str();
}

void write_run(const OutputPlan& plan, const Scenario& scenario, const RunRecord& record,
               const RunSummary& summary) {
    plan.validate();
    std::error_code ec;
    fs::create_directories(plan.directory, ec);
    if (ec) throw IoError("cannot create " + plan.directory.string() + ": " + ec.message());

    write_file(plan.directory / "timeseries.csv", timeseries_csv(record, plan.precision));
    for (const FieldState& snap : record.snapshots) {
        write_file(plan.directory / snapshot_name(snap.time),
                   snapshot_csv(snap, scenario.grid, plan.precision));
    }
    write_file(plan.directory / "run_summary.txt",
               format_summary(scenario, record, summary, plan.precision));
    write_file(plan.directory / "scenario.cfg", serialize_scenario(scenario));
}

Comparison compare_runs(const fs::path& a, const fs::path& b) {
    const auto snaps_a = list_snapshots(a);
    const auto snaps_b = list_snapshots(b);

    Comparison result;
    for (const auto& [t, path_a] : snaps_a) {
        auto it = snaps_b.lower_bound(t - 1e-6);
        if (it == snaps_b.end() || std::abs(it->first - t) > 1e-6) continue;
        const SnapshotColumns ca = read_snapshot(path_a);
        const SnapshotColumns cb = read_snapshot(it->second);
        if (ca.x.size() != cb.x.size() || ca.x.size() < 2) {
            throw ValidationError("snapshots at t=" + fmt(t, 9) + " have different grids");
        }
        const double h = ca.x[1] - ca.x[0];
        for (std::size_t i = 0; i < ca.x.size(); ++i) {
            if (std::abs(ca.x[i] - cb.x[i]) > 1e-9 * std::max(1.0, std::abs(ca.x[i]))) {
                throw ValidationError("snapshots at t=" + fmt(t, 9) + " have different grids");
            }
        }
        SnapshotDifference row;
        row.time = t;
        double sum_u = 0.0, sum_v = 0.0;
        for (std::size_t i = 0; i < ca.x.size(); ++i) {
            const double du = std::abs(ca.abs_u[i] - cb.abs_u[i]);
            const double dv = std::abs(ca.abs_v[i] - cb.abs_v[i]);
            sum_u += du * du;
            sum_v += dv * dv;
            row.max_u = std::max(row.max_u, du);
            row.max_v = std::max(row.max_v, dv);
        }
        row.l2_u = h * std::sqrt(sum_u);
        row.l2_v = h * std::sqrt(sum_v);
        result.max_difference = std::max({result.max_difference, row.max_u, row.max_v});
        result.rows.push_back(row);
    }
    if (result.rows.empty()) {
        throw ValidationError("no common snapshot times between " + a.string() + " and " +
                              b.string());
    }
    return result;
}

}  // namespace cnlse
