#include "cnlse/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cnlse/analysis.hpp"
#include "cnlse/errors.hpp"
#include "cnlse/output.hpp"
#include "cnlse/run.hpp"
#include "cnlse/scenario.hpp"

namespace fs = std::filesystem;

namespace cnlse {

namespace {

constexpr std::string_view kSweepPreset = "manakov-stability-sweep";

std::string fmt(double value, int precision = 12) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*g", precision, value);
    return buffer;
}

/// Where a scenario comes from plus the overrides shared by run/stability/show.
struct SourceOptions {
    std::string preset;
    std::string config;
    std::string scheme;
    std::optional<double> tau;
    std::optional<std::size_t> steps;
    std::vector<std::string> assignments;

    void attach(CLI::App& cmd) {
        auto* p = cmd.add_option("--preset", preset, "Preset scenario name (see `presets`)");
        auto* c = cmd.add_option("--config", config, "Scenario config file (key = value lines)");
        p->excludes(c);
        cmd.add_option("--scheme", scheme, "Override the scheme")
            ->check(CLI::IsMember({"explicit", "implicit"}));
        auto* t = cmd.add_option("--tau", tau, "Time step; the final time is kept");
        auto* s = cmd.add_option("--steps", steps, "Number of time steps; the final time is kept");
        t->excludes(s);
        cmd.add_option("--set", assignments, "Override a config key, KEY=VALUE (repeatable)");
    }

    bool is_sweep() const { return preset == kSweepPreset && !tau && !steps; }

    RunOverrides overrides() const {
        RunOverrides o;
        for (const auto& a : assignments) {
            const auto eq = a.find('=');
            if (eq == std::string::npos) throw ValidationError("--set expects KEY=VALUE, got '" + a + "'");
            o.assignments.emplace_back(a.substr(0, eq), a.substr(eq + 1));
        }
        if (!scheme.empty()) o.scheme = parse_scheme(scheme);
        o.tau = tau;
        o.steps = steps;
        return o;
    }

    Scenario base() const {
        if (preset.empty() == config.empty()) {
            throw ValidationError("give exactly one of --preset or --config");
        }
        if (!preset.empty()) return preset_of(preset);
        std::ifstream in(config, std::ios::binary);
        if (!in) throw IoError("cannot read config file '" + config + "'");
        std::ostringstream text;
        text << in.rdbuf();
        return load_scenario(text.str());
    }

    /// Resolved scenarios: one, or the members of the stability sweep.
    std::vector<Scenario> scenarios() const {
        const Scenario first = base();
        const RunOverrides o = overrides();
        std::vector<Scenario> out;
        if (is_sweep()) {
            for (const Scenario& member : stability_sweep()) out.push_back(apply_overrides(member, o));
        } else {
            out.push_back(apply_overrides(first, o));
        }
        return out;
    }

private:
    static Scenario preset_of(const std::string& name) { return cnlse::preset(name); }
};

struct RunOptions {
    SourceOptions source;
    std::string out_dir;
    std::optional<std::size_t> snapshot_every;
    int precision = 12;
    double threshold = kDefaultRhoThreshold;
};

int exit_code_for(const RunRecord& record) {
    switch (record.termination.kind) {
        case Termination::Kind::Completed: return kExitOk;
        case Termination::Kind::BlewUp: return kExitBlowUp;
        case Termination::Kind::IterationFailure: return kExitIterationFailure;
    }
    return kExitBlowUp;
}

struct Executed {
    Scenario scenario;
    RunRecord record;
    RunSummary summary;
    fs::path directory;
};

Executed execute(const Scenario& scenario, const RunOptions& opts, const fs::path& dir) {
    OutputPlan plan;
    plan.directory = dir;
    plan.precision = opts.precision;
    plan.snapshot_every = opts.snapshot_every.value_or(snapshot_cadence(scenario));
    plan.validate();
    RunRecord record = run_scenario(scenario, plan.snapshot_every);
    RunSummary summary = summarize(scenario, record, opts.threshold);
    write_run(plan, scenario, record, summary);
    return {scenario, std::move(record), summary, dir};
}

void report_failure(const Executed& run, std::ostream& err) {
    if (run.record.completed()) return;
    const char* what = run.record.termination.kind == Termination::Kind::BlewUp
                           ? "blow-up"
                           : "iteration failure";
    err << run.scenario.name << ": " << what << " at step " << run.record.termination.step << ": "
        << run.record.termination.message << '\n';
}

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
    // Resolve everything before touching the file system so a bad config
    // leaves no output directory behind.
    const std::vector<Scenario> scenarios = opts.source.scenarios();
    for (const Scenario& s : scenarios) {
        for (const auto& w : validate_scenario(s)) err << "warning: " << s.name << ": " << w << '\n';
    }
    const fs::path root =
        opts.out_dir.empty() ? fs::path("runs") / (opts.source.is_sweep() ? std::string(kSweepPreset)
                                                                            : scenarios.front().name)
                             : fs::path(opts.out_dir);

    if (!opts.source.is_sweep()) {
        const Executed run = execute(scenarios.front(), opts, root);
        out << format_summary(run.scenario, run.record, run.summary, opts.precision);
        out << "wall_seconds=" << fmt(run.record.wall_seconds, 4) << '\n';
        out << "output=" << root.string() << '\n';
        report_failure(run, err);
        return exit_code_for(run.record);
    }

    // Independent members run concurrently; results are written and printed
    // in sweep order.
    std::vector<std::future<Executed>> jobs;
    for (const Scenario& s : scenarios) {
        jobs.push_back(std::async(std::launch::async,
                                  [&opts, s, dir = root / s.name] { return execute(s, opts, dir); }));
    }
    std::vector<Executed> runs;
    for (auto& job : jobs) runs.push_back(job.get());

    std::ostringstream table;
    table << "name,n_time,tau,rho_tau,verdict,termination,failed_step,max_drift\n";
    for (const Executed& run : runs) {
        const RunRecord& r = run.record;
        table << run.scenario.name << ',' << run.scenario.grid.n_time() << ','
              << fmt(run.scenario.grid.tau(), opts.precision) << ','
              << fmt(run.summary.budget.rho_tau, opts.precision) << ','
              << to_string(run.summary.budget.verdict) << ',' << to_string(r.termination.kind) << ','
              << (r.completed() ? std::string() : std::to_string(r.termination.step)) << ','
              << fmt(r.max_drift, opts.precision) << '\n';
    }
    std::ofstream file(root / "sweep_summary.csv", std::ios::binary);
    if (!(file << table.str())) throw IoError("cannot write " + (root / "sweep_summary.csv").string());
    out << table.str();
    out << "output=" << root.string() << '\n';
    for (const Executed& run : runs) report_failure(run, err);
    return kExitOk;
}

void print_stability(const Scenario& s, double threshold, std::ostream& out) {
    const FieldState state = initial_state(s);
    const InvariantPair inv = invariants(state);
    const StabilityBudget budget = stability_budget(s.phys, s.grid, inv, threshold);
    const ElementBounds eb = element_bounds(s.phys, s.grid, state);
    out << "name=" << s.name << '\n'
        << "scheme=" << to_string(s.scheme) << '\n'
        << "h=" << fmt(s.grid.h()) << '\n'
        << "tau=" << fmt(s.grid.tau()) << '\n'
        << "n_time=" << s.grid.n_time() << '\n'
        << "I_u=" << fmt(inv.i_u) << '\n'
        << "I_v=" << fmt(inv.i_v) << '\n'
        << "rho=" << fmt(budget.rho) << '\n'
        << "rho_tau=" << fmt(budget.rho_tau) << '\n'
        << "threshold=" << fmt(budget.threshold) << '\n'
        << "verdict=" << to_string(budget.verdict) << '\n'
        << "recommended_tau=" << fmt(budget.recommended_tau) << '\n'
        << "matrix_norm_bound=" << fmt(matrix_norm_bound(s.phys, s.grid, inv)) << '\n'
        << "t11=" << fmt(eb.t11) << '\n'
        << "t12=" << fmt(eb.t12) << '\n'
        << "t21=" << fmt(eb.t21) << '\n'
        << "t22=" << fmt(eb.t22) << '\n'
        << "t33=" << fmt(eb.t33) << '\n'
        << "t34=" << fmt(eb.t34) << '\n'
        << "t43=" << fmt(eb.t43) << '\n'
        << "t44=" << fmt(eb.t44) << '\n';
}

int cmd_stability(const SourceOptions& source, double threshold, std::ostream& out) {
    if (!(threshold > 0.0)) throw ValidationError("threshold must be > 0");
    const std::vector<Scenario> scenarios = source.scenarios();
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        if (i > 0) out << '\n';
        print_stability(scenarios[i], threshold, out);
    }
    return kExitOk;
}

int cmd_compare(const std::string& a, const std::string& b, std::ostream& out) {
    const Comparison cmp = compare_runs(a, b);
    out << "t,l2_abs_u,max_abs_u,l2_abs_v,max_abs_v\n";
    for (const auto& row : cmp.rows) {
        out << fmt(row.time, 9) << ',' << fmt(row.l2_u) << ',' << fmt(row.max_u) << ','
            << fmt(row.l2_v) << ',' << fmt(row.max_v) << '\n';
    }
    out << "max_difference=" << fmt(cmp.max_difference) << '\n';
    return kExitOk;
}

int cmd_show(const SourceOptions& source, std::ostream& out) {
    const std::vector<Scenario> scenarios = source.scenarios();
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        if (i > 0) out << '\n';
        out << serialize_scenario(scenarios[i]);
    }
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite-difference solver for the coupled nonlinear Schroedinger equations", "cnlse"};
    app.require_subcommand(1);

    RunOptions run_opts;
    auto* run = app.add_subcommand("run", "Evolve a scenario and write CSV output");
    run_opts.source.attach(*run);
    run->add_option("--out", run_opts.out_dir, "Output directory (default runs/<name>)");
    run->add_option("--snapshot-every", run_opts.snapshot_every,
                    "Snapshot cadence in observations (default: about 50 per run)")
        ->check(CLI::PositiveNumber);
    run->add_option("--precision", run_opts.precision, "Significant digits in CSV output")
        ->check(CLI::Range(6, 17));
    run->add_option("--threshold", run_opts.threshold, "rho*tau threshold for the verdict");

    SourceOptions stab_source;
    double stab_threshold = kDefaultRhoThreshold;
    auto* stability = app.add_subcommand("stability", "Print the stability budget of a scenario");
    stab_source.attach(*stability);
    stability->add_option("--threshold", stab_threshold, "rho*tau threshold for the verdict");

    std::string dir_a, dir_b;
    auto* compare = app.add_subcommand("compare", "Compare snapshots of two runs");
    compare->add_option("DIR_A", dir_a)->required();
    compare->add_option("DIR_B", dir_b)->required();

    SourceOptions show_source;
    auto* show = app.add_subcommand("show", "Print a scenario in config format");
    show_source.attach(*show);

    auto* presets = app.add_subcommand("presets", "List preset names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (*run) return cmd_run(run_opts, out, err);
        if (*stability) return cmd_stability(stab_source, stab_threshold, out);
        if (*compare) return cmd_compare(dir_a, dir_b, out);
        if (*show) return cmd_show(show_source, out);
        if (*presets) {
            for (const auto name : preset_names()) out << name << '\n';
            return kExitOk;
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIoError;
    } catch (const ParseError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const ValidationError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const BlowUpError& e) {
        err << "blow-up at step " << e.step() << ": " << e.what() << '\n';
        return kExitBlowUp;
    } catch (const IterationFailureError& e) {
        err << "iteration failure at step " << e.step() << ": " << e.what() << '\n';
        return kExitIterationFailure;
    } catch (const SolverError& e) {
        err << "solver error: " << e.what() << '\n';
        return kExitIterationFailure;
    } catch (const InvalidStateError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitIoError;
    }
    return kExitConfigError;
}

}  // namespace cnlse
