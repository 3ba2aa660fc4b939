#include "leosim/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>

#include "CLI11.hpp"
#include "leosim/analytic.hpp"
#include "leosim/experiments.hpp"
#include "leosim/validation.hpp"

namespace leosim {

namespace fs = std::filesystem;

namespace {

constexpr const char* fallback_out_dir = "leosim-out";

fs::path resolve_out(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv(out_dir_env); env && *env) return env;
    return fallback_out_dir;
}

TrajectoryFormat parse_format(const std::string& s) {
    if (s == "csv") return TrajectoryFormat::csv;
    if (s == "json") return TrajectoryFormat::json;
    throw ValidationError("format", "expected csv or json, got '" + s + "'");
}

std::string flag_for(const std::string& field) {
    if (field == "t_max") return "--t-max";
    if (field == "Delta") return "--Delta-over-T";
    if (field == "param") return "--param";
    return "--" + field;
}

std::vector<Scenario> catalog_for(const std::string& path) {
    return path.empty() ? builtin_catalog() : load_catalog(path);
}

void print_report(std::ostream& out, const ComparisonReport& r) {
    for (const auto& c : r.curves) {
        out << "  " << std::left << std::setw(24) << c.name << " final |alpha| = " << format_number(c.final_abs)
            << (c.reference ? "  (reference)" : "") << '\n';
    }
    for (const auto& a : r.assertions) out << "  " << (a.passed ? "PASS " : "FAIL ") << a.description << '\n';
    for (const auto& n : r.notes) out << "  note: " << n << '\n';
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
    double alpha0{5.0};
    double omega0{1.0};
    double big_gamma{5.0};
    double gamma0{1.0};
    bool markov{false};
    std::string pulse{"none"};
    double omega1{0.0}, omega2{0.0}, omega3{0.0};
    double T{0.0}, T3{0.0}, delta_over_T{0.0};
    double W{0.0}, mu{0.0}, sigma{1.0};
    std::uint64_t seed{0};
    double t_max{10.0};
    double dt{0.0};
    std::string method{"ode"};
    std::string out;
    std::string format{"csv"};
    std::string name{"alpha"};

    std::map<std::string, CLI::Option*> opts;
    bool given(const std::string& flag) const { return opts.at(flag)->count() > 0; }
};

void add_simulate(CLI::App& app, SimulateArgs& a) {
    auto add = [&](const std::string& flag, auto& target, const std::string& help) {
        a.opts[flag] = app.add_option(flag, target, help);
    };
    add("--alpha0", a.alpha0, "initial amplitude (real)");
    add("--omega0", a.omega0, "bare frequency");
    add("--Gamma", a.big_gamma, "coupling strength");
    add("--gamma0", a.gamma0, "inverse memory time");
    a.opts["--markov"] = app.add_flag("--markov", a.markov, "Markovian limit gamma0 -> infinity");
    add("--pulse", a.pulse, "none | rect | sine | zero");
    add("--omega1", a.omega1, "rectangular amplitude");
    add("--omega2", a.omega2, "sine amplitude");
    add("--omega3", a.omega3, "zero-energy amplitude");
    add("--T", a.T, "pulse period (rect, sine)");
    add("--T3", a.T3, "zero-energy period");
    add("--Delta-over-T", a.delta_over_T, "duty ratio (rect, sine)");
    add("--W", a.W, "Gaussian noise strength");
    add("--mu", a.mu, "noise mean");
    add("--sigma", a.sigma, "noise standard deviation");
    add("--seed", a.seed, "noise seed");
    add("--t-max", a.t_max, "horizon");
    add("--dt", a.dt, "step (default: derived from the pulse)");
    add("--method", a.method, "ode | quadrature | analytic");
    add("--out", a.out, std::string("output directory (default $") + out_dir_env + ")");
    add("--format", a.format, "csv | json");
    add("--name", a.name, "output file stem");
}

PulseProgram build_pulse(const SimulateArgs& a) {
    struct Family {
        const char* name;
        std::vector<std::string> needs;
    };
    static const std::vector<Family> families = {
        {"none", {}},
        {"rect", {"--omega1", "--T", "--Delta-over-T"}},
        {"sine", {"--omega2", "--T", "--Delta-over-T"}},
        {"zero", {"--omega3", "--T3"}},
    };
    static const std::vector<std::string> shape_flags = {"--omega1", "--omega2", "--omega3", "--T", "--T3", "--Delta-over-T"};

    const auto fam = std::find_if(families.begin(), families.end(), [&](const Family& f) { return a.pulse == f.name; });
    if (fam == families.end()) throw ValidationError("pulse", "expected none, rect, sine or zero, got '" + a.pulse + "'");
    for (const auto& flag : shape_flags) {
        const bool needed = std::find(fam->needs.begin(), fam->needs.end(), flag) != fam->needs.end();
        if (needed && !a.given(flag)) throw ValidationError(flag.substr(2), "required with --pulse " + a.pulse);
        if (!needed && a.given(flag)) throw ValidationError(flag.substr(2), "does not apply to --pulse " + a.pulse);
    }
    for (const char* flag : {"--mu", "--sigma", "--seed"}) {
        if (a.given(flag) && !a.given("--W")) throw ValidationError(std::string(flag).substr(2), "only applies with --W");
    }
    if (a.given("--W") && a.pulse == "none") throw ValidationError("W", "noise needs an active pulse");

    PulseProgram p;
    if (a.pulse == "none") p = PulseProgram::none();
    if (a.pulse == "rect") p = PulseProgram::rectangular(a.omega1, a.T, a.delta_over_T * a.T);
    if (a.pulse == "sine") p = PulseProgram::sine(a.omega2, a.T, a.delta_over_T * a.T);
    if (a.pulse == "zero") p = PulseProgram::zero_energy(a.omega3, a.T3);
    if (a.given("--W")) p = p.with_noise(NoiseSpec{a.W, a.mu, a.sigma, a.seed});
    return p;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    if (a.markov && a.given("--gamma0")) throw ValidationError("markov", "cannot be combined with --gamma0");
    const PulseProgram pulse = build_pulse(a);
    const TrajectoryFormat format = parse_format(a.format);
    if (a.name.empty() || a.name.find('/') != std::string::npos) throw ValidationError("name", "must be a plain file stem");

    SimulationConfig cfg;
    cfg.alpha0 = complex{a.alpha0, 0.0};
    cfg.omega0 = a.omega0;
    cfg.t_max = a.t_max;
    cfg.dt = a.given("--dt") ? a.dt : default_dt(pulse);
    cfg.method = parse_method(a.method);
    if (!(a.big_gamma >= 0.0)) throw ValidationError("Gamma", "must be >= 0");
    make_grid(cfg, pulse);

    Diagnostics diag;
    Trajectory traj;
    if (a.markov) {
        if (pulse.is_active()) diag.note("the Markov limit is control independent; pulse ignored");
        traj = markovian_trajectory(cfg, a.big_gamma);
    } else {
        traj = simulate(cfg, BathKernel(a.gamma0, a.big_gamma), pulse, &diag);
    }
    for (const auto& n : diag.notes) err << "note: " << n << '\n';

    const fs::path dir = resolve_out(a.out);
    fs::create_directories(dir);
    const std::vector<NamedTrajectory> curves{{a.name, traj, false}};
    const fs::path file = dir / (a.name + (format == TrajectoryFormat::csv ? ".csv" : ".json"));
    if (format == TrajectoryFormat::csv) {
        export_csv(curves, file);
    } else {
        export_json(curves, file);
    }
    out << file.string() << '\n' << "final |alpha| = " << format_number(traj.final_magnitude()) << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// figure, sweep, list, validate
// ---------------------------------------------------------------------------

struct FigureArgs {
    std::vector<std::string> names;
    std::string catalog;
    std::string method;
    std::string out;
    std::string format{"csv"};
};

int cmd_figure(const FigureArgs& a, std::ostream& out) {
    const auto catalog = catalog_for(a.catalog);
    std::vector<std::string> names;
    for (const auto& n : a.names) {
        for (auto& e : expand_scenario_names(catalog, n)) names.push_back(std::move(e));
    }
    RunOptions opts;
    opts.out_dir = resolve_out(a.out);
    opts.format = parse_format(a.format);
    if (!a.method.empty()) opts.method = parse_method(a.method);

    bool ok = true;
    for (const auto& n : names) {
        const auto result = run_scenario(find_scenario(catalog, n), opts);
        out << n << ": " << (result.report.all_passed() ? "all assertions passed" : "ASSERTION FAILED") << '\n';
        print_report(out, result.report);
        ok = ok && result.report.all_passed();
    }
    out << "wrote " << names.size() << " scenario(s) to " << opts.out_dir->string() << '\n';
    return ok ? 0 : 1;
}

struct SweepArgs {
    std::string scenario;
    std::string param;
    std::vector<double> values;
    std::string expect;
    std::string catalog;
    std::string method;
    std::string out;
    std::string format{"csv"};
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
    const auto catalog = catalog_for(a.catalog);
    Scenario base = find_scenario(catalog, a.scenario);
    if (!a.method.empty()) base.method = parse_method(a.method);
    std::optional<Order> expect;
    if (a.expect == "increasing") expect = Order::increasing;
    else if (a.expect == "decreasing") expect = Order::decreasing;
    else if (!a.expect.empty()) throw ValidationError("expect", "expected increasing or decreasing");
    const TrajectoryFormat format = parse_format(a.format);

    const SweepResult r = sweep(base, a.param, a.values, expect);
    const fs::path dir = resolve_out(a.out);
    fs::create_directories(dir);
    const std::string stem = r.scenario.name;
    if (format == TrajectoryFormat::csv) {
        export_csv(r.curves, dir / (stem + ".csv"));
    } else {
        export_json(r.curves, dir / (stem + ".json"));
    }
    std::ofstream report(dir / (stem + ".report.json"));
    report << to_json(r.report);
    if (!report) throw std::runtime_error("cannot write " + (dir / (stem + ".report.json")).string());

    out << stem << '\n';
    print_report(out, r.report);
    return r.report.all_passed() ? 0 : 1;
}

int cmd_list(const std::string& catalog_path, bool as_json, std::ostream& out) {
    const auto catalog = catalog_for(catalog_path);
    if (as_json) {
        out << catalog_to_json(catalog);
        return 0;
    }
    for (const auto& s : catalog) out << std::left << std::setw(8) << s.name << ' ' << s.description << '\n';
    return 0;
}

struct ValidateArgs {
    std::vector<std::string> only;
    std::string inject;
    std::string catalog;
    std::string out;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
    ValidationOptions opts;
    opts.only = a.only;
    if (a.inject == "kernel-sign") {
        opts.inject_kernel_sign = true;
    } else if (!a.inject.empty()) {
        throw ValidationError("inject", "only kernel-sign is supported");
    }
    if (!a.catalog.empty()) opts.catalog = load_catalog(a.catalog);
    opts.artifact_dir = resolve_out(a.out);

    const ValidationSummary summary = run_validation(opts);
    out << to_json(summary);
    if (const Check* bad = summary.first_failure()) {
        err << "validation failed: " << bad->name << " (observed " << format_number(bad->observed) << ", limit "
            << format_number(bad->limit) << ")\n";
        return 1;
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Coherent-amplitude dynamics of an oscillator in an exponential-memory bath under pulse control",
                 "leosim"};
    app.require_subcommand(1, 1);

    SimulateArgs sim;
    add_simulate(*app.add_subcommand("simulate", "integrate one configuration and write its trajectory"), sim);

    FigureArgs fig;
    auto* figure = app.add_subcommand("figure", "run catalog scenarios and write trajectories plus a report");
    figure->add_option("names", fig.names, "scenario or figure names (fig1a, fig1, all)")->required();
    figure->add_option("--catalog", fig.catalog, "scenario catalog JSON (default: built-in)");
    figure->add_option("--method", fig.method, "override: ode | quadrature | analytic");
    figure->add_option("--out", fig.out, std::string("output directory (default $") + out_dir_env + ")");
    figure->add_option("--format", fig.format, "csv | json");

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "vary one parameter of a scenario's first curve");
    sweep_cmd->add_option("--scenario", sw.scenario, "base scenario")->required();
    sweep_cmd->add_option("--param", sw.param, "omega1 | omega3 | delta_over_T | T | gamma0 | W")->required();
    sweep_cmd->add_option("--values", sw.values, "comma-separated values")->required()->delimiter(',');
    sweep_cmd->add_option("--expect", sw.expect, "assert final |alpha| is increasing | decreasing along values");
    sweep_cmd->add_option("--catalog", sw.catalog, "scenario catalog JSON");
    sweep_cmd->add_option("--method", sw.method, "ode | quadrature | analytic");
    sweep_cmd->add_option("--out", sw.out, "output directory");
    sweep_cmd->add_option("--format", sw.format, "csv | json");

    ValidateArgs val;
    auto* validate = app.add_subcommand("validate", "run the cross-method invariant suite");
    validate->add_option("--only", val.only, "comma-separated groups")->delimiter(',');
    validate->add_option("--inject", val.inject, "deliberate fault: kernel-sign");
    validate->add_option("--catalog", val.catalog, "scenario catalog JSON");
    validate->add_option("--out", val.out, "directory for artifacts");

    std::string list_catalog;
    bool list_json = false;
    auto* list = app.add_subcommand("list", "list catalog scenarios");
    list->add_option("--catalog", list_catalog, "scenario catalog JSON");
    list->add_flag("--json", list_json, "print the catalog as JSON");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand("simulate")) return cmd_simulate(sim, out, err);
        if (app.got_subcommand("figure")) return cmd_figure(fig, out);
        if (app.got_subcommand("sweep")) return cmd_sweep(sw, out);
        if (app.got_subcommand("validate")) return cmd_validate(val, out, err);
        return cmd_list(list_catalog, list_json, out);
    } catch (const ValidationError& e) {
        err << "error: invalid " << flag_for(e.field()) << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace leosim
