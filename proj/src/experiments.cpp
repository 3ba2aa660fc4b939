#include "leosim/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "leosim/analytic.hpp"

namespace leosim {

using nlohmann::json;

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Names
// ---------------------------------------------------------------------------

namespace {

constexpr std::pair<AssertionKind, std::string_view> kind_names[] = {
    {AssertionKind::final_monotone, "final_monotone"},
    {AssertionKind::min_floor, "min_floor"},
    {AssertionKind::preserved_within, "preserved_within"},
    {AssertionKind::final_within, "final_within"},
    {AssertionKind::final_close, "final_close"},
    {AssertionKind::final_dominates, "final_dominates"},
    {AssertionKind::sup_distance_max, "sup_distance_max"},
    {AssertionKind::sup_distance_ratio, "sup_distance_ratio"},
    {AssertionKind::sup_distance_less, "sup_distance_less"},
};

}  // namespace

std::string_view to_string(AssertionKind kind) noexcept {
    for (const auto& [k, n] : kind_names) {
        if (k == kind) return n;
    }
    return "unknown";
}

AssertionKind parse_assertion_kind(std::string_view name) {
    for (const auto& [k, n] : kind_names) {
        if (n == name) return k;
    }
    throw ValidationError("assertion", "unknown kind '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

double Scenario::resolved_dt() const {
    if (dt > 0.0) return dt;
    double out = 1e-3;
    for (const auto& c : curves) {
        if (!c.markov) out = std::min(out, default_dt(c.pulse));
    }
    return out;
}

SimulationConfig Scenario::config() const {
    SimulationConfig cfg;
    cfg.alpha0 = alpha0;
    cfg.omega0 = omega0;
    cfg.t_max = t_max;
    cfg.dt = resolved_dt();
    cfg.method = method;
    return cfg;
}

const CurveSpec& Scenario::curve(std::string_view curve_name) const {
    for (const auto& c : curves) {
        if (c.name == curve_name) return c;
    }
    throw ValidationError("curve", "scenario '" + name + "' has no curve '" + std::string(curve_name) + "'");
}

void validate_scenario(const Scenario& s) {
    if (s.name.empty()) throw ValidationError("name", "scenario name is empty");
    if (!(s.big_gamma >= 0.0)) throw ValidationError("Gamma", "must be >= 0");
    std::set<std::string> names;
    for (const auto& c : s.curves) {
        if (c.name.empty()) throw ValidationError("curve", "empty curve name in '" + s.name + "'");
        if (!names.insert(c.name).second) {
            throw ValidationError("curve", "duplicate curve '" + c.name + "' in '" + s.name + "'");
        }
        if (!c.markov) BathKernel(c.gamma0, s.big_gamma);
    }
    auto known = [&](const std::string& n) {
        if (!names.count(n)) {
            throw ValidationError("assertion", "scenario '" + s.name + "' refers to unknown curve '" + n + "'");
        }
    };
    for (const auto& a : s.assertions) {
        for (const auto& c : a.curves) known(c);
        for (const auto& p : a.pairs) {
            known(p.first);
            known(p.second);
        }
        const std::size_t need_curves = a.kind == AssertionKind::final_monotone ? 2 : 1;
        switch (a.kind) {
            case AssertionKind::final_monotone:
            case AssertionKind::min_floor:
            case AssertionKind::preserved_within:
            case AssertionKind::final_within:
            case AssertionKind::final_close:
                if (a.curves.size() < need_curves) throw ValidationError("assertion", "too few curves");
                break;
            case AssertionKind::sup_distance_ratio:
                if (a.pairs.size() != 2) throw ValidationError("assertion", "ratio needs exactly two pairs");
                break;
            case AssertionKind::sup_distance_less:
                if (a.pairs.empty() || a.pairs.size() % 2 != 0) {
                    throw ValidationError("assertion", "sup_distance_less needs an even number of pairs");
                }
                break;
            default:
                if (a.pairs.empty()) throw ValidationError("assertion", "no curve pairs");
        }
    }
    const SimulationConfig cfg = s.config();
    for (const auto& c : s.curves) {
        if (c.markov) continue;
        try {
            make_grid(cfg, c.pulse);
        } catch (const ValidationError& e) {
            throw ValidationError(e.field(), "scenario '" + s.name + "', curve '" + c.name + "': " + e.what());
        }
    }
}

UnknownScenarioError::UnknownScenarioError(std::string_view name, const std::vector<Scenario>& catalog)
    : ValidationError("scenario", [&] {
          std::string msg = "unknown scenario '" + std::string(name) + "'; valid names:";
          for (const auto& s : catalog) msg += " " + s.name;
          return msg;
      }()) {}

const Scenario& find_scenario(const std::vector<Scenario>& catalog, std::string_view name) {
    for (const auto& s : catalog) {
        if (s.name == name) return s;
    }
    throw UnknownScenarioError(name, catalog);
}

std::vector<std::string> expand_scenario_names(const std::vector<Scenario>& catalog, std::string_view name) {
    std::vector<std::string> out;
    for (const auto& s : catalog) {
        if (name == "all" || s.name == name) {
            out.push_back(s.name);
            continue;
        }
        // "fig1" selects fig1a, fig1b, ...
        if (s.name.size() == name.size() + 1 && s.name.starts_with(name) && std::islower(s.name.back())) {
            out.push_back(s.name);
        }
    }
    if (out.empty()) throw UnknownScenarioError(name, catalog);
    return out;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

json pulse_to_json(const PulseProgram& p) {
    json j;
    std::visit(
        [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, NoPulse>) {
                j["kind"] = "none";
            } else if constexpr (std::is_same_v<S, RectangularPulse>) {
                j = {{"kind", "rectangular"}, {"omega1", s.omega1}, {"T", s.period}, {"Delta", s.width}};
            } else if constexpr (std::is_same_v<S, SinePulse>) {
                j = {{"kind", "sine"}, {"omega2", s.omega2}, {"T", s.period}, {"Delta", s.width}};
            } else {
                j = {{"kind", "zero_energy"}, {"omega3", s.omega3}, {"T3", s.period}};
            }
        },
        p.shape());
    if (const auto& n = p.noise()) {
        j["noise"] = {{"W", n->strength}, {"mu", n->mu}, {"sigma", n->sigma}, {"seed", n->seed}};
    }
    return j;
}

double width_from(const json& j, double period) {
    if (j.contains("Delta")) return j.at("Delta").get<double>();
    if (j.contains("delta_over_T")) return j.at("delta_over_T").get<double>() * period;
    throw ValidationError("Delta", "pulse needs Delta or delta_over_T");
}

PulseProgram pulse_from_json(const json& j) {
    const std::string kind = j.value("kind", "none");
    PulseProgram p;
    if (kind == "none") {
        p = PulseProgram::none();
    } else if (kind == "rectangular") {
        const double T = j.at("T").get<double>();
        p = PulseProgram::rectangular(j.at("omega1").get<double>(), T, width_from(j, T));
    } else if (kind == "sine") {
        const double T = j.at("T").get<double>();
        p = PulseProgram::sine(j.at("omega2").get<double>(), T, width_from(j, T));
    } else if (kind == "zero_energy") {
        p = PulseProgram::zero_energy(j.at("omega3").get<double>(), j.at("T3").get<double>());
    } else {
        throw ValidationError("pulse", "unknown pulse kind '" + kind + "'");
    }
    if (j.contains("noise") && !j.at("noise").is_null()) {
        const json& n = j.at("noise");
        p = p.with_noise(NoiseSpec{n.value("W", 0.0), n.value("mu", 0.0), n.value("sigma", 1.0),
                                   n.value("seed", std::uint64_t{0})});
    }
    return p;
}

json scenario_to_json(const Scenario& s) {
    json curves = json::array();
    for (const auto& c : s.curves) {
        json jc = {{"name", c.name}};
        if (c.markov) {
            jc["markov"] = true;
        } else {
            jc["gamma0"] = c.gamma0;
            jc["pulse"] = pulse_to_json(c.pulse);
        }
        if (c.reference) jc["reference"] = true;
        curves.push_back(std::move(jc));
    }
    json prov = json::array();
    for (const auto& p : s.provenance) {
        prov.push_back({{"parameter", p.parameter},
                        {"tag", p.tag == Provenance::caption ? "caption" : "derived"},
                        {"source", p.source}});
    }
    json asserts = json::array();
    for (const auto& a : s.assertions) {
        json ja = {{"kind", to_string(a.kind)}};
        if (!a.curves.empty()) ja["curves"] = a.curves;
        if (!a.pairs.empty()) {
            json pairs = json::array();
            for (const auto& p : a.pairs) pairs.push_back({p.first, p.second});
            ja["pairs"] = pairs;
        }
        if (a.kind == AssertionKind::final_monotone) {
            ja["order"] = a.order == Order::increasing ? "increasing" : "decreasing";
        } else {
            ja["threshold"] = a.threshold;
        }
        if (a.kind == AssertionKind::final_close) ja["tolerance"] = a.tolerance;
        ja["derived_threshold"] = a.derived_threshold;
        if (!a.note.empty()) ja["note"] = a.note;
        asserts.push_back(std::move(ja));
    }
    return {{"name", s.name},
            {"description", s.description},
            {"alpha0", {s.alpha0.real(), s.alpha0.imag()}},
            {"omega0", s.omega0},
            {"Gamma", s.big_gamma},
            {"t_max", s.t_max},
            {"dt", s.dt},
            {"method", to_string(s.method)},
            {"curves", curves},
            {"provenance", prov},
            {"assertions", asserts}};
}

Scenario scenario_from_json(const json& j) {
    Scenario s;
    s.name = j.at("name").get<std::string>();
    s.description = j.value("description", "");
    if (j.contains("alpha0")) {
        const json& a = j.at("alpha0");
        s.alpha0 = a.is_array() ? complex{a.at(0).get<double>(), a.at(1).get<double>()} : complex{a.get<double>(), 0.0};
    }
    s.omega0 = j.value("omega0", 1.0);
    s.big_gamma = j.value("Gamma", 5.0);
    s.t_max = j.value("t_max", 10.0);
    s.dt = j.value("dt", 0.0);
    s.method = parse_method(j.value("method", "ode"));
    for (const auto& jc : j.at("curves")) {
        CurveSpec c;
        c.name = jc.at("name").get<std::string>();
        c.markov = jc.value("markov", false);
        if (!c.markov) {
            c.gamma0 = jc.at("gamma0").get<double>();
            c.pulse = jc.contains("pulse") ? pulse_from_json(jc.at("pulse")) : PulseProgram::none();
        }
        c.reference = jc.value("reference", false);
        s.curves.push_back(std::move(c));
    }
    if (j.contains("provenance")) {
        for (const auto& jp : j.at("provenance")) {
            const std::string tag = jp.value("tag", "derived");
            if (tag != "caption" && tag != "derived") throw ValidationError("provenance", "unknown tag '" + tag + "'");
            s.provenance.push_back({jp.at("parameter").get<std::string>(),
                                    tag == "caption" ? Provenance::caption : Provenance::derived,
                                    jp.value("source", "")});
        }
    }
    if (j.contains("assertions")) {
        for (const auto& ja : j.at("assertions")) {
            Assertion a;
            a.kind = parse_assertion_kind(ja.at("kind").get<std::string>());
            if (ja.contains("curves")) a.curves = ja.at("curves").get<std::vector<std::string>>();
            if (ja.contains("pairs")) {
                for (const auto& p : ja.at("pairs")) a.pairs.push_back({p.at(0).get<std::string>(), p.at(1).get<std::string>()});
            }
            const std::string order = ja.value("order", "increasing");
            if (order != "increasing" && order != "decreasing") throw ValidationError("order", "unknown order '" + order + "'");
            a.order = order == "increasing" ? Order::increasing : Order::decreasing;
            a.threshold = ja.value("threshold", 0.0);
            a.tolerance = ja.value("tolerance", 0.0);
            a.derived_threshold = ja.value("derived_threshold", false);
            a.note = ja.value("note", "");
            s.assertions.push_back(std::move(a));
        }
    }
    return s;
}

}  // namespace

std::string pulse_signature(const PulseProgram& p) { return pulse_to_json(p).dump(); }

std::string catalog_to_json(const std::vector<Scenario>& catalog) {
    json scenarios = json::array();
    for (const auto& s : catalog) scenarios.push_back(scenario_to_json(s));
    return json{{"scenarios", scenarios}}.dump(2) + "\n";
}

std::vector<Scenario> catalog_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("catalog", std::string("malformed JSON: ") + e.what());
    }
    std::vector<Scenario> out;
    try {
        for (const auto& j : doc.at("scenarios")) {
            out.push_back(scenario_from_json(j));
            validate_scenario(out.back());
        }
    } catch (const json::exception& e) {
        throw ValidationError("catalog", e.what());
    }
    return out;
}

std::vector<Scenario> load_catalog(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("catalog", "cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return catalog_from_json(buf.str());
}

// ---------------------------------------------------------------------------
// Metrics and assertions
// ---------------------------------------------------------------------------

double sup_distance(const Trajectory& a, const Trajectory& b) {
    if (a.size() != b.size()) throw std::invalid_argument("sup_distance: trajectories have different grids");
    const auto& ta = a.times();
    const auto& tb = b.times();
    double out = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(ta[i] - tb[i]) > 1e-12 * std::max(1.0, std::abs(ta[i]))) {
            throw std::invalid_argument("sup_distance: trajectories have different grids");
        }
        out = std::max(out, std::abs(a.values()[i] - b.values()[i]));
    }
    return out;
}

bool ComparisonReport::all_passed() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const auto& a) { return a.passed; });
}

namespace {

using CurveMap = std::map<std::string, const Trajectory*, std::less<>>;

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

AssertionOutcome evaluate(const Assertion& a, const CurveMap& curves, double amp0) {
    AssertionOutcome out;
    out.kind = std::string(to_string(a.kind));
    out.derived_threshold = a.derived_threshold;
    auto traj = [&](const std::string& n) -> const Trajectory& { return *curves.find(n)->second; };
    auto dist = [&](const CurvePair& p) { return sup_distance(traj(p.first), traj(p.second)); };
    std::ostringstream d;

    switch (a.kind) {
        case AssertionKind::final_monotone: {
            const bool inc = a.order == Order::increasing;
            double gap = std::numeric_limits<double>::infinity();
            for (std::size_t i = 1; i < a.curves.size(); ++i) {
                const double step = traj(a.curves[i]).final_magnitude() - traj(a.curves[i - 1]).final_magnitude();
                gap = std::min(gap, inc ? step : -step);
            }
            out.observed = gap;
            out.limit = 0.0;
            out.passed = gap > 0.0;
            d << "final |alpha| strictly " << (inc ? "increasing" : "decreasing") << " along " << join(a.curves, ", ");
            break;
        }
        case AssertionKind::min_floor: {
            out.observed = std::numeric_limits<double>::infinity();
            for (const auto& c : a.curves) out.observed = std::min(out.observed, traj(c).min_magnitude());
            out.limit = a.threshold * amp0;
            out.passed = out.observed >= out.limit;
            d << "min |alpha| of " << join(a.curves, ", ") << " >= " << a.threshold << " |alpha0|";
            break;
        }
        case AssertionKind::preserved_within: {
            out.observed = 0.0;
            for (const auto& c : a.curves) {
                for (double m : traj(c).magnitude()) out.observed = std::max(out.observed, std::abs(m - amp0));
            }
            out.limit = a.threshold * amp0;
            out.passed = out.observed <= out.limit;
            d << "|alpha| of " << join(a.curves, ", ") << " stays within " << a.threshold << " |alpha0| of |alpha0|";
            break;
        }
        case AssertionKind::final_within: {
            out.observed = 0.0;
            for (const auto& c : a.curves) out.observed = std::max(out.observed, std::abs(traj(c).final_magnitude() - amp0));
            out.limit = a.threshold * amp0;
            out.passed = out.observed <= out.limit;
            d << "final |alpha| of " << join(a.curves, ", ") << " within " << a.threshold << " |alpha0| of |alpha0|";
            break;
        }
        case AssertionKind::final_close: {
            out.observed = 0.0;
            for (const auto& c : a.curves) {
                out.observed = std::max(out.observed, std::abs(traj(c).final_magnitude() - a.threshold));
            }
            out.limit = a.tolerance;
            out.passed = out.observed <= out.limit;
            d << "final |alpha| of " << join(a.curves, ", ") << " equals " << format_number(a.threshold) << " +- "
              << a.tolerance;
            break;
        }
        case AssertionKind::final_dominates: {
            out.observed = std::numeric_limits<double>::infinity();
            std::vector<std::string> parts;
            for (const auto& p : a.pairs) {
                out.observed = std::min(out.observed, traj(p.first).final_magnitude() - traj(p.second).final_magnitude());
                parts.push_back(p.first + " > " + p.second);
            }
            out.limit = 0.0;
            out.passed = out.observed > 0.0;
            d << "final |alpha|: " << join(parts, "; ");
            break;
        }
        case AssertionKind::sup_distance_max: {
            out.observed = 0.0;
            std::vector<std::string> parts;
            for (const auto& p : a.pairs) {
                out.observed = std::max(out.observed, dist(p));
                parts.push_back(p.first + "~" + p.second);
            }
            out.limit = a.threshold * amp0;
            out.passed = out.observed <= out.limit;
            d << "sup distance <= " << a.threshold << " |alpha0| for " << join(parts, ", ");
            break;
        }
        case AssertionKind::sup_distance_ratio: {
            const double num = dist(a.pairs[0]);
            const double den = dist(a.pairs[1]);
            out.observed = den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
            out.limit = a.threshold;
            out.passed = num <= a.threshold * den;
            d << "d(" << a.pairs[0].first << ", " << a.pairs[0].second << ") <= " << a.threshold << " * d("
              << a.pairs[1].first << ", " << a.pairs[1].second << ")";
            break;
        }
        case AssertionKind::sup_distance_less: {
            out.observed = std::numeric_limits<double>::infinity();
            std::vector<std::string> parts;
            for (std::size_t i = 0; i + 1 < a.pairs.size(); i += 2) {
                out.observed = std::min(out.observed, dist(a.pairs[i + 1]) - dist(a.pairs[i]));
                parts.push_back("d(" + a.pairs[i].first + ", " + a.pairs[i].second + ") < d(" + a.pairs[i + 1].first +
                                ", " + a.pairs[i + 1].second + ")");
            }
            out.limit = 0.0;
            out.passed = out.observed > 0.0;
            d << join(parts, "; ");
            break;
        }
    }
    if (!a.note.empty()) d << " [" << a.note << "]";
    out.description = d.str();
    return out;
}

}  // namespace

std::string to_json(const ComparisonReport& report, bool include_timing) {
    json curves = json::array();
    for (const auto& c : report.curves) {
        curves.push_back({{"name", c.name}, {"final_abs", c.final_abs}, {"min_abs", c.min_abs}, {"reference", c.reference}});
    }
    json distances = json::array();
    for (const auto& p : report.distances) distances.push_back({{"a", p.first}, {"b", p.second}, {"sup", p.sup}});
    json asserts = json::array();
    for (const auto& a : report.assertions) {
        asserts.push_back({{"kind", a.kind},
                           {"description", a.description},
                           {"passed", a.passed},
                           {"derived_threshold", a.derived_threshold},
                           {"observed", a.observed},
                           {"limit", a.limit}});
    }
    json j = {{"scenario", report.scenario},
              {"curves", curves},
              {"distances", distances},
              {"assertions", asserts},
              {"all_passed", report.all_passed()},
              {"notes", report.notes}};
    if (include_timing) j["runtime_seconds"] = report.runtime_seconds;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

Trajectory run_curve(const Scenario& s, const CurveSpec& c, Method method, Diagnostics* diag) {
    SimulationConfig cfg = s.config();
    if (c.markov) return markovian_trajectory(cfg, s.big_gamma);
    const BathKernel k(c.gamma0, s.big_gamma);
    const bool closed_form =
        !c.pulse.is_noisy() && (!c.pulse.is_active() || std::holds_alternative<RectangularPulse>(c.pulse.shape()));
    if (method == Method::analytic && !closed_form) {
        if (diag) diag->note("curve '" + c.name + "' has no closed form, using ode");
        method = Method::ode;
    }
    cfg.method = method;
    return simulate(cfg, k, c.pulse, diag);
}

ScenarioResult run_scenario(const Scenario& s, const RunOptions& opts) {
    validate_scenario(s);
    const auto started = std::chrono::steady_clock::now();
    const Method method = opts.method.value_or(s.method);

    ScenarioResult result;
    Diagnostics diag;
    for (const auto& c : s.curves) {
        try {
            result.curves.push_back({c.name, run_curve(s, c, method, &diag), c.reference});
        } catch (const ValidationError& e) {
            throw ValidationError(e.field(), "scenario '" + s.name + "', curve '" + c.name + "': " + e.what());
        } catch (const std::exception& e) {
            throw SolverError("scenario '" + s.name + "', curve '" + c.name + "': " + e.what());
        }
    }

    ComparisonReport& report = result.report;
    report.scenario = s.name;
    report.notes = diag.notes;
    CurveMap by_name;
    for (const auto& c : result.curves) {
        by_name.emplace(c.name, &c.trajectory);
        report.curves.push_back({c.name, c.trajectory.final_magnitude(), c.trajectory.min_magnitude(), c.reference});
    }
    for (std::size_t i = 0; i < result.curves.size(); ++i) {
        for (std::size_t j = i + 1; j < result.curves.size(); ++j) {
            report.distances.push_back({result.curves[i].name, result.curves[j].name,
                                        sup_distance(result.curves[i].trajectory, result.curves[j].trajectory)});
        }
    }
    const double amp0 = std::abs(s.alpha0);
    for (const auto& a : s.assertions) report.assertions.push_back(evaluate(a, by_name, amp0));
    report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    if (opts.out_dir) {
        std::error_code ec;
        std::filesystem::create_directories(*opts.out_dir, ec);
        if (ec) throw std::runtime_error("cannot create " + opts.out_dir->string() + ": " + ec.message());
        std::vector<NamedTrajectory> exported;
        for (const auto& c : result.curves) {
            if (!c.reference) exported.push_back(c);
        }
        if (opts.format == TrajectoryFormat::csv) {
            export_csv(exported, *opts.out_dir / (s.name + ".csv"));
        } else {
            export_json(exported, *opts.out_dir / (s.name + ".json"));
        }
        const auto report_path = *opts.out_dir / (s.name + ".report.json");
        std::ofstream out(report_path);
        out << to_json(report);
        if (!out) throw std::runtime_error("cannot write " + report_path.string());
    }
    return result;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

namespace {

PulseProgram rebuild(const PulseShape& shape, const std::optional<NoiseSpec>& noise) {
    PulseProgram p = std::visit(
        [](const auto& s) -> PulseProgram {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, NoPulse>) {
                return PulseProgram::none();
            } else if constexpr (std::is_same_v<S, RectangularPulse>) {
                return PulseProgram::rectangular(s.omega1, s.period, s.width);
            } else if constexpr (std::is_same_v<S, SinePulse>) {
                return PulseProgram::sine(s.omega2, s.period, s.width);
            } else {
                return PulseProgram::zero_energy(s.omega3, s.period);
            }
        },
        shape);
    return noise ? p.with_noise(*noise) : p;
}

CurveSpec apply_parameter(CurveSpec c, std::string_view parameter, double v) {
    PulseShape shape = c.pulse.shape();
    std::optional<NoiseSpec> noise = c.pulse.noise();
    auto inapplicable = [&] {
        return ValidationError("param", std::string(parameter) + " does not apply to a " +
                                            std::string(c.pulse.kind()) + " pulse");
    };

    if (parameter == "gamma0") {
        c.gamma0 = v;
        return c;
    }
    if (parameter == "omega1") {
        auto* r = std::get_if<RectangularPulse>(&shape);
        if (!r) throw inapplicable();
        r->omega1 = v;
    } else if (parameter == "omega3") {
        auto* z = std::get_if<ZeroEnergyPulse>(&shape);
        if (!z) throw inapplicable();
        z->omega3 = v;
    } else if (parameter == "delta_over_T") {
        if (auto* r = std::get_if<RectangularPulse>(&shape)) {
            r->width = v * r->period;
        } else if (auto* s = std::get_if<SinePulse>(&shape)) {
            s->width = v * s->period;
        } else {
            throw inapplicable();
        }
    } else if (parameter == "T") {
        if (auto* r = std::get_if<RectangularPulse>(&shape)) {
            r->width = r->width / r->period * v;
            r->period = v;
        } else if (auto* s = std::get_if<SinePulse>(&shape)) {
            s->width = s->width / s->period * v;
            s->period = v;
        } else if (auto* z = std::get_if<ZeroEnergyPulse>(&shape)) {
            z->period = v;
        } else {
            throw inapplicable();
        }
    } else if (parameter == "W") {
        if (std::holds_alternative<NoPulse>(shape)) throw inapplicable();
        NoiseSpec n = noise.value_or(NoiseSpec{});
        n.strength = v;
        noise = n;
    } else {
        throw ValidationError("param", "unknown sweep parameter '" + std::string(parameter) +
                                           "' (expected omega1, omega3, delta_over_T, T, gamma0 or W)");
    }
    c.pulse = rebuild(shape, noise);
    return c;
}

std::string value_label(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

}  // namespace

SweepResult sweep(const Scenario& base, std::string_view parameter, std::span<const double> values,
                  std::optional<Order> expect) {
    if (values.empty()) throw ValidationError("values", "sweep needs at least one value");
    auto it = std::find_if(base.curves.begin(), base.curves.end(), [](const auto& c) { return !c.reference && !c.markov; });
    if (it == base.curves.end()) throw ValidationError("scenario", "'" + base.name + "' has no curve to sweep");

    Scenario s = base;
    s.name = base.name + "-sweep-" + std::string(parameter);
    s.description = "sweep of " + std::string(parameter) + " on '" + it->name + "' of " + base.name;
    s.curves.clear();
    s.assertions.clear();
    for (double v : values) {
        CurveSpec c = apply_parameter(*it, parameter, v);
        c.name = std::string(parameter) + "=" + value_label(v);
        c.reference = false;
        s.curves.push_back(std::move(c));
    }
    s.provenance.push_back({std::string(parameter), Provenance::derived, "sweep values supplied by the caller"});
    if (expect && s.curves.size() > 1) {
        Assertion a;
        a.kind = AssertionKind::final_monotone;
        a.order = *expect;
        for (const auto& c : s.curves) a.curves.push_back(c.name);
        s.assertions.push_back(std::move(a));
    }
    SweepResult out;
    auto result = run_scenario(s);
    out.scenario = std::move(s);
    out.curves = std::move(result.curves);
    out.report = std::move(result.report);
    return out;
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

namespace {

void require_common_grid(const std::vector<NamedTrajectory>& curves) {
    for (std::size_t i = 1; i < curves.size(); ++i) {
        if (curves[i].trajectory.times() != curves[0].trajectory.times()) {
            throw std::invalid_argument("export: curve '" + curves[i].name + "' is on a different grid");
        }
    }
}

}  // namespace

void export_csv(const std::vector<NamedTrajectory>& curves, const std::filesystem::path& path) {
    require_common_grid(curves);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");

    out << "t";
    for (const auto& c : curves) out << ',' << c.name << ".re," << c.name << ".im," << c.name << ".abs";
    out << '\n';
    if (!curves.empty()) {
        const auto& times = curves.front().trajectory.times();
        for (std::size_t k = 0; k < times.size(); ++k) {
            out << format_number(times[k]);
            for (const auto& c : curves) {
                const complex v = c.trajectory.values()[k];
                out << ',' << format_number(v.real()) << ',' << format_number(v.imag()) << ','
                    << format_number(c.trajectory.magnitude()[k]);
            }
            out << '\n';
        }
    }
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

void export_json(const std::vector<NamedTrajectory>& curves, const std::filesystem::path& path) {
    require_common_grid(curves);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    json j;
    j["t"] = curves.empty() ? std::vector<double>{} : curves.front().trajectory.times();
    json list = json::array();
    for (const auto& c : curves) {
        std::vector<double> re, im;
        for (const auto& v : c.trajectory.values()) {
            re.push_back(v.real());
            im.push_back(v.imag());
        }
        list.push_back({{"name", c.name}, {"re", re}, {"im", im}, {"abs", c.trajectory.magnitude()}});
    }
    j["curves"] = list;
    out << j.dump() << '\n';
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace leosim
