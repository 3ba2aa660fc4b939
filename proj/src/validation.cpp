#include "leosim/validation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "leosim/analytic.hpp"

namespace leosim {

using nlohmann::json;

bool ValidationSummary::passed() const { return first_failure() == nullptr; }

const Check* ValidationSummary::first_failure() const {
    for (const auto& c : checks) {
        if (!c.passed) return &c;
    }
    return nullptr;
}

namespace {

constexpr double cross_tolerance = 1e-4;  // times |alpha0|
constexpr std::size_t quadrature_steps = 10000;

struct CatalogCurve {
    std::string scenario;
    std::string curve;
    complex alpha0;
    double omega0;
    BathKernel kernel;
    PulseProgram pulse;
    double t_max;
};

// Non-Markov curves of the catalog with duplicates (same physics) removed.
std::vector<CatalogCurve> unique_curves(const std::vector<Scenario>& catalog) {
    std::vector<CatalogCurve> out;
    std::set<std::string> seen;
    for (const auto& s : catalog) {
        for (const auto& c : s.curves) {
            if (c.markov) continue;
            std::ostringstream key;
            key << format_number(s.alpha0.real()) << ',' << format_number(s.alpha0.imag()) << ','
                << format_number(s.omega0) << ',' << format_number(s.big_gamma) << ',' << format_number(c.gamma0) << ','
                << format_number(s.t_max) << ',' << pulse_signature(c.pulse);
            if (!seen.insert(key.str()).second) continue;
            out.push_back({s.name, c.name, s.alpha0, s.omega0, BathKernel(c.gamma0, s.big_gamma), c.pulse, s.t_max});
        }
    }
    return out;
}

// dt = 1e-3 unless the pulse needs finer; horizon cut to whole periods when
// the quadrature would exceed `quadrature_steps` steps.
SimulationConfig cross_config(const CatalogCurve& c) {
    SimulationConfig cfg;
    cfg.alpha0 = c.alpha0;
    cfg.omega0 = c.omega0;
    cfg.dt = std::min(1e-3, default_dt(c.pulse));
    cfg.t_max = c.t_max;
    if (c.t_max / cfg.dt > static_cast<double>(quadrature_steps) + 0.5) {
        const double period = c.pulse.period();
        const double room = static_cast<double>(quadrature_steps) * cfg.dt;
        cfg.t_max = period > 0.0 ? std::floor(room / period + 1e-9) * period : room;
    }
    return cfg;
}

std::string curve_label(const CatalogCurve& c) { return c.scenario + "/" + c.curve; }

Check make_check(std::string group, std::string name, double observed, double limit, std::string detail = {}) {
    return Check{std::move(group), std::move(name), observed <= limit, observed, limit, std::move(detail)};
}

double scaled_residual(double gamma0, double c, double big_gamma, complex x) {
    const double scale = std::max({1.0, std::norm(x), std::abs(complex{gamma0, -c}) * std::abs(x), 0.5 * big_gamma * gamma0});
    return std::abs(characteristic_residual(gamma0, c, big_gamma, x)) / scale;
}

void roots_group(const std::vector<CatalogCurve>& curves, std::vector<Check>& out) {
    std::set<std::pair<double, double>> pairs;  // (gamma0, c)
    double big_gamma = 0.0;
    for (const auto& c : curves) {
        big_gamma = c.kernel.big_gamma;
        pairs.insert({c.kernel.gamma0, c.omega0});
        if (const auto* r = std::get_if<RectangularPulse>(&c.pulse.shape())) pairs.insert({c.kernel.gamma0, c.omega0 + r->omega1});
        if (const auto* z = std::get_if<ZeroEnergyPulse>(&c.pulse.shape())) {
            pairs.insert({c.kernel.gamma0, c.omega0 + z->omega3});
            pairs.insert({c.kernel.gamma0, c.omega0 - z->omega3});
        }
    }
    double residual = 0.0, identity = 0.0;
    for (const auto& [g, c] : pairs) {
        const RootPair roots = quadratic_roots(g, c, big_gamma);
        residual = std::max({residual, scaled_residual(g, c, big_gamma, roots.a1), scaled_residual(g, c, big_gamma, roots.a2)});
        const MixingWeights w = mixing_weights(roots);
        identity = std::max(identity, std::abs(w.a3 + w.a4 - 1.0));
    }
    const std::string n = std::to_string(pairs.size()) + " (gamma0, c) pairs";
    out.push_back(make_check("roots", "roots:residual", residual, 1e-12, n));
    out.push_back(make_check("roots", "roots:A3+A4=1", identity, 1e-12, n));
}

void no_control_group(std::vector<Check>& out) {
    for (double g : {0.1, 1.0, 5.0}) {
        SimulationConfig cfg;
        const BathKernel k(g, 5.0);
        const Trajectory ode = simulate_ode(cfg, k, PulseProgram::none());
        double rel = 0.0;
        for (std::size_t i = 0; i < ode.size(); ++i) {
            const complex exact = analytic_no_control(cfg.alpha0, cfg.omega0, k, ode.times()[i]);
            rel = std::max(rel, std::abs(ode.values()[i] - exact) / std::abs(exact));
        }
        std::ostringstream name;
        name << "no-control:gamma0=" << g;
        out.push_back(make_check("no-control", name.str(), rel, 1e-6, "sup pointwise relative error"));
    }
}

void markov_group(std::vector<Check>& out) {
    SimulationConfig cfg;
    const BathKernel k(500.0, 5.0);
    const Trajectory ode = simulate_ode(cfg, k, PulseProgram::none());
    const Trajectory markov = markovian_trajectory(cfg, k.big_gamma);
    out.push_back(make_check("markov", "markov:gamma0=500", sup_distance(ode, markov) / std::abs(cfg.alpha0), 0.01,
                             "sup distance / |alpha0|"));
}

void analytic_group(const std::vector<CatalogCurve>& curves, std::vector<Check>& out) {
    for (const auto& c : curves) {
        const bool rect = std::holds_alternative<RectangularPulse>(c.pulse.shape());
        if (c.pulse.is_noisy() || (c.pulse.is_active() && !rect)) continue;
        const SimulationConfig cfg = cross_config(c);
        const double d = sup_distance(simulate_ode(cfg, c.kernel, c.pulse), analytic_trajectory(cfg, c.kernel, c.pulse));
        out.push_back(make_check("ode-vs-analytic", "ode-vs-analytic:" + curve_label(c), d, cross_tolerance * std::abs(c.alpha0)));
    }
}

void quadrature_group(const std::vector<CatalogCurve>& curves, bool inject, std::vector<Check>& out) {
    for (const auto& c : curves) {
        const SimulationConfig cfg = cross_config(c);
        const Trajectory ode = inject ? detail::simulate_ode_signed(cfg, c.kernel, c.pulse, -1.0)
                                      : simulate_ode(cfg, c.kernel, c.pulse);
        const double d = sup_distance(ode, simulate_quadrature(cfg, c.kernel, c.pulse));
        std::ostringstream detail;
        detail << "dt=" << cfg.dt << ", t_max=" << cfg.t_max;
        out.push_back(make_check("ode-vs-quadrature", "ode-vs-quadrature:" + curve_label(c), d,
                                 cross_tolerance * std::abs(c.alpha0), detail.str()));
    }
}

void properties_group(std::vector<Check>& out) {
    const PulseProgram rect = PulseProgram::rectangular(8.0, 0.05, 0.035);
    SimulationConfig cfg;

    {
        const BathKernel free(1.0, 0.0);
        double drift = 0.0;
        for (Method m : {Method::ode, Method::quadrature, Method::analytic}) {
            SimulationConfig c = cfg;
            c.method = m;
            const Trajectory t = simulate(c, free, rect);
            for (double v : t.magnitude()) drift = std::max(drift, std::abs(v - std::abs(cfg.alpha0)));
        }
        out.push_back(make_check("properties", "properties:Gamma=0 conservation", drift, 1e-10, "all three methods"));
    }
    {
        const BathKernel k(1.0, 5.0);
        const auto states = integrate_ode_states(cfg, k, rect);
        double err = std::abs(states.front().alpha - cfg.alpha0) + std::abs(states.front().z);
        for (Method m : {Method::ode, Method::quadrature, Method::analytic}) {
            SimulationConfig c = cfg;
            c.method = m;
            err += std::abs(simulate(c, k, rect).values().front() - cfg.alpha0);
        }
        out.push_back(make_check("properties", "properties:exact initial data", err, 0.0, "alpha(0) and z(0) bitwise"));
    }
    {
        const double w3 = 25.0, T3 = 0.5;
        const PulseProgram ze = PulseProgram::zero_energy(w3, T3);
        double worst = 0.0;
        for (int n = 0; n < 20; ++n) worst = std::max(worst, std::abs(pulse_integral(ze, n * T3, (n + 1) * T3)));
        out.push_back(make_check("properties", "properties:zero-energy period integral", worst / (w3 * T3), 1e-12,
                                 "20 periods, relative to omega3 T3"));
    }
    {
        const BathKernel k(1.0, 5.0);
        const Trajectory clean = simulate_ode(cfg, k, rect);
        const Trajectory zero = simulate_ode(cfg, k, rect.with_noise(NoiseSpec{0.0, 0.0, 1.0, 99}));
        out.push_back(make_check("properties", "properties:W=0 equals noiseless", sup_distance(clean, zero), 0.0));

        const PulseProgram noisy = rect.with_noise(NoiseSpec{1.0, 0.0, 1.0, 7});
        const double same = sup_distance(simulate_ode(cfg, k, noisy), simulate_ode(cfg, k, noisy));
        const double other = sup_distance(simulate_ode(cfg, k, noisy),
                                          simulate_ode(cfg, k, rect.with_noise(NoiseSpec{1.0, 0.0, 1.0, 8})));
        Check c = make_check("properties", "properties:seed determinism", same, 0.0);
        c.passed = c.passed && other > 0.0;
        c.detail = "different seeds differ by " + format_number(other);
        out.push_back(c);
    }
    {
        // Smooth pulse, coarse grids against a fine reference.
        const PulseProgram sine = PulseProgram::sine(7.5 * std::numbers::pi, 0.6, 0.3);
        const BathKernel k(1.0, 5.0);
        auto run = [&](double dt) {
            SimulationConfig c = cfg;
            c.dt = dt;
            return simulate_ode(c, k, sine);
        };
        const Trajectory ref = run(0.00125);
        std::vector<double> errs;
        for (double dt : {0.02, 0.01, 0.005}) errs.push_back(std::abs(run(dt).values().back() - ref.values().back()));
        const double order = std::log2(errs[1] / errs[2]);
        std::ostringstream detail;
        detail << "errors at dt=0.02,0.01,0.005: " << errs[0] << ", " << errs[1] << ", " << errs[2];
        Check c{"properties", "properties:RK4 order on sine pulses", order >= 3.7, order, 3.7, detail.str()};
        out.push_back(c);
    }
}

}  // namespace

std::vector<FrameDiscrepancy> boundary_frame_discrepancies(const std::vector<Scenario>& catalog) {
    std::vector<FrameDiscrepancy> rows;
    for (const auto& c : unique_curves(catalog)) {
        const auto* rect = std::get_if<RectangularPulse>(&c.pulse.shape());
        if (!rect || c.pulse.is_noisy()) continue;
        const SimulationConfig cfg = cross_config(c);
        const Trajectory ode = simulate_ode(cfg, c.kernel, c.pulse);
        const Trajectory seg = analytic_trajectory(cfg, c.kernel, c.pulse, BoundaryFrame::segment);
        const Trajectory printed = analytic_trajectory(cfg, c.kernel, c.pulse, BoundaryFrame::as_printed);
        FrameDiscrepancy row{c.scenario, c.curve, c.kernel.gamma0, *rect, sup_distance(ode, seg), sup_distance(ode, printed),
                             {}, {}, {}};
        const double t5 = std::min(5.0, cfg.t_max);
        const std::size_t i5 = static_cast<std::size_t>(std::llround(t5 / cfg.dt));
        row.ode_at_5 = ode.values()[i5];
        row.segment_at_5 = seg.values()[i5];
        row.as_printed_at_5 = printed.values()[i5];
        rows.push_back(row);
    }
    return rows;
}

std::string to_json(const std::vector<FrameDiscrepancy>& rows) {
    auto cx = [](complex v) { return json::array({v.real(), v.imag()}); };
    json list = json::array();
    for (const auto& r : rows) {
        list.push_back({{"scenario", r.scenario},
                        {"curve", r.curve},
                        {"gamma0", r.gamma0},
                        {"omega1", r.pulse.omega1},
                        {"T", r.pulse.period},
                        {"Delta", r.pulse.width},
                        {"sup_segment_frame_vs_ode", r.sup_segment},
                        {"sup_as_printed_frame_vs_ode", r.sup_as_printed},
                        {"ode_at_t5", cx(r.ode_at_5)},
                        {"segment_frame_at_t5", cx(r.segment_at_5)},
                        {"as_printed_frame_at_t5", cx(r.as_printed_at_5)}});
    }
    json doc = {{"question",
                 "derivative matching at a segment boundary: rotate the previous slope by exp(i (c_cur - c_prev) t_n) "
                 "(as printed) or not (segment frame)"},
                {"dt", 1e-3},
                {"rows", list}};
    return doc.dump(2) + "\n";
}

ValidationSummary run_validation(const ValidationOptions& opts) {
    for (const auto& g : opts.only) {
        if (std::find_if(std::begin(validation_groups), std::end(validation_groups),
                         [&](const char* known) { return g == known; }) == std::end(validation_groups)) {
            std::string msg = "unknown group '" + g + "'; valid groups:";
            for (const char* known : validation_groups) msg += std::string(" ") + known;
            throw ValidationError("only", msg);
        }
    }
    auto enabled = [&](std::string_view g) {
        return opts.only.empty() || std::find(opts.only.begin(), opts.only.end(), g) != opts.only.end();
    };

    const std::vector<Scenario> catalog = opts.catalog.value_or(builtin_catalog());
    const std::vector<CatalogCurve> curves = unique_curves(catalog);
    ValidationSummary summary;
    auto& out = summary.checks;

    if (enabled("roots")) roots_group(curves, out);
    if (enabled("no-control")) no_control_group(out);
    if (enabled("markov")) markov_group(out);
    if (enabled("ode-vs-analytic")) analytic_group(curves, out);
    if (enabled("ode-vs-quadrature")) quadrature_group(curves, opts.inject_kernel_sign, out);
    if (enabled("properties")) properties_group(out);
    if (enabled("boundary-frame")) {
        const auto rows = boundary_frame_discrepancies(catalog);
        double worst = 0.0;
        for (const auto& r : rows) worst = std::max(worst, r.sup_as_printed);
        Check c{"boundary-frame", "boundary-frame:as-printed discrepancy", true, worst, 0.0,
                "informational: largest sup distance of the as-printed frame from the ODE"};
        if (opts.artifact_dir) {
            std::filesystem::create_directories(*opts.artifact_dir);
            const auto path = *opts.artifact_dir / "boundary_frame_discrepancy.json";
            std::ofstream file(path);
            file << to_json(rows);
            if (!file) throw std::runtime_error("cannot write " + path.string());
            summary.artifacts.push_back(path.string());
        }
        out.push_back(c);
    }
    return summary;
}

std::string to_json(const ValidationSummary& summary) {
    json checks = json::array();
    for (const auto& c : summary.checks) {
        checks.push_back({{"group", c.group},
                          {"name", c.name},
                          {"passed", c.passed},
                          {"observed", c.observed},
                          {"limit", c.limit},
                          {"detail", c.detail}});
    }
    const Check* first = summary.first_failure();
    json doc = {{"passed", summary.passed()},
                {"first_failure", first ? json(first->name) : json(nullptr)},
                {"checks", checks},
                {"artifacts", summary.artifacts}};
    return doc.dump(2) + "\n";
}

}  // namespace leosim
