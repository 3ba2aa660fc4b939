// Acceptance run: one PASS/FAIL line per primary criterion. Criteria 1, 2
// and 4-7 are recomputed here from the solver primitives instead of reading
// the catalog's own assertions back. Usage: acceptance [artifact-dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "leosim/analytic.hpp"
#include "leosim/experiments.hpp"
#include "leosim/solver.hpp"
#include "leosim/validation.hpp"

using namespace leosim;

namespace {

constexpr double amp0 = 5.0;
constexpr double big_gamma = 5.0;

struct Outcome {
    bool passed;
    std::string detail;
};

Trajectory ode(double gamma0, const PulseProgram& p, double dt = 0.0) {
    SimulationConfig cfg;
    cfg.dt = dt > 0.0 ? dt : default_dt(p);
    return simulate_ode(cfg, BathKernel(gamma0, big_gamma), p);
}

PulseProgram rect(double omega1, double T, double ratio) { return PulseProgram::rectangular(omega1, T, ratio * T); }

bool strictly_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) return false;
    }
    return true;
}

std::string list(const std::vector<double>& v) {
    std::ostringstream out;
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
    return out.str();
}

Outcome criterion1() {
    double worst_rel = 0.0, worst_time = 0.0;
    for (double g : {0.1, 1.0, 5.0}) {
        const auto start = std::chrono::steady_clock::now();
        const Trajectory t = ode(g, PulseProgram::none());
        worst_time = std::max(worst_time, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        const BathKernel k(g, big_gamma);
        for (std::size_t i = 0; i < t.size(); ++i) {
            const complex exact = analytic_no_control(complex{amp0, 0}, 1.0, k, t.times()[i]);
            worst_rel = std::max(worst_rel, std::abs(t.values()[i] - exact) / std::abs(exact));
        }
    }
    std::ostringstream d;
    d << "sup relative error " << worst_rel << " (< 1e-6), slowest curve " << worst_time << " s (< 1 s)";
    return {worst_rel < 1e-6 && worst_time < 1.0, d.str()};
}

Outcome criterion2() {
    SimulationConfig cfg;
    const Trajectory t = simulate_ode(cfg, BathKernel(500.0, big_gamma), PulseProgram::none());
    const Trajectory m = markovian_trajectory(cfg, big_gamma);
    const double rel = sup_distance(t, m) / amp0;
    std::ostringstream d;
    d << "gamma0=500: sup |alpha - alpha0 e^{-Gamma t/2}| / |alpha0| = " << rel << " (< 0.01)";
    return {rel < 0.01, d.str()};
}

Outcome criterion3(const std::filesystem::path& artifacts) {
    ValidationOptions opts;
    opts.only = {"ode-vs-analytic", "ode-vs-quadrature", "boundary-frame"};
    opts.artifact_dir = artifacts;
    const ValidationSummary s = run_validation(opts);
    double worst_q = 0.0, worst_a = 0.0, printed = 0.0;
    std::size_t nq = 0, na = 0;
    for (const auto& c : s.checks) {
        if (c.group == "ode-vs-quadrature") worst_q = std::max(worst_q, c.observed), ++nq;
        if (c.group == "ode-vs-analytic") worst_a = std::max(worst_a, c.observed), ++na;
        if (c.group == "boundary-frame") printed = c.observed;
    }
    const bool artifact = !s.artifacts.empty() && std::filesystem::exists(s.artifacts.front());
    std::ostringstream d;
    d << "ODE vs quadrature on " << nq << " curves: " << worst_q << "; ODE vs closed form on " << na
      << " rectangular/no-control curves: " << worst_a << " (limit 5e-4); as-printed boundary frame off by up to "
      << printed << ", recorded in " << (artifact ? s.artifacts.front() : std::string("<missing>"));
    return {s.passed() && artifact, d.str()};
}

Outcome criterion4() {
    std::vector<double> finals;
    bool dominates = true;
    double floor = 0.0;
    for (double g : {0.1, 1.0, 5.0}) {
        const Trajectory c = ode(g, rect(8.0, 0.05, 0.7));
        const Trajectory free = ode(g, PulseProgram::none());
        if (g == 0.1) floor = c.min_magnitude();
        finals.push_back(c.final_magnitude());
        dominates = dominates && c.final_magnitude() > free.final_magnitude();
    }
    const bool decreasing = finals[0] > finals[1] && finals[1] > finals[2];
    std::ostringstream d;
    d << "min |alpha| at gamma0=0.1 = " << floor << " (>= 4.75); final |alpha| over gamma0 {0.1, 1, 5} = " << list(finals)
      << (decreasing ? " decreasing" : " NOT decreasing") << "; controlled beats uncontrolled: " << (dominates ? "yes" : "no");
    return {floor >= 0.95 * amp0 && decreasing && dominates, d.str()};
}

Outcome criterion5() {
    std::vector<double> by_omega;
    double floor50 = 0.0;
    for (double w : {8.0, 15.0, 50.0}) {
        const Trajectory t = ode(1.0, rect(w, 0.05, 0.7));
        by_omega.push_back(t.final_magnitude());
        if (w == 50.0) floor50 = t.min_magnitude();
    }
    std::vector<double> by_ratio;
    for (double r : {0.3, 0.5, 0.7, 0.9}) by_ratio.push_back(ode(1.0, rect(15.0, 0.05, r)).final_magnitude());

    // the T = 0.01 curve sets the common grid
    const double dt = default_dt(rect(15.0, 0.01, 0.7));
    std::vector<Trajectory> by_period;
    for (double T : {0.01, 0.05, 0.1}) by_period.push_back(ode(1.0, rect(15.0, T, 0.7), dt));
    double spread = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i + 1; j < 3; ++j) spread = std::max(spread, sup_distance(by_period[i], by_period[j]));
    }
    std::ostringstream d;
    d << "final |alpha| over omega1 {8, 15, 50} = " << list(by_omega) << "; min at omega1=50 = " << floor50
      << " (>= 4.75); over Delta/T {0.3, 0.5, 0.7, 0.9} = " << list(by_ratio) << "; T {0.01, 0.05, 0.1} spread "
      << spread << " (<= 0.25)";
    return {strictly_increasing(by_omega) && floor50 >= 0.95 * amp0 && strictly_increasing(by_ratio) &&
                spread <= 0.05 * amp0,
            d.str()};
}

Outcome criterion6() {
    const double w1 = 15.0, w2 = std::numbers::pi * w1 / 2.0;
    auto gap = [&](double T) {
        return sup_distance(ode(1.0, rect(w1, T, 0.5)), ode(1.0, PulseProgram::sine(w2, T, 0.5 * T)));
    };
    const double fast = gap(0.05), slow = gap(0.6);

    bool ordered = true;
    std::ostringstream noise;
    for (double W : {0.5, 1.0, 2.0}) {
        auto shift = [&](double T) {
            const PulseProgram clean = rect(w1, T, 0.5);
            return sup_distance(ode(1.0, clean), ode(1.0, clean.with_noise(NoiseSpec{W, 0.0, 1.0, 20190611})));
        };
        const double a = shift(0.05), b = shift(0.4);
        ordered = ordered && a < b;
        noise << " W=" << W << ": " << a << " < " << b << ";";
    }
    std::ostringstream d;
    d << "rect vs sine gap " << fast << " at T=0.05, " << slow << " at T=0.6 (ratio " << fast / slow
      << " <= 0.1); noise shift T=0.05 vs T=0.4:" << noise.str();
    return {fast <= 0.1 * slow && ordered, d.str()};
}

Outcome criterion7() {
    const Trajectory slow = ode(0.1, PulseProgram::zero_energy(25.0, 0.5));
    double dev = 0.0;
    for (double m : slow.magnitude()) dev = std::max(dev, std::abs(m - amp0));
    std::vector<double> finals;
    for (double w : {25.0, 100.0, 250.0}) finals.push_back(ode(5.0, PulseProgram::zero_energy(w, 0.5)).final_magnitude());
    const double off = std::abs(finals.back() - amp0);
    std::ostringstream d;
    d << "gamma0=0.1 max | |alpha| - 5 | = " << dev << " (<= 0.25); gamma0=5 final over omega3 {25, 100, 250} = "
      << list(finals) << "; omega3=250 off by " << off << " (<= 0.25)";
    return {dev <= 0.05 * amp0 && strictly_increasing(finals) && off <= 0.05 * amp0, d.str()};
}

Outcome criterion8() {
    ValidationOptions opts;
    opts.only = {"roots", "properties"};
    const ValidationSummary s = run_validation(opts);
    std::ostringstream d;
    for (const auto& c : s.checks) d << (c.passed ? "" : "FAILED ") << c.name.substr(c.name.find(':') + 1) << " " << c.observed << "; ";
    return {s.passed(), d.str()};
}

}  // namespace

int main(int argc, char** argv) {
    const std::filesystem::path artifacts = argc > 1 ? argv[1] : "acceptance-artifacts";
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 no-control closed form vs ODE", criterion1},
        {"2 Markov limit", criterion2},
        {"3 three-way method agreement", [&] { return criterion3(artifacts); }},
        {"4 rectangular control vs memory time", criterion4},
        {"5 amplitude, duty ratio and period", criterion5},
        {"6 pulse shape and noise vs period", criterion6},
        {"7 zero-energy control", criterion7},
        {"8 property suite", criterion8},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s criterion %s: %s\n", o.passed ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        failures += o.passed ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
