#include <cmath>
#include <numbers>

#include "catch_amalgamated.hpp"
#include "leosim/analytic.hpp"
#include "leosim/solver.hpp"

using namespace leosim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Values from an independent adaptive integrator (8th-order Dormand-Prince,
// rtol 1e-13) applied to the (alpha, z) system.
struct Frozen {
    double gamma0;
    bool rect;
    double t;
    complex value;
};

const Frozen frozen[] = {
    {1.0, false, 2.0, {-1.0614433832445207, -1.8747034640899911}},
    {0.1, false, 10.0, {-1.423632171861209, -3.4745187782195073}},
    {1.0, true, 1.0, {4.368176822199604, -1.4766562263894865}},
    {1.0, true, 5.0, {-0.6723199781087708, -3.68400841842209}},
};

double sup_abs_diff(const Trajectory& a, const Trajectory& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.values()[i] - b.values()[i]));
    return d;
}

}  // namespace

TEST_CASE("ODE reduction matches frozen reference values", "[solver]") {
    for (const auto& f : frozen) {
        SimulationConfig cfg;
        cfg.t_max = f.t;
        const auto p = f.rect ? PulseProgram::rectangular(8.0, 0.05, 0.035) : PulseProgram::none();
        const complex got = simulate_ode(cfg, BathKernel(f.gamma0, 5.0), p).values().back();
        INFO("gamma0=" << f.gamma0 << " rect=" << f.rect << " t=" << f.t);
        CHECK(std::abs(got - f.value) < 1e-8);
    }
}

TEST_CASE("quadrature matches frozen reference values", "[solver]") {
    for (const auto& f : frozen) {
        SimulationConfig cfg;
        cfg.t_max = f.t;
        const auto p = f.rect ? PulseProgram::rectangular(8.0, 0.05, 0.035) : PulseProgram::none();
        const complex got = simulate_quadrature(cfg, BathKernel(f.gamma0, 5.0), p).values().back();
        CHECK(std::abs(got - f.value) < 1e-7);
    }
}

TEST_CASE("initial data is exact", "[solver]") {
    SimulationConfig cfg;
    cfg.alpha0 = complex{3.0, -1.25};
    cfg.t_max = 1.0;
    const auto p = PulseProgram::rectangular(8.0, 0.05, 0.035);
    const auto states = integrate_ode_states(cfg, BathKernel(1.0, 5.0), p);
    CHECK(states.front().alpha == cfg.alpha0);
    CHECK(states.front().z == complex{0.0, 0.0});
    CHECK(simulate_quadrature(cfg, BathKernel(1.0, 5.0), p).values().front() == cfg.alpha0);
    CHECK(markovian_trajectory(cfg, 5.0).values().front() == cfg.alpha0);
    // alpha' = -z, so the first step moves alpha by O(h^2) only
    CHECK(std::abs(states[1].alpha - cfg.alpha0) < 1e-5);
}

TEST_CASE("no coupling conserves the amplitude", "[solver]") {
    SimulationConfig cfg;
    const BathKernel free(1.0, 0.0);
    const PulseProgram programs[] = {PulseProgram::none(), PulseProgram::rectangular(8.0, 0.05, 0.035),
                                     PulseProgram::sine(20.0, 0.05, 0.025), PulseProgram::zero_energy(25.0, 0.5),
                                     PulseProgram::rectangular(8.0, 0.05, 0.035).with_noise({2.0, 0.0, 1.0, 3})};
    for (const auto& p : programs) {
        for (double m : simulate_ode(cfg, free, p).magnitude()) REQUIRE_THAT(m, WithinAbs(5.0, 1e-10));
    }
}

TEST_CASE("Markov limit", "[solver]") {
    SimulationConfig cfg;
    const Trajectory m = markovian_trajectory(cfg, 5.0);
    CHECK_THAT(m.final_magnitude(), WithinRel(5.0 * std::exp(-25.0), 1e-12));
    CHECK(markovian_limit(complex{5, 0}, 5.0, 0.0) == complex{5, 0});

    Diagnostics diag;
    const Trajectory ode = simulate_ode(cfg, BathKernel(500.0, 5.0), PulseProgram::none(), &diag);
    CHECK(sup_abs_diff(ode, m) <= 0.01 * 5.0);
    REQUIRE(diag.notes.size() == 1);
    CHECK(diag.notes[0].find("gamma0*dt") != std::string::npos);

    // At and above the routing threshold the closed form is used, pulses or not.
    Diagnostics routed;
    const Trajectory big = simulate_ode(cfg, BathKernel(2e3, 5.0), PulseProgram::rectangular(8.0, 0.05, 0.035), &routed);
    CHECK(sup_abs_diff(big, m) == 0.0);
    CHECK(routed.notes.size() == 1);
}

TEST_CASE("RK4 converges at fourth order", "[solver]") {
    // sine pulse: the right-hand side is smooth inside every step
    const auto p = PulseProgram::sine(7.5 * std::numbers::pi, 0.6, 0.3);
    const BathKernel k(1.0, 5.0);
    auto final_at = [&](double dt) {
        SimulationConfig cfg;
        cfg.dt = dt;
        return simulate_ode(cfg, k, p).values().back();
    };
    const complex ref = final_at(0.00125);
    const double e1 = std::abs(final_at(0.01) - ref);
    const double e2 = std::abs(final_at(0.005) - ref);
    CHECK_THAT(std::log2(e1 / e2), WithinAbs(4.0, 0.3));

    // Rectangular pulses with edges on the grid also keep fourth order.
    const auto r = PulseProgram::rectangular(8.0, 0.5, 0.25);
    auto rect_at = [&](double dt) {
        SimulationConfig cfg;
        cfg.dt = dt;
        return simulate_ode(cfg, k, r).values().back();
    };
    const complex rref = rect_at(0.00125);
    CHECK_THAT(std::log2(std::abs(rect_at(0.025) - rref) / std::abs(rect_at(0.0125) - rref)), WithinAbs(4.0, 0.3));
}

TEST_CASE("quadrature: plain trapezoid is second order, extrapolation removes it", "[solver]") {
    const auto p = PulseProgram::rectangular(8.0, 0.5, 0.25);
    const BathKernel k(1.0, 5.0);
    SimulationConfig fine;
    fine.dt = 1e-3;
    fine.t_max = 2.0;
    const complex ref = simulate_ode(fine, k, p).values().back();
    auto run = [&](double dt, bool richardson) {
        SimulationConfig cfg = fine;
        cfg.dt = dt;
        return simulate_quadrature(cfg, k, p, QuadratureOptions{richardson, 1e12}).values().back();
    };
    const double e1 = std::abs(run(0.025, false) - ref);
    const double e2 = std::abs(run(0.0125, false) - ref);
    CHECK_THAT(std::log2(e1 / e2), WithinAbs(2.0, 0.2));
    CHECK(std::abs(run(0.0125, true) - ref) < e2 / 20.0);
}

TEST_CASE("quadrature work budget", "[solver]") {
    SimulationConfig cfg;
    cfg.dt = 1e-4;
    CHECK_THROWS_AS(simulate_quadrature(cfg, BathKernel(1.0, 5.0), PulseProgram::none(), QuadratureOptions{true, 1e8}),
                    SolverError);
}

TEST_CASE("ODE and quadrature agree under noise", "[solver]") {
    SimulationConfig cfg;
    cfg.t_max = 3.0;
    const auto p = PulseProgram::rectangular(15.0, 0.05, 0.025).with_noise(NoiseSpec{2.0, 0.0, 1.0, 11});
    const BathKernel k(1.0, 5.0);
    CHECK(sup_abs_diff(simulate_ode(cfg, k, p), simulate_quadrature(cfg, k, p)) < 1e-4 * 5.0);
}

TEST_CASE("noise identities", "[solver]") {
    SimulationConfig cfg;
    const BathKernel k(1.0, 5.0);
    const auto p = PulseProgram::rectangular(15.0, 0.05, 0.025);
    const Trajectory clean = simulate_ode(cfg, k, p);
    CHECK(sup_abs_diff(clean, simulate_ode(cfg, k, p.with_noise(NoiseSpec{0.0, 0.0, 1.0, 9}))) == 0.0);

    const auto noisy = p.with_noise(NoiseSpec{1.0, 0.0, 1.0, 9});
    CHECK(sup_abs_diff(simulate_ode(cfg, k, noisy), simulate_ode(cfg, k, noisy)) == 0.0);
    CHECK(sup_abs_diff(simulate_ode(cfg, k, noisy), clean) > 0.0);
}

TEST_CASE("dispatch", "[solver]") {
    SimulationConfig cfg;
    cfg.t_max = 2.0;
    const BathKernel k(1.0, 5.0);
    const auto p = PulseProgram::rectangular(8.0, 0.05, 0.035);
    cfg.method = Method::analytic;
    const Trajectory a = simulate(cfg, k, p);
    cfg.method = Method::quadrature;
    const Trajectory q = simulate(cfg, k, p);
    cfg.method = Method::ode;
    const Trajectory o = simulate(cfg, k, p);
    CHECK(sup_abs_diff(a, o) < 1e-9);
    CHECK(sup_abs_diff(q, o) < 1e-7);

    cfg.method = Method::analytic;
    CHECK_THROWS_AS(simulate(cfg, k, PulseProgram::sine(10.0, 0.05, 0.025)), ValidationError);

    // gamma0 = 2 Gamma with c = 0 gives a double root: analytic falls back to the ODE
    SimulationConfig degenerate;
    degenerate.omega0 = 0.0;
    degenerate.t_max = 1.0;
    degenerate.method = Method::analytic;
    Diagnostics diag;
    const Trajectory fb = simulate(degenerate, BathKernel(10.0, 5.0), PulseProgram::none(), &diag);
    CHECK(fb.size() == 1001);
    CHECK(!diag.notes.empty());
}

TEST_CASE("kernel-sign mutation is visible", "[solver]") {
    SimulationConfig cfg;
    cfg.t_max = 2.0;
    const BathKernel k(1.0, 5.0);
    const auto p = PulseProgram::none();
    CHECK(sup_abs_diff(detail::simulate_ode_signed(cfg, k, p, 1.0), simulate_ode(cfg, k, p)) == 0.0);
    CHECK(sup_abs_diff(detail::simulate_ode_signed(cfg, k, p, -1.0), simulate_quadrature(cfg, k, p)) > 1.0);
}
