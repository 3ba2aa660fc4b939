// solver.hpp: numerical integration of the memory-kernel amplitude equation
//
//   d alpha/dt = - int_0^t G(t - t') exp(i Phi(t) - i Phi(t')) alpha(t') dt'
//
// For the exponential kernel the memory integral z(t) obeys a local ODE, so
//
//   d alpha/dt = -z,   dz/dt = (Gamma gamma0 / 2) alpha + (i omega_a(t) - gamma0) z,
//
// with z(0) = 0 and omega_a(t) = omega0 + C(t). simulate_ode integrates this
// pair with classical RK4; simulate_quadrature discretizes the convolution
// directly and serves as an independent check.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "leosim/model.hpp"

namespace leosim {

// Free-form notes emitted by solvers (stiffness warnings, routing decisions).
struct Diagnostics {
    std::vector<std::string> notes;
    void note(std::string msg) { notes.push_back(std::move(msg)); }
};

// gamma0 at or above this routes simulate_ode to the Markovian closed form.
inline constexpr double markov_gamma0_threshold = 1e3;

struct OdeState {
    complex alpha;
    complex z;  // running value of the memory integral
};

// alpha0 * exp(-Gamma t / 2). Control independent.
complex markovian_limit(complex alpha0, double big_gamma, double t);

// Markovian closed form sampled on the configuration grid.
Trajectory markovian_trajectory(const SimulationConfig& cfg, double big_gamma);

Trajectory simulate_ode(const SimulationConfig& cfg, const BathKernel& k, const PulseProgram& p,
                        Diagnostics* diag = nullptr);

// Full (alpha, z) history of the RK4 run on the grid. simulate_ode is the
// alpha projection of this.
std::vector<OdeState> integrate_ode_states(const SimulationConfig& cfg, const BathKernel& k, const PulseProgram& p,
                                           Diagnostics* diag = nullptr);

struct QuadratureOptions {
    // Combine trapezoid runs on h and h/2 as (4 Q_{h/2} - Q_h) / 3, which
    // removes the O(h^2) error term. The result is still reported on the
    // h grid.
    bool richardson{true};
    // Upper bound on kernel products: N^2, or 5 N^2 with extrapolation.
    double max_work{1.2e10};
};

Trajectory simulate_quadrature(const SimulationConfig& cfg, const BathKernel& k, const PulseProgram& p,
                               const QuadratureOptions& opts = {});

// Dispatch on cfg.method. The analytic route falls back to simulate_ode on
// degenerate roots (noted in diag).
Trajectory simulate(const SimulationConfig& cfg, const BathKernel& k, const PulseProgram& p,
                    Diagnostics* diag = nullptr);

namespace detail {

// RK4 run with the kernel strength multiplied by `kernel_sign`. Used only to
// check that the validation suite detects a corrupted solver.
Trajectory simulate_ode_signed(const SimulationConfig& cfg, const BathKernel& k, const PulseProgram& p,
                               double kernel_sign);

}  // namespace detail

}  // namespace leosim
