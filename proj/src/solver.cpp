#include "leosim/solver.hpp"

#include <cmath>
#include <sstream>

#include "leosim/analytic.hpp"

namespace leosim {

namespace {

std::vector<double> grid_times(const TimeGrid& grid) {
    std::vector<double> t(grid.steps + 1);
    for (std::size_t i = 0; i <= grid.steps; ++i) t[i] = grid.at(i);
    return t;
}

std::vector<OdeState> run_rk4(const SimulationConfig& cfg, const BathKernel& k, const PulseProgram& p,
                              double kernel_sign, Diagnostics* diag) {
    const TimeGrid grid = make_grid(cfg, p);
    const double h = grid.step();
    if (diag && k.gamma0 * h > 0.1) {
        std::ostringstream msg;
        msg << "gamma0*dt = " << k.gamma0 * h << " > 0.1: memory kernel is barely resolved";
        diag->note(msg.str());
    }

    const double kappa = kernel_sign * k.strength();
    const double gamma0 = k.gamma0;
    const std::vector<double> factors = noise_factors(p, grid.steps);

    std::vector<OdeState> out;
    out.reserve(grid.steps + 1);
    OdeState s{cfg.alpha0, complex{0.0, 0.0}};
    out.push_back(s);

    const complex i{0.0, 1.0};
    auto rhs = [&](const OdeState& y, double omega) {
        return OdeState{-y.z, kappa * y.alpha + (i * omega - gamma0) * y.z};
    };
    auto axpy = [](const OdeState& y, double a, const OdeState& d) {
        return OdeState{y.alpha + a * d.alpha, y.z + a * d.z};
    };

    for (std::size_t n = 0; n < grid.steps; ++n) {
        const double t = grid.at(n);
        const double t1 = grid.at(n + 1);
        const double mid = 0.5 * (t + t1);
        const double f = factors[n];
        const double w0 = cfg.omega0 + f * pulse_value_on_branch(p, t, mid);
        const double wm = cfg.omega0 + f * pulse_value_on_branch(p, mid, mid);
        const double w1 = cfg.omega0 + f * pulse_value_on_branch(p, t1, mid);

        const OdeState k1 = rhs(s, w0);
        const OdeState k2 = rhs(axpy(s, 0.5 * h, k1), wm);
        const OdeState k3 = rhs(axpy(s, 0.5 * h, k2), wm);
        const OdeState k4 = rhs(axpy(s, h, k3), w1);
        s.alpha += (h / 6.0) * (k1.alpha + 2.0 * k2.alpha + 2.0 * k3.alpha + k4.alpha);
        s.z += (h / 6.0) * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z);
        out.push_back(s);
    }
    return out;
}

Trajectory alpha_projection(const TimeGrid& grid, const std::vector<OdeState>& states) {
    std::vector<complex> values;
    values.reserve(states.size());
    for (const auto& s : states) values.push_back(s.alpha);
    return Trajectory(grid_times(grid), std::move(values));
}

}  // namespace

complex markovian_limit(complex alpha0, double big_gamma, double t) {
    return alpha0 * std::exp(-0.5 * big_gamma * t);
}

Trajectory markovian_trajectory(const SimulationConfig& cfg, double big_gamma) {
    const TimeGrid grid = make_grid(cfg, PulseProgram::none());
    std::vector<double> times = grid_times(grid);
    std::vector<complex> values;
    values.reserve(times.size());
    for (double t : times) values.push_back(markovian_limit(cfg.alpha0, big_gamma, t));
    values.front() = cfg.alpha0;
    return Trajectory(std::move(times), std::move(values));
}

std::vector<OdeState> integrate_ode_states(const SimulationConfig& cfg, const BathKernel& k, const PulseProgram& p,
                                           Diagnostics* diag) {
    return run_rk4(cfg, k, p, 1.0, diag);
}

Trajectory simulate_ode(const SimulationConfig& cfg, const BathKernel& k, const PulseProgram& p, Diagnostics* diag) {
    if (k.gamma0 >= markov_gamma0_threshold) {
        make_grid(cfg, p);
        if (diag) diag->note("gamma0 >= 1e3: using the Markovian closed form instead of integrating");
        return markovian_trajectory(cfg, k.big_gamma);
    }
    const TimeGrid grid = make_grid(cfg, p);
    return alpha_projection(grid, run_rk4(cfg, k, p, 1.0, diag));
}

Trajectory detail::simulate_ode_signed(const SimulationConfig& cfg, const BathKernel& k, const PulseProgram& p,
                                       double kernel_sign) {
    const TimeGrid grid = make_grid(cfg, p);
    return alpha_projection(grid, run_rk4(cfg, k, p, kernel_sign, nullptr));
}

namespace {

// Trapezoidal product rule for the convolution plus trapezoidal stepping:
//
//   I_n = h sum_j w_j G(t_n - t_j) e^{i(Phi_n - Phi_j)} alpha_j,
//   alpha_{n+1} = alpha_n - h/2 (I_n + I_{n+1}),
//
// where I_{n+1} contains alpha_{n+1} through its end weight, solved for
// directly. O(N^2) work. `factors[n]` scales the pulse on step n.
std::vector<complex> trapezoid_run(const SimulationConfig& cfg, const TimeGrid& grid, const BathKernel& k,
                                   const PulseProgram& clean, const std::vector<double>& factors) {
    const std::size_t n_steps = grid.steps;
    const double h = grid.step();

    std::vector<double> phase(n_steps + 1, 0.0);
    for (std::size_t n = 0; n < n_steps; ++n) {
        const double t0 = grid.at(n);
        const double t1 = grid.at(n + 1);
        phase[n + 1] = phase[n] + cfg.omega0 * (t1 - t0) + factors[n] * pulse_integral(clean, t0, t1);
    }

    std::vector<complex> rotor(n_steps + 1);
    for (std::size_t n = 0; n <= n_steps; ++n) rotor[n] = std::polar(1.0, phase[n]);

    std::vector<double> g(n_steps + 1);
    for (std::size_t m = 0; m <= n_steps; ++m) g[m] = kernel_eval(k, static_cast<double>(m) * h);

    std::vector<complex> alpha(n_steps + 1);
    // back[j] = conj(rotor_j) * alpha_j, the history with the frame removed
    std::vector<complex> back(n_steps + 1);
    alpha[0] = cfg.alpha0;
    back[0] = std::conj(rotor[0]) * alpha[0];

    const double self = 0.5 * h * g[0];
    complex memory_prev{0.0, 0.0};  // I_0 = 0
    for (std::size_t n = 0; n < n_steps; ++n) {
        const std::size_t m = n + 1;
        complex acc = 0.5 * g[m] * back[0];
        for (std::size_t j = 1; j < m; ++j) acc += g[m - j] * back[j];
        const complex known = h * rotor[m] * acc;
        // I_m = known + self * alpha_m
        alpha[m] = (alpha[n] - 0.5 * h * (memory_prev + known)) / (1.0 + 0.5 * h * self);
        back[m] = std::conj(rotor[m]) * alpha[m];
        memory_prev = known + self * alpha[m];
    }
    return alpha;
}

}  // namespace

Trajectory simulate_quadrature(const SimulationConfig& cfg, const BathKernel& k, const PulseProgram& p,
                               const QuadratureOptions& opts) {
    const TimeGrid grid = make_grid(cfg, p);
    const double n = static_cast<double>(grid.steps);
    const double work = opts.richardson ? 5.0 * n * n : n * n;
    if (work > opts.max_work) {
        std::ostringstream msg;
        msg << "quadrature needs " << work << " kernel products, budget is " << opts.max_work;
        throw SolverError(msg.str());
    }

    const PulseProgram clean = p.without_noise();
    const std::vector<double> factors = noise_factors(p, grid.steps);
    std::vector<complex> alpha = trapezoid_run(cfg, grid, k, clean, factors);

    if (opts.richardson) {
        // Same problem on the halved grid, noise held per coarse step.
        const TimeGrid fine{2 * grid.steps, grid.t_max};
        std::vector<double> fine_factors(fine.steps);
        for (std::size_t i = 0; i < fine.steps; ++i) fine_factors[i] = factors[i / 2];
        const std::vector<complex> refined = trapezoid_run(cfg, fine, k, clean, fine_factors);
        for (std::size_t i = 1; i < alpha.size(); ++i) alpha[i] = (4.0 * refined[2 * i] - alpha[i]) / 3.0;
    }

    std::vector<double> times(grid.steps + 1);
    for (std::size_t i = 0; i <= grid.steps; ++i) times[i] = grid.at(i);
    return Trajectory(std::move(times), std::move(alpha));
}

Trajectory simulate(const SimulationConfig& cfg, const BathKernel& k, const PulseProgram& p, Diagnostics* diag) {
    switch (cfg.method) {
        case Method::ode: return simulate_ode(cfg, k, p, diag);
        case Method::quadrature: return simulate_quadrature(cfg, k, p);
        case Method::analytic: {
            try {
                return analytic_trajectory(cfg, k, p);
            } catch (const DegenerateRootsError& e) {
                if (diag) diag->note(std::string("analytic route unavailable (") + e.what() + "), using ode");
                return simulate_ode(cfg, k, p, diag);
            }
        }
    }
    throw std::logic_error("unhandled method");
}

}  // namespace leosim
