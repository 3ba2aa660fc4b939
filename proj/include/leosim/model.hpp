// model.hpp: bath kernel, pulse programs and the shared simulation vocabulary
//
// All quantities are dimensionless: frequencies in units of the bare
// oscillator frequency omega0, times in units of 1/omega0.

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace leosim {

using complex = std::complex<double>;

// Invalid input. `field()` names the offending parameter so front ends can
// point at the flag that caused it.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Numerical failure inside a solver (ill-conditioned systems, budgets, ...).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ----------------------------------------------------------------------------
// Ornstein-Uhlenbeck bath: G(tau) = (Gamma * gamma0 / 2) * exp(-gamma0 |tau|)
// ----------------------------------------------------------------------------

struct BathKernel {
    double gamma0{1.0};     // inverse memory time
    double big_gamma{0.0};  // system-bath coupling strength

    BathKernel() = default;
    BathKernel(double gamma0_, double big_gamma_);

    // G(0) = Gamma * gamma0 / 2
    double strength() const noexcept { return 0.5 * big_gamma * gamma0; }
};

// G(tau) for tau >= 0. Throws ValidationError for negative tau.
double kernel_eval(const BathKernel& k, double tau);

// ----------------------------------------------------------------------------
// Pulse programs
// ----------------------------------------------------------------------------

// Multiplicative Gaussian amplitude noise: C(t) -> C(t) * (1 + W n(t)),
// n ~ Normal(mu, sigma). One draw per integration step.
struct NoiseSpec {
    double strength{0.0};  // W
    double mu{0.0};
    double sigma{1.0};
    std::uint64_t seed{0};
};

struct NoPulse {};

// C(t) = omega1 on (nT, nT + width], 0 otherwise.
struct RectangularPulse {
    double omega1{0.0};
    double period{1.0};
    double width{0.5};
};

// C(t) = omega2 sin(2 pi t / T) on (nT, nT + width], 0 otherwise.
struct SinePulse {
    double omega2{0.0};
    double period{1.0};
    double width{0.5};
};

// C(t) = +omega3 on (nT3, (n + 1/2) T3], -omega3 on ((n + 1/2) T3, (n + 1) T3].
struct ZeroEnergyPulse {
    double omega3{0.0};
    double period{1.0};
};

using PulseShape = std::variant<NoPulse, RectangularPulse, SinePulse, ZeroEnergyPulse>;

class PulseProgram {
public:
    PulseProgram() = default;

    static PulseProgram none();
    static PulseProgram rectangular(double omega1, double period, double width);
    static PulseProgram sine(double omega2, double period, double width);
    static PulseProgram zero_energy(double omega3, double period);

    // Copy of this program with noise attached. NoPulse admits no noise.
    PulseProgram with_noise(const NoiseSpec& noise) const;
    PulseProgram without_noise() const;

    const PulseShape& shape() const noexcept { return shape_; }
    const std::optional<NoiseSpec>& noise() const noexcept { return noise_; }

    bool is_active() const noexcept { return !std::holds_alternative<NoPulse>(shape_); }
    bool is_noisy() const noexcept { return noise_.has_value(); }

    // Period of the noiseless waveform, 0 for NoPulse.
    double period() const noexcept;
    // Shortest constant-formula interval: the pulse width, or T3/2 for the
    // zero-energy square wave. 0 for NoPulse.
    double min_interval() const noexcept;

    // Every time in (0, t_max) at which C(t) changes formula.
    std::vector<double> breakpoints(double t_max) const;

    // Short tag ("none", "rectangular", "sine", "zero_energy").
    std::string_view kind() const noexcept;

private:
    explicit PulseProgram(PulseShape shape) : shape_(shape) {}

    PulseShape shape_{NoPulse{}};
    std::optional<NoiseSpec> noise_;
};

// Noiseless C(t) with the half-open window convention; C(0) = 0.
double pulse_value(const PulseProgram& p, double t);

// C(t) * (1 + W n) for a given noise sample n. Equals pulse_value when the
// program carries no noise.
double pulse_value(const PulseProgram& p, double t, double noise_sample);

// C evaluated at `t` with the window membership decided at `probe`. Solvers
// use the midpoint of a step as probe so that stage evaluations at the step
// edges see the same smooth branch.
double pulse_value_on_branch(const PulseProgram& p, double t, double probe);

// Exact integral of the noiseless C(t) over [t0, t1]. Rejects noisy programs.
double pulse_integral(const PulseProgram& p, double t0, double t1);

// Phi(t) = omega0 t + integral of C over [0, t].
double phase_integral(double omega0, const PulseProgram& p, double t);

// Deterministic sample stream for a NoiseSpec.
class NoiseStream {
public:
    explicit NoiseStream(const NoiseSpec& spec);
    double next();
    std::vector<double> take(std::size_t n);

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

// Per-step amplitude factors (1 + W n_k) for `steps` integration steps;
// all ones for a noiseless program.
std::vector<double> noise_factors(const PulseProgram& p, std::size_t steps);

// ----------------------------------------------------------------------------
// Simulation configuration and trajectories
// ----------------------------------------------------------------------------

enum class Method { ode, quadrature, analytic };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view name);

struct SimulationConfig {
    complex alpha0{5.0, 0.0};
    double omega0{1.0};
    double t_max{10.0};
    double dt{1e-3};
    Method method{Method::ode};
};

// Step size that resolves the program: min(T/50, 1e-3, min_interval/10)
// for active pulses, 1e-3 otherwise.
double default_dt(const PulseProgram& p);

// Uniform grid t_k = t_max * k / N.
struct TimeGrid {
    std::size_t steps{0};
    double t_max{0.0};

    double step() const noexcept { return t_max / static_cast<double>(steps); }
    double at(std::size_t k) const noexcept {
        return k == steps ? t_max : t_max * static_cast<double>(k) / static_cast<double>(steps);
    }
};

// Validates cfg against the program (positivity, integral step count,
// pulse resolution dt <= width/10, breakpoints on grid points) and returns
// the grid. Throws ValidationError naming the field.
TimeGrid make_grid(const SimulationConfig& cfg, const PulseProgram& p);

class Trajectory {
public:
    Trajectory() = default;
    Trajectory(std::vector<double> times, std::vector<complex> values);

    const std::vector<double>& times() const& noexcept { return times_; }
    const std::vector<complex>& values() const& noexcept { return values_; }
    const std::vector<double>& magnitude() const& noexcept { return magnitude_; }
    // By value on temporaries, so `for (x : simulate(...).magnitude())` is safe.
    std::vector<double> times() && { return std::move(times_); }
    std::vector<complex> values() && { return std::move(values_); }
    std::vector<double> magnitude() && { return std::move(magnitude_); }

    std::size_t size() const noexcept { return times_.size(); }
    bool empty() const noexcept { return times_.empty(); }

    double final_magnitude() const;
    double min_magnitude() const;

private:
    std::vector<double> times_;
    std::vector<complex> values_;
    std::vector<double> magnitude_;
};

}  // namespace leosim
