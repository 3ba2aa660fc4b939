#include "leosim/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace leosim {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void require_finite(const char* field, double v) {
    if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
}

void require_positive(const char* field, double v) {
    require_finite(field, v);
    if (!(v > 0.0)) throw ValidationError(field, "must be > 0");
}

void require_nonnegative(const char* field, double v) {
    require_finite(field, v);
    if (!(v >= 0.0)) throw ValidationError(field, "must be >= 0");
}

void require_width(double width, double period) {
    require_positive("Delta", width);
    if (width > period * (1.0 + 1e-12)) throw ValidationError("Delta", "width must not exceed the period");
}

// Index n and offset s = t - nT in (0, T] of the window containing t > 0.
struct Window {
    double index;
    double offset;
};

Window window_of(double t, double period) {
    double n = std::ceil(t / period) - 1.0;
    double s = t - n * period;
    // ceil can land one period off when t/T rounds across an integer
    if (s <= 0.0) {
        n -= 1.0;
        s += period;
    } else if (s > period) {
        n += 1.0;
        s -= period;
    }
    return {n, s};
}

// Offset in [0, T) used for closed-form integrals, F continuous so the
// boundary ambiguity is harmless there.
Window floor_window(double t, double period) {
    const double n = std::floor(t / period);
    double s = t - n * period;
    if (s < 0.0) s = 0.0;
    return {n, s};
}

// Antiderivative F(t) of the noiseless C on [0, t].
struct Antiderivative {
    double operator()(NoPulse, double) const { return 0.0; }

    double operator()(const RectangularPulse& p, double t) const {
        const auto [n, s] = floor_window(t, p.period);
        return n * p.omega1 * p.width + p.omega1 * std::min(s, p.width);
    }

    double operator()(const SinePulse& p, double t) const {
        const auto [n, s] = floor_window(t, p.period);
        const double scale = p.omega2 * p.period / two_pi;
        const double per_window = scale * (1.0 - std::cos(two_pi * p.width / p.period));
        return n * per_window + scale * (1.0 - std::cos(two_pi * std::min(s, p.width) / p.period));
    }

    double operator()(const ZeroEnergyPulse& p, double t) const {
        const auto [n, s] = floor_window(t, p.period);
        (void)n;
        const double half = 0.5 * p.period;
        return s <= half ? p.omega3 * s : p.omega3 * (p.period - s);
    }
};

}  // namespace

BathKernel::BathKernel(double gamma0_, double big_gamma_) : gamma0(gamma0_), big_gamma(big_gamma_) {
    require_positive("gamma0", gamma0);
    require_nonnegative("Gamma", big_gamma);
}

double kernel_eval(const BathKernel& k, double tau) {
    if (!(tau >= 0.0)) throw ValidationError("tau", "elapsed time must be >= 0");
    return k.strength() * std::exp(-k.gamma0 * tau);
}

// ---------------------------------------------------------------------------
// PulseProgram
// ---------------------------------------------------------------------------

PulseProgram PulseProgram::none() { return PulseProgram{NoPulse{}}; }

PulseProgram PulseProgram::rectangular(double omega1, double period, double width) {
    require_nonnegative("omega1", omega1);
    require_positive("T", period);
    require_width(width, period);
    return PulseProgram{RectangularPulse{omega1, period, width}};
}

PulseProgram PulseProgram::sine(double omega2, double period, double width) {
    require_nonnegative("omega2", omega2);
    require_positive("T", period);
    require_width(width, period);
    return PulseProgram{SinePulse{omega2, period, width}};
}

PulseProgram PulseProgram::zero_energy(double omega3, double period) {
    require_nonnegative("omega3", omega3);
    require_positive("T3", period);
    return PulseProgram{ZeroEnergyPulse{omega3, period}};
}

PulseProgram PulseProgram::with_noise(const NoiseSpec& noise) const {
    if (!is_active()) throw ValidationError("W", "noise requires an active pulse");
    require_nonnegative("W", noise.strength);
    require_finite("mu", noise.mu);
    require_nonnegative("sigma", noise.sigma);
    PulseProgram out = *this;
    out.noise_ = noise;
    return out;
}

PulseProgram PulseProgram::without_noise() const {
    PulseProgram out = *this;
    out.noise_.reset();
    return out;
}

double PulseProgram::period() const noexcept {
    return std::visit(
        [](const auto& s) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, NoPulse>) {
                return 0.0;
            } else {
                return s.period;
            }
        },
        shape_);
}

double PulseProgram::min_interval() const noexcept {
    if (const auto* r = std::get_if<RectangularPulse>(&shape_)) return r->width;
    if (const auto* s = std::get_if<SinePulse>(&shape_)) return s->width;
    if (const auto* z = std::get_if<ZeroEnergyPulse>(&shape_)) return 0.5 * z->period;
    return 0.0;
}

std::vector<double> PulseProgram::breakpoints(double t_max) const {
    std::vector<double> out;
    if (!is_active()) return out;

    const double period = this->period();
    double offset = 0.0;  // secondary edge inside each period
    if (const auto* r = std::get_if<RectangularPulse>(&shape_)) offset = r->width;
    if (const auto* s = std::get_if<SinePulse>(&shape_)) offset = s->width;
    if (std::holds_alternative<ZeroEnergyPulse>(shape_)) offset = 0.5 * period;

    for (double n = 0.0;; n += 1.0) {
        const double start = n * period;
        if (start >= t_max) break;
        if (start > 0.0) out.push_back(start);
        const double edge = start + offset;
        if (edge < t_max) out.push_back(edge);
    }
    std::sort(out.begin(), out.end());
    const double eps = 1e-12 * std::max(1.0, t_max);
    out.erase(std::unique(out.begin(), out.end(), [eps](double a, double b) { return std::abs(a - b) <= eps; }),
              out.end());
    return out;
}

std::string_view PulseProgram::kind() const noexcept {
    switch (shape_.index()) {
        case 1: return "rectangular";
        case 2: return "sine";
        case 3: return "zero_energy";
        default: return "none";
    }
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

double pulse_value_on_branch(const PulseProgram& p, double t, double probe) {
    if (!(probe > 0.0)) return 0.0;
    const PulseShape& shape = p.shape();

    if (const auto* r = std::get_if<RectangularPulse>(&shape)) {
        return window_of(probe, r->period).offset <= r->width ? r->omega1 : 0.0;
    }
    if (const auto* s = std::get_if<SinePulse>(&shape)) {
        const auto w = window_of(probe, s->period);
        if (w.offset > s->width) return 0.0;
        return s->omega2 * std::sin(two_pi * (t - w.index * s->period) / s->period);
    }
    if (const auto* z = std::get_if<ZeroEnergyPulse>(&shape)) {
        return window_of(probe, z->period).offset <= 0.5 * z->period ? z->omega3 : -z->omega3;
    }
    return 0.0;
}

double pulse_value(const PulseProgram& p, double t) {
    if (!(t >= 0.0)) throw ValidationError("t", "time must be >= 0");
    return pulse_value_on_branch(p, t, t);
}

double pulse_value(const PulseProgram& p, double t, double noise_sample) {
    const double clean = pulse_value(p, t);
    if (!p.is_noisy()) return clean;
    return clean * (1.0 + p.noise()->strength * noise_sample);
}

double pulse_integral(const PulseProgram& p, double t0, double t1) {
    if (p.is_noisy()) throw ValidationError("W", "integral of a noisy pulse is path dependent");
    if (!(t0 >= 0.0)) throw ValidationError("t0", "must be >= 0");
    if (!(t1 >= t0)) throw ValidationError("t1", "must be >= t0");
    if (t0 == t1) return 0.0;
    return std::visit([&](const auto& s) { return Antiderivative{}(s, t1) - Antiderivative{}(s, t0); }, p.shape());
}

double phase_integral(double omega0, const PulseProgram& p, double t) {
    return omega0 * t + pulse_integral(p, 0.0, t);
}

// ---------------------------------------------------------------------------
// Noise
// ---------------------------------------------------------------------------

NoiseStream::NoiseStream(const NoiseSpec& spec) : engine_(spec.seed), normal_(spec.mu, spec.sigma) {}

double NoiseStream::next() { return normal_(engine_); }

std::vector<double> NoiseStream::take(std::size_t n) {
    std::vector<double> out(n);
    for (auto& v : out) v = next();
    return out;
}

std::vector<double> noise_factors(const PulseProgram& p, std::size_t steps) {
    std::vector<double> out(steps, 1.0);
    if (!p.is_noisy()) return out;
    const NoiseSpec& spec = *p.noise();
    NoiseStream stream(spec);
    for (auto& f : out) f = 1.0 + spec.strength * stream.next();
    return out;
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::quadrature: return "quadrature";
        case Method::analytic: return "analytic";
        default: return "ode";
    }
}

Method parse_method(std::string_view name) {
    if (name == "ode" || name == "ode-reduction") return Method::ode;
    if (name == "quadrature" || name == "quadrature-oracle") return Method::quadrature;
    if (name == "analytic") return Method::analytic;
    throw ValidationError("method", "unknown method '" + std::string(name) + "'");
}

double default_dt(const PulseProgram& p) {
    if (!p.is_active()) return 1e-3;
    return std::min({p.period() / 50.0, 1e-3, p.min_interval() / 10.0});
}

TimeGrid make_grid(const SimulationConfig& cfg, const PulseProgram& p) {
    require_positive("t_max", cfg.t_max);
    require_positive("dt", cfg.dt);
    require_finite("omega0", cfg.omega0);
    if (!std::isfinite(cfg.alpha0.real()) || !std::isfinite(cfg.alpha0.imag()))
        throw ValidationError("alpha0", "must be finite");

    const double ratio = cfg.t_max / cfg.dt;
    if (ratio > 1e8) throw ValidationError("dt", "more than 1e8 steps requested");
    const double steps = std::round(ratio);
    if (steps < 1.0 || std::abs(ratio - steps) > 1e-6) {
        throw ValidationError("dt", "t_max must be an integer multiple of dt");
    }
    TimeGrid grid{static_cast<std::size_t>(steps), cfg.t_max};

    if (p.is_active()) {
        const double h = grid.step();
        if (h > p.min_interval() / 10.0 * (1.0 + 1e-9)) {
            std::ostringstream msg;
            msg << "step " << h << " does not resolve the pulse (need dt <= " << p.min_interval() / 10.0 << ")";
            throw ValidationError("dt", msg.str());
        }
        for (double edge : p.breakpoints(cfg.t_max)) {
            const double r = edge / h;
            if (std::abs(r - std::round(r)) > 1e-6) {
                std::ostringstream msg;
                msg << "pulse edge at t=" << edge << " does not fall on the step grid";
                throw ValidationError("dt", msg.str());
            }
        }
    }
    return grid;
}

// ---------------------------------------------------------------------------
// Trajectory
// ---------------------------------------------------------------------------

Trajectory::Trajectory(std::vector<double> times, std::vector<complex> values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.size() != values_.size()) throw std::invalid_argument("trajectory: times and values differ in length");
    for (std::size_t i = 1; i < times_.size(); ++i) {
        if (!(times_[i] > times_[i - 1])) throw std::invalid_argument("trajectory: times must be strictly increasing");
    }
    magnitude_.reserve(values_.size());
    for (const auto& v : values_) magnitude_.push_back(std::abs(v));
}

double Trajectory::final_magnitude() const {
    if (magnitude_.empty()) throw std::logic_error("trajectory is empty");
    return magnitude_.back();
}

double Trajectory::min_magnitude() const {
    if (magnitude_.empty()) throw std::logic_error("trajectory is empty");
    return *std::min_element(magnitude_.begin(), magnitude_.end());
}

}  // namespace leosim
