#include "leosim/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace leosim {

namespace {

const complex I{0.0, 1.0};

complex decay_rate(double gamma0, double c) { return complex{gamma0, -c}; }

std::string describe_roots(double gamma0, double c, double big_gamma) {
    std::ostringstream msg;
    msg << "near-degenerate roots for gamma0=" << gamma0 << ", c=" << c << ", Gamma=" << big_gamma;
    return msg.str();
}

// 2-norm condition number of [[p, q], [r, s]].
double condition_2x2(complex p, complex q, complex r, complex s) {
    const double fro = std::norm(p) + std::norm(q) + std::norm(r) + std::norm(s);
    const double det = std::abs(p * s - q * r);
    if (det == 0.0) return std::numeric_limits<double>::infinity();
    const double disc = std::sqrt(std::max(0.0, fro * fro - 4.0 * det * det));
    const double smax2 = 0.5 * (fro + disc);
    const double smin2 = det * det / smax2;
    return std::sqrt(smax2 / smin2);
}

}  // namespace

IllConditionedSegmentError::IllConditionedSegmentError(std::size_t segment, double condition)
    : SolverError([&] {
          std::ostringstream msg;
          msg << "boundary system of segment " << segment << " is ill-conditioned (condition number " << condition
              << ")";
          return msg.str();
      }()),
      segment_(segment),
      condition_(condition) {}

complex characteristic_residual(double gamma0, double c, double big_gamma, complex x) {
    return x * x - decay_rate(gamma0, c) * x + 0.5 * big_gamma * gamma0;
}

RootPair quadratic_roots(double gamma0, double c, double big_gamma) {
    if (!(gamma0 > 0.0)) throw ValidationError("gamma0", "must be > 0");
    const complex b = decay_rate(gamma0, c);
    const double k = 0.5 * big_gamma * gamma0;

    // Cancellation-free pair: the larger root from the formula, the other
    // from the product of roots.
    complex s = std::sqrt(b * b - 4.0 * k);
    if ((std::conj(b) * s).real() < 0.0) s = -s;
    complex r1 = 0.5 * (b + s);
    complex r2 = r1 != complex{0.0, 0.0} ? complex{k, 0.0} / r1 : 0.5 * (b - s);

    auto polish = [&](complex x) {
        const complex slope = 2.0 * x - b;
        if (std::abs(slope) == 0.0) return x;
        return x - characteristic_residual(gamma0, c, big_gamma, x) / slope;
    };
    r1 = polish(r1);
    r2 = polish(r2);

    if (r2.real() > r1.real() || (r2.real() == r1.real() && r2.imag() > r1.imag())) std::swap(r1, r2);
    return RootPair{r1, r2, std::abs(r1 - r2) < degenerate_root_gap};
}

MixingWeights mixing_weights(const RootPair& roots) {
    const complex gap = roots.a1 - roots.a2;
    return MixingWeights{roots.a1 / gap, -roots.a2 / gap};
}

complex analytic_no_control(complex alpha0, double omega0, const BathKernel& k, double t) {
    if (!(t >= 0.0)) throw ValidationError("t", "must be >= 0");
    const RootPair roots = quadratic_roots(k.gamma0, omega0, k.big_gamma);
    if (roots.near_degenerate) throw DegenerateRootsError(describe_roots(k.gamma0, omega0, k.big_gamma));
    const MixingWeights w = mixing_weights(roots);
    // e^{-(gamma0 - i omega0) t} e^{a1 t} = e^{-a2 t} since a1 + a2 = gamma0 - i omega0;
    // this form cannot overflow for large gamma0 t.
    return alpha0 * (w.a3 * std::exp(-roots.a2 * t) + w.a4 * std::exp(-roots.a1 * t));
}

// ---------------------------------------------------------------------------
// Rectangular control
// ---------------------------------------------------------------------------

complex SegmentCoefficients::propagator(double t) const {
    const double tau = t - t_start;
    const complex shift = a1 + a2;  // gamma0 - i c
    return a3 * std::exp((a1 - shift) * tau) + a4 * std::exp((a2 - shift) * tau);
}

complex SegmentCoefficients::derivative(double t) const {
    const double tau = t - t_start;
    const complex shift = a1 + a2;
    return a3 * (a1 - shift) * std::exp((a1 - shift) * tau) + a4 * (a2 - shift) * std::exp((a2 - shift) * tau);
}

PropagatorChain::PropagatorChain(double omega0, const RectangularPulse& pulse, const BathKernel& k, double horizon,
                                 BoundaryFrame frame)
    : horizon_(horizon) {
    if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw ValidationError("t_max", "horizon must be >= 0");
    const double c_on = omega0 + pulse.omega1;
    const double c_off = omega0;
    const double eps = 1e-14 * std::max(1.0, horizon);
    const bool coupled = k.big_gamma > 0.0;

    // ratio alpha'/alpha at the end of the previous segment
    complex slope_ratio{0.0, 0.0};
    double c_prev = c_on;
    complex log_value{0.0, 0.0};

    for (double n = 0.0;; n += 1.0) {
        const double start = n * pulse.period;
        if (start > horizon || (start >= horizon && !segments_.empty())) break;
        const double bounds[3] = {start, start + pulse.width, start + pulse.period};
        for (int part = 0; part < 2; ++part) {
            const double t0 = bounds[part];
            const double t1 = bounds[part + 1];
            if (t1 - t0 <= eps) continue;
            if (t0 > horizon || (t0 >= horizon && !segments_.empty())) break;
            const double c = part == 0 ? c_on : c_off;

            SegmentCoefficients seg;
            seg.t_start = t0;
            seg.t_end = t1;
            seg.c = c;
            const RootPair roots = quadratic_roots(k.gamma0, c, k.big_gamma);
            seg.a1 = roots.a1;
            seg.a2 = roots.a2;

            if (!coupled) {
                // G = 0: the amplitude is frozen
                seg.a3 = 1.0;
                seg.a4 = 0.0;
            } else {
                if (roots.near_degenerate) throw DegenerateRootsError(describe_roots(k.gamma0, c, k.big_gamma));
                // a3 + a4 = 1
                // a3/a1 + a4/a2 = -(2 / (Gamma gamma0)) * frame * alpha'/alpha
                complex rhs{0.0, 0.0};
                if (!segments_.empty()) {
                    complex rotate{1.0, 0.0};
                    if (frame == BoundaryFrame::as_printed) rotate = std::exp(I * (c - c_prev) * t0);
                    rhs = -(2.0 / (k.big_gamma * k.gamma0)) * rotate * slope_ratio;
                }
                const complex p = 1.0, q = 1.0;
                const complex r = 1.0 / roots.a1, s = 1.0 / roots.a2;
                seg.condition = condition_2x2(p, q, r, s);
                if (!(seg.condition <= max_segment_condition)) {
                    throw IllConditionedSegmentError(segments_.size(), seg.condition);
                }
                const complex det = p * s - q * r;
                seg.a3 = (1.0 * s - q * rhs) / det;
                seg.a4 = (p * rhs - r * 1.0) / det;
            }

            segments_.push_back(seg);
            log_chain_.push_back(log_value);

            const complex end_value = seg.propagator(t1);
            slope_ratio = seg.derivative(t1) / end_value;
            log_value += std::log(end_value);
            c_prev = c;
        }
    }
    if (segments_.empty()) throw ValidationError("t_max", "empty propagator chain");
}

std::size_t PropagatorChain::segment_index(double t) const {
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const SegmentCoefficients& s) { return v < s.t_start; });
    if (it == segments_.begin()) return 0;
    return static_cast<std::size_t>(std::distance(segments_.begin(), it)) - 1;
}

complex PropagatorChain::chain_at(std::size_t i) const { return std::exp(log_chain_[i]); }

complex PropagatorChain::evaluate(double t) const {
    if (!(t >= 0.0) || t > horizon_ * (1.0 + 1e-12) + 1e-14) {
        throw ValidationError("t", "outside the propagator horizon");
    }
    if (t == 0.0) return 1.0;
    const std::size_t i = segment_index(t);
    const SegmentCoefficients& seg = segments_[i];
    // log form keeps the product representable; recombine in one exp
    return std::exp(log_chain_[i] + std::log(seg.propagator(t)));
}

complex PropagatorChain::left_limit(std::size_t i) const {
    if (i == 0 || i >= segments_.size()) throw std::out_of_range("segment boundary index");
    const SegmentCoefficients& prev = segments_[i - 1];
    return chain_at(i - 1) * prev.propagator(prev.t_end);
}

complex PropagatorChain::right_limit(std::size_t i) const {
    if (i == 0 || i >= segments_.size()) throw std::out_of_range("segment boundary index");
    return chain_at(i) * segments_[i].propagator(segments_[i].t_start);
}

complex analytic_rectangular(complex alpha0, double omega0, const RectangularPulse& pulse, const BathKernel& k,
                             double t, BoundaryFrame frame) {
    if (!(t >= 0.0)) throw ValidationError("t", "must be >= 0");
    if (t == 0.0) return alpha0;
    const PropagatorChain chain(omega0, pulse, k, t, frame);
    return alpha0 * chain.evaluate(t);
}

Trajectory analytic_trajectory(const SimulationConfig& cfg, const BathKernel& k, const PulseProgram& p,
                               BoundaryFrame frame) {
    if (p.is_noisy()) throw ValidationError("method", "no closed form for noisy pulses");
    const TimeGrid grid = make_grid(cfg, p);
    std::vector<double> times(grid.steps + 1);
    std::vector<complex> values(grid.steps + 1);
    for (std::size_t n = 0; n <= grid.steps; ++n) times[n] = grid.at(n);

    if (!p.is_active()) {
        const RootPair roots = quadratic_roots(k.gamma0, cfg.omega0, k.big_gamma);
        if (roots.near_degenerate) throw DegenerateRootsError(describe_roots(k.gamma0, cfg.omega0, k.big_gamma));
        const MixingWeights w = mixing_weights(roots);
        for (std::size_t n = 0; n <= grid.steps; ++n) {
            const double t = times[n];
            values[n] = cfg.alpha0 * (w.a3 * std::exp(-roots.a2 * t) + w.a4 * std::exp(-roots.a1 * t));
        }
    } else if (const auto* rect = std::get_if<RectangularPulse>(&p.shape())) {
        const PropagatorChain chain(cfg.omega0, *rect, k, grid.t_max, frame);
        for (std::size_t n = 0; n <= grid.steps; ++n) values[n] = cfg.alpha0 * chain.evaluate(times[n]);
    } else {
        throw ValidationError("method", "no closed form for " + std::string(p.kind()) + " pulses");
    }
    values.front() = cfg.alpha0;
    return Trajectory(std::move(times), std::move(values));
}

}  // namespace leosim
