// analytic.hpp: closed-form amplitudes for the exponential memory kernel
//
// On any interval where the oscillator frequency is a constant c, the
// amplitude is
//
//   alpha(t) = e^{-(gamma0 - i c) tau} (a3 e^{a1 tau} + a4 e^{a2 tau}) alpha(t_s),
//
// with tau = t - t_s and a1, a2 the roots of
//
//   x^2 - (gamma0 - i c) x + Gamma gamma0 / 2 = 0.
//
// Without control this holds on [0, t] with a3 + a4 = 1 and
// a2 a3 + a1 a4 = 0. Under rectangular control the weights of each segment
// follow from the amplitude and its derivative at the previous boundary;
// chaining the segment propagators gives alpha at any time.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "leosim/model.hpp"

namespace leosim {

// Roots too close to use the two-exponential form.
class DegenerateRootsError : public SolverError {
public:
    using SolverError::SolverError;
};

// Boundary system whose 2x2 matrix is numerically singular.
class IllConditionedSegmentError : public SolverError {
public:
    IllConditionedSegmentError(std::size_t segment, double condition);
    std::size_t segment() const noexcept { return segment_; }
    double condition() const noexcept { return condition_; }

private:
    std::size_t segment_;
    double condition_;
};

inline constexpr double degenerate_root_gap = 1e-8;
inline constexpr double max_segment_condition = 1e12;

struct RootPair {
    complex a1;  // larger real part
    complex a2;
    bool near_degenerate{false};
};

// Roots of x^2 - (gamma0 - i c) x + Gamma gamma0 / 2, ordered by descending
// real part (ties broken by descending imaginary part). Flags |a1 - a2| < 1e-8.
RootPair quadratic_roots(double gamma0, double c, double big_gamma);

// Residual of the characteristic polynomial at x.
complex characteristic_residual(double gamma0, double c, double big_gamma, complex x);

// Weights of the no-control solution: a3 = a1/(a1 - a2), a4 = -a2/(a1 - a2).
struct MixingWeights {
    complex a3;
    complex a4;
};
MixingWeights mixing_weights(const RootPair& roots);

complex analytic_no_control(complex alpha0, double omega0, const BathKernel& k, double t);

// How the derivative-matching condition maps the memory state into the new
// segment. `segment` rotates with the frequency of the segment being
// entered, which is what continuity of the memory integral requires.
// `as_printed` uses the frequency of the segment being left, reproducing the
// published boundary system literally; it does not agree with direct
// integration and is kept for comparison.
enum class BoundaryFrame { segment, as_printed };

// Coefficients of one constant-frequency segment, referred to its start
// time: U(t) = e^{-(gamma0 - i c) tau} (a3 e^{a1 tau} + a4 e^{a2 tau}).
struct SegmentCoefficients {
    double t_start{0.0};
    double t_end{0.0};
    double c{0.0};  // omega0 + omega1 inside a pulse, omega0 between pulses
    complex a1, a2;
    complex a3, a4;
    double condition{1.0};  // 2-norm condition number of the boundary system

    complex propagator(double t) const;
    complex derivative(double t) const;
};

// Piecewise propagator for rectangular control, built segment by segment up
// to a horizon. The chain value at each segment start is kept in log form
// (log |alpha/alpha0| + i arg) so long strongly damped runs do not underflow.
class PropagatorChain {
public:
    PropagatorChain(double omega0, const RectangularPulse& pulse, const BathKernel& k, double horizon,
                    BoundaryFrame frame = BoundaryFrame::segment);

    // alpha(t) / alpha(0) for 0 <= t <= horizon.
    complex evaluate(double t) const;

    // Left and right limits of alpha/alpha0 at segment boundary `i` (i >= 1).
    complex left_limit(std::size_t i) const;
    complex right_limit(std::size_t i) const;

    const std::vector<SegmentCoefficients>& segments() const noexcept { return segments_; }
    double horizon() const noexcept { return horizon_; }

private:
    std::size_t segment_index(double t) const;
    complex chain_at(std::size_t i) const;

    std::vector<SegmentCoefficients> segments_;
    std::vector<complex> log_chain_;  // log(alpha(t_start)/alpha0) per segment
    double horizon_;
};

complex analytic_rectangular(complex alpha0, double omega0, const RectangularPulse& pulse, const BathKernel& k,
                             double t, BoundaryFrame frame = BoundaryFrame::segment);

// Closed-form trajectory on the cfg grid for NoPulse or noiseless
// rectangular programs. Throws ValidationError("method") for other programs,
// DegenerateRootsError when the two-exponential form breaks down.
Trajectory analytic_trajectory(const SimulationConfig& cfg, const BathKernel& k, const PulseProgram& p,
                               BoundaryFrame frame = BoundaryFrame::segment);

}  // namespace leosim
