// validation.hpp: cross-method invariant suite behind `leosim validate`
//
// Groups, in run order:
//   roots             characteristic-root residuals and A3 + A4 = 1 over the catalog
//   no-control        ODE vs closed form without pulses
//   markov            ODE at large gamma0 vs alpha0 exp(-Gamma t / 2)
//   ode-vs-analytic   ODE vs the rectangular propagator chain
//   ode-vs-quadrature ODE vs the Volterra quadrature on every catalog curve
//   properties        conservation, exact initial data, noise and seed identities, convergence order
//   boundary-frame    as-printed frame vs ODE; measured and reported, never a failure

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "leosim/experiments.hpp"

namespace leosim {

inline constexpr const char* validation_groups[] = {"roots",   "no-control",    "markov",        "ode-vs-analytic",
                                                    "ode-vs-quadrature", "properties", "boundary-frame"};

struct Check {
    std::string group;
    std::string name;
    bool passed{false};
    double observed{0.0};
    double limit{0.0};
    std::string detail;
};

struct ValidationOptions {
    std::vector<std::string> only;  // empty runs every group
    bool inject_kernel_sign{false};  // flip the kernel sign on the ODE side of ode-vs-quadrature
    std::optional<std::filesystem::path> artifact_dir;
    std::optional<std::vector<Scenario>> catalog;  // defaults to builtin_catalog()
};

struct ValidationSummary {
    std::vector<Check> checks;
    std::vector<std::string> artifacts;

    bool passed() const;
    const Check* first_failure() const;
};

// Unknown group names in `only` throw ValidationError("only", ...).
ValidationSummary run_validation(const ValidationOptions& opts = {});

std::string to_json(const ValidationSummary& summary);

// One row per noiseless rectangular catalog curve: the segment-frame and
// as-printed-frame chains against the ODE at dt = 1e-3.
struct FrameDiscrepancy {
    std::string scenario;
    std::string curve;
    double gamma0{0.0};
    RectangularPulse pulse;
    double sup_segment{0.0};
    double sup_as_printed{0.0};
    complex ode_at_5;
    complex segment_at_5;
    complex as_printed_at_5;
};

std::vector<FrameDiscrepancy> boundary_frame_discrepancies(const std::vector<Scenario>& catalog);
std::string to_json(const std::vector<FrameDiscrepancy>& rows);

}  // namespace leosim
