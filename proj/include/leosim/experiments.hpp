// experiments.hpp: figure scenarios, sweeps, comparison metrics and export
//
// A Scenario is a set of curves sharing alpha0, omega0, Gamma and a time
// grid, together with the ordinal claims it is expected to satisfy. Curves
// marked `reference` are computed for assertions only and are not exported.

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leosim/model.hpp"
#include "leosim/solver.hpp"

namespace leosim {

enum class Provenance { caption, derived };

struct ParameterSource {
    std::string parameter;
    Provenance tag{Provenance::derived};
    std::string source;  // caption parameter list, or the reason for a derived choice
};

struct CurveSpec {
    std::string name;
    double gamma0{1.0};
    bool markov{false};  // gamma0 -> infinity, closed form
    PulseProgram pulse;
    bool reference{false};
};

enum class AssertionKind {
    final_monotone,      // final |alpha| strictly ordered along `curves`
    min_floor,           // min_t |alpha| >= threshold |alpha0|
    preserved_within,    // sup_t | |alpha| - |alpha0| | <= threshold |alpha0|
    final_within,        // | |alpha(t_max)| - |alpha0| | <= threshold |alpha0|
    final_close,         // | |alpha(t_max)| - threshold | <= tolerance
    final_dominates,     // final |first| > final |second| for each pair
    sup_distance_max,    // sup distance <= threshold |alpha0| for each pair
    sup_distance_ratio,  // d(pairs[0]) <= threshold * d(pairs[1])
    sup_distance_less,   // d(pairs[2i]) < d(pairs[2i+1]) for each i
};

std::string_view to_string(AssertionKind kind) noexcept;
AssertionKind parse_assertion_kind(std::string_view name);

enum class Order { increasing, decreasing };

struct CurvePair {
    std::string first;
    std::string second;
};

struct Assertion {
    AssertionKind kind{AssertionKind::final_monotone};
    std::vector<std::string> curves;
    std::vector<CurvePair> pairs;
    Order order{Order::increasing};
    double threshold{0.0};
    double tolerance{0.0};
    bool derived_threshold{false};
    std::string note;
};

struct Scenario {
    std::string name;
    std::string description;
    complex alpha0{5.0, 0.0};
    double omega0{1.0};
    double big_gamma{5.0};
    double t_max{10.0};
    double dt{0.0};  // 0 selects the finest default_dt over the curves
    Method method{Method::ode};
    std::vector<CurveSpec> curves;
    std::vector<ParameterSource> provenance;
    std::vector<Assertion> assertions;

    // Common step: dt if set, otherwise min of default_dt over curves.
    double resolved_dt() const;
    SimulationConfig config() const;
    const CurveSpec& curve(std::string_view curve_name) const;
};

// Throws ValidationError when names collide, assertions reference unknown
// curves, or a curve's program cannot run on the scenario grid.
void validate_scenario(const Scenario& s);

std::vector<Scenario> builtin_catalog();

class UnknownScenarioError : public ValidationError {
public:
    UnknownScenarioError(std::string_view name, const std::vector<Scenario>& catalog);
};

const Scenario& find_scenario(const std::vector<Scenario>& catalog, std::string_view name);

// Figure-level aliases ("fig1" -> fig1a, fig1b) and "all" expand to panel
// names; panel names pass through. Unknown names throw.
std::vector<std::string> expand_scenario_names(const std::vector<Scenario>& catalog, std::string_view name);

std::string catalog_to_json(const std::vector<Scenario>& catalog);
// Compact JSON of a pulse program, the same form the catalog uses.
std::string pulse_signature(const PulseProgram& p);
std::vector<Scenario> catalog_from_json(std::string_view text);
std::vector<Scenario> load_catalog(const std::filesystem::path& path);

// ----------------------------------------------------------------------------
// Running and reporting
// ----------------------------------------------------------------------------

struct NamedTrajectory {
    std::string name;
    Trajectory trajectory;
    bool reference{false};
};

struct CurveSummary {
    std::string name;
    double final_abs{0.0};
    double min_abs{0.0};
    bool reference{false};
};

struct PairDistance {
    std::string first;
    std::string second;
    double sup{0.0};
};

struct AssertionOutcome {
    std::string kind;
    std::string description;
    bool passed{false};
    bool derived_threshold{false};
    double observed{0.0};
    double limit{0.0};
};

struct ComparisonReport {
    std::string scenario;
    std::vector<CurveSummary> curves;
    std::vector<PairDistance> distances;
    std::vector<AssertionOutcome> assertions;
    std::vector<std::string> notes;
    double runtime_seconds{0.0};

    bool all_passed() const;
};

// Timing is left out unless requested so that reports are byte-identical
// across reruns.
std::string to_json(const ComparisonReport& report, bool include_timing = false);

enum class TrajectoryFormat { csv, json };

struct RunOptions {
    std::optional<std::filesystem::path> out_dir;  // write <name>.csv and <name>.report.json
    TrajectoryFormat format{TrajectoryFormat::csv};
    std::optional<Method> method;  // overrides the scenario's method
};

struct ScenarioResult {
    std::vector<NamedTrajectory> curves;
    ComparisonReport report;
};

ScenarioResult run_scenario(const Scenario& s, const RunOptions& opts = {});

// Trajectory for one curve of a scenario with the given method.
Trajectory run_curve(const Scenario& s, const CurveSpec& c, Method method, Diagnostics* diag = nullptr);

// max_k |alpha_1(t_k) - alpha_2(t_k)|. Grids must be identical.
double sup_distance(const Trajectory& a, const Trajectory& b);

// Report the spread of final |alpha| as `parameter` takes each value on the
// first exported, non-Markov curve of `base`. Parameters: omega1, omega3,
// delta_over_T, T, gamma0, W. With `expect`, the ordering of final |alpha|
// along `values` becomes an assertion.
struct SweepResult {
    Scenario scenario;  // the generated scenario, one curve per value
    std::vector<NamedTrajectory> curves;
    ComparisonReport report;
};

SweepResult sweep(const Scenario& base, std::string_view parameter, std::span<const double> values,
                  std::optional<Order> expect = std::nullopt);

// CSV: header "t,<name>.re,<name>.im,<name>.abs,..." then one row per grid
// point, numbers printed with 17 significant digits. An empty list writes
// the header "t" only.
void export_csv(const std::vector<NamedTrajectory>& curves, const std::filesystem::path& path);
void export_json(const std::vector<NamedTrajectory>& curves, const std::filesystem::path& path);

// 17-significant-digit decimal used by every writer.
std::string format_number(double v);

}  // namespace leosim
