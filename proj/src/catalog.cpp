// Built-in scenarios, one per figure panel. Parameters that appear in a
// caption carry that caption's parameter list; everything else is marked
// derived with the reason.

#include <cmath>
#include <numbers>
#include <sstream>

#include "leosim/experiments.hpp"

namespace leosim {

namespace {

constexpr const char* fig1_caption = "Fig. 1: alpha(0)=5, omega0=1, Gamma=5, omega1=8, T=0.05, Delta/T=0.7";
constexpr const char* fig2_caption =
    "Fig. 2: (a) gamma0=1, (b) gamma0=5, T=0.05, Delta/T=0.7; (c) T=0.05, (d) Delta/T=0.7, gamma0=1, omega1=15; "
    "alpha(0)=5, omega0=1, Gamma=5";
constexpr const char* fig3_caption =
    "Fig. 3: (a) T=0.05, (b) T=0.4, mu=0, sigma=1; (c) T=0.05, (d) T=0.6; alpha(0)=5, omega0=1, Gamma=5, gamma0=1, "
    "omega1=15, omega2=pi*omega1/2, Delta/T=0.5";
constexpr const char* fig4_caption =
    "Fig. 4: (a) alpha(0)=5, omega0=1, Gamma=5, omega3=25, T3=0.5; (b) gamma0=5, T3=0.5";

constexpr double gammas[] = {0.1, 1.0, 5.0};
constexpr std::uint64_t noise_seed = 20190611;

std::string label(std::string_view prefix, double v) {
    std::ostringstream out;
    out << prefix << v;
    return out.str();
}

CurveSpec curve(std::string name, double gamma0, PulseProgram p, bool reference = false) {
    return CurveSpec{std::move(name), gamma0, false, std::move(p), reference};
}

CurveSpec markov_curve() { return CurveSpec{"markov", 0.0, true, PulseProgram::none(), false}; }

Scenario base(std::string name, std::string description) {
    Scenario s;
    s.name = std::move(name);
    s.description = std::move(description);
    return s;
}

void caption(Scenario& s, std::initializer_list<const char*> params, const char* text) {
    for (const char* p : params) s.provenance.push_back({p, Provenance::caption, text});
}

void derived(Scenario& s, const char* param, const char* why) { s.provenance.push_back({param, Provenance::derived, why}); }

Assertion monotone(std::vector<std::string> curves, Order order) {
    Assertion a;
    a.kind = AssertionKind::final_monotone;
    a.curves = std::move(curves);
    a.order = order;
    return a;
}

Assertion thresholded(AssertionKind kind, std::vector<std::string> curves, double threshold, bool derived_threshold) {
    Assertion a;
    a.kind = kind;
    a.curves = std::move(curves);
    a.threshold = threshold;
    a.derived_threshold = derived_threshold;
    return a;
}

Assertion paired(AssertionKind kind, std::vector<CurvePair> pairs, double threshold, bool derived_threshold) {
    Assertion a;
    a.kind = kind;
    a.pairs = std::move(pairs);
    a.threshold = threshold;
    a.derived_threshold = derived_threshold;
    return a;
}

void common_provenance(Scenario& s, const char* text) {
    caption(s, {"alpha0", "omega0", "Gamma"}, text);
    derived(s, "t_max", "visible horizon of the plotted curves; not stated numerically");
}

Scenario fig1a() {
    Scenario s = base("fig1a", "no control, several memory times and the Markov limit");
    std::vector<std::string> order;
    for (double g : gammas) {
        s.curves.push_back(curve(label("gamma0=", g), g, PulseProgram::none()));
        order.push_back(s.curves.back().name);
    }
    s.curves.push_back(markov_curve());
    common_provenance(s, fig1_caption);
    derived(s, "gamma0", "legend values not enumerated; {0.1, 1, 5} plus the Markov limit");
    s.assertions.push_back(monotone(order, Order::decreasing));
    Assertion markov = thresholded(AssertionKind::final_close, {"markov"}, 5.0 * std::exp(-25.0), false);
    markov.tolerance = 1e-12;
    s.assertions.push_back(markov);
    return s;
}

Scenario fig1b() {
    Scenario s = base("fig1b", "rectangular control, several memory times");
    const PulseProgram rect = PulseProgram::rectangular(8.0, 0.05, 0.7 * 0.05);
    std::vector<std::string> order;
    std::vector<CurvePair> dominance;
    for (double g : gammas) {
        s.curves.push_back(curve(label("gamma0=", g), g, rect));
        order.push_back(s.curves.back().name);
    }
    s.curves.push_back(markov_curve());
    for (double g : gammas) {
        s.curves.push_back(curve(label("free:gamma0=", g), g, PulseProgram::none(), true));
        dominance.push_back({label("gamma0=", g), s.curves.back().name});
    }
    common_provenance(s, fig1_caption);
    caption(s, {"omega1", "T", "Delta/T"}, fig1_caption);
    derived(s, "gamma0", "same set as fig1a");
    Assertion floor = thresholded(AssertionKind::min_floor, {"gamma0=0.1"}, 0.95, true);
    floor.note = "0.95 quantifies complete removal";
    s.assertions.push_back(floor);
    s.assertions.push_back(monotone(order, Order::decreasing));
    s.assertions.push_back(paired(AssertionKind::final_dominates, dominance, 0.0, false));
    return s;
}

Scenario fig2_amplitude(const char* name, double gamma0, std::vector<double> omegas) {
    Scenario s = base(name, label("rectangular control at gamma0=", gamma0) + ", several amplitudes");
    std::vector<std::string> order;
    for (double w : omegas) {
        s.curves.push_back(curve(label("omega1=", w), gamma0, PulseProgram::rectangular(w, 0.05, 0.7 * 0.05)));
        order.push_back(s.curves.back().name);
    }
    common_provenance(s, fig2_caption);
    caption(s, {"gamma0", "T", "Delta/T"}, fig2_caption);
    s.assertions.push_back(monotone(order, Order::increasing));
    return s;
}

Scenario fig2a() {
    Scenario s = fig2_amplitude("fig2a", 1.0, {8.0, 15.0, 50.0});
    derived(s, "omega1", "intermediate legend values not in the text; {8, 15, 50}");
    Assertion floor = thresholded(AssertionKind::min_floor, {"omega1=50"}, 0.95, true);
    floor.note = "0.95 quantifies nearly constant";
    s.assertions.push_back(floor);
    return s;
}

Scenario fig2b() {
    Scenario s = fig2_amplitude("fig2b", 5.0, {8.0, 15.0, 50.0, 100.0});
    derived(s, "omega1", "legend values not in the text; {8, 15, 50, 100}");
    return s;
}

Scenario fig2c() {
    Scenario s = base("fig2c", "rectangular control at T=0.05, several duty ratios");
    std::vector<std::string> order;
    for (double r : {0.3, 0.5, 0.7, 0.9}) {
        s.curves.push_back(curve(label("Delta/T=", r), 1.0, PulseProgram::rectangular(15.0, 0.05, r * 0.05)));
        order.push_back(s.curves.back().name);
    }
    common_provenance(s, fig2_caption);
    caption(s, {"gamma0", "omega1", "T"}, fig2_caption);
    derived(s, "Delta/T", "legend values not in the text; {0.3, 0.5, 0.7, 0.9}");
    s.assertions.push_back(monotone(order, Order::increasing));
    return s;
}

Scenario fig2d() {
    Scenario s = base("fig2d", "rectangular control at Delta/T=0.7, several periods");
    for (double T : {0.01, 0.05, 0.1}) {
        s.curves.push_back(curve(label("T=", T), 1.0, PulseProgram::rectangular(15.0, T, 0.7 * T)));
    }
    common_provenance(s, fig2_caption);
    caption(s, {"gamma0", "omega1", "Delta/T", "T"}, fig2_caption);
    std::vector<CurvePair> pairs;
    for (std::size_t i = 0; i < s.curves.size(); ++i) {
        for (std::size_t j = i + 1; j < s.curves.size(); ++j) pairs.push_back({s.curves[i].name, s.curves[j].name});
    }
    Assertion close = paired(AssertionKind::sup_distance_max, pairs, 0.05, true);
    close.note = "0.05 quantifies similar evolution";
    s.assertions.push_back(close);
    return s;
}

// Noise panels: the same seed on every noisy curve, so the noise path is the
// same and only its scale W changes. The other period is carried as
// reference curves for the sensitivity comparison.
Scenario fig3_noise(const char* name, double period, double other_period) {
    Scenario s = base(name, label("rectangular control with Gaussian amplitude noise, T=", period));
    auto rect = [](double T) { return PulseProgram::rectangular(15.0, T, 0.5 * T); };
    auto noisy = [&](double T, double W) { return rect(T).with_noise(NoiseSpec{W, 0.0, 1.0, noise_seed}); };
    const std::string other = label("T=", other_period) + ":";
    s.curves.push_back(curve("W=0", 1.0, rect(period)));
    for (double W : {0.5, 1.0, 2.0}) s.curves.push_back(curve(label("W=", W), 1.0, noisy(period, W)));
    s.curves.push_back(curve(other + "W=0", 1.0, rect(other_period), true));
    for (double W : {0.5, 1.0, 2.0}) s.curves.push_back(curve(other + label("W=", W), 1.0, noisy(other_period, W), true));

    common_provenance(s, fig3_caption);
    caption(s, {"gamma0", "omega1", "Delta/T", "T", "mu", "sigma"}, fig3_caption);
    derived(s, "W", "legend values not in the text; {0.5, 1, 2}");
    derived(s, "seed", "fixed and shared by every noisy curve so comparisons are paired");

    const bool fast_first = period < other_period;
    std::vector<CurvePair> pairs;
    for (double W : {0.5, 1.0, 2.0}) {
        const CurvePair here{label("W=", W), "W=0"};
        const CurvePair there{other + label("W=", W), other + "W=0"};
        pairs.push_back(fast_first ? here : there);
        pairs.push_back(fast_first ? there : here);
    }
    Assertion a = paired(AssertionKind::sup_distance_less, pairs, 0.0, false);
    a.note = "noise moves the T=0.05 curve less than the T=0.4 curve";
    s.assertions.push_back(a);
    return s;
}

Scenario fig3_shape(const char* name, double period, double other_period) {
    Scenario s = base(name, label("none vs rectangular vs equal-integral sine, T=", period));
    const double omega1 = 15.0;
    const double omega2 = std::numbers::pi * omega1 / 2.0;
    auto rect = [&](double T) { return PulseProgram::rectangular(omega1, T, 0.5 * T); };
    auto sine = [&](double T) { return PulseProgram::sine(omega2, T, 0.5 * T); };
    const std::string other = label("T=", other_period) + ":";
    s.curves.push_back(curve("none", 1.0, PulseProgram::none()));
    s.curves.push_back(curve("rect", 1.0, rect(period)));
    s.curves.push_back(curve("sine", 1.0, sine(period)));
    s.curves.push_back(curve(other + "rect", 1.0, rect(other_period), true));
    s.curves.push_back(curve(other + "sine", 1.0, sine(other_period), true));

    common_provenance(s, fig3_caption);
    caption(s, {"gamma0", "omega1", "omega2", "Delta/T", "T"}, fig3_caption);

    const CurvePair here{"rect", "sine"};
    const CurvePair there{other + "rect", other + "sine"};
    Assertion a = paired(AssertionKind::sup_distance_ratio, {}, 0.1, true);
    a.pairs = period < other_period ? std::vector<CurvePair>{here, there} : std::vector<CurvePair>{there, here};
    a.note = "rect/sine gap at T=0.05 is at most a tenth of the gap at T=0.6";
    s.assertions.push_back(a);
    return s;
}

Scenario fig4a() {
    Scenario s = base("fig4a", "zero-energy control, several memory times");
    const PulseProgram ze = PulseProgram::zero_energy(25.0, 0.5);
    std::vector<std::string> order;
    std::vector<CurvePair> dominance;
    for (double g : gammas) {
        s.curves.push_back(curve(label("gamma0=", g), g, ze));
        order.push_back(s.curves.back().name);
    }
    for (double g : gammas) {
        s.curves.push_back(curve(label("free:gamma0=", g), g, PulseProgram::none(), true));
        dominance.push_back({label("gamma0=", g), s.curves.back().name});
    }
    common_provenance(s, fig4_caption);
    caption(s, {"omega3", "T3"}, fig4_caption);
    derived(s, "gamma0", "legend values not in the text; same set as fig1a");
    Assertion kept = thresholded(AssertionKind::preserved_within, {"gamma0=0.1"}, 0.05, true);
    kept.note = "5% quantifies remains constant";
    s.assertions.push_back(kept);
    s.assertions.push_back(monotone(order, Order::decreasing));
    s.assertions.push_back(paired(AssertionKind::final_dominates, dominance, 0.0, false));
    return s;
}

Scenario fig4b() {
    Scenario s = base("fig4b", "zero-energy control at gamma0=5, several amplitudes");
    std::vector<std::string> order;
    for (double w : {25.0, 100.0, 250.0}) {
        s.curves.push_back(curve(label("omega3=", w), 5.0, PulseProgram::zero_energy(w, 0.5)));
        order.push_back(s.curves.back().name);
    }
    common_provenance(s, fig4_caption);
    caption(s, {"gamma0", "T3"}, fig4_caption);
    derived(s, "omega3", "intermediate legend value not in the text; {25, 100, 250}");
    s.assertions.push_back(monotone(order, Order::increasing));
    Assertion kept = thresholded(AssertionKind::final_within, {"omega3=250"}, 0.05, true);
    kept.note = "5% quantifies nearly unchanged";
    s.assertions.push_back(kept);
    return s;
}

}  // namespace

std::vector<Scenario> builtin_catalog() {
    return {fig1a(),
            fig1b(),
            fig2a(),
            fig2b(),
            fig2c(),
            fig2d(),
            fig3_noise("fig3a", 0.05, 0.4),
            fig3_noise("fig3b", 0.4, 0.05),
            fig3_shape("fig3c", 0.05, 0.6),
            fig3_shape("fig3d", 0.6, 0.05),
            fig4a(),
            fig4b()};
}

}  // namespace leosim
