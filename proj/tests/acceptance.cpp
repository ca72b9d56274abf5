// Acceptance checks, one line per criterion. argv[1] is the golden directory.

#include "eplab/epfinder.hpp"
#include "eplab/presets.hpp"
#include "eplab/runner.hpp"
#include "eplab/scattering.hpp"
#include "eplab/spectral.hpp"
#include "eplab/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

using namespace eplab;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::vector<std::size_t> peaks(const std::vector<double>& s) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i)
        if (s[i] > s[i - 1] && s[i] >= s[i + 1]) out.push_back(i);
    return out;
}

// width of the central dip at half the lower flanking maximum; -1 if there is no dip
double dip_width(const CrossSectionGrid& g) {
    const auto p = peaks(g.sigma);
    if (p.size() < 2) return -1.0;
    const std::size_t l = p.front(), r = p.back();
    const auto m = static_cast<std::size_t>(std::min_element(g.sigma.begin() + l, g.sigma.begin() + r) - g.sigma.begin());
    const double half = 0.5 * std::min(g.sigma[l], g.sigma[r]);
    std::size_t i = m, j = m;
    while (i > l && g.sigma[i] < half) --i;
    while (j < r && g.sigma[j] < half) ++j;
    return g.energies[j] - g.energies[i];
}

// the seventh/eighth figure family, equal widths
SystemConfig seventh_family(CouplingLaw law) {
    SystemConfig c;
    c.levels = {{LinearCurve{1.2, -0.5}, -0.5}, {LinearCurve{0.0, 1.0}, -0.5}};
    c.coupling = law;
    c.topology = Topology::pair;
    return c;
}

// e1 = 1 - a/2, e2 = a, w = 0.5 i
SystemConfig third_family_constant() {
    SystemConfig c;
    c.levels = {{LinearCurve{1.0, -0.5}, -0.5}, {LinearCurve{0.0, 1.0}, -0.5}};
    c.coupling = ConstantCoupling{{0.0, 0.5}};
    c.topology = Topology::pair;
    return c;
}

void closed_form_oracle() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        CMatrix h(2, 2);
        const Complex off{u(rng), u(rng)};
        h << Complex{u(rng), u(rng)}, off, off, Complex{u(rng), u(rng)};
        const auto [l1, l2] = eig2_closed_form(h);
        const auto s = eig_general(h);
        const Complex g1 = s.states[0].value, g2 = s.states[1].value;
        // match the pair either way round
        const double d = std::min(std::max(std::abs(g1 - l1), std::abs(g2 - l2)),
                                  std::max(std::abs(g1 - l2), std::abs(g2 - l1)));
        worst = std::max(worst, d);
    }
    const double t = seconds_since(t0);
    report(1, worst < 1e-10 && t < 1.0, fmt("closed form vs general solver, max |dl| = %.3g over 10^4 matrices, %.3f s", worst, t));
}

void trace_conservation() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    std::size_t points = 0;
    for (int fig = 1; fig <= figure_count; ++fig) {
        for (Panel p : figure_panels(fig)) {
            const auto plan = figure_preset(fig, p).run.plan;
            const auto ts = run_sweep(plan);
            for (std::size_t i = 0; i < ts.points(); ++i) {
                Complex sum{}, bare{};
                for (std::size_t k = 0; k < ts.size(); ++k) sum += ts.tracks[k][i].value;
                for (const auto& e : plan_bare_energies(plan, ts.grid[i])) bare += e;
                worst = std::max(worst, std::abs(sum - bare));
                ++points;
            }
        }
    }
    const double t = seconds_since(t0);
    report(2, worst < 1e-9 && t < 5.0,
           fmt("trace conservation over %.0f preset grid points, max deviation %.3g, %.3f s", double(points), worst, t));
}

void analytic_eps() {
    const auto r4 = ep_condition_2level(constant_coupling_mode(seventh_family(YParamCoupling{0.4, 1.0})), 0.0, 2.0);
    const auto r5 = ep_condition_2level(constant_coupling_mode(seventh_family(YParamCoupling{0.5, 1.0})), 0.0, 2.0);
    const bool ok = !r4.empty() && !r5.empty() && std::abs(r4[0] - 0.26667) < 1e-4 && std::abs(r5[0] - 0.13333) < 1e-4;
    report(3, ok, fmt("constant-coupling EPs a = %.6f (w0 = 0.4), %.6f (w0 = 0.5)", r4.empty() ? -1 : r4[0], r5.empty() ? -1 : r5[0]));
}

void dichotomy() {
    const auto c = third_family_constant();
    ScanOptions o;
    o.a = Range{-0.5, 2.0};
    const auto eps = find_eps_scan(c, o);
    if (eps.size() != 2) {
        report(4, false, fmt("expected 2 located EPs in [-0.5, 2], found %.0f", double(eps.size())));
        return;
    }
    const double lo = eps[0].a_star, hi = eps[1].a_star;
    const auto analytic = ep_condition_2level(c, -0.5, 2.0);
    bool ok = analytic.size() == 2 && std::abs(analytic[0] - lo) < 1e-6 && std::abs(analytic[1] - hi) < 1e-6;

    SweepPlan plan;
    plan.config = c;
    plan.start = -0.5;
    plan.stop = 2.0;
    plan.steps = 1000;
    const auto ts = run_sweep(plan);
    std::size_t bif = 0, rep = 0, bad = 0;
    for (std::size_t i = 0; i < ts.points(); ++i) {
        const double a = ts.grid[i];
        const Complex d = ts.tracks[0][i].value - ts.tracks[1][i].value;
        const bool e_eq = std::abs(d.real()) < 1e-9;
        const bool g_eq = std::abs(2.0 * d.imag()) < 1e-9;
        const bool inside = a > lo && a < hi;
        if (!(e_eq || g_eq)) {
            ++bad;
        } else if (e_eq && !g_eq) {
            ++bif;
            if (!inside) ++bad;
        } else if (g_eq && !e_eq) {
            ++rep;
            if (inside) ++bad;
        }
    }
    ok = ok && bad == 0 && bif > 0 && rep > 0;
    report(4, ok, fmt("EPs at a = %.6f, %.6f; %.0f grid points violate the dichotomy or its placement", lo, hi, double(bad)));
}

void midpoint_split() {
    const auto c = third_family_constant();
    const double a = 2.0 / 3.0;  // 1 - a/2 = a
    const auto s = eig_general(build_hamiltonian(c, a));
    double g_hi = std::max(s.states[0].gamma_half(), s.states[1].gamma_half());
    double g_lo = std::min(s.states[0].gamma_half(), s.states[1].gamma_half());
    const bool ok = std::abs(g_hi) < 1e-9 && std::abs(g_lo + 1.0) < 1e-9;
    report(5, ok, fmt("widths at e1 = e2: Gamma/2 = %.3g and %.12f", g_hi, g_lo));
}

void rigidity_collapse() {
    const auto sys = figure_preset(1, Panel::left).run.system();
    const auto eps = find_eps_scan(sys);
    if (eps.empty()) {
        report(6, false, "no EP located for the first figure, left panel");
        return;
    }
    const double a_star = eps[0].a_star;
    double prev = 2.0, r_min = 1.0, mix = 0.0;
    bool monotone = true;
    int steps = 0;
    for (double d = 1e-2; d > 1e-12; d *= 0.5, ++steps) {
        const auto ev = evaluate_candidate(sys, a_star - d, std::nullopt, EPMethod::scan_refined);
        if (ev.min_rigidity >= prev) monotone = false;
        prev = ev.min_rigidity;
        r_min = ev.min_rigidity;
        mix = std::max(mix, ev.max_mixing);
    }
    const bool ok = monotone && r_min < 1e-3 && mix > 1e3;
    report(6, ok, fmt("%.0f halvings toward a = %.6f: r_min -> %.3g", double(steps), a_star, r_min) +
                      fmt(", max |b|^2 = %.3g", mix) + (monotone ? ", monotone" : ", not monotone"));
}

void unitarity() {
    double dev = 0.0, smin = 1e300, smax = -1e300;
    std::size_t n = 0;
    for (int fig = 7; fig <= 9; ++fig) {
        for (Panel p : figure_panels(fig)) {
            const auto plan = figure_preset(fig, p).run.plan;
            const auto energies = surface_energy_grid(plan);
            for (double y : uniform_grid(plan.start, plan.stop, plan.steps)) {
                const auto g = cross_section(energies, plan_resonances(plan, y));
                for (std::size_t j = 0; j < g.energies.size(); ++j) {
                    dev = std::max(dev, std::abs(std::abs(g.s_values[j]) - 1.0));
                    smin = std::min(smin, g.sigma[j]);
                    smax = std::max(smax, g.sigma[j]);
                    ++n;
                }
            }
        }
    }
    const bool ok = dev < 1e-12 && smin >= 0.0 && smax <= 4.0 + 1e-9;
    report(7, ok, fmt("max ||S| - 1| = %.3g, sigma in [%.3g, %.12f]", dev, smin, smax) + " over " + std::to_string(n) + " points");
}

void double_pole() {
    // located EP of the eighth-figure system in the (a, y) plane
    const auto preset = figure_preset(8, Panel::right);
    ScanOptions o;
    o.y = Range{0.0, 1.0};
    const auto eps = find_eps_scan(preset.run.system(), o);
    if (eps.empty()) {
        report(8, false, "no EP located for the eighth figure");
        return;
    }
    const auto& ep = eps.front();
    const auto s = eig_general(hamiltonian_at(preset.run.system(), ep.a_star, ep.y_star));
    const ResonancePair pair = resonance_pair(s.states[0].value, s.states[1].value);
    const double e_d = 0.5 * (pair.e1 + pair.e2);
    const double sig_d = sigma_of(s_matrix(e_d, pair));

    const double span = 3.0;
    const auto g_ep = cross_section(uniform_grid(e_d - span, e_d + span, 60001), pair);
    const auto p = peaks(g_ep.sigma);
    bool flanks = p.size() == 2 && g_ep.energies[p[0]] < e_d && g_ep.energies[p[1]] > e_d && g_ep.sigma[p[0]] > 3.5 &&
                  g_ep.sigma[p[1]] > 3.5;

    // width bifurcation point: a = 0.9, y = 1
    const ResonancePair bif = plan_resonances(preset.run.plan, 1.0);
    const double e_b = 0.5 * (bif.e1 + bif.e2);
    const auto g_bif = cross_section(uniform_grid(e_b - span, e_b + span, 60001), bif);
    const double w_ep = dip_width(g_ep), w_bif = dip_width(g_bif);

    const bool ok = sig_d < 1e-9 && flanks && w_bif > 0.0 && w_bif < w_ep;
    report(8, ok, fmt("EP a = %.6f: sigma(E_d) = %.3g, ", ep.a_star, sig_d) +
                      fmt("dip FWHM %.4f at the EP vs %.4f at a = 0.9", w_ep, w_bif) + (flanks ? ", flanks > 3.5" : ", flanks missing"));
}

void observers() {
    auto count = [](int fig) {
        const auto r = bifurcation_report(run_sweep(figure_preset(fig, Panel::left).run.plan));
        return std::count(r.observer_flags.begin(), r.observer_flags.end(), true);
    };
    const auto c4 = count(4), c5 = count(5);
    report(9, c4 == 1 && c5 == 0, fmt("observer states: %.0f in the fourth figure, %.0f in the fifth", double(c4), double(c5)));
}

void determinism(const fs::path& golden) {
    const fs::path root = fs::temp_directory_path() / "eplab_acceptance";
    fs::remove_all(root);
    std::size_t compared = 0, mismatched = 0, golden_checked = 0, golden_bad = 0;
    std::string first_bad;
    for (int fig = 1; fig <= figure_count; ++fig) {
        // full resolution: two runs byte for byte
        std::vector<std::string> runs[2];
        for (int k = 0; k < 2; ++k) {
            RunOptions o;
            o.output_dir = (root / ("run" + std::to_string(k))).string();
            runs[k] = run_figure(fig, std::nullopt, o).files;
        }
        if (runs[0].size() != runs[1].size()) {
            ++mismatched;
            continue;
        }
        for (std::size_t i = 0; i < runs[0].size(); ++i) {
            ++compared;
            if (fs::path(runs[0][i]).filename() != fs::path(runs[1][i]).filename() || slurp(runs[0][i]) != slurp(runs[1][i])) {
                ++mismatched;
                if (first_bad.empty()) first_bad = runs[0][i];
            }
        }
        // golden files are committed at 20 steps
        RunOptions g;
        g.output_dir = (root / "golden").string();
        g.steps = 20;
        for (const auto& f : run_figure(fig, std::nullopt, g).files) {
            ++golden_checked;
            const fs::path ref = golden / fs::path(f).filename();
            if (!fs::exists(ref) || slurp(ref) != slurp(f)) {
                ++golden_bad;
                if (first_bad.empty()) first_bad = ref.string();
            }
        }
    }
    fs::remove_all(root);
    const bool ok = mismatched == 0 && golden_bad == 0 && golden_checked > 0;
    std::string detail = std::to_string(compared) + " files identical across runs except " + std::to_string(mismatched) + ", " +
                         std::to_string(golden_checked - golden_bad) + "/" + std::to_string(golden_checked) + " match golden";
    if (!first_bad.empty()) detail += " (first mismatch " + first_bad + ")";
    report(10, ok, detail);
}

void performance() {
    SweepPlan plan = figure_preset(6, Panel::left).run.plan;
    plan.steps = 10000;
    const auto t0 = Clock::now();
    const auto ts = run_sweep(plan);
    const auto r = bifurcation_report(ts);
    const double t = seconds_since(t0);
    const bool ok = ts.size() == 4 && ts.points() == 10000 && r.delta_gamma_half.size() == 10000 && t < 1.0;
    report(11, ok, fmt("10^4-step sweep of %.0f levels with diagnostics in %.3f s", double(ts.size()), t));
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path golden = argc > 1 ? fs::path(argv[1]) : fs::path("tests/golden");
    const std::pair<int, void (*)()> checks[] = {
        {1, closed_form_oracle}, {2, trace_conservation}, {3, analytic_eps},  {4, dichotomy},
        {5, midpoint_split},     {6, rigidity_collapse},  {7, unitarity},     {8, double_pole},
        {9, observers},          {11, performance},
    };
    for (const auto& [id, fn] : checks) {
        try {
            fn();
        } catch (const std::exception& e) {
            report(id, false, std::string("threw: ") + e.what());
        }
    }
    try {
        determinism(golden);
    } catch (const std::exception& e) {
        report(10, false, std::string("threw: ") + e.what());
    }
    std::printf("%d failed\n", failures);
    return failures == 0 ? 0 : 1;
}
