#include "eplab/runner.hpp"

#include "eplab/output.hpp"
#include "eplab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace eplab {

namespace fs = std::filesystem;

namespace {

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Extrema {
    double lo{std::numeric_limits<double>::infinity()};
    double hi{-std::numeric_limits<double>::infinity()};
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    bool empty() const { return lo > hi; }
    std::string str() const { return empty() ? "n/a" : "[" + short_num(lo) + ", " + short_num(hi) + "]"; }
};

class Writer {
public:
    Writer(const RunOptions& opts, Format fmt) : json_(opts.format.value_or(fmt) == Format::json), plot_(opts.plot) {
        dir_ = opts.output_dir.value_or(".");
        if (plot_ && json_) throw InvalidConfig("--plot needs csv output");
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw std::runtime_error("cannot create output directory " + dir_.string() + ": " + ec.message());
    }

    template <class Data>
    void write(const Data& data, const std::string& stem, RunResult& out) {
        const fs::path p = dir_ / (stem + (json_ ? ".json" : ".csv"));
        emit(data, p.string(), json_);
        out.files.push_back(p.string());
    }

    void plot_script(const std::string& stem, RunResult& out) const {
        if (!plot_) return;
        const fs::path p = dir_ / (stem + "_plot.py");
        std::ofstream os(p, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + p.string() + " for writing");
        os << "# plots the eplab CSV outputs next to this script\n"
              "import csv, os, sys\n"
              "import matplotlib\n"
              "matplotlib.use('Agg')\n"
              "import matplotlib.pyplot as plt\n\n"
              "HERE = os.path.dirname(os.path.abspath(__file__))\n"
              "FILES = [";
        for (std::size_t i = 0; i < out.files.size(); ++i)
            os << (i ? ", " : "") << "'" << fs::path(out.files[i]).filename().string() << "'";
        os << "]\n\n"
              "def rows(name):\n"
              "    with open(os.path.join(HERE, name)) as f:\n"
              "        r = csv.reader(f)\n"
              "        head = next(r)\n"
              "        return head, [[float(x) for x in row] for row in r]\n\n"
              "def trajectories(name, head, data):\n"
              "    nb = len(head) - 6\n"
              "    fig, ax = plt.subplots(3, 1, sharex=True, figsize=(5, 9))\n"
              "    for k in sorted({int(r[1]) for r in data}):\n"
              "        tr = [r for r in data if int(r[1]) == k]\n"
              "        x = [r[0] for r in tr]\n"
              "        ax[0].plot(x, [r[2] for r in tr])\n"
              "        ax[1].plot(x, [r[3] for r in tr])\n"
              "        for j in range(nb):\n"
              "            ax[2].plot(x, [r[6 + j] for r in tr], lw=0.8)\n"
              "    ax[0].set_ylabel('E')\n"
              "    ax[1].set_ylabel('Gamma/2')\n"
              "    ax[2].set_ylabel('|b|^2')\n"
              "    ax[2].set_yscale('log')\n"
              "    ax[2].set_xlabel(head[0])\n"
              "    return fig\n\n"
              "def surface(name, head, data):\n"
              "    fig, ax = plt.subplots(figsize=(5, 4))\n"
              "    ys = sorted({r[0] for r in data})\n"
              "    if len(ys) <= 5:\n"
              "        for y in ys:\n"
              "            sel = [r for r in data if r[0] == y]\n"
              "            ax.plot([r[1] for r in sel], [r[2] for r in sel], label='y=%g' % y)\n"
              "        ax.legend()\n"
              "        ax.set_xlabel('E')\n"
              "        ax.set_ylabel('sigma')\n"
              "    else:\n"
              "        es = sorted({r[1] for r in data})\n"
              "        z = [[r[2] for r in data[i * len(es):(i + 1) * len(es)]] for i in range(len(ys))]\n"
              "        m = ax.pcolormesh(es, ys, z, shading='auto')\n"
              "        fig.colorbar(m, ax=ax, label='sigma')\n"
              "        ax.set_xlabel('E')\n"
              "        ax.set_ylabel('y')\n"
              "    return fig\n\n"
              "def xsec(name, head, data):\n"
              "    fig, ax = plt.subplots(figsize=(5, 4))\n"
              "    ax.plot([r[0] for r in data], [r[1] for r in data])\n"
              "    ax.set_xlabel('E')\n"
              "    ax.set_ylabel('sigma')\n"
              "    return fig\n\n"
              "for name in FILES:\n"
              "    head, data = rows(name)\n"
              "    if head[1] == 'state':\n"
              "        fig = trajectories(name, head, data)\n"
              "    elif head[0] == 'y':\n"
              "        fig = surface(name, head, data)\n"
              "    else:\n"
              "        fig = xsec(name, head, data)\n"
              "    fig.suptitle(name)\n"
              "    fig.tight_layout()\n"
              "    fig.savefig(os.path.join(HERE, os.path.splitext(name)[0] + '.png'), dpi=120)\n"
              "    if '-q' not in sys.argv:\n"
              "        print('wrote', os.path.splitext(name)[0] + '.png')\n";
        os.flush();
        if (!os) throw std::runtime_error("write failed: " + p.string());
        out.files.push_back(p.string());
    }

private:
    fs::path dir_;
    bool json_;
    bool plot_;
};

void apply_steps(RunConfig& rc, const RunOptions& opts) {
    if (opts.steps) rc.plan.steps = *opts.steps;
}

ScanOptions scan_options(const RunConfig& rc) {
    ScanOptions o;
    const auto& plan = rc.plan;
    if (rc.epfind.a)
        o.a = *rc.epfind.a;
    else if (plan.param == SweepParam::a)
        o.a = {plan.start, plan.stop};
    if (rc.system().has_y_param() && rc.epfind.scan_y) {
        if (rc.epfind.y)
            o.y = *rc.epfind.y;
        else if (plan.param == SweepParam::y)
            o.y = Range{plan.start, plan.stop};
        else
            o.y = Range{0.0, 1.0};
    }
    o.points = rc.epfind.points;
    return o;
}

// system with y pinned for one-dimensional scans of y-param configs
SystemConfig scan_system(const RunConfig& rc) {
    const auto& sys = rc.system();
    if (sys.has_y_param() && rc.plan.param == SweepParam::a) return sys.with_y(rc.plan.fixed_other);
    return sys;
}

std::size_t count_scan(const std::vector<EPCandidate>& eps) {
    return static_cast<std::size_t>(
        std::count_if(eps.begin(), eps.end(), [](const EPCandidate& c) { return c.method == EPMethod::scan_refined; }));
}

void add_sweep_stats(const TrajectorySet& t, Extrema& dg) {
    const auto rep = bifurcation_report(t);
    for (double v : rep.delta_gamma_half) dg.add(v);
}

void add_surface_stats(const CrossSectionSurface& s, Extrema& sig) {
    if (s.sigma.size() == 0) return;
    sig.add(s.sigma.minCoeff());
    sig.add(s.sigma.maxCoeff());
}

// three-point y plan used for the fixed-y cross-section panels
SweepPlan three_y(SweepPlan plan) {
    plan.param = SweepParam::y;
    plan.start = 0.0;
    plan.stop = 1.0;
    plan.steps = 3;
    return plan;
}

std::string ep_line(const std::vector<EPCandidate>& eps) {
    std::string s;
    for (const auto& c : eps) {
        if (c.method != EPMethod::scan_refined) continue;
        s += (s.empty() ? "" : ", ") + short_num(c.a_star);
        if (c.y_star) s += "@y=" + short_num(*c.y_star);
    }
    return s.empty() ? "none" : s;
}

}  // namespace

std::vector<double> surface_energy_grid(const SweepPlan& plan, int points) {
    const auto ys = plan.steps == 1 ? std::vector<double>{plan.start} : uniform_grid(plan.start, plan.stop, plan.steps);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double y : ys) {
        const auto g = default_energy_grid(plan_resonances(plan, y), 2);
        lo = std::min(lo, g.front());
        hi = std::max(hi, g.back());
    }
    return uniform_grid(lo, hi, points);
}

std::vector<EPCandidate> find_eps(const RunConfig& rc) {
    const ScanOptions opts = scan_options(rc);
    const SystemConfig sys = scan_system(rc);
    std::vector<EPCandidate> out;
    if (sys.size() == 2) {
        try {
            const SystemConfig cm = constant_coupling_mode(sys);
            std::optional<double> y;
            if (const auto* yp = std::get_if<YParamCoupling>(&sys.coupling)) y = yp->y;
            for (double a : ep_condition_2level(cm, opts.a.lo, opts.a.hi)) {
                EPCandidate c = evaluate_candidate(cm, a, std::nullopt, EPMethod::analytic);
                c.y_star = y;
                out.push_back(c);
            }
        } catch (const UnsupportedCase&) {
            // unequal widths or complex coupling: scan only
        }
    }
    const auto scanned = find_eps_scan(sys, opts);
    out.insert(out.end(), scanned.begin(), scanned.end());
    return out;
}

RunResult run(RunConfig rc, const RunOptions& opts) {
    apply_steps(rc, opts);
    RunResult out;
    std::ostringstream summary;
    const auto& sys = rc.system();

    switch (rc.action) {
        case Action::sweep:
        case Action::figure: {
            validate(rc.plan);
            Writer w(opts, rc.format);
            const auto t = run_sweep(rc.plan);
            w.write(t, rc.name, out);
            w.plot_script(rc.name, out);
            Extrema dg;
            add_sweep_stats(t, dg);
            const auto eps = find_eps_scan(scan_system(rc), scan_options(rc));
            summary << "sweep " << to_string(rc.plan.param) << ": eps=" << eps.size() << " delta_gamma_half=" << dg.str()
                    << " sigma=n/a files=" << out.files.size();
            break;
        }
        case Action::ep_find: {
            const auto eps = find_eps(rc);
            std::ostringstream table;
            if (opts.format.value_or(rc.format) == Format::json)
                write_json(table, eps);
            else
                write_csv(table, eps);
            out.report = table.str();
            if (opts.output_dir) {
                Writer w(opts, rc.format);
                w.write(eps, rc.name, out);
            }
            std::size_t analytic = eps.size() - count_scan(eps);
            summary << "ep-find: eps=" << count_scan(eps) << " (scan: " << ep_line(eps) << ") analytic=" << analytic;
            if (analytic) {
                summary << " (";
                bool first = true;
                for (const auto& c : eps)
                    if (c.method == EPMethod::analytic) {
                        summary << (first ? "" : ", ") << short_num(c.a_star);
                        first = false;
                    }
                summary << ")";
            }
            break;
        }
        case Action::cross_section: {
            if (!rc.xsec_a) throw InvalidConfig("xsec.a: required for the cross-section action");
            if (sys.size() != 2) throw InvalidConfig("levels: cross sections need exactly 2 levels");
            const Spectrum s = eig_general(hamiltonian_at(sys, *rc.xsec_a, std::nullopt));
            const ResonancePair r = resonance_pair(s.states[0].value, s.states[1].value);
            const auto energies = rc.energies.start
                                      ? uniform_grid(*rc.energies.start, *rc.energies.stop, rc.energies.points)
                                      : default_energy_grid(r, rc.energies.points);
            const auto g = cross_section(energies, r);
            Writer w(opts, rc.format);
            w.write(g, rc.name, out);
            w.plot_script(rc.name, out);
            Extrema sig;
            for (double v : g.sigma) sig.add(v);
            summary << "cross-section a=" << short_num(*rc.xsec_a) << ": eps=n/a delta_gamma_half="
                    << short_num(std::abs(r.gamma1 - r.gamma2) / 2.0) << " sigma=" << sig.str()
                    << " files=" << out.files.size();
            break;
        }
        case Action::surface: {
            validate(rc.plan);
            const auto energies = rc.energies.start
                                      ? uniform_grid(*rc.energies.start, *rc.energies.stop, rc.energies.points)
                                      : surface_energy_grid(rc.plan, rc.energies.points);
            const auto s = cross_section_surface(rc.plan, energies);
            Writer w(opts, rc.format);
            w.write(s, rc.name, out);
            w.plot_script(rc.name, out);
            Extrema sig;
            add_surface_stats(s, sig);
            summary << "surface a=" << short_num(rc.plan.fixed_other) << ": sigma=" << sig.str()
                    << " files=" << out.files.size();
            break;
        }
    }
    out.summary = summary.str();
    return out;
}

RunResult run_figure(int fig, std::optional<Panel> panel, const RunOptions& opts) {
    const auto panels = panel ? std::vector<Panel>{*panel} : figure_panels(fig);
    RunResult out;
    Extrema dg, sig;
    std::string eps_counts;
    std::string caption;
    std::optional<std::vector<EPCandidate>> plane_eps;  // Figs. 7-9 share one system across panels

    for (Panel p : panels) {
        FigurePreset preset = figure_preset(fig, p);
        RunConfig& rc = preset.run;
        apply_steps(rc, opts);
        Writer w(opts, rc.format);
        const auto stems = panel_files(fig, p);
        RunResult part;

        if (fig <= 6) {
            const auto t = run_sweep(rc.plan);
            w.write(t, stems[0], part);
            add_sweep_stats(t, dg);
            const auto eps = find_eps_scan(scan_system(rc), scan_options(rc));
            eps_counts += (eps_counts.empty() ? "" : "+") + std::to_string(eps.size());
        } else if (fig <= 8) {
            const auto t = run_sweep(rc.plan);
            for (std::size_t i = 0; i < 3; ++i) w.write(t, stems[i], part);
            add_sweep_stats(t, dg);
            const SweepPlan plan3 = three_y(rc.plan);
            const auto s = cross_section_surface(plan3, surface_energy_grid(plan3, rc.energies.points));
            w.write(s, stems[3], part);
            add_surface_stats(s, sig);
        } else {
            const auto s = cross_section_surface(rc.plan, surface_energy_grid(rc.plan, rc.energies.points));
            w.write(s, stems[0], part);
            add_surface_stats(s, sig);
        }
        if (fig >= 7 && !plane_eps) plane_eps = find_eps_scan(scan_system(rc), scan_options(rc));
        if (preset.caption_ep_a) caption = short_num(*preset.caption_ep_a);
        out.files.insert(out.files.end(), part.files.begin(), part.files.end());
    }
    if (opts.plot) Writer(opts, Format::csv).plot_script("fig" + std::to_string(fig), out);

    std::ostringstream summary;
    summary << "figure " << fig << ": eps=";
    if (plane_eps) {
        summary << plane_eps->size();
        if (fig != 9) summary << " ep_a caption=" << (caption.empty() ? "n/a" : caption) << " scan=" << ep_line(*plane_eps);
    } else {
        summary << eps_counts;
    }
    summary << " delta_gamma_half=" << dg.str() << " sigma=" << sig.str() << " files=" << out.files.size();
    out.summary = summary.str();
    return out;
}

}  // namespace eplab
