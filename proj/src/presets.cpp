#include "eplab/presets.hpp"

#include <stdexcept>

namespace eplab {

std::string to_string(Panel p) {
    switch (p) {
        case Panel::left: return "left";
        case Panel::middle: return "middle";
        case Panel::right: return "right";
        case Panel::single: return "single";
    }
    return "unknown";
}

namespace {

const Complex imag_w{0.0, 0.05};
const Complex complex_w{0.025, 0.025};
const Complex real_w{0.05, 0.0};

Complex omega_for(Panel p, double scale) {
    switch (p) {
        case Panel::left: return imag_w * scale;
        case Panel::middle: return complex_w * scale;
        case Panel::right: return real_w * scale;
        default: break;
    }
    throw std::out_of_range("panel " + to_string(p) + " not available");
}

LevelSpec linear(double c0, double c1, double gh) { return {LinearCurve{c0, c1}, gh}; }
LevelSpec root(double gh) { return {SqrtCurve{1.0}, gh}; }

std::string stem(int fig, Panel p) { return "fig" + std::to_string(fig) + "_" + to_string(p); }

RunConfig a_sweep(SystemConfig sys, const std::string& name) {
    RunConfig rc;
    rc.plan.config = std::move(sys);
    rc.plan.param = SweepParam::a;
    rc.plan.start = 0.01;
    rc.plan.stop = 2.0;
    rc.plan.steps = 1000;
    rc.action = Action::sweep;
    rc.name = name;
    return rc;
}

RunConfig y_sweep(SystemConfig sys, double a, Action action, const std::string& name) {
    RunConfig rc;
    rc.plan.config = std::move(sys);
    rc.plan.param = SweepParam::y;
    rc.plan.start = 0.0;
    rc.plan.stop = 1.0;
    rc.plan.steps = 500;
    rc.plan.fixed_other = a;
    rc.action = action;
    rc.name = name;
    return rc;
}

// caption constants of Figs. 7 and 8
struct YFigure {
    double omega0;
    double a1;
    double a0;
};

YFigure y_figure(int fig) { return fig == 7 ? YFigure{0.4, 0.26666, 0.8} : YFigure{0.5, 0.133333, 0.9}; }

}  // namespace

std::vector<Panel> figure_panels(int fig) {
    if (fig >= 1 && fig <= 6) return {Panel::left, Panel::middle, Panel::right};
    if (fig == 7 || fig == 8) return {Panel::left, Panel::right};
    if (fig == 9) return {Panel::single};
    throw std::out_of_range("no figure " + std::to_string(fig) + " (expected 1-9)");
}

namespace {

void check_panel(int fig, Panel p) {
    for (Panel q : figure_panels(fig))
        if (q == p) return;
    throw std::out_of_range("figure " + std::to_string(fig) + " has no " + to_string(p) + " panel");
}

}  // namespace

Panel parse_panel(int fig, const std::string& s) {
    figure_panels(fig);
    Panel p;
    if (s == "left")
        p = Panel::left;
    else if (s == "middle")
        p = Panel::middle;
    else if (s == "right")
        p = Panel::right;
    else if (s == "single")
        p = Panel::single;
    else if (s.size() == 1 && fig == 6 && s[0] >= 'a' && s[0] <= 'i')
        p = static_cast<Panel>((s[0] - 'a') / 3);
    else if (s.size() == 1 && (fig == 7 || fig == 8) && s[0] >= 'a' && s[0] <= 'h')
        p = (s[0] - 'a') % 2 == 0 ? Panel::left : Panel::right;
    else
        throw std::out_of_range("unknown panel '" + s + "'");
    check_panel(fig, p);
    return p;
}

std::vector<std::string> panel_files(int fig, Panel p) {
    check_panel(fig, p);
    if (fig <= 6) return {stem(fig, p)};
    if (fig == 9) return {"fig9"};
    const std::string base = "fig" + std::to_string(fig) + "_";
    if (p == Panel::left) return {base + "a", base + "c", base + "e", base + "g"};
    return {base + "b", base + "d", base + "f", base + "h"};
}

FigurePreset figure_preset(int fig, Panel p) {
    check_panel(fig, p);
    FigurePreset out;
    out.figure_id = fig;
    out.panel = p;
    SystemConfig sys;
    switch (fig) {
        case 1:
        case 2:
        case 3: {
            const double g1 = fig == 2 ? -0.53 : -0.5;
            const double g2 = fig == 2 ? -0.55 : -0.5;
            sys.levels = {linear(1.0, -0.5, g1), fig == 3 ? linear(0.0, 1.0, g2) : root(g2)};
            sys.coupling = GaussianCoupling{omega_for(p, fig == 3 ? 10.0 : 1.0)};
            sys.topology = Topology::pair;
            out.run = a_sweep(std::move(sys), stem(fig, p));
            break;
        }
        case 4:
        case 5: {
            const bool equal = fig == 4;
            sys.levels = {linear(1.0, -1.0 / 4.5, equal ? -0.5 : -0.53), linear(1.1, -0.5, equal ? -0.5 : -0.54),
                          root(equal ? -0.5 : -0.55)};
            sys.coupling = GaussianCoupling{omega_for(p, 1.0)};
            sys.topology = Topology::star;
            out.run = a_sweep(std::move(sys), stem(fig, p));
            break;
        }
        case 6: {
            sys.levels = {linear(1.2, -0.7, -0.53), linear(1.2, -0.6, -0.54), linear(1.0, -0.5, -0.55), root(-0.56)};
            sys.coupling = GaussianCoupling{omega_for(p, 1.0)};
            sys.topology = Topology::star;
            out.run = a_sweep(std::move(sys), stem(fig, p));
            break;
        }
        case 7:
        case 8: {
            const YFigure f = y_figure(fig);
            sys.levels = {linear(1.2, -0.5, -0.5), linear(0.0, 1.0, -0.5)};
            sys.coupling = YParamCoupling{f.omega0, 1.0};
            sys.topology = Topology::pair;
            const bool left = p == Panel::left;
            out.run = y_sweep(std::move(sys), left ? f.a1 : f.a0, Action::sweep, panel_files(fig, p).front());
            if (left) out.caption_ep_a = f.a1;
            break;
        }
        case 9: {
            sys.levels = {linear(1.0, -0.5, -0.5), linear(0.0, 1.0, -0.5)};
            sys.coupling = YParamCoupling{0.5, 1.0};
            sys.topology = Topology::pair;
            out.run = y_sweep(std::move(sys), 0.7, Action::surface, "fig9");
            break;
        }
    }
    out.run.figure_id = fig;
    return out;
}

}  // namespace eplab
