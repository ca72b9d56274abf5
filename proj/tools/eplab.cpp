// eplab: command-line front end
//
//   eplab sweep   -c CONFIG -o DIR
//   eplab ep-find -c CONFIG | --figure N [--panel P]  [-o DIR]
//   eplab xsec    -c CONFIG -o DIR
//   eplab figure N [--panel P] -o DIR [--plot]
//   eplab preset N [--panel P]          print a preset as a config file
//
// Common: --format csv|json, --steps K, --quiet. Exit status 0 on success,
// 2 for configuration errors, 1 for anything else.

#include "eplab/config.hpp"
#include "eplab/presets.hpp"
#include "eplab/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Common {
    std::string format;
    int steps{0};
    bool quiet{false};
    bool plot{false};
    std::string out_dir;
};

eplab::RunOptions options(const Common& c, bool with_dir) {
    eplab::RunOptions o;
    if (!c.format.empty()) o.format = eplab::parse_format(c.format);
    if (c.steps > 0) o.steps = c.steps;
    o.plot = c.plot;
    if (with_dir && !c.out_dir.empty()) o.output_dir = c.out_dir;
    return o;
}

void finish(const eplab::RunResult& r, const Common& c) {
    std::cout << r.report;
    if (!c.quiet) std::cout << r.summary << '\n';
}

void add_common(CLI::App* app, Common& c, bool dir, bool plot) {
    app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--steps", c.steps, "override the sweep step count")->check(CLI::PositiveNumber);
    app->add_flag("-q,--quiet", c.quiet, "suppress the summary line");
    if (dir) app->add_option("-o,--output", c.out_dir, "output directory");
    if (plot) app->add_flag("--plot", c.plot, "also write a matplotlib script");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"eplab: eigenvalue trajectories, exceptional points and cross sections of small open quantum systems"};
    app.require_subcommand(1);

    Common c;
    std::string config_path;
    int figure = 0;
    std::string panel;

    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep from a config file");
    sweep->add_option("-c,--config", config_path, "config file")->required()->check(CLI::ExistingFile);
    add_common(sweep, c, true, true);

    auto* epf = app.add_subcommand("ep-find", "locate exceptional points");
    auto* epf_cfg = epf->add_option("-c,--config", config_path, "config file")->check(CLI::ExistingFile);
    auto* epf_fig = epf->add_option("--figure", figure, "use a figure preset")->check(CLI::Range(1, 9));
    epf_cfg->excludes(epf_fig);
    epf->add_option("--panel", panel, "preset panel")->needs(epf_fig);
    add_common(epf, c, true, false);

    auto* xsec = app.add_subcommand("xsec", "cross section (or surface) from a config file");
    xsec->add_option("-c,--config", config_path, "config file")->required()->check(CLI::ExistingFile);
    add_common(xsec, c, true, true);

    auto* fig = app.add_subcommand("figure", "reproduce a figure from its preset");
    fig->add_option("N", figure, "figure number 1-9")->required()->check(CLI::Range(1, 9));
    fig->add_option("--panel", panel, "left|middle|right|single or a panel letter");
    add_common(fig, c, true, true);

    auto* pre = app.add_subcommand("preset", "print a figure preset as a config file");
    pre->add_option("N", figure, "figure number 1-9")->required()->check(CLI::Range(1, 9));
    pre->add_option("--panel", panel, "panel (default: the first)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sweep) {
            auto rc = eplab::load_config(config_path);
            rc.action = eplab::Action::sweep;
            finish(eplab::run(rc, options(c, true)), c);
        } else if (*epf) {
            eplab::RunConfig rc;
            if (figure) {
                const auto p = panel.empty() ? eplab::figure_panels(figure).front() : eplab::parse_panel(figure, panel);
                rc = eplab::figure_preset(figure, p).run;
            } else if (!config_path.empty()) {
                rc = eplab::load_config(config_path);
            } else {
                std::cerr << "ep-find: give -c CONFIG or --figure N\n";
                return 2;
            }
            rc.action = eplab::Action::ep_find;
            finish(eplab::run(rc, options(c, true)), c);
        } else if (*xsec) {
            auto rc = eplab::load_config(config_path);
            if (rc.action != eplab::Action::surface) rc.action = eplab::Action::cross_section;
            finish(eplab::run(rc, options(c, true)), c);
        } else if (*fig) {
            std::optional<eplab::Panel> p;
            if (!panel.empty()) p = eplab::parse_panel(figure, panel);
            finish(eplab::run_figure(figure, p, options(c, true)), c);
        } else if (*pre) {
            const auto p = panel.empty() ? eplab::figure_panels(figure).front() : eplab::parse_panel(figure, panel);
            std::cout << eplab::serialize_config(eplab::figure_preset(figure, p).run);
        }
    } catch (const eplab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const eplab::InvalidConfig& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
