#include "eplab/config.hpp"
#include "eplab/output.hpp"
#include "eplab/presets.hpp"
#include "eplab/runner.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace eplab;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(# two linear levels
[levels]
1.curve = linear 1 -0.5
1.gamma_half = -0.5
2.curve = linear 0 1
2.gamma_half = -0.5

[coupling]
mode = constant
omega = 0 0.1

[sweep]
param = a
start = 0
stop = 1
steps = 100
)";

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("eplab_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

ConfigError parse_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e;
    }
    FAIL("expected ConfigError");
    return ConfigError("", 0, "");
}

}  // namespace

TEST_CASE("minimal config") {
    const auto rc = parse_config(kMinimal);
    CHECK(rc.system().size() == 2);
    CHECK(rc.system().topology == Topology::pair);
    CHECK(std::get<ConstantCoupling>(rc.system().coupling).omega == Complex{0, 0.1});
    CHECK(rc.plan.steps == 100);
    CHECK(rc.action == Action::sweep);
    CHECK(rc.format == Format::csv);
}

TEST_CASE("config errors carry line numbers or field paths") {
    std::string s = kMinimal;
    SUBCASE("positive width") {
        s.replace(s.find("2.gamma_half = -0.5"), 19, "2.gamma_half = +0.1");
        const auto e = parse_error(s);
        CHECK(std::string(e.what()).find("gamma_half must be <= 0") != std::string::npos);
        CHECK(e.field == "levels.2.gamma_half");
    }
    SUBCASE("unknown key") {
        s += "colour = blue\n";
        const auto e = parse_error(s);
        CHECK(e.line == 17);
        CHECK(e.field == "sweep.colour");
    }
    SUBCASE("unknown section") {
        s += "[extra]\n";
        CHECK(parse_error(s).line == 17);
    }
    SUBCASE("duplicate key") {
        s += "steps = 10\n";
        CHECK(std::string(parse_error(s).what()).find("duplicate") != std::string::npos);
    }
    SUBCASE("bad number") {
        s.replace(s.find("steps = 100"), 11, "steps = 1e2x");
        const auto e = parse_error(s);
        CHECK(e.line == 16);
        CHECK(e.field == "sweep.steps");
    }
    SUBCASE("y-sweep without y-param coupling") {
        s.replace(s.find("param = a"), 9, "param = y");
        s += "fixed = 0.5\n";
        CHECK(parse_error(s).field == "sweep.param");
    }
    SUBCASE("missing coupling mode") {
        s.replace(s.find("mode = constant"), 15, "");
        CHECK(parse_error(s).field == "coupling.mode");
    }
    SUBCASE("level gap") {
        s.replace(s.find("2.curve"), 1, "3");
        s.replace(s.find("2.gamma_half"), 1, "3");
        CHECK(parse_error(s).field == "levels.3");
    }
}

TEST_CASE("every preset round-trips through a config file") {
    for (int fig = 1; fig <= figure_count; ++fig) {
        for (Panel p : figure_panels(fig)) {
            const auto rc = figure_preset(fig, p).run;
            const auto text = serialize_config(rc);
            const auto back = parse_config(text);
            INFO("figure " << fig << " " << to_string(p));
            CHECK(equivalent(rc, back));
            CHECK(serialize_config(back) == text);
        }
    }
}

TEST_CASE("presets carry the caption constants") {
    // {figure, panel, omega (re, im) or omega0, gamma_half per level}
    const auto f1 = figure_preset(1, Panel::middle).run.system();
    CHECK(std::get<GaussianCoupling>(f1.coupling).omega == Complex{0.025, 0.025});
    CHECK(std::get<SqrtCurve>(f1.levels[1].curve).c == 1.0);
    const auto f2 = figure_preset(2, Panel::left).run.system();
    CHECK(f2.levels[0].gamma_half == -0.53);
    CHECK(f2.levels[1].gamma_half == -0.55);
    const auto f3 = figure_preset(3, Panel::right).run.system();
    CHECK(std::get<GaussianCoupling>(f3.coupling).omega == Complex{0.5, 0.0});
    CHECK(std::get<LinearCurve>(f3.levels[1].curve) == LinearCurve{0.0, 1.0});
    CHECK(std::get<GaussianCoupling>(figure_preset(3, Panel::middle).run.system().coupling).omega == Complex{0.25, 0.25});
    const auto f4 = figure_preset(4, Panel::left).run.system();
    CHECK(std::get<LinearCurve>(f4.levels[0].curve).c1 == -1.0 / 4.5);
    CHECK(std::get<LinearCurve>(f4.levels[1].curve) == LinearCurve{1.1, -0.5});
    CHECK(f4.topology == Topology::star);
    const auto f5 = figure_preset(5, Panel::right).run.system();
    CHECK(f5.levels[2].gamma_half == -0.55);
    const auto f6 = figure_preset(6, Panel::middle).run.system();
    REQUIRE(f6.size() == 4);
    CHECK(std::get<LinearCurve>(f6.levels[0].curve) == LinearCurve{1.2, -0.7});
    CHECK(std::get<LinearCurve>(f6.levels[1].curve) == LinearCurve{1.2, -0.6});
    CHECK(std::get<LinearCurve>(f6.levels[2].curve) == LinearCurve{1.0, -0.5});
    CHECK(f6.levels[3].gamma_half == -0.56);
    const auto f7 = figure_preset(7, Panel::left);
    CHECK(std::get<YParamCoupling>(f7.run.system().coupling).omega0 == 0.4);
    CHECK(f7.run.plan.fixed_other == 0.26666);
    CHECK(f7.caption_ep_a == 0.26666);
    CHECK(figure_preset(7, Panel::right).run.plan.fixed_other == 0.8);
    CHECK(figure_preset(8, Panel::left).run.plan.fixed_other == 0.133333);
    CHECK(figure_preset(8, Panel::right).run.plan.fixed_other == 0.9);
    const auto f9 = figure_preset(9, Panel::single).run;
    CHECK(f9.plan.fixed_other == 0.7);
    CHECK(std::get<LinearCurve>(f9.system().levels[0].curve) == LinearCurve{1.0, -0.5});
    CHECK(f9.action == Action::surface);

    CHECK(parse_panel(6, "e") == Panel::middle);
    CHECK(parse_panel(7, "h") == Panel::right);
    CHECK_THROWS_AS(parse_panel(9, "left"), std::out_of_range);
    CHECK_THROWS_AS(figure_panels(10), std::out_of_range);
}

TEST_CASE("csv schemas") {
    auto plan = figure_preset(1, Panel::left).run.plan;
    plan.steps = 2;
    std::ostringstream t;
    write_csv(t, run_sweep(plan));
    CHECK(first_line(t.str()) == "a,state,E,gamma_half,rigidity,a_norm,b_sq_1,b_sq_2");

    std::ostringstream g;
    write_csv(g, cross_section({0.0, 1.0}, {0.5, -0.1, 0.6, -0.1}));
    CHECK(first_line(g.str()) == "E,sigma,re_S,im_S");

    auto yplan = figure_preset(9, Panel::single).run.plan;
    yplan.steps = 2;
    std::ostringstream s;
    write_csv(s, cross_section_surface(yplan, {0.0, 1.0}));
    CHECK(first_line(s.str()) == "y,E,sigma");

    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(-2.0) == "-2");
}

TEST_CASE("sweep with two steps writes two grid points") {
    const auto dir = scratch("two");
    auto rc = parse_config(kMinimal);
    rc.plan.steps = 2;
    rc.name = "two";
    RunOptions o;
    o.output_dir = dir.string();
    const auto res = run(rc, o);
    REQUIRE(res.files.size() == 1);
    std::istringstream is(slurp(res.files[0]));
    std::string line;
    std::getline(is, line);
    std::set<std::string> grid;
    int rows = 0;
    while (std::getline(is, line)) {
        grid.insert(line.substr(0, line.find(',')));
        ++rows;
    }
    CHECK(grid.size() == 2);
    CHECK(rows == 4);
    CHECK(res.summary.find("eps=") != std::string::npos);
}

TEST_CASE("config reproducing the second figure gives identical output") {
    const auto dir_a = scratch("fig2_cfg");
    const auto dir_b = scratch("fig2_fig");
    const auto cfg = dir_a / "fig2_left.ini";
    {
        std::ofstream os(cfg, std::ios::binary);
        os << serialize_config(figure_preset(2, Panel::left).run);
    }
    RunOptions oa;
    oa.output_dir = dir_a.string();
    const auto ra = run(load_config(cfg.string()), oa);
    RunOptions ob;
    ob.output_dir = dir_b.string();
    const auto rb = run_figure(2, Panel::left, ob);
    REQUIRE(ra.files.size() == 1);
    REQUIRE(rb.files.size() == 1);
    CHECK(fs::path(ra.files[0]).filename() == fs::path(rb.files[0]).filename());
    CHECK(slurp(ra.files[0]) == slurp(rb.files[0]));
}

TEST_CASE("seventh figure writes six trajectory and two cross-section files") {
    const auto dir = scratch("fig7");
    RunOptions o;
    o.output_dir = dir.string();
    o.steps = 20;
    const auto r = run_figure(7, std::nullopt, o);
    std::set<std::string> names;
    for (const auto& f : r.files) names.insert(fs::path(f).filename().string());
    for (char c = 'a'; c <= 'f'; ++c) {
        const auto name = std::string("fig7_") + c + ".csv";
        REQUIRE(names.count(name) == 1);
        CHECK(first_line(slurp(dir / name)) == "y,state,E,gamma_half,rigidity,a_norm,b_sq_1,b_sq_2");
    }
    for (const char* n : {"fig7_g.csv", "fig7_h.csv"}) {
        REQUIRE(names.count(n) == 1);
        CHECK(first_line(slurp(dir / n)) == "y,E,sigma");
    }
    CHECK(names.size() == 8);
    CHECK(r.summary.find("caption=0.26666") != std::string::npos);
}

TEST_CASE("ep-find on the eighth figure reports the caption root") {
    auto rc = figure_preset(8, Panel::left).run;
    rc.action = Action::ep_find;
    const auto eps = find_eps(rc);
    bool caption = false;
    for (const auto& c : eps)
        if (c.method == EPMethod::analytic && std::abs(c.a_star - 0.13333) < 1e-4) caption = true;
    CHECK(caption);
    const auto r = run(rc);
    CHECK(r.report.find("analytic,0.1333333") != std::string::npos);
    CHECK(r.files.empty());
}

TEST_CASE("json output and plot script") {
    const auto dir = scratch("json");
    RunOptions o;
    o.output_dir = dir.string();
    o.format = Format::json;
    o.steps = 5;
    const auto r = run_figure(1, Panel::right, o);
    REQUIRE(r.files.size() == 1);
    CHECK(fs::path(r.files[0]).extension() == ".json");
    CHECK(slurp(r.files[0]).find("\"tracks\"") != std::string::npos);

    RunOptions p;
    p.output_dir = dir.string();
    p.steps = 5;
    p.plot = true;
    const auto rp = run_figure(1, Panel::right, p);
    CHECK(fs::path(rp.files.back()).filename() == "fig1_plot.py");
}
