#include "eplab/config.hpp"

#include "eplab/output.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace eplab {

std::string to_string(Action a) {
    switch (a) {
        case Action::sweep: return "sweep";
        case Action::ep_find: return "ep-find";
        case Action::cross_section: return "cross-section";
        case Action::surface: return "surface";
        case Action::figure: return "figure";
    }
    return "unknown";
}

std::string to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw ConfigError("unknown format '" + s + "' (expected csv or json)", 0, "output.format");
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string t; is >> t;) out.push_back(t);
    return out;
}

struct Entry {
    std::string value;
    int line;
};

// section -> key -> entry
using Table = std::map<std::string, std::map<std::string, Entry>>;

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"levels", {}},
        {"coupling", {"mode", "omega", "omega0", "y", "topology"}},
        {"sweep", {"param", "start", "stop", "steps", "fixed"}},
        {"xsec", {"a", "e_start", "e_stop", "points"}},
        {"epfind", {"a_start", "a_stop", "y_start", "y_stop", "scan_y", "points"}},
        {"output", {"action", "format", "name"}},
    };
    return keys;
}

Table tokenize(const std::string& text) {
    Table t;
    std::istringstream is(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("line " + std::to_string(line) + ": unterminated section header", line, "");
            section = trim(std::string_view(s).substr(1, s.size() - 2));
            if (!known_keys().count(section))
                throw ConfigError("line " + std::to_string(line) + ": unknown section [" + section + "]", line, section);
            t[section];
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'", line, "");
        if (section.empty())
            throw ConfigError("line " + std::to_string(line) + ": key outside of any section", line, "");
        const std::string key = trim(std::string_view(s).substr(0, eq));
        const std::string value = trim(std::string_view(s).substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line) + ": empty key", line, "");
        const std::string path = section + "." + key;
        if (section == "levels") {
            const auto dot = key.find('.');
            const std::string field = dot == std::string::npos ? "" : key.substr(dot + 1);
            const std::string idx = dot == std::string::npos ? key : key.substr(0, dot);
            const bool numeric = !idx.empty() && std::all_of(idx.begin(), idx.end(), ::isdigit);
            if (!numeric || (field != "curve" && field != "gamma_half"))
                throw ConfigError("line " + std::to_string(line) + ": unknown key '" + path + "'", line, path);
        } else if (!known_keys().at(section).count(key)) {
            throw ConfigError("line " + std::to_string(line) + ": unknown key '" + path + "'", line, path);
        }
        if (t[section].count(key))
            throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + path + "'", line, path);
        t[section][key] = {value, line};
    }
    return t;
}

double parse_double(const std::string& s, const std::string& path, int line) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw ConfigError("line " + std::to_string(line) + ": " + path + ": expected a number, got '" + s + "'", line, path);
    return v;
}

int parse_int(const std::string& s, const std::string& path, int line) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError("line " + std::to_string(line) + ": " + path + ": expected an integer, got '" + s + "'", line, path);
    return v;
}

bool parse_bool(const std::string& s, const std::string& path, int line) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw ConfigError("line " + std::to_string(line) + ": " + path + ": expected true or false", line, path);
}

EnergyCurve parse_curve(const std::string& s, const std::string& path, int line) {
    const auto tok = split_ws(s);
    if (tok.empty()) throw ConfigError("line " + std::to_string(line) + ": " + path + ": empty curve", line, path);
    auto bad = [&](const std::string& why) {
        return ConfigError("line " + std::to_string(line) + ": " + path + ": " + why, line, path);
    };
    if (tok[0] == "linear") {
        if (tok.size() != 3) throw bad("linear curve takes 'linear c0 c1'");
        return LinearCurve{parse_double(tok[1], path, line), parse_double(tok[2], path, line)};
    }
    if (tok[0] == "sqrt") {
        if (tok.size() != 2) throw bad("sqrt curve takes 'sqrt c'");
        return SqrtCurve{parse_double(tok[1], path, line)};
    }
    if (tok[0] == "tabulated") {
        TabulatedCurve t;
        for (std::size_t i = 1; i < tok.size(); ++i) {
            const auto colon = tok[i].find(':');
            if (colon == std::string::npos) throw bad("tabulated knots are written a:e");
            t.knots.emplace_back(parse_double(tok[i].substr(0, colon), path, line),
                                 parse_double(tok[i].substr(colon + 1), path, line));
        }
        if (t.knots.empty()) throw bad("tabulated curve needs at least one knot");
        return t;
    }
    throw bad("unknown curve kind '" + tok[0] + "' (expected linear, sqrt or tabulated)");
}

Complex parse_complex(const std::string& s, const std::string& path, int line) {
    const auto tok = split_ws(s);
    if (tok.size() != 2)
        throw ConfigError("line " + std::to_string(line) + ": " + path + ": expected 're im'", line, path);
    return {parse_double(tok[0], path, line), parse_double(tok[1], path, line)};
}

ConfigError semantic(const std::exception& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    return ConfigError(msg, 0, colon == std::string::npos ? "" : msg.substr(0, colon));
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    const Table t = tokenize(text);
    RunConfig rc;
    SystemConfig& sys = rc.plan.config;

    auto find = [&](const std::string& sec, const std::string& key) -> const Entry* {
        auto s = t.find(sec);
        if (s == t.end()) return nullptr;
        auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    };
    auto num = [&](const std::string& sec, const std::string& key) -> std::optional<double> {
        const Entry* e = find(sec, key);
        if (!e) return std::nullopt;
        return parse_double(e->value, sec + "." + key, e->line);
    };
    auto integer = [&](const std::string& sec, const std::string& key) -> std::optional<int> {
        const Entry* e = find(sec, key);
        if (!e) return std::nullopt;
        return parse_int(e->value, sec + "." + key, e->line);
    };

    // levels
    std::map<int, std::pair<const Entry*, const Entry*>> levels;
    if (auto s = t.find("levels"); s != t.end()) {
        for (const auto& [key, entry] : s->second) {
            const auto dot = key.find('.');
            const int idx = parse_int(key.substr(0, dot), "levels." + key, entry.line);
            auto& slot = levels[idx];
            (key.substr(dot + 1) == "curve" ? slot.first : slot.second) = &entry;
        }
    }
    int expected = 1;
    for (const auto& [idx, slot] : levels) {
        const std::string path = "levels." + std::to_string(idx);
        if (idx != expected) throw ConfigError(path + ": level indices must run 1..N without gaps", 0, path);
        ++expected;
        if (!slot.first) throw ConfigError(path + ".curve: missing", 0, path + ".curve");
        if (!slot.second) throw ConfigError(path + ".gamma_half: missing", 0, path + ".gamma_half");
        LevelSpec lv;
        lv.curve = parse_curve(slot.first->value, path + ".curve", slot.first->line);
        lv.gamma_half = parse_double(slot.second->value, path + ".gamma_half", slot.second->line);
        sys.levels.push_back(std::move(lv));
    }
    if (sys.levels.size() < 2) throw ConfigError("levels: at least 2 levels required", 0, "levels");

    // coupling
    const Entry* mode = find("coupling", "mode");
    if (!mode) throw ConfigError("coupling.mode: missing", 0, "coupling.mode");
    auto require = [&](const std::string& key) {
        const Entry* e = find("coupling", key);
        if (!e) throw ConfigError("coupling." + key + ": required for mode " + mode->value, 0, "coupling." + key);
        return e;
    };
    auto forbid = [&](const std::string& key) {
        if (const Entry* e = find("coupling", key))
            throw ConfigError("line " + std::to_string(e->line) + ": coupling." + key + ": not used by mode " + mode->value,
                              e->line, "coupling." + key);
    };
    if (mode->value == "constant" || mode->value == "gaussian") {
        forbid("omega0");
        forbid("y");
        const Entry* w = require("omega");
        const Complex omega = parse_complex(w->value, "coupling.omega", w->line);
        if (mode->value == "constant")
            sys.coupling = ConstantCoupling{omega};
        else
            sys.coupling = GaussianCoupling{omega};
    } else if (mode->value == "y-param") {
        forbid("omega");
        const Entry* w0 = require("omega0");
        const Entry* y = require("y");
        sys.coupling = YParamCoupling{parse_double(w0->value, "coupling.omega0", w0->line),
                                      parse_double(y->value, "coupling.y", y->line)};
    } else {
        throw ConfigError("line " + std::to_string(mode->line) + ": coupling.mode: unknown mode '" + mode->value + "'",
                          mode->line, "coupling.mode");
    }
    sys.topology = default_topology(sys.size());
    if (const Entry* topo = find("coupling", "topology")) {
        if (topo->value == "pair")
            sys.topology = Topology::pair;
        else if (topo->value == "star")
            sys.topology = Topology::star;
        else
            throw ConfigError("line " + std::to_string(topo->line) + ": coupling.topology: expected pair or star",
                              topo->line, "coupling.topology");
    }
    try {
        validate(sys);
    } catch (const std::exception& e) {
        throw semantic(e);
    }

    // sweep
    auto& plan = rc.plan;
    if (const Entry* p = find("sweep", "param")) {
        if (p->value == "a")
            plan.param = SweepParam::a;
        else if (p->value == "y")
            plan.param = SweepParam::y;
        else
            throw ConfigError("line " + std::to_string(p->line) + ": sweep.param: expected a or y", p->line, "sweep.param");
    }
    if (plan.param == SweepParam::y) {
        plan.start = 0.0;
        plan.stop = 1.0;
        plan.steps = 500;
    }
    plan.start = num("sweep", "start").value_or(plan.start);
    plan.stop = num("sweep", "stop").value_or(plan.stop);
    plan.steps = integer("sweep", "steps").value_or(plan.steps);
    if (auto fixed = num("sweep", "fixed")) {
        plan.fixed_other = *fixed;
    } else if (plan.param == SweepParam::y) {
        throw ConfigError("sweep.fixed: required for y-sweeps (the value of a)", 0, "sweep.fixed");
    } else if (const auto* y = std::get_if<YParamCoupling>(&sys.coupling)) {
        plan.fixed_other = y->y;
    }
    if (plan.param == SweepParam::a && sys.has_y_param() && !(plan.fixed_other >= 0.0 && plan.fixed_other <= 1.0))
        throw ConfigError("sweep.fixed: y must lie in [0, 1]", 0, "sweep.fixed");
    try {
        validate(plan);
    } catch (const std::exception& e) {
        throw semantic(e);
    }

    // xsec
    rc.xsec_a = num("xsec", "a");
    rc.energies.start = num("xsec", "e_start");
    rc.energies.stop = num("xsec", "e_stop");
    rc.energies.points = integer("xsec", "points").value_or(rc.energies.points);
    if (rc.energies.start.has_value() != rc.energies.stop.has_value())
        throw ConfigError("xsec.e_start: give both e_start and e_stop or neither", 0, "xsec.e_start");
    if (rc.energies.start && !(*rc.energies.start < *rc.energies.stop))
        throw ConfigError("xsec.e_start: must be < e_stop", 0, "xsec.e_start");
    if (rc.energies.points < 2) throw ConfigError("xsec.points: at least 2 points required", 0, "xsec.points");

    // epfind
    auto a_lo = num("epfind", "a_start"), a_hi = num("epfind", "a_stop");
    if (a_lo.has_value() != a_hi.has_value())
        throw ConfigError("epfind.a_start: give both a_start and a_stop or neither", 0, "epfind.a_start");
    if (a_lo) rc.epfind.a = Range{*a_lo, *a_hi};
    auto y_lo = num("epfind", "y_start"), y_hi = num("epfind", "y_stop");
    if (y_lo.has_value() != y_hi.has_value())
        throw ConfigError("epfind.y_start: give both y_start and y_stop or neither", 0, "epfind.y_start");
    if (y_lo) rc.epfind.y = Range{*y_lo, *y_hi};
    if (const Entry* e = find("epfind", "scan_y")) rc.epfind.scan_y = parse_bool(e->value, "epfind.scan_y", e->line);
    rc.epfind.points = integer("epfind", "points").value_or(rc.epfind.points);
    if (rc.epfind.points < 3) throw ConfigError("epfind.points: at least 3 points required", 0, "epfind.points");

    // output
    if (const Entry* e = find("output", "action")) {
        const std::string& v = e->value;
        if (v == "sweep")
            rc.action = Action::sweep;
        else if (v == "ep-find")
            rc.action = Action::ep_find;
        else if (v == "cross-section")
            rc.action = Action::cross_section;
        else if (v == "surface")
            rc.action = Action::surface;
        else
            throw ConfigError("line " + std::to_string(e->line) + ": output.action: unknown action '" + v + "'", e->line,
                              "output.action");
    }
    if (const Entry* e = find("output", "format")) {
        try {
            rc.format = parse_format(e->value);
        } catch (const ConfigError& err) {
            throw ConfigError("line " + std::to_string(e->line) + ": " + err.what(), e->line, "output.format");
        }
    }
    if (const Entry* e = find("output", "name")) {
        if (e->value.empty() || e->value.find_first_of("/\\") != std::string::npos)
            throw ConfigError("line " + std::to_string(e->line) + ": output.name: must be a plain file stem", e->line,
                              "output.name");
        rc.name = e->value;
    }
    if (rc.action == Action::surface && plan.param != SweepParam::y)
        throw ConfigError("sweep.param: surface action requires a y-sweep", 0, "sweep.param");
    return rc;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot read config file " + path, 0, "");
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& rc) {
    const auto& sys = rc.system();
    const auto f = format_number;
    std::ostringstream os;
    os << "[levels]\n";
    for (std::size_t i = 0; i < sys.levels.size(); ++i) {
        const auto& lv = sys.levels[i];
        os << (i + 1) << ".curve = ";
        if (const auto* l = std::get_if<LinearCurve>(&lv.curve)) {
            os << "linear " << f(l->c0) << ' ' << f(l->c1);
        } else if (const auto* s = std::get_if<SqrtCurve>(&lv.curve)) {
            os << "sqrt " << f(s->c);
        } else {
            os << "tabulated";
            for (const auto& [a, e] : std::get<TabulatedCurve>(lv.curve).knots) os << ' ' << f(a) << ':' << f(e);
        }
        os << '\n' << (i + 1) << ".gamma_half = " << f(lv.gamma_half) << '\n';
    }

    os << "\n[coupling]\n";
    if (const auto* c = std::get_if<ConstantCoupling>(&sys.coupling)) {
        os << "mode = constant\nomega = " << f(c->omega.real()) << ' ' << f(c->omega.imag()) << '\n';
    } else if (const auto* g = std::get_if<GaussianCoupling>(&sys.coupling)) {
        os << "mode = gaussian\nomega = " << f(g->omega.real()) << ' ' << f(g->omega.imag()) << '\n';
    } else {
        const auto& y = std::get<YParamCoupling>(sys.coupling);
        os << "mode = y-param\nomega0 = " << f(y.omega0) << "\ny = " << f(y.y) << '\n';
    }
    os << "topology = " << to_string(sys.topology) << '\n';

    const auto& p = rc.plan;
    os << "\n[sweep]\nparam = " << to_string(p.param) << "\nstart = " << f(p.start) << "\nstop = " << f(p.stop)
       << "\nsteps = " << p.steps << '\n';
    if (p.param == SweepParam::y || sys.has_y_param()) os << "fixed = " << f(p.fixed_other) << '\n';

    if (rc.xsec_a || rc.energies.start || rc.energies != EnergyGridSpec{}) {
        os << "\n[xsec]\n";
        if (rc.xsec_a) os << "a = " << f(*rc.xsec_a) << '\n';
        if (rc.energies.start) os << "e_start = " << f(*rc.energies.start) << "\ne_stop = " << f(*rc.energies.stop) << '\n';
        os << "points = " << rc.energies.points << '\n';
    }
    if (rc.epfind != EpFindSpec{}) {
        os << "\n[epfind]\n";
        if (rc.epfind.a) os << "a_start = " << f(rc.epfind.a->lo) << "\na_stop = " << f(rc.epfind.a->hi) << '\n';
        if (rc.epfind.y) os << "y_start = " << f(rc.epfind.y->lo) << "\ny_stop = " << f(rc.epfind.y->hi) << '\n';
        os << "scan_y = " << (rc.epfind.scan_y ? "true" : "false") << "\npoints = " << rc.epfind.points << '\n';
    }
    os << "\n[output]\naction = " << to_string(rc.action == Action::figure ? Action::sweep : rc.action)
       << "\nformat = " << to_string(rc.format) << "\nname = " << rc.name << '\n';
    return os.str();
}

bool equivalent(const RunConfig& lhs, const RunConfig& rhs) {
    return lhs.plan == rhs.plan && lhs.action == rhs.action && lhs.xsec_a == rhs.xsec_a &&
           lhs.energies == rhs.energies && lhs.epfind == rhs.epfind && lhs.format == rhs.format &&
           lhs.name == rhs.name;
}

}  // namespace eplab
