#include "eplab/output.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace eplab {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

using nlohmann::json;

json number(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);  // JSON has no inf/nan literals
}

}  // namespace

void write_csv(std::ostream& os, const TrajectorySet& t) {
    const std::size_t n = t.size();
    os << to_string(t.param) << ",state,E,gamma_half,rigidity,a_norm";
    for (std::size_t j = 1; j <= n; ++j) os << ",b_sq_" << j;
    os << '\n';
    for (std::size_t i = 0; i < t.points(); ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const auto& s = t.tracks[k][i];
            os << format_number(t.grid[i]) << ',' << (k + 1) << ',' << format_number(s.energy()) << ','
               << format_number(s.gamma_half()) << ',' << format_number(s.rigidity) << ','
               << format_number(s.a_norm);
            for (Eigen::Index j = 0; j < s.mixing_sq.size(); ++j) os << ',' << format_number(s.mixing_sq(j));
            os << '\n';
        }
    }
}

void write_csv(std::ostream& os, const CrossSectionGrid& g) {
    os << "E,sigma,re_S,im_S\n";
    for (std::size_t i = 0; i < g.energies.size(); ++i)
        os << format_number(g.energies[i]) << ',' << format_number(g.sigma[i]) << ','
           << format_number(g.s_values[i].real()) << ',' << format_number(g.s_values[i].imag()) << '\n';
}

void write_csv(std::ostream& os, const CrossSectionSurface& s) {
    os << "y,E,sigma\n";
    for (std::size_t i = 0; i < s.y.size(); ++i)
        for (std::size_t j = 0; j < s.energies.size(); ++j)
            os << format_number(s.y[i]) << ',' << format_number(s.energies[j]) << ','
               << format_number(s.sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << '\n';
}

void write_csv(std::ostream& os, const std::vector<EPCandidate>& eps) {
    os << "method,a,y,gap,min_rigidity,max_mixing\n";
    for (const auto& c : eps)
        os << to_string(c.method) << ',' << format_number(c.a_star) << ','
           << (c.y_star ? format_number(*c.y_star) : std::string{}) << ',' << format_number(c.gap) << ','
           << format_number(c.min_rigidity) << ',' << format_number(c.max_mixing) << '\n';
}

void write_json(std::ostream& os, const TrajectorySet& t) {
    json j;
    j["param"] = to_string(t.param);
    j["grid"] = t.grid;
    json tracks = json::array();
    for (std::size_t k = 0; k < t.size(); ++k) {
        json tr;
        tr["state"] = k + 1;
        tr["home_level"] = t.home_level[k] + 1;
        json E = json::array(), G = json::array(), R = json::array(), A = json::array(), B = json::array();
        for (const auto& s : t.tracks[k]) {
            E.push_back(number(s.energy()));
            G.push_back(number(s.gamma_half()));
            R.push_back(number(s.rigidity));
            A.push_back(number(s.a_norm));
            json row = json::array();
            for (Eigen::Index m = 0; m < s.mixing_sq.size(); ++m) row.push_back(number(s.mixing_sq(m)));
            B.push_back(std::move(row));
        }
        tr["E"] = std::move(E);
        tr["gamma_half"] = std::move(G);
        tr["rigidity"] = std::move(R);
        tr["a_norm"] = std::move(A);
        tr["b_sq"] = std::move(B);
        tracks.push_back(std::move(tr));
    }
    j["tracks"] = std::move(tracks);
    json steps = json::array();
    for (std::size_t i = 0; i < t.pairing.size(); ++i) {
        const auto& p = t.pairing[i];
        if (!p.fallback && !p.coalesced) continue;
        steps.push_back({{"step", i}, {"fallback", p.fallback}, {"tie_broken", p.tie_broken}, {"coalesced", p.coalesced}});
    }
    j["flagged_steps"] = std::move(steps);
    os << j.dump(1) << '\n';
}

void write_json(std::ostream& os, const CrossSectionGrid& g) {
    json j;
    j["E"] = g.energies;
    json sigma = json::array(), re = json::array(), im = json::array();
    for (std::size_t i = 0; i < g.energies.size(); ++i) {
        sigma.push_back(number(g.sigma[i]));
        re.push_back(number(g.s_values[i].real()));
        im.push_back(number(g.s_values[i].imag()));
    }
    j["sigma"] = std::move(sigma);
    j["re_S"] = std::move(re);
    j["im_S"] = std::move(im);
    os << j.dump(1) << '\n';
}

void write_json(std::ostream& os, const CrossSectionSurface& s) {
    json j;
    j["y"] = s.y;
    j["E"] = s.energies;
    json rows = json::array();
    for (Eigen::Index i = 0; i < s.sigma.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < s.sigma.cols(); ++k) row.push_back(number(s.sigma(i, k)));
        rows.push_back(std::move(row));
    }
    j["sigma"] = std::move(rows);
    os << j.dump(1) << '\n';
}

void write_json(std::ostream& os, const std::vector<EPCandidate>& eps) {
    json arr = json::array();
    for (const auto& c : eps) {
        json e{{"method", to_string(c.method)}, {"a", number(c.a_star)}, {"gap", number(c.gap)},
               {"min_rigidity", number(c.min_rigidity)}, {"max_mixing", number(c.max_mixing)}};
        e["y"] = c.y_star ? json(number(*c.y_star)) : json(nullptr);
        arr.push_back(std::move(e));
    }
    os << arr.dump(1) << '\n';
}

template <class Data>
void emit(const Data& data, const std::string& path, bool json_format) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    if (json_format)
        write_json(os, data);
    else
        write_csv(os, data);
    os.flush();
    if (!os) throw std::runtime_error("write failed: " + path);
}

template void emit(const TrajectorySet&, const std::string&, bool);
template void emit(const CrossSectionGrid&, const std::string&, bool);
template void emit(const CrossSectionSurface&, const std::string&, bool);
template void emit(const std::vector<EPCandidate>&, const std::string&, bool);

}  // namespace eplab
