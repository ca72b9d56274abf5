#include "eplab/epfinder.hpp"

#include "eplab/parallel.hpp"
#include "eplab/spectral.hpp"
#include "eplab/sweep.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace eplab {

std::string to_string(EPMethod m) { return m == EPMethod::analytic ? "analytic" : "scan-refined"; }

std::string to_string(Regime r) {
    switch (r) {
        case Regime::level_repulsion: return "level-repulsion";
        case Regime::width_bifurcation: return "width-bifurcation";
        case Regime::boundary: return "boundary";
    }
    return "unknown";
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// x of w = i x; nullopt for a real coupling.
std::optional<double> imaginary_strength(const SystemConfig& config) {
    if (config.size() != 2)
        throw UnsupportedCase("ep_condition_2level: requires exactly 2 levels; use find_eps_scan");
    if (config.levels[0].gamma_half != config.levels[1].gamma_half)
        throw UnsupportedCase("ep_condition_2level: requires equal widths; use find_eps_scan");
    const auto* c = std::get_if<ConstantCoupling>(&config.coupling);
    if (c == nullptr)
        throw UnsupportedCase("ep_condition_2level: requires a constant coupling; use find_eps_scan");
    if (c->omega.imag() == 0.0) return std::nullopt;
    if (c->omega.real() != 0.0)
        throw UnsupportedCase("ep_condition_2level: complex coupling has no analytic EP condition; use find_eps_scan");
    return std::abs(c->omega.imag());
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double flo) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> roots_of(const std::function<double(double)>& f, double lo, double hi, int divisions) {
    std::vector<double> roots;
    const auto grid = uniform_grid(lo, hi, divisions + 1);
    double prev = f(grid[0]);
    if (prev == 0.0) roots.push_back(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = f(grid[i]);
        if (cur == 0.0) {
            roots.push_back(grid[i]);
        } else if (prev != 0.0 && (cur < 0.0) != (prev < 0.0)) {
            roots.push_back(bisect(f, grid[i - 1], grid[i], prev));
        }
        prev = cur;
    }
    return roots;
}

std::vector<double> condition_roots(const SystemConfig& config, double x, double lo, double hi, int divisions) {
    const auto& c1 = config.levels[0].curve;
    const auto& c2 = config.levels[1].curve;
    std::vector<double> roots;
    for (double sign : {1.0, -1.0}) {
        auto f = [&](double a) { return eval_curve(c1, a) - eval_curve(c2, a) - sign * 2.0 * x; };
        const auto r = roots_of(f, lo, hi, divisions);
        roots.insert(roots.end(), r.begin(), r.end());
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double p, double q) { return std::abs(p - q) <= 1e-12 * std::max(1.0, std::abs(p)); }),
                roots.end());
    return roots;
}

}  // namespace

std::vector<double> ep_condition_2level(const SystemConfig& config, double a_lo, double a_hi) {
    if (!(a_lo < a_hi)) throw std::invalid_argument("ep_condition_2level: empty interval");
    const auto x = imaginary_strength(config);
    if (!x) return {};
    return condition_roots(config, *x, a_lo, a_hi, 2000);
}

SystemConfig constant_coupling_mode(const SystemConfig& config) {
    SystemConfig out = config;
    if (const auto* g = std::get_if<GaussianCoupling>(&config.coupling)) {
        out.coupling = ConstantCoupling{g->omega};
    } else if (const auto* y = std::get_if<YParamCoupling>(&config.coupling)) {
        out.coupling = ConstantCoupling{y->omega0 * y_phase(y->y)};
    }
    return out;
}

Regime classify_regime(const SystemConfig& config, double a, double boundary_tol) {
    const auto x = imaginary_strength(config);
    if (!x) return Regime::level_repulsion;  // (e1 - e2)^2 + 4x^2 > 0
    double lo = a - boundary_tol;
    if (std::holds_alternative<SqrtCurve>(config.levels[0].curve) ||
        std::holds_alternative<SqrtCurve>(config.levels[1].curve))
        lo = std::max(lo, 0.0);
    if (!condition_roots(config, *x, lo, a + boundary_tol, 4).empty()) return Regime::boundary;
    const double d = eval_curve(config.levels[0].curve, a) - eval_curve(config.levels[1].curve, a);
    return d * d > 4.0 * *x * *x ? Regime::level_repulsion : Regime::width_bifurcation;
}

// ------------------------------------ scan ----------------------------------

double min_gap(const CMatrix& h) {
    if (h.rows() == 2) {
        // d^2 + 4 h01 h10 = (d - s)(d + s): the vanishing factor keeps full precision at an EP
        const Complex d = h(0, 0) - h(1, 1);
        const Complex s = 2.0 * std::sqrt(-(h(0, 1) * h(1, 0)));
        return std::sqrt(std::abs(d - s) * std::abs(d + s));
    }
    const Complex shift = h.diagonal().mean();
    CMatrix shifted = h;
    shifted.diagonal().array() -= shift;
    Eigen::ComplexEigenSolver<CMatrix> solver(shifted, false);
    if (solver.info() != Eigen::Success) throw ConvergenceError("min_gap: eigensolver did not converge", h);
    const auto& v = solver.eigenvalues();
    double g = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        for (Eigen::Index j = i + 1; j < v.size(); ++j) g = std::min(g, std::abs(v(i) - v(j)));
    return g;
}

CMatrix hamiltonian_at(const SystemConfig& config, double a, std::optional<double> y) {
    if (y && config.has_y_param()) return build_hamiltonian(config.with_y(*y), a);
    return build_hamiltonian(config, a);
}

EPCandidate evaluate_candidate(const SystemConfig& config, double a, std::optional<double> y, EPMethod method) {
    const CMatrix h = hamiltonian_at(config, a, y);
    const Spectrum s = eig_general(h);
    EPCandidate c;
    c.a_star = a;
    c.y_star = y;
    c.gap = min_gap(h);
    c.min_rigidity = s.min_rigidity();
    c.max_mixing = s.max_mixing();
    c.method = method;
    return c;
}

namespace {

struct Point {
    double a;
    double y;
    double g;
};

// Golden-section search for the minimum of f on [lo, hi].
Point golden_1d(const std::function<double(double)>& f, double lo, double hi, Point best) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - invphi * (hi - lo);
    double d = lo + invphi * (hi - lo);
    double fc = f(c), fd = f(d);
    auto keep = [&](double x, double fx) {
        if (fx < best.g) best = {x, best.y, fx};
    };
    keep(c, fc);
    keep(d, fd);
    for (int it = 0; it < 400 && best.g > 0.0; ++it) {
        if (hi - lo <= 4.0 * kEps * std::max(1.0, std::abs(lo) + std::abs(hi))) break;
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - invphi * (hi - lo);
            fc = f(c);
            keep(c, fc);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + invphi * (hi - lo);
            fd = f(d);
            keep(d, fd);
        }
    }
    return best;
}

// Coordinate descent with shrinking steps inside the box.
Point descent_2d(const std::function<double(double, double)>& f, Point p, double ha, double hy, Range ar, Range yr) {
    for (int it = 0; it < 20000 && p.g > 0.0; ++it) {
        const bool a_done = ha <= kEps * std::max(1.0, std::abs(p.a));
        const bool y_done = hy <= kEps;
        if (a_done && y_done) break;
        Point next = p;
        for (double s : {-1.0, 1.0}) {
            if (!a_done) {
                const double a = std::clamp(p.a + s * ha, ar.lo, ar.hi);
                const double g = f(a, p.y);
                if (g < next.g) next = {a, p.y, g};
            }
            if (!y_done) {
                const double y = std::clamp(p.y + s * hy, yr.lo, yr.hi);
                const double g = f(p.a, y);
                if (g < next.g) next = {p.a, y, g};
            }
        }
        if (next.g < p.g) {
            p = next;
        } else {
            ha *= 0.5;
            hy *= 0.5;
        }
    }
    return p;
}

// The best double near p.a: the gap floor is set by how close a representable a gets.
Point polish_ulps(const std::function<double(double, double)>& f, Point p, Range ar) {
    for (double dir : {-1.0, 1.0}) {
        double a = p.a;
        for (int k = 0; k < 16; ++k) {
            a = std::nextafter(a, dir * std::numeric_limits<double>::infinity());
            if (a < ar.lo || a > ar.hi) break;
            const double g = f(a, p.y);
            if (g < p.g) p = {a, p.y, g};
        }
    }
    return p;
}

}  // namespace

std::vector<EPCandidate> find_eps_scan(const SystemConfig& config, const ScanOptions& options) {
    validate(config);
    if (!(options.a.lo < options.a.hi)) throw std::invalid_argument("find_eps_scan: empty a range");
    if (options.points < 3) throw std::invalid_argument("find_eps_scan: need at least 3 points per axis");
    const bool two_d = options.y.has_value() && config.has_y_param();
    if (two_d && !(options.y->lo < options.y->hi && options.y->lo >= 0.0 && options.y->hi <= 1.0))
        throw std::invalid_argument("find_eps_scan: y range must be a non-empty subrange of [0, 1]");

    const auto ag = uniform_grid(options.a.lo, options.a.hi, options.points);
    const auto yg = two_d ? uniform_grid(options.y->lo, options.y->hi, options.points) : std::vector<double>{0.0};
    const std::size_t na = ag.size(), ny = yg.size();

    auto gap = [&](double a, double y) {
        return min_gap(hamiltonian_at(config, a, two_d ? std::optional<double>(y) : std::nullopt));
    };

    std::vector<double> g(na * ny);
    parallel_for(na * ny, [&](std::size_t idx) { g[idx] = gap(ag[idx / ny], yg[idx % ny]); });
    auto at = [&](std::ptrdiff_t i, std::ptrdiff_t j) { return g[static_cast<std::size_t>(i) * ny + static_cast<std::size_t>(j)]; };

    // local minima; ties resolved toward the earliest index
    std::vector<std::pair<std::size_t, std::size_t>> minima;
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const double v = at(static_cast<std::ptrdiff_t>(i), static_cast<std::ptrdiff_t>(j));
            if (!(v < options.coarse_threshold)) continue;
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di) {
                for (int dj = -1; dj <= 1 && is_min; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const auto ii = static_cast<std::ptrdiff_t>(i) + di;
                    const auto jj = static_cast<std::ptrdiff_t>(j) + dj;
                    if (ii < 0 || jj < 0 || ii >= static_cast<std::ptrdiff_t>(na) || jj >= static_cast<std::ptrdiff_t>(ny))
                        continue;
                    const double w = at(ii, jj);
                    const bool earlier = di < 0 || (di == 0 && dj < 0);
                    if (earlier ? !(v < w) : !(v <= w)) is_min = false;
                }
            }
            if (is_min) minima.emplace_back(i, j);
        }
    }

    std::vector<EPCandidate> found;
    for (const auto& [i, j] : minima) {
        Point start{ag[i], yg[j], at(static_cast<std::ptrdiff_t>(i), static_cast<std::ptrdiff_t>(j))};
        Point best;
        if (!two_d) {
            const double lo = ag[i == 0 ? 0 : i - 1];
            const double hi = ag[std::min(na - 1, i + 1)];
            best = golden_1d([&](double a) { return gap(a, 0.0); }, lo, hi, start);
        } else {
            const double ha = ag[1] - ag[0];
            const double hy = yg[1] - yg[0];
            best = descent_2d(gap, start, ha, hy, options.a, *options.y);
        }
        best = polish_ulps(gap, best, options.a);
        auto c = evaluate_candidate(config, best.a, two_d ? std::optional<double>(best.y) : std::nullopt,
                                    EPMethod::scan_refined);
        if (c.gap < options.gap_tol && c.min_rigidity < options.rigidity_tol) found.push_back(c);
    }

    std::sort(found.begin(), found.end(), [](const EPCandidate& p, const EPCandidate& q) {
        if (p.a_star != q.a_star) return p.a_star < q.a_star;
        return p.y_star.value_or(0.0) < q.y_star.value_or(0.0);
    });
    std::vector<EPCandidate> merged;
    for (const auto& c : found) {
        auto near = std::find_if(merged.begin(), merged.end(), [&](const EPCandidate& m) {
            const double da = m.a_star - c.a_star;
            const double dy = m.y_star.value_or(0.0) - c.y_star.value_or(0.0);
            return std::hypot(da, dy) < options.merge_radius;
        });
        if (near == merged.end())
            merged.push_back(c);
        else if (c.gap < near->gap)
            *near = c;
    }
    return merged;
}

}  // namespace eplab
