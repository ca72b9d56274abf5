#include "eplab/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace eplab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite(Complex z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double interpolate(const TabulatedCurve& t, double a) {
    const auto& k = t.knots;
    if (k.empty()) throw DomainError("tabulated curve has no knots");
    if (a <= k.front().first) return k.front().second;
    if (a >= k.back().first) return k.back().second;
    auto hi = std::upper_bound(k.begin(), k.end(), a,
                               [](double v, const auto& p) { return v < p.first; });
    auto lo = hi - 1;
    const double w = (a - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
}

}  // namespace

double eval_curve(const EnergyCurve& curve, double a) {
    return std::visit(
        overloaded{
            [a](const LinearCurve& c) { return c.c0 + c.c1 * a; },
            [a](const SqrtCurve& c) {
                if (a < 0.0)
                    throw DomainError("sqrt energy curve evaluated at a = " + std::to_string(a) +
                                      " < 0");
                return c.c * std::sqrt(a);
            },
            [a](const TabulatedCurve& c) { return interpolate(c, a); },
        },
        curve);
}

Complex eval_epsilon(const LevelSpec& level, double a) {
    return {eval_curve(level.curve, a), level.gamma_half};
}

Complex y_phase(double y) { return {std::sqrt(1.0 - y * y), y}; }

Complex eval_coupling(const CouplingLaw& law, Complex eps_i, Complex eps_k) {
    return std::visit(
        overloaded{
            [](const ConstantCoupling& c) { return c.omega; },
            [&](const GaussianCoupling& c) {
                const Complex d = eps_i - eps_k;
                return c.omega * std::exp(-(d * d));
            },
            [&](const YParamCoupling& c) {
                const Complex d = eps_k - eps_i;
                return c.omega0 * std::exp(-(d * d)) * y_phase(c.y);
            },
        },
        law);
}

SystemConfig SystemConfig::with_y(double y) const {
    auto* law = std::get_if<YParamCoupling>(&coupling);
    if (law == nullptr) throw InvalidConfig("coupling: y override requires y-param coupling");
    SystemConfig out = *this;
    std::get<YParamCoupling>(out.coupling).y = y;
    return out;
}

Topology default_topology(std::size_t levels) noexcept {
    return levels == 2 ? Topology::pair : Topology::star;
}

std::string to_string(Topology t) { return t == Topology::pair ? "pair" : "star"; }

void validate(const SystemConfig& config) {
    const std::size_t n = config.size();
    if (n < 2) throw InvalidConfig("levels: at least 2 levels required");
    if (config.topology == Topology::pair && n != 2)
        throw InvalidConfig("topology: pair topology requires exactly 2 levels");
    if (config.topology == Topology::star && n < 3)
        throw InvalidConfig("topology: star topology requires at least 3 levels");
    for (std::size_t i = 0; i < n; ++i) {
        const auto& lv = config.levels[i];
        const std::string path = "levels." + std::to_string(i + 1);
        if (!(lv.gamma_half <= 0.0)) throw InvalidConfig(path + ".gamma_half: gamma_half must be <= 0");
        if (const auto* t = std::get_if<TabulatedCurve>(&lv.curve)) {
            if (t->knots.empty()) throw InvalidConfig(path + ".curve: tabulated curve needs knots");
            for (std::size_t k = 1; k < t->knots.size(); ++k)
                if (!(t->knots[k].first > t->knots[k - 1].first))
                    throw InvalidConfig(path + ".curve: tabulated knots must be strictly increasing");
        }
    }
    if (const auto* y = std::get_if<YParamCoupling>(&config.coupling)) {
        if (!(y->omega0 > 0.0)) throw InvalidConfig("coupling.omega0: must be > 0");
        if (!(y->y >= 0.0 && y->y <= 1.0)) throw InvalidConfig("coupling.y: must lie in [0, 1]");
    }
}

std::vector<Complex> bare_energies(const SystemConfig& config, double a) {
    std::vector<Complex> eps;
    eps.reserve(config.size());
    for (const auto& lv : config.levels) eps.push_back(eval_epsilon(lv, a));
    return eps;
}

CMatrix build_hamiltonian(const SystemConfig& config, double a) {
    const auto eps = bare_energies(config, a);
    const auto n = static_cast<Eigen::Index>(eps.size());
    CMatrix h = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) h(i, i) = eps[static_cast<std::size_t>(i)];

    auto couple = [&](Eigen::Index i, Eigen::Index k) {
        const Complex w =
            eval_coupling(config.coupling, eps[static_cast<std::size_t>(i)], eps[static_cast<std::size_t>(k)]);
        if (!finite(w)) throw DomainError("non-finite coupling at a = " + std::to_string(a));
        h(i, k) = w;
        h(k, i) = w;
    };

    if (config.topology == Topology::pair) {
        couple(0, 1);
    } else {
        // only the last level couples: omega_iN = omega_Ni
        for (Eigen::Index i = 0; i + 1 < n; ++i) couple(i, n - 1);
    }
    return h;
}

}  // namespace eplab
