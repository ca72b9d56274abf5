#include "eplab/scattering.hpp"

#include "eplab/parallel.hpp"
#include "eplab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eplab {

namespace {

// (e - E + i G/2) / (e - E - i G/2); identically 1 for G = 0.
Complex pole_factor(double e, double energy, double gamma) {
    if (gamma == 0.0) return {1.0, 0.0};
    const Complex num{e - energy, 0.5 * gamma};
    return num / std::conj(num);
}

}  // namespace

void validate(const ResonancePair& r) {
    if (!(r.gamma1 <= 0.0) || !(r.gamma2 <= 0.0)) throw InvalidConfig("resonance widths must be <= 0");
    if (!std::isfinite(r.e1) || !std::isfinite(r.e2)) throw InvalidConfig("resonance energies must be finite");
}

ResonancePair resonance_pair(Complex value1, Complex value2) {
    // eigenvalues of a decaying system can carry a +1e-17 imaginary part at Gamma = 0
    auto width = [](Complex v) { return std::min(0.0, 2.0 * v.imag()); };
    return {value1.real(), width(value1), value2.real(), width(value2)};
}

Complex s_matrix(double e, const ResonancePair& r) {
    return pole_factor(e, r.e1, r.gamma1) * pole_factor(e, r.e2, r.gamma2);
}

Complex s_matrix_double_pole(double e, double e_d, double gamma_d) {
    const Complex f = pole_factor(e, e_d, gamma_d);
    return f * f;
}

CrossSectionGrid cross_section(const std::vector<double>& energies, const ResonancePair& r) {
    validate(r);
    for (std::size_t i = 0; i < energies.size(); ++i) {
        if (!std::isfinite(energies[i])) throw std::invalid_argument("cross_section: non-finite energy");
        if (i > 0 && energies[i] < energies[i - 1]) throw std::invalid_argument("cross_section: energies must be sorted");
    }
    CrossSectionGrid g;
    g.energies = energies;
    g.sigma.reserve(energies.size());
    g.s_values.reserve(energies.size());
    for (double e : energies) {
        const Complex s = s_matrix(e, r);
        g.s_values.push_back(s);
        g.sigma.push_back(sigma_of(s));
    }
    return g;
}

std::vector<double> default_energy_grid(const ResonancePair& r, int points) {
    if (points < 2) throw std::invalid_argument("default_energy_grid: need at least 2 points");
    double width = 3.0 * std::max(std::abs(r.gamma1), std::abs(r.gamma2));
    if (width == 0.0) width = 1.0;
    return uniform_grid(std::min(r.e1, r.e2) - width, std::max(r.e1, r.e2) + width, points);
}

ResonancePair plan_resonances(const SweepPlan& plan, double value) {
    if (plan.config.size() != 2) throw std::invalid_argument("plan_resonances: cross sections need exactly 2 levels");
    const Spectrum s = eig_general(plan_hamiltonian(plan, value));
    return resonance_pair(s.states[0].value, s.states[1].value);
}

CrossSectionSurface cross_section_surface(const SweepPlan& plan, const std::vector<double>& energies) {
    if (plan.param != SweepParam::y) throw InvalidConfig("surface: requires a y-sweep");
    if (plan.steps < 1) throw InvalidConfig("sweep.steps: at least 1 step required");
    validate(plan.config);
    if (!plan.config.has_y_param()) throw InvalidConfig("surface: requires y-param coupling");

    CrossSectionSurface out;
    out.y = plan.steps == 1 ? std::vector<double>{plan.start} : uniform_grid(plan.start, plan.stop, plan.steps);
    out.energies = energies;
    out.sigma.resize(static_cast<Eigen::Index>(out.y.size()), static_cast<Eigen::Index>(energies.size()));
    parallel_for(out.y.size(), [&](std::size_t i) {
        const auto grid = cross_section(energies, plan_resonances(plan, out.y[i]));
        for (std::size_t j = 0; j < energies.size(); ++j)
            out.sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = grid.sigma[j];
    });
    return out;
}

}  // namespace eplab
