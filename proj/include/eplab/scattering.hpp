// scattering.hpp: unitary two-resonance S-matrix and cross sections
//
//   S(E) = prod_i (E - E_i + i Gamma_i / 2) / (E - E_i - i Gamma_i / 2)
//   sigma(E) = |1 - S(E)|^2        (proportionality constant 1, peak height 4)
//
// Gamma_i are full widths, <= 0, taken from the eigenvalues of the effective
// Hamiltonian: E_i = Re, Gamma_i = 2 Im.

#pragma once

#include "eplab/model.hpp"
#include "eplab/sweep.hpp"

#include <vector>

namespace eplab {

struct ResonancePair {
    double e1{0.0};
    double gamma1{0.0};
    double e2{0.0};
    double gamma2{0.0};
};

void validate(const ResonancePair& r);

ResonancePair resonance_pair(Complex value1, Complex value2);

struct CrossSectionGrid {
    std::vector<double> energies;
    std::vector<double> sigma;
    std::vector<Complex> s_values;
};

Complex s_matrix(double e, const ResonancePair& r);

// Coalesced-pole limit E1 = E2 = e_d, Gamma1 = Gamma2 = gamma_d:
// S = ((e - e_d + i gamma_d/2) / (e - e_d - i gamma_d/2))^2.
Complex s_matrix_double_pole(double e, double e_d, double gamma_d);

inline double sigma_of(Complex s) { return std::norm(Complex{1.0, 0.0} - s); }

CrossSectionGrid cross_section(const std::vector<double>& energies, const ResonancePair& r);

// 801 points over [min E - 3 max|Gamma|, max E + 3 max|Gamma|].
std::vector<double> default_energy_grid(const ResonancePair& r, int points = 801);

struct CrossSectionSurface {
    std::vector<double> y;
    std::vector<double> energies;
    Eigen::MatrixXd sigma;  // rows y, columns energies
};

// One cross section per y of a y-sweep plan (two-level systems).
CrossSectionSurface cross_section_surface(const SweepPlan& plan, const std::vector<double>& energies);

// Resonance pair of a two-level system at one plan grid value.
ResonancePair plan_resonances(const SweepPlan& plan, double value);

}  // namespace eplab
