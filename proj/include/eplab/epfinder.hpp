// epfinder.hpp: exceptional-point location and regime classification
//
// Two routes:
//  * analytic, for two levels with equal widths and a constant imaginary
//    coupling w = i x, where Z = 0 reduces to e1(a) - e2(a) = +-2x;
//  * numeric, a coarse scan of the smallest eigenvalue gap followed by
//    derivative-free refinement, valid for any configuration.
// Near an EP the gap scales as sqrt(distance). With a stored as a double the
// best attainable gap is about sqrt(ulp(a) * |dD/da| * |e1 - e2|), which
// reaches 1e-8 to 3e-8 for the figure presets; gap_tol sits just above that.

#pragma once

#include "eplab/model.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace eplab {

struct UnsupportedCase : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class EPMethod { analytic, scan_refined };

std::string to_string(EPMethod m);

struct EPCandidate {
    double a_star{0.0};
    std::optional<double> y_star;
    double gap{0.0};           // |E_1 - E_2| of the closest pair, complex energies
    double min_rigidity{1.0};
    double max_mixing{0.0};    // max |b_ij|^2 at the candidate
    EPMethod method{EPMethod::scan_refined};
};

enum class Regime { level_repulsion, width_bifurcation, boundary };

std::string to_string(Regime r);

// Roots of e1(a) - e2(a) = +-2x in [a_lo, a_hi], ascending. Empty for a real
// constant coupling. Throws UnsupportedCase for anything other than N = 2,
// equal widths and a constant coupling.
std::vector<double> ep_condition_2level(const SystemConfig& config, double a_lo, double a_hi);

// The same system with a Gaussian or y-param law replaced by its constant
// base strength (omega, or omega0 * (sqrt(1 - y^2) + i y)).
SystemConfig constant_coupling_mode(const SystemConfig& config);

// Boundary when an EP root lies within boundary_tol (parameter units) of a.
Regime classify_regime(const SystemConfig& config, double a, double boundary_tol = 1e-4);

struct Range {
    double lo{0.0};
    double hi{0.0};
    bool operator==(const Range&) const = default;
};

struct ScanOptions {
    Range a{0.01, 2.0};
    std::optional<Range> y;   // scan y too (y-param coupling only)
    int points{400};          // per axis
    double coarse_threshold{0.25};
    double gap_tol{5e-8};
    double rigidity_tol{1e-3};
    double merge_radius{1e-4};
};

// Smallest pairwise distance between complex eigenvalues.
double min_gap(const CMatrix& h);

// Hamiltonian at (a, y); y ignored unless the coupling is y-param.
CMatrix hamiltonian_at(const SystemConfig& config, double a, std::optional<double> y);

std::vector<EPCandidate> find_eps_scan(const SystemConfig& config, const ScanOptions& options = {});

// Fill gap, rigidity and mixing evidence for a parameter point.
EPCandidate evaluate_candidate(const SystemConfig& config, double a, std::optional<double> y, EPMethod method);

}  // namespace eplab
