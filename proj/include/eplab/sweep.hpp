// sweep.hpp: parameter sweeps, continuity pairing and bifurcation diagnostics

#pragma once

#include "eplab/model.hpp"
#include "eplab/spectral.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace eplab {

enum class SweepParam { a, y };

std::string to_string(SweepParam p);

struct SweepPlan {
    SystemConfig config;
    SweepParam param{SweepParam::a};
    double start{0.01};
    double stop{2.0};
    int steps{1000};
    // a when sweeping y; y when sweeping a with a y-param coupling
    double fixed_other{0.0};

    bool operator==(const SweepPlan&) const = default;
};

void validate(const SweepPlan& plan);

std::vector<double> uniform_grid(double start, double stop, int steps);

// Hamiltonian at one grid value of the plan.
CMatrix plan_hamiltonian(const SweepPlan& plan, double value);

// Bare (uncoupled) complex energies at one grid value of the plan.
std::vector<Complex> plan_bare_energies(const SweepPlan& plan, double value);

struct SweepError : std::runtime_error {
    SweepError(const std::string& what, std::size_t index)
        : std::runtime_error(what), grid_index(index) {}
    std::size_t grid_index;
};

struct PairingStep {
    std::vector<std::size_t> permutation;  // prev state k -> next index permutation[k]
    bool fallback{false};                  // eigenvalue-distance metric decided the step
    bool tie_broken{false};                // metrics were tied; rank order decided
    bool coalesced{false};                 // next spectrum is near-defective
};

struct PairingOptions {
    // an assignment is decisive when it beats the runner-up by this fraction
    double decisive_margin{0.25};
    // Re parts closer than this compare as equal in the rank order
    double rank_tolerance{1e-9};
};

PairingStep pair_states(const Spectrum& prev, const Spectrum& next, const PairingOptions& options = {});

struct TrajectorySet {
    SweepParam param{SweepParam::a};
    std::vector<double> grid;
    std::vector<std::vector<EigenState>> tracks;  // tracks[k][i]: state k at grid point i
    std::vector<PairingStep> pairing;             // pairing[i] maps point i to point i + 1
    std::vector<std::size_t> home_level;          // dominant bare level of each track at the start
    std::vector<double> home_gamma_half;

    std::size_t size() const noexcept { return tracks.size(); }
    std::size_t points() const noexcept { return grid.size(); }
};

TrajectorySet run_sweep(const SweepPlan& plan, const PairingOptions& options = {});

struct BifurcationReport {
    std::vector<double> delta_gamma_half;  // max_k Gamma_k/2 - min_k Gamma_k/2
    std::vector<double> energy_gap;        // min pairwise |E_i - E_j|
    std::vector<double> min_rigidity;
    std::vector<bool> observer_flags;      // per track
    double max_delta_gamma_half{0.0};
};

BifurcationReport bifurcation_report(const TrajectorySet& tracks, double observer_tol = 1e-2);

}  // namespace eplab
