#include "eplab/sweep.hpp"

#include "eplab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace eplab {

std::string to_string(SweepParam p) { return p == SweepParam::a ? "a" : "y"; }

void validate(const SweepPlan& plan) {
    validate(plan.config);
    if (!(plan.start < plan.stop)) throw InvalidConfig("sweep.start: start must be < stop");
    if (plan.steps < 2) throw InvalidConfig("sweep.steps: at least 2 steps required");
    if (plan.param == SweepParam::y) {
        if (!plan.config.has_y_param()) throw InvalidConfig("sweep.param: y-sweep requires y-param coupling");
        if (plan.start < 0.0 || plan.stop > 1.0) throw InvalidConfig("sweep.start: y range must lie in [0, 1]");
    }
}

std::vector<double> uniform_grid(double start, double stop, int steps) {
    std::vector<double> g(static_cast<std::size_t>(steps));
    const double h = (stop - start) / static_cast<double>(steps - 1);
    for (int i = 0; i < steps; ++i) g[static_cast<std::size_t>(i)] = start + h * i;
    g.back() = stop;
    return g;
}

namespace {

SystemConfig point_config(const SweepPlan& plan, double value, double& a) {
    if (plan.param == SweepParam::y) {
        a = plan.fixed_other;
        return plan.config.with_y(value);
    }
    a = value;
    if (plan.config.has_y_param()) return plan.config.with_y(plan.fixed_other);
    return plan.config;
}

}  // namespace

CMatrix plan_hamiltonian(const SweepPlan& plan, double value) {
    double a = 0.0;
    const auto cfg = point_config(plan, value, a);
    return build_hamiltonian(cfg, a);
}

std::vector<Complex> plan_bare_energies(const SweepPlan& plan, double value) {
    double a = 0.0;
    const auto cfg = point_config(plan, value, a);
    return bare_energies(cfg, a);
}

// --------------------------------- pairing ----------------------------------

namespace {

using Perm = std::vector<std::size_t>;

// Rank of each state under (Re, then Im) with a tolerance on Re.
std::vector<std::size_t> rank_order(const Spectrum& s, double tol) {
    const std::size_t n = s.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto before = [&](std::size_t x, std::size_t y) {
        const Complex a = s.states[x].value;
        const Complex b = s.states[y].value;
        const double t = tol * std::max(1.0, std::max(std::abs(a.real()), std::abs(b.real())));
        if (std::abs(a.real() - b.real()) > t) return a.real() < b.real();
        return a.imag() < b.imag();
    };
    // insertion sort: the tolerant comparison is not a strict weak order
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = i; j > 0 && before(idx[j], idx[j - 1]); --j) std::swap(idx[j], idx[j - 1]);
    std::vector<std::size_t> rank(n);
    for (std::size_t r = 0; r < n; ++r) rank[idx[r]] = r;
    return rank;
}

std::vector<Perm> all_permutations(std::size_t n) {
    std::vector<Perm> out;
    Perm p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

const std::vector<Perm>& permutations_of(std::size_t n) {
    static const std::vector<std::vector<Perm>> table = [] {
        std::vector<std::vector<Perm>> t(7);
        for (std::size_t k = 1; k <= 6; ++k) t[k] = all_permutations(k);
        return t;
    }();
    return table[n];
}

double score(const Eigen::MatrixXd& m, const Perm& p) {
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k)
        s += m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(p[k]));
    return s;
}

// Greedy assignment on the global extremum with conflict resolution.
Perm greedy(const Eigen::MatrixXd& m, bool maximize) {
    const auto n = static_cast<std::size_t>(m.rows());
    Perm p(n, n);
    std::vector<bool> row_used(n, false), col_used(n, false);
    for (std::size_t round = 0; round < n; ++round) {
        double best = maximize ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
        std::size_t br = 0, bc = 0;
        for (std::size_t r = 0; r < n; ++r) {
            if (row_used[r]) continue;
            for (std::size_t c = 0; c < n; ++c) {
                if (col_used[c]) continue;
                const double v = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
                if (maximize ? v > best : v < best) {
                    best = v;
                    br = r;
                    bc = c;
                }
            }
        }
        p[br] = bc;
        row_used[br] = col_used[bc] = true;
    }
    return p;
}

struct Ranked {
    Perm best;
    double best_score;
    double runner_up;
};

Ranked rank_perms(const Eigen::MatrixXd& m, bool maximize) {
    const auto& perms = permutations_of(static_cast<std::size_t>(m.rows()));
    Ranked r{perms.front(), 0.0, 0.0};
    const double worst = maximize ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    r.best_score = worst;
    r.runner_up = worst;
    for (const auto& p : perms) {
        const double s = score(m, p);
        const bool better = maximize ? s > r.best_score : s < r.best_score;
        if (better) {
            r.runner_up = r.best_score;
            r.best_score = s;
            r.best = p;
        } else if (maximize ? s > r.runner_up : s < r.runner_up) {
            r.runner_up = s;
        }
    }
    return r;
}

}  // namespace

PairingStep pair_states(const Spectrum& prev, const Spectrum& next, const PairingOptions& options) {
    const std::size_t n = prev.size();
    if (next.size() != n) throw std::invalid_argument("pair_states: spectra differ in size");

    PairingStep step;
    step.coalesced = next.condition == Condition::near_defective;
    const bool defective = prev.condition == Condition::near_defective || step.coalesced;

    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd overlap(N, N), distance(N, N);
    for (Eigen::Index k = 0; k < N; ++k) {
        const auto& pk = prev.states[static_cast<std::size_t>(k)];
        for (Eigen::Index l = 0; l < N; ++l) {
            const auto& nl = next.states[static_cast<std::size_t>(l)];
            overlap(k, l) = std::abs(pk.vector.dot(nl.vector.conjugate()));
            distance(k, l) = std::abs(pk.value - nl.value);
        }
    }

    if (n > 6) {
        step.fallback = defective;
        step.permutation = greedy(defective ? distance : overlap, !defective);
        return step;
    }

    if (!defective) {
        const auto r = rank_perms(overlap, true);
        if (r.best_score - r.runner_up > options.decisive_margin * r.best_score) {
            step.permutation = r.best;
            return step;
        }
    }

    step.fallback = true;
    const auto r = rank_perms(distance, false);
    if (r.runner_up - r.best_score > options.decisive_margin * r.runner_up) {
        step.permutation = r.best;
        return step;
    }

    // Tied within the margin (a step across a coalescence): keep rank order.
    step.tie_broken = true;
    const auto rp = rank_order(prev, options.rank_tolerance);
    const auto rn = rank_order(next, options.rank_tolerance);
    std::vector<std::size_t> by_rank(n);
    for (std::size_t k = 0; k < n; ++k) by_rank[rp[k]] = k;
    const double limit = r.best_score + options.decisive_margin * r.runner_up;
    bool have = false;
    std::vector<std::size_t> best_sig;
    for (const auto& p : permutations_of(n)) {
        if (score(distance, p) > limit) continue;
        std::vector<std::size_t> sig(n);
        for (std::size_t r2 = 0; r2 < n; ++r2) sig[r2] = rn[p[by_rank[r2]]];
        if (!have || sig < best_sig) {
            have = true;
            best_sig = sig;
            step.permutation = p;
        }
    }
    return step;
}

// ---------------------------------- sweep -----------------------------------

TrajectorySet run_sweep(const SweepPlan& plan, const PairingOptions& options) {
    validate(plan);
    TrajectorySet out;
    out.param = plan.param;
    out.grid = uniform_grid(plan.start, plan.stop, plan.steps);
    const std::size_t points = out.grid.size();

    std::vector<Spectrum> spectra(points);
    parallel_for(points, [&](std::size_t i) {
        try {
            spectra[i] = eig_general(plan_hamiltonian(plan, out.grid[i]));
        } catch (const std::exception& e) {
            throw SweepError("grid point " + std::to_string(i) + " (" + to_string(plan.param) + " = " +
                                 std::to_string(out.grid[i]) + "): " + e.what(),
                             i);
        }
    });

    const std::size_t n = plan.config.size();
    out.tracks.assign(n, {});
    for (auto& t : out.tracks) t.reserve(points);

    // slot[k]: index in the current spectrum carried by track k
    std::vector<std::size_t> slot(n);
    std::iota(slot.begin(), slot.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) out.tracks[k].push_back(spectra[0].states[k]);

    out.pairing.reserve(points - 1);
    for (std::size_t i = 0; i + 1 < points; ++i) {
        // spectra[i] reordered into track order so the permutation is track -> next index
        Spectrum ordered;
        ordered.condition = spectra[i].condition;
        ordered.states.reserve(n);
        for (std::size_t k = 0; k < n; ++k) ordered.states.push_back(spectra[i].states[slot[k]]);
        auto step = pair_states(ordered, spectra[i + 1], options);
        for (std::size_t k = 0; k < n; ++k) {
            slot[k] = step.permutation[k];
            out.tracks[k].push_back(spectra[i + 1].states[slot[k]]);
        }
        out.pairing.push_back(std::move(step));
    }

    out.home_level.resize(n);
    out.home_gamma_half.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        Eigen::Index j = 0;
        out.tracks[k].front().mixing_sq.maxCoeff(&j);
        out.home_level[k] = static_cast<std::size_t>(j);
        out.home_gamma_half[k] = plan.config.levels[static_cast<std::size_t>(j)].gamma_half;
    }
    return out;
}

BifurcationReport bifurcation_report(const TrajectorySet& tracks, double observer_tol) {
    if (tracks.size() == 0 || tracks.points() == 0) throw std::invalid_argument("bifurcation_report: empty trajectory set");
    const std::size_t n = tracks.size();
    const std::size_t m = tracks.points();
    BifurcationReport r;
    r.delta_gamma_half.resize(m);
    r.energy_gap.resize(m);
    r.min_rigidity.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        double gmin = std::numeric_limits<double>::infinity(), gmax = -gmin;
        double gap = std::numeric_limits<double>::infinity();
        double rig = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            const auto& s = tracks.tracks[k][i];
            gmin = std::min(gmin, s.gamma_half());
            gmax = std::max(gmax, s.gamma_half());
            rig = std::min(rig, s.rigidity);
            for (std::size_t l = k + 1; l < n; ++l)
                gap = std::min(gap, std::abs(s.energy() - tracks.tracks[l][i].energy()));
        }
        r.delta_gamma_half[i] = gmax - gmin;
        r.energy_gap[i] = gap;
        r.min_rigidity[i] = std::clamp(rig, 0.0, 1.0);
    }
    r.max_delta_gamma_half = *std::max_element(r.delta_gamma_half.begin(), r.delta_gamma_half.end());

    r.observer_flags.assign(n, false);
    if (r.max_delta_gamma_half > 10.0 * observer_tol) {
        for (std::size_t k = 0; k < n; ++k) {
            double dev = 0.0;
            for (const auto& s : tracks.tracks[k]) dev = std::max(dev, std::abs(s.gamma_half() - tracks.home_gamma_half[k]));
            r.observer_flags[k] = dev < observer_tol;
        }
    }
    return r;
}

}  // namespace eplab
