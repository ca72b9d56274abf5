// spectral.hpp: eigendecomposition of complex symmetric Hamiltonians
//
// Eigenvectors of a complex symmetric matrix are biorthogonal under the
// bilinear (unconjugated) product: Phi_k^T Phi_l = delta_kl. Each state
// carries the diagnostics derived from that normalization:
//   A_k   = <Phi_k|Phi_k>            (conjugated norm, >= 1)
//   r_k   = |Phi_k^T Phi_k| / A_k    (phase rigidity, in [0, 1])
//   b_kj  = components in the uncoupled basis (the standard basis)

#pragma once

#include "eplab/model.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace eplab {

struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, CMatrix offending)
        : std::runtime_error(what), matrix(std::move(offending)) {}
    CMatrix matrix;
};

enum class Condition { regular, near_defective };

struct EigenState {
    Complex value;             // E_k + (i/2) Gamma_k
    CVector vector;            // Phi_k^T Phi_k = 1 unless near-defective
    double a_norm{1.0};        // A_k
    double rigidity{1.0};      // r_k = 1 / A_k
    Eigen::VectorXd mixing_sq; // |b_kj|^2, j over the bare levels
    bool near_defective{false};

    double energy() const noexcept { return value.real(); }
    double gamma_half() const noexcept { return value.imag(); }
};

struct Spectrum {
    std::vector<EigenState> states;
    Condition condition{Condition::regular};

    std::size_t size() const noexcept { return states.size(); }
    Complex trace() const noexcept;
    double min_rigidity() const noexcept;
    double max_mixing() const noexcept;
};

struct SpectralOptions {
    // |v^T v| < threshold * v^dagger v marks a vector as near-defective
    double defect_threshold{1e-8};
    // any A_k above the ceiling marks the spectrum near-defective
    double a_norm_ceiling{1e8};
};

// Roots (e1 + e2)/2 +- Z with Z = 1/2 sqrt((e1 - e2)^2 + 4 w^2), principal
// branch, "+Z" root first.
std::pair<Complex, Complex> eig2_closed_form(const CMatrix& h);

// General dense path. States ordered by ascending Re, ties by Im.
Spectrum eig_general(const CMatrix& h, const SpectralOptions& options = {});

struct BiorthogonalSet {
    CMatrix vectors;                    // columns
    std::vector<Complex> raw_products;  // v^T v before scaling (v unit 2-norm)
    std::vector<bool> near_defective;
};

// Columns scaled so v^T v = 1 + 0i; sign fixed so the largest-modulus
// component has argument in (-pi/2, pi/2]. A column with v^T v == 0 exactly
// is left at unit 2-norm.
BiorthogonalSet normalize_biorthogonal(const CMatrix& vectors, double defect_threshold = 1e-8);

double phase_rigidity(const CVector& v);

// Rows are states, columns bare levels.
Eigen::MatrixXd mixing_coefficients(const CMatrix& vectors);

struct BNormReport {
    CMatrix overlaps;             // <Phi_k|Phi_l>, conjugated
    Eigen::MatrixXd moduli;       // |B_k^l| off the diagonal, A_k on it
    double max_antisymmetry{0.0}; // max |B_k^l + B_l^k| over k != l
    bool antisymmetric{true};
};

BNormReport pairwise_bnorms(const CMatrix& vectors, double tolerance = 1e-8);

// Columns of the state vectors of a spectrum.
CMatrix vector_matrix(const Spectrum& s);

}  // namespace eplab
