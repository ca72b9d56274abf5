#include "eplab/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace eplab {

Complex Spectrum::trace() const noexcept {
    Complex t{0.0, 0.0};
    for (const auto& s : states) t += s.value;
    return t;
}

double Spectrum::min_rigidity() const noexcept {
    double r = 1.0;
    for (const auto& s : states) r = std::min(r, s.rigidity);
    return r;
}

double Spectrum::max_mixing() const noexcept {
    double m = 0.0;
    for (const auto& s : states) m = std::max(m, s.mixing_sq.maxCoeff());
    return m;
}

std::pair<Complex, Complex> eig2_closed_form(const CMatrix& h) {
    if (h.rows() != 2 || h.cols() != 2) throw std::invalid_argument("eig2_closed_form: matrix must be 2x2");
    const Complex e1 = h(0, 0);
    const Complex e2 = h(1, 1);
    const Complex w = h(0, 1);
    const Complex d = e1 - e2;
    const Complex z = 0.5 * std::sqrt(d * d + 4.0 * w * w);
    const Complex mean = 0.5 * (e1 + e2);
    return {mean + z, mean - z};
}

BiorthogonalSet normalize_biorthogonal(const CMatrix& vectors, double defect_threshold) {
    BiorthogonalSet out;
    out.vectors = vectors;
    const auto n = vectors.cols();
    out.raw_products.resize(static_cast<std::size_t>(n));
    out.near_defective.resize(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        auto v = out.vectors.col(k);
        const double norm = v.norm();
        if (norm > 0.0) v /= norm;
        const Complex p = (v.transpose() * v)(0, 0);
        out.raw_products[static_cast<std::size_t>(k)] = p;
        out.near_defective[static_cast<std::size_t>(k)] = std::abs(p) < defect_threshold;
        if (p != Complex{0.0, 0.0}) v /= std::sqrt(p);

        // largest component, first index on ties
        Eigen::Index big = 0;
        double big_mod = -1.0;
        for (Eigen::Index j = 0; j < v.size(); ++j) {
            const double m = std::abs(v(j));
            if (m > big_mod * (1.0 + 1e-12)) {
                big_mod = m;
                big = j;
            }
        }
        const double arg = std::arg(v(big));
        if (!(arg > -M_PI / 2 && arg <= M_PI / 2)) v = -v;
    }
    return out;
}

double phase_rigidity(const CVector& v) {
    const double herm = v.squaredNorm();
    if (herm == 0.0) return 0.0;
    return std::abs((v.transpose() * v)(0, 0)) / herm;
}

Eigen::MatrixXd mixing_coefficients(const CMatrix& vectors) {
    return vectors.cwiseAbs2().transpose();
}

BNormReport pairwise_bnorms(const CMatrix& vectors, double tolerance) {
    BNormReport r;
    r.overlaps = vectors.adjoint() * vectors;
    r.moduli = r.overlaps.cwiseAbs();
    const auto n = vectors.cols();
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index l = k + 1; l < n; ++l) {
            const double v = std::abs(r.overlaps(k, l) + r.overlaps(l, k));
            r.max_antisymmetry = std::max(r.max_antisymmetry, v);
        }
    }
    r.antisymmetric = r.max_antisymmetry <= tolerance;
    return r;
}

CMatrix vector_matrix(const Spectrum& s) {
    const auto n = static_cast<Eigen::Index>(s.size());
    CMatrix v(n, n);
    for (Eigen::Index k = 0; k < n; ++k) v.col(k) = s.states[static_cast<std::size_t>(k)].vector;
    return v;
}

Spectrum eig_general(const CMatrix& h, const SpectralOptions& options) {
    if (h.rows() != h.cols() || h.rows() == 0) throw std::invalid_argument("eig_general: matrix must be square");
    if (!h.allFinite()) throw DomainError("eig_general: non-finite matrix entry");

    Eigen::ComplexEigenSolver<CMatrix> solver(h, true);
    if (solver.info() != Eigen::Success) {
        std::ostringstream os;
        os << "eig_general: eigensolver did not converge for\n" << h;
        throw ConvergenceError(os.str(), h);
    }

    const auto n = h.rows();
    const auto& values = solver.eigenvalues();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        if (values(x).real() != values(y).real()) return values(x).real() < values(y).real();
        return values(x).imag() < values(y).imag();
    });

    CMatrix raw(n, n);
    for (Eigen::Index k = 0; k < n; ++k) raw.col(k) = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    const auto set = normalize_biorthogonal(raw, options.defect_threshold);

    Spectrum s;
    s.states.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        EigenState st;
        st.value = values(order[static_cast<std::size_t>(k)]);
        st.vector = set.vectors.col(k);
        st.near_defective = set.near_defective[static_cast<std::size_t>(k)];
        const double herm = st.vector.squaredNorm();
        st.rigidity = phase_rigidity(st.vector);
        st.a_norm = set.raw_products[static_cast<std::size_t>(k)] == Complex{0.0, 0.0}
                        ? std::numeric_limits<double>::infinity()
                        : herm;
        st.mixing_sq = st.vector.cwiseAbs2();
        if (st.near_defective || st.a_norm > options.a_norm_ceiling) s.condition = Condition::near_defective;
        s.states.push_back(std::move(st));
    }
    return s;
}

}  // namespace eplab
