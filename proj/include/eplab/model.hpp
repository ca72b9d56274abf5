// model.hpp: level specifications, coupling laws and the effective Hamiltonian
//
// All energies are dimensionless ("energy units of the figure captions").
// Widths follow the decaying-state convention gamma <= 0, and the complex
// energy of a bare level is eps_i(a) = e_i(a) + i * gamma_i / 2.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace eplab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct InvalidConfig : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// ------------------------------- energy curves ------------------------------

struct LinearCurve {
    double c0{0.0};
    double c1{0.0};
    bool operator==(const LinearCurve&) const = default;
};

struct SqrtCurve {
    double c{1.0};
    bool operator==(const SqrtCurve&) const = default;
};

// Sorted (a, e) knots, linear interpolation inside, clamped outside.
struct TabulatedCurve {
    std::vector<std::pair<double, double>> knots;
    bool operator==(const TabulatedCurve&) const = default;
};

using EnergyCurve = std::variant<LinearCurve, SqrtCurve, TabulatedCurve>;

double eval_curve(const EnergyCurve& curve, double a);

struct LevelSpec {
    EnergyCurve curve;
    double gamma_half{0.0};  // gamma_i / 2, must be <= 0
    bool operator==(const LevelSpec&) const = default;
};

Complex eval_epsilon(const LevelSpec& level, double a);

// ------------------------------- coupling laws ------------------------------

struct ConstantCoupling {
    Complex omega{0.0, 0.0};
    bool operator==(const ConstantCoupling&) const = default;
};

// omega * exp[-(eps_i - eps_k)^2], square in complex arithmetic
struct GaussianCoupling {
    Complex omega{0.0, 0.0};
    bool operator==(const GaussianCoupling&) const = default;
};

// omega0 * exp[-(eps_k - eps_i)^2] * (sqrt(1 - y^2) + i y)
struct YParamCoupling {
    double omega0{1.0};
    double y{0.0};
    bool operator==(const YParamCoupling&) const = default;
};

using CouplingLaw = std::variant<ConstantCoupling, GaussianCoupling, YParamCoupling>;

Complex eval_coupling(const CouplingLaw& law, Complex eps_i, Complex eps_k);

// Unit-modulus phase factor sqrt(1 - y^2) + i y.
Complex y_phase(double y);

// --------------------------------- system -----------------------------------

enum class Topology { pair, star };

struct SystemConfig {
    std::vector<LevelSpec> levels;
    CouplingLaw coupling{ConstantCoupling{}};
    Topology topology{Topology::pair};

    bool operator==(const SystemConfig&) const = default;

    std::size_t size() const noexcept { return levels.size(); }
    bool has_y_param() const noexcept { return std::holds_alternative<YParamCoupling>(coupling); }

    // Copy with the y of a y-param coupling replaced; throws for other laws.
    SystemConfig with_y(double y) const;
};

// Throws InvalidConfig naming the offending field.
void validate(const SystemConfig& config);

// Pair for N = 2, star otherwise.
Topology default_topology(std::size_t levels) noexcept;

CMatrix build_hamiltonian(const SystemConfig& config, double a);

// Bare complex energies eps_i(a), the diagonal of the Hamiltonian.
std::vector<Complex> bare_energies(const SystemConfig& config, double a);

std::string to_string(Topology t);

}  // namespace eplab
