#include "eplab/model.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <random>

using namespace eplab;

namespace {

bool close(Complex a, Complex b, double tol) { return std::abs(a - b) < tol; }

SystemConfig two_level(CouplingLaw law) {
    SystemConfig c;
    c.levels = {{LinearCurve{1.0, -0.5}, -0.5}, {SqrtCurve{1.0}, -0.5}};
    c.coupling = law;
    c.topology = Topology::pair;
    return c;
}

}  // namespace

TEST_CASE("level energies") {
    CHECK(close(eval_epsilon({LinearCurve{1.0, -0.5}, -0.5}, 0.8), {0.6, -0.5}, 1e-15));
    CHECK(close(eval_epsilon({SqrtCurve{1.0}, -0.5}, 0.0), {0.0, -0.5}, 0.0 + 1e-300));
    CHECK(close(eval_epsilon({LinearCurve{1.2, -0.7}, -0.53}, 1.0), {0.5, -0.53}, 1e-15));
    CHECK_THROWS_AS(eval_curve(SqrtCurve{1.0}, -0.1), DomainError);
}

TEST_CASE("tabulated curve interpolates and clamps") {
    TabulatedCurve t{{{0.0, 1.0}, {1.0, 3.0}, {2.0, 2.0}}};
    CHECK(eval_curve(t, 0.5) == doctest::Approx(2.0));
    CHECK(eval_curve(t, 1.5) == doctest::Approx(2.5));
    CHECK(eval_curve(t, -1.0) == doctest::Approx(1.0));
    CHECK(eval_curve(t, 9.0) == doctest::Approx(2.0));
}

TEST_CASE("coupling laws") {
    const Complex e{0.3, -0.5};
    CHECK(close(eval_coupling(GaussianCoupling{{0.0, 0.05}}, e, e), {0.0, 0.05}, 1e-17));
    CHECK(close(eval_coupling(ConstantCoupling{{0.1, 0.2}}, {0, 0}, {5, -1}), {0.1, 0.2}, 0.0 + 1e-300));

    // y-param, omega0 = 0.4, y = 1, eps_2 - eps_1 = 0.8
    const auto ref = oracle::yparam(0.4L, 1.0L, {0.0L, -0.5L}, {0.8L, -0.5L});
    const Complex got = eval_coupling(YParamCoupling{0.4, 1.0}, {0.0, -0.5}, {0.8, -0.5});
    CHECK(std::abs(got - Complex(ref)) < 1e-15);
    CHECK(got.imag() == doctest::Approx(0.21093).epsilon(1e-4));
    CHECK(std::abs(got.real()) < 1e-16);

    CHECK(close(eval_coupling(YParamCoupling{0.5, 0.0}, {0.2, -0.5}, {0.2, -0.5}), {0.5, 0.0}, 1e-16));
}

TEST_CASE("gaussian square is complex") {
    const Complex ei{0.4, -0.53}, ek{0.1, -0.56};
    const auto ref = oracle::gaussian({0.025L, 0.025L}, {0.4L, -0.53L}, {0.1L, -0.56L});
    CHECK(std::abs(eval_coupling(GaussianCoupling{{0.025, 0.025}}, ei, ek) - Complex(ref)) < 1e-16);
}

TEST_CASE("hamiltonian structure") {
    SUBCASE("zero coupling is diagonal") {
        const auto h = build_hamiltonian(two_level(GaussianCoupling{{0.0, 0.0}}), 0.64);
        CHECK(h(0, 1) == Complex{});
        CHECK(h(1, 0) == Complex{});
        CHECK(close(h(0, 0), {0.68, -0.5}, 1e-15));
        CHECK(close(h(1, 1), {0.8, -0.5}, 1e-15));
    }
    SUBCASE("first figure family at a = 1") {
        const auto h = build_hamiltonian(two_level(GaussianCoupling{{0.0, 0.05}}), 1.0);
        CHECK(close(h(0, 0), {0.5, -0.5}, 1e-15));
        CHECK(close(h(1, 1), {1.0, -0.5}, 1e-15));
        const auto ref = oracle::gaussian({0.0L, 0.05L}, {0.5L, -0.5L}, {1.0L, -0.5L});
        CHECK(std::abs(h(0, 1) - Complex(ref)) < 1e-17);
        CHECK(h(0, 1).imag() == doctest::Approx(0.038940).epsilon(1e-5));
        CHECK(h(0, 1) == h(1, 0));
    }
    SUBCASE("star topology couples only to the last level") {
        SystemConfig c;
        c.levels = {{LinearCurve{1.0, -1.0 / 4.5}, -0.5}, {LinearCurve{1.1, -0.5}, -0.5}, {SqrtCurve{1.0}, -0.5}};
        c.coupling = GaussianCoupling{{0.0, 0.05}};
        c.topology = Topology::star;
        const auto h = build_hamiltonian(c, 0.7);
        CHECK(h(0, 1) == Complex{});
        CHECK(h(1, 0) == Complex{});
        CHECK(h(0, 2) != Complex{});
        CHECK(h(1, 2) != Complex{});
        CHECK((h - h.transpose()).norm() == 0.0);
    }
}

TEST_CASE("validation names the field") {
    auto c = two_level(GaussianCoupling{{0.0, 0.05}});
    c.levels[1].gamma_half = 0.1;
    try {
        validate(c);
        FAIL("expected InvalidConfig");
    } catch (const InvalidConfig& e) {
        CHECK(std::string(e.what()).find("gamma_half must be <= 0") != std::string::npos);
        CHECK(std::string(e.what()).rfind("levels.2", 0) == 0);
    }
    CHECK_THROWS_AS(validate(two_level(YParamCoupling{0.4, 1.5})), InvalidConfig);
    CHECK_THROWS_AS(validate(two_level(YParamCoupling{-0.4, 0.5})), InvalidConfig);
    auto star2 = two_level(ConstantCoupling{});
    star2.topology = Topology::star;
    CHECK_THROWS_AS(validate(star2), InvalidConfig);
    SystemConfig one;
    one.levels = {{LinearCurve{}, -0.5}};
    CHECK_THROWS_AS(validate(one), InvalidConfig);
}

TEST_CASE("property: symmetric, trace equals bare sum") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 15;
        SystemConfig c;
        for (int i = 0; i < n; ++i) c.levels.push_back({LinearCurve{u(rng), u(rng)}, -std::abs(u(rng))});
        c.coupling = GaussianCoupling{{u(rng), u(rng)}};
        c.topology = default_topology(static_cast<std::size_t>(n));
        const double a = 1.0 + u(rng);
        const auto h = build_hamiltonian(c, a);
        CHECK((h - h.transpose()).norm() == 0.0);
        Complex bare{};
        for (const auto& e : bare_energies(c, a)) bare += e;
        CHECK(std::abs(h.trace() - bare) < 1e-14);
    }
}
