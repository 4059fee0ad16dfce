#include "sspop/hopf.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace sspop;

namespace {
constexpr double pi = std::numbers::pi;
const Complex three_pi_i{0.0, 3 * pi};
} // namespace

TEST(SteadyState, DefaultProblem) {
    const auto ss = steady_state({});
    EXPECT_NEAR(ss.q_star, 1.5 * pi, 1e-15);
    EXPECT_NEAR(ss.p0_star, 3 * pi, 1e-14);
    EXPECT_EQ(ss.profile(0.2), ss.p0_star);
    EXPECT_EQ(ss.profile(0.7), 0.0);
    // Q* = integral of the profile
    EXPECT_NEAR(ss.p0_star * ss.s_c, ss.q_star, 1e-14);
}

TEST(CharacteristicProblem, Validation) {
    EXPECT_NO_THROW(CharacteristicProblem{}.validate());
    EXPECT_THROW((CharacteristicProblem{0.6, 0.5, 1.0, 0.0}.validate()), DomainError);
    EXPECT_THROW((CharacteristicProblem{0.1, 0.5, 0.0, 0.0}.validate()), DomainError);
    EXPECT_THROW((CharacteristicProblem{0.1, 0.5, -1.0, 0.0}.validate()), DomainError);
    EXPECT_THROW((CharacteristicProblem{0.1, 0.5, 1.0, -0.1}.validate()), DomainError);
    EXPECT_THROW((CharacteristicProblem{0.1, 1.0, 1.0, 0.0}.validate()), DomainError);
    EXPECT_THROW(find_root({0.1, 9}, CharacteristicProblem{0.6, 0.5, 1.0, 0.0}), DomainError);
}

TEST(KLimit, Examples) {
    const CharacteristicProblem p;
    EXPECT_NEAR(std::abs(k_limit(0.0, p) - (1.0 - p.ln_r)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(k_limit(three_pi_i, p) - 1.0), 0.0, 1e-14);
    EXPECT_THROW(k_eps(1.0, p), DomainError);
}

TEST(KLimit, ContinuousAcrossSeriesRadius) {
    const CharacteristicProblem p;
    for (double r : {0.5e-4 / p.s_c, 1e-4 / p.s_c, 2e-4 / p.s_c}) {
        const Complex below = k_limit(Complex(r * 0.999999, 0.0), p);
        const Complex above = k_limit(Complex(r * 1.000001, 0.0), p);
        EXPECT_LT(std::abs(below - above), 1e-9);
    }
}

TEST(KLimit, ConjugateSymmetry) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-20, 20);
    const CharacteristicProblem p;
    for (int i = 0; i < 500; ++i) {
        const Complex z(u(rng), u(rng));
        EXPECT_LT(std::abs(k_limit(std::conj(z), p) - std::conj(k_limit(z, p))), 1e-12 * (1 + std::abs(k_limit(z, p))));
    }
}

TEST(KLimit, DerivativeMatchesFiniteDifference) {
    const CharacteristicProblem p;
    for (Complex z : {Complex(0.3, 9.0), Complex(-1.0, 2.0), Complex(1e-5, 1e-5), Complex(2.0, -5.0)}) {
        const double h = 1e-6;
        const Complex fd = (k_limit(z + h, p) - k_limit(z - h, p)) / (2 * h);
        EXPECT_LT(std::abs(fd - detail::residual_and_derivative(z, p).second), 1e-7) << z;
    }
    CharacteristicProblem e = p;
    e.eps = 0.05;
    for (Complex z : {Complex(0.3, 9.0), Complex(1e-5, 0.0)}) {
        const double h = 1e-6;
        const Complex fd = (k_eps(z + h, e) - k_eps(z - h, e)) / (2 * h);
        EXPECT_LT(std::abs(fd - detail::residual_and_derivative(z, e).second), 1e-7) << z;
    }
}

TEST(KEps, ConvergesLinearlyToLimit) {
    CharacteristicProblem p;
    const Complex z(0.2, 8.0);
    double prev = 0.0;
    for (int k = 0; k < 6; ++k) {
        p.eps = 0.01 / std::pow(2.0, k);
        const double d = std::abs(k_eps(z, p) - k_limit(z, p));
        EXPECT_LT(d, 10.0 * p.eps);
        if (k > 0) EXPECT_NEAR(prev / d, 2.0, 0.05);
        prev = d;
    }
}

TEST(ImagAxisResidual, VanishesAtThreePi) {
    const auto [re, im] = imag_axis_residual(3 * pi, {});
    EXPECT_NEAR(re, 0.0, 1e-14);
    EXPECT_NEAR(im, 0.0, 1e-14);
    EXPECT_THROW(imag_axis_residual(0.0, {}), DomainError);
}

TEST(ImagAxisResidual, AgreesWithKLimit) {
    const CharacteristicProblem p{0.2, 0.6, 2.0, 0.0};
    for (double a : {0.5, 3.0, 7.7, 20.0}) {
        const auto [re, im] = imag_axis_residual(a, p);
        const Complex k = k_limit(Complex(0.0, a), p) - 1.0;
        EXPECT_NEAR(re, k.real(), 1e-13);
        EXPECT_NEAR(im, k.imag(), 1e-13);
    }
}

TEST(FindRoot, ConvergesToThreePiI) {
    const Complex root = find_root({0.1, 9.0}, {});
    EXPECT_LT(std::abs(root - three_pi_i), 1e-10);
    const Complex conj_root = find_root({0.1, -9.0}, {});
    EXPECT_LT(std::abs(conj_root + three_pi_i), 1e-10);
}

TEST(FindRoot, CrossingDirection) {
    CharacteristicProblem p;
    p.s_c = 0.48;
    EXPECT_LT(find_root({0.1, 9.0}, p).real(), 0.0);
    p.s_c = 0.52;
    EXPECT_GT(find_root({0.1, 9.0}, p).real(), 0.0);
}

TEST(FindRoot, SmallEpsRootNearLimit) {
    CharacteristicProblem p;
    p.eps = 1e-4;
    const Complex root = find_root({0.1, 9.0}, p);
    EXPECT_LT(std::abs(root - three_pi_i), 1e-2);
    EXPECT_LT(std::abs(k_eps(root, p) - 1.0), 1e-10);
}

TEST(FindRoot, ReportsTraceOnFailure) {
    NewtonOptions o;
    o.max_iterations = 1;
    try {
        find_root({5.0, 40.0}, {}, o);
        FAIL() << "expected no convergence";
    } catch (const NoConvergenceError& e) {
        ASSERT_FALSE(e.trace().empty());
        EXPECT_EQ(e.trace().front(), Complex(5.0, 40.0));
    }
}
