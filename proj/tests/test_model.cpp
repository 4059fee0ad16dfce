#include "oracle.hpp"

#include "sspop/coefficients.hpp"
#include "sspop/presets.hpp"
#include "sspop/quadrature.hpp"
#include "sspop/special_functions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

using namespace sspop;

namespace {

CoefficientSet simple_set(RateFunction growth, RateFunction mortality, double beta) {
    CoefficientSet c;
    c.name = "simple";
    c.growth = std::move(growth);
    c.mortality = std::move(mortality);
    c.recruitment = std::make_shared<const FunctionKernel>([beta](double, double, double) { return beta; });
    return c;
}

} // namespace

TEST(Quadrature, RightSumExamples) {
    const Mesh m(10, 1, 1.0);
    EXPECT_DOUBLE_EQ(right_sum(GridFunction(std::vector<double>(11, 1.0)), m), 1.0);
    EXPECT_EQ(right_sum(GridFunction::zeros(m), m), 0.0);
    const Mesh m5(5, 1, 1.0);
    EXPECT_NEAR(right_sum(GridFunction::sample(m5, [](double s) { return s; }), m5), 0.6, 1e-15);
}

TEST(Quadrature, TrapezoidStarExamples) {
    const Mesh m(10, 1, 1.0);
    EXPECT_DOUBLE_EQ(trapezoid_star(GridFunction(std::vector<double>(11, 1.0)), m), 1.0);
    EXPECT_EQ(trapezoid_star(GridFunction::zeros(m), m), 0.0);
    for (std::size_t n : {5u, 7u, 64u, 1001u}) {
        const Mesh mn(n, 1, 1.0);
        EXPECT_NEAR(trapezoid_star(GridFunction::sample(mn, [](double s) { return s; }), mn), 0.5, 1e-14);
    }
}

TEST(Quadrature, LengthMismatch) {
    const Mesh m(10, 1, 1.0);
    EXPECT_THROW(right_sum(GridFunction(std::vector<double>(3, 1.0)), m), InputError);
    EXPECT_THROW(trapezoid_star(GridFunction(std::vector<double>(3, 1.0)), m), InputError);
}

TEST(Quadrature, DifferenceIdentityOnRandomData) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int trial = 0; trial < 100; ++trial) {
        const Mesh m(5 + trial % 40, 1, 1.0);
        std::vector<double> v(m.n_nodes());
        for (double& x : v) x = u(rng);
        const double diff = right_sum(v, m) - trapezoid_star(v, m);
        const double expected = 0.5 * v.back() * m.ds() - 0.5 * v.front() * m.ds();
        EXPECT_NEAR(diff, expected, 1e-13);
    }
}

TEST(Quadrature, StarSumExactForAffine) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = u(rng), b = u(rng);
        const Mesh m(5 + trial, 1, 1.0);
        const auto p = GridFunction::sample(m, [=](double s) { return a + b * s; });
        EXPECT_NEAR(trapezoid_star(p, m), a + b / 2, 1e-12 * (1 + std::abs(a) + std::abs(b)));
    }
}

TEST(Quadrature, CellsPartitionTheInterval) {
    const Mesh m(9, 1, 1.0);
    for (Quadrature rule : {Quadrature::right_sum, Quadrature::trapezoid_star}) {
        const auto cells = quadrature_cells(m, rule);
        double covered = 0.0, weight = 0.0;
        for (const auto& c : cells) {
            covered += c.hi - c.lo;
            weight += c.weight;
            EXPECT_NEAR(c.hi - c.lo, c.weight, 1e-15);
        }
        EXPECT_NEAR(covered, 1.0, 1e-14);
        EXPECT_NEAR(weight, 1.0, 1e-14);
    }
}

TEST(LogBeta, ClosedForms) {
    EXPECT_EQ(log_beta_function(1, 1), 0.0);
    EXPECT_NEAR(log_beta_function(2, 3), std::log(1.0 / 12.0), 1e-14);
}

TEST(LogBeta, AgreesWithAdaptiveQuadrature) {
    for (auto [a, b] : {std::pair{1.01, 50.0}, {1.01, 75.0}, {1.01, 100.0}, {2.0, 3.0}, {1.5, 7.25}, {3.3, 1.0}}) {
        const double reference = oracle::beta_function(a, b);
        EXPECT_NEAR(std::exp(log_beta_function(a, b)) / reference, 1.0, 1e-10) << a << ", " << b;
    }
}

TEST(LogBeta, RejectsNonpositive) {
    EXPECT_THROW(log_beta_function(0, 1), DomainError);
    EXPECT_THROW(log_beta_function(1, -2), DomainError);
}

TEST(BetaPdf, Examples) {
    EXPECT_NEAR(beta_pdf(0.5, 2, 2), 1.5, 1e-14);
    EXPECT_NEAR(beta_pdf(0.5, 1, 1), 1.0, 1e-14);
    EXPECT_EQ(beta_pdf(0.0, 2, 3), 0.0);
    EXPECT_EQ(beta_pdf(1.0, 2, 3), 0.0);
    EXPECT_NEAR(beta_pdf(0.0, 1, 3), 3.0, 1e-13);
    EXPECT_THROW(beta_pdf(1.5, 2, 2), DomainError);
    EXPECT_THROW(beta_pdf(-0.1, 2, 2), DomainError);
}

TEST(BetaPdf, NormalisedOnFineGrid) {
    const Mesh m(200000, 1, 1.0);
    const auto smooth = GridFunction::sample(m, [](double s) { return beta_pdf(s, 2, 50); });
    EXPECT_NEAR(trapezoid_star(smooth, m), 1.0, 1e-8);
    // s^0.01 near the origin limits the trapezoid rule to first order
    const auto p = GridFunction::sample(m, [](double s) { return beta_pdf(s, 1.01, 50); });
    EXPECT_NEAR(trapezoid_star(p, m), 1.0, 1e-3);
}

TEST(Cfl, Examples) {
    // c = 1, ds = 0.1, dt = 0.05
    EXPECT_TRUE(cfl_check(1.0, Mesh(10, 20, 1.0)));
    // c = 1, ds = 0.01, dt = 0.05
    EXPECT_FALSE(cfl_check(1.0, Mesh(100, 20, 1.0)));
    EXPECT_TRUE(cfl_check(0.0, Mesh(1000, 1, 100.0)));
    EXPECT_THROW(cfl_check(-1.0, Mesh(10, 10, 1.0)), DomainError);
}

TEST(Presets, ValidationValues) {
    const auto c = make_preset({"validation", {}});
    EXPECT_EQ(c.growth(0.0, 123.0), 0.5);
    EXPECT_EQ(c.mortality(0.3, 2.5), 5.0);
    EXPECT_NEAR(c.kernel()(0.25, 0.9, 2.0), 1.0 + 4 * 0.25 * 2.0, 1e-15);
    EXPECT_TRUE(c.gamma_vanishes_at_right);
    EXPECT_TRUE(c.distributed());
}

TEST(Presets, DiscontinuityBoxKernel) {
    const auto c = make_preset({"discontinuity", {{"m", 10}}});
    const auto& k = c.kernel();
    EXPECT_EQ(k(0.4, 0.4, 0.0), 10.0);
    EXPECT_EQ(k(0.45, 0.4, 0.0), 10.0); // closed edge
    EXPECT_EQ(k(0.36, 0.4, 0.0), 10.0);
    EXPECT_EQ(k(0.46, 0.4, 0.0), 0.0);
    EXPECT_NEAR(c.mortality(0.1, 10.0), 2.0 * std::exp(1.0), 1e-14);
    EXPECT_TRUE(c.gamma_vanishes_at_right);
}

TEST(Presets, HopfFormulas) {
    const auto c = make_preset({"hopf", {{"a", 6}}});
    EXPECT_EQ(c.growth(0.7, 1.0), 1.0);
    EXPECT_FALSE(c.gamma_vanishes_at_right);
    EXPECT_NEAR(presets::hopf_fertility_shape(1.0 / 6.0 - 0.005),
                std::exp(1.5 * std::numbers::pi) / std::sqrt(2 * std::numbers::pi), 1e-12);
    EXPECT_NEAR(presets::hopf_mortality(0.5), 16.0, 1e-12);
    // beta = a e^{-Q} (10 atan(5 - 1000 s) + 15.7) beta2(y)
    const double s = 0.003, y = 0.2, q = 0.7;
    const double expected = 6 * std::exp(-q) * (10 * std::atan(5 - 1000 * s) + 15.7) *
                            std::exp(-0.5 * std::pow(100 * (y - 1.0 / 6 + 0.005), 2)) *
                            std::exp(1.5 * std::numbers::pi) / std::sqrt(2 * std::numbers::pi);
    EXPECT_NEAR(c.kernel()(s, y, q), expected, 1e-12 * std::abs(expected));
}

TEST(Presets, WeakstarPair) {
    const auto d = make_preset({"weakstar_dssm", {{"a", 1.01}, {"b", 50}}});
    EXPECT_NEAR(d.kernel()(0.01, 0.7, 3.0), beta_pdf(0.01, 1.01, 50), 1e-14);
    const auto c = make_preset({"weakstar_cssm", {}});
    EXPECT_FALSE(c.distributed());
    EXPECT_EQ(c.boundary_fertility()(0.3, 2.0), 1.0);
    EXPECT_EQ(c.growth(0.0, 0.0), 0.5);
}

TEST(Presets, ConfigurationErrors) {
    EXPECT_THROW(make_preset({"nope", {}}), ConfigError);
    EXPECT_THROW(make_preset({"discontinuity", {}}), ConfigError);
    EXPECT_THROW(make_preset({"discontinuity", {{"m", -1}}}), ConfigError);
    EXPECT_THROW(make_preset({"weakstar_dssm", {{"a", 1.01}}}), ConfigError);
    EXPECT_THROW(make_preset({"hopf", {}}), ConfigError);
    EXPECT_THROW(make_preset({"validation", {{"typo", 1}}}), ConfigError);
}

TEST(Presets, NonnegativeOnSampleLattice) {
    const std::vector<PresetId> ids{{"validation", {}},
                                    {"discontinuity", {{"m", 1}}},
                                    {"discontinuity", {{"m", 1000}}},
                                    {"weakstar_dssm", {{"a", 1.01}, {"b", 100}}},
                                    {"weakstar_cssm", {}},
                                    {"hopf", {{"a", 46}}}};
    for (const auto& id : ids) {
        const auto c = make_preset(id);
        for (int i = 0; i <= 100; ++i)
            for (int k = 0; k <= 100; ++k) {
                const double s = i / 100.0, q = 10.0 * k / 100.0;
                ASSERT_GE(c.growth(s, q), 0.0) << id.name;
                ASSERT_GE(c.mortality(s, q), 0.0) << id.name;
                for (int j = 0; j <= 100; ++j) {
                    const double y = j / 100.0;
                    const double b = c.distributed() ? c.kernel()(s, y, q) : c.boundary_fertility()(y, q);
                    ASSERT_GE(b, 0.0) << id.name;
                }
            }
        if (c.gamma_vanishes_at_right)
            for (int k = 0; k <= 100; ++k) EXPECT_LE(std::abs(c.growth(1.0, 0.1 * k)), 1e-12);
    }
}

TEST(BoundEstimate, Examples) {
    const auto c1 = simple_set(presets::half_taper, [](double, double) { return 1.0; }, 1.0);
    EXPECT_GE(estimate_bound_constant(c1, 1.0), 1.0);
    EXPECT_NEAR(estimate_bound_constant(c1, 1.0), 1.0, 1e-12);

    const auto c0 = simple_set([](double, double) { return 0.0; }, [](double, double) { return 0.0; }, 0.0);
    EXPECT_EQ(estimate_bound_constant(c0, 1.0), 0.0);

    const double q_max = std::exp(8.0) / 2;
    EXPECT_GE(estimate_bound_constant(make_preset({"validation", {}}), q_max), 2 * q_max);
}

TEST(BoundEstimate, CoversDeclaredConstants) {
    // The hand-derived constants must dominate what the lattice sees on their Q range.
    for (const PresetId& id : std::vector<PresetId>{{"validation", {}},
                                                    {"discontinuity", {{"m", 1}}},
                                                    {"weakstar_cssm", {}}}) {
        const auto c = make_preset(id);
        ASSERT_TRUE(c.bound_c.has_value());
        EXPECT_LE(estimate_bound_constant(c, c.q_range), *c.bound_c * (1 + 1e-9)) << id.name;
    }
}

TEST(BoundEstimate, NonFiniteIsCoefficientError) {
    const auto bad = simple_set([](double s, double) { return 1.0 / (s - 0.5); }, [](double, double) { return 0.0; },
                                0.0);
    EXPECT_THROW(estimate_bound_constant(bad, 1.0), CoefficientError);
    EXPECT_THROW(estimate_bound_constant(bad, 0.0), DomainError);
}

TEST(Kernels, SeparableMatchesPointwiseSum) {
    const auto c = make_preset({"validation", {}});
    const Mesh m(37, 1, 1.0);
    const auto p = GridFunction::sample(m, [](double s) { return std::sin(3 * s) + 1.2; });
    for (Quadrature rule : {Quadrature::right_sum, Quadrature::trapezoid_star}) {
        std::vector<double> fast(m.n_nodes());
        c.kernel().discretize(m, rule)->apply(p.values(), 1.7, fast);
        const FunctionKernel generic([](double s, double, double q) { return 1 + 4 * s * q; });
        std::vector<double> slow(m.n_nodes());
        generic.discretize(m, rule)->apply(p.values(), 1.7, slow);
        for (std::size_t i = 0; i < fast.size(); ++i) EXPECT_NEAR(fast[i], slow[i], 1e-13);
    }
}

TEST(Kernels, BoxCellIntegralsConserveMass) {
    // Each offspring row integrates to m times the part of the box inside [0, 1], even
    // when the box is narrower than a cell.
    for (double mval : {1.0, 10.0, 1000.0}) {
        const BoxKernel box(mval);
        for (std::size_t n : {50u, 400u}) {
            const Mesh m(n, 1, 1.0);
            for (Quadrature rule : {Quadrature::right_sum, Quadrature::trapezoid_star}) {
                std::vector<double> out(m.n_nodes());
                const std::vector<double> ones(m.n_nodes(), 1.0);
                box.discretize(m, rule)->apply(ones, 0.0, out);
                for (std::size_t i = 0; i < out.size(); ++i) {
                    const double s = m.node(i), h = 0.5 / mval;
                    const double inside = std::min(1.0, s + h) - std::max(0.0, s - h);
                    EXPECT_NEAR(out[i], mval * inside, 1e-12 * mval) << mval << " " << n << " " << i;
                }
            }
        }
    }
}

TEST(Kernels, BoxMatchesPointwiseWhenWide) {
    // With the box wider than a cell, banded and pointwise rules differ only at the two
    // cells that straddle the box edges.
    const BoxKernel box(1.0);
    const Mesh m(40, 1, 1.0);
    std::vector<double> out(m.n_nodes());
    const std::vector<double> ones(m.n_nodes(), 1.0);
    box.discretize(m, Quadrature::trapezoid_star)->apply(ones, 0.0, out);
    EXPECT_NEAR(out[20], 1.0, 1e-14); // whole domain inside [0, 1]
    EXPECT_NEAR(out[0], 0.5, 1e-14);
}
