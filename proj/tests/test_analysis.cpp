#include "sspop/analysis.hpp"
#include "sspop/presets.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace sspop;

TEST(L1Error, Examples) {
    const Mesh m(10, 1, 1.0);
    const auto p = GridFunction::sample(m, [](double s) { return s; });
    EXPECT_EQ(l1_error(p, [](double s) { return s; }, m), 0.0);
    EXPECT_NEAR(l1_error(GridFunction::zeros(m), [](double) { return 1.0; }, m), 1.0, 1e-15);
    // node 0 is not counted
    EXPECT_EQ(l1_error(GridFunction::zeros(m), [](double s) { return s == 0.0 ? 5.0 : 0.0; }, m), 0.0);
    EXPECT_THROW(l1_error(GridFunction::zeros(Mesh(5, 1, 1.0)), [](double) { return 0.0; }, m), InputError);
}

TEST(OrderFromErrors, Examples) {
    EXPECT_DOUBLE_EQ(order_from_errors(4e-2, 1e-2), 2.0);
    EXPECT_DOUBLE_EQ(order_from_errors(1e-3, 5e-4), 1.0);
    EXPECT_NEAR(order_from_errors(2.51e-1, 1.15e-1), 1.126, 1e-3);
    EXPECT_THROW(order_from_errors(0.0, 1.0), DomainError);
    EXPECT_THROW(order_from_errors(1.0, -1.0), DomainError);
}

TEST(OrderFromErrors, ScalingInvariant) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-8, 0);
    for (int i = 0; i < 1000; ++i) {
        const double a = std::pow(10.0, u(rng)), b = std::pow(10.0, u(rng)), k = std::pow(10.0, u(rng));
        EXPECT_NEAR(order_from_errors(a, b), order_from_errors(k * a, k * b), 1e-9);
        EXPECT_NEAR(order_from_errors(a, b), -order_from_errors(b, a), 1e-12);
    }
}

namespace {

Trajectory all_levels(Scheme scheme, const PresetId& id, const Mesh& m) {
    return solve(scheme, make_preset(id), GridFunction::sample(m, initial_condition(id)), m);
}

} // namespace

TEST(MonitorInvariants, ZeroTrajectoryHasNoViolations) {
    const Mesh m(20, 400, 1.0);
    const auto traj = solve(Scheme::SOEM, make_preset({"validation", {}}), GridFunction::zeros(m), m);
    const auto report = monitor_invariants(traj, 4.0, m);
    EXPECT_TRUE(report.ok());
    EXPECT_EQ(report.steps.size(), 401u);
}

TEST(MonitorInvariants, ValidationRunsHoldBounds) {
    const Mesh m(50, 700, 1.0);
    for (Scheme s : {Scheme::FOEU, Scheme::SOEM}) {
        const auto traj = all_levels(s, {"validation", {}}, m);
        const auto report = monitor_invariants(traj, traj.bound_c, m);
        EXPECT_TRUE(report.ok()) << to_string(s) << " " << report.violations.size();
        for (std::size_t k = 0; k < kInvariantKinds; ++k) {
            const auto margin = report.worst_margin(static_cast<InvariantKind>(k));
            ASSERT_TRUE(margin.has_value());
            EXPECT_GE(*margin, 0.0);
        }
    }
}

TEST(MonitorInvariants, SoeuChecksOnlySignAndBoundary) {
    const Mesh m(50, 700, 1.0);
    const auto traj = all_levels(Scheme::SOEU, {"validation", {}}, m);
    const auto report = monitor_invariants(traj, traj.bound_c, m);
    EXPECT_TRUE(report.ok());
    EXPECT_FALSE(report.worst_margin(InvariantKind::tv_recursion).has_value());
    EXPECT_TRUE(report.worst_margin(InvariantKind::boundary_zero).has_value());
}

TEST(MonitorInvariants, DetectsCorruptedLevels) {
    const Mesh m(20, 400, 1.0);
    auto traj = all_levels(Scheme::FOEU, {"validation", {}}, m);
    auto v = traj.snapshots[10].level.vector();
    v[5] = -1e-3;
    v[0] = 0.25;
    traj.snapshots[10].level = GridFunction(v);
    auto w = traj.snapshots[40].level.vector();
    for (double& x : w) x *= 2.0;
    traj.snapshots[40].level = GridFunction(w);

    const auto report = monitor_invariants(traj, traj.bound_c, m);
    EXPECT_FALSE(report.ok());
    EXPECT_EQ(report.count(InvariantKind::nonnegativity), 1u);
    EXPECT_EQ(report.count(InvariantKind::boundary_zero), 1u);
    bool l1_at_40 = false;
    for (const auto& viol : report.violations)
        if (viol.kind == InvariantKind::l1_growth && viol.step == 40) l1_at_40 = true;
    EXPECT_TRUE(l1_at_40);
    EXPECT_LT(*report.worst_margin(InvariantKind::nonnegativity), 0.0);
}

TEST(MonitorInvariants, NeedsEveryLevel) {
    const Mesh m(20, 400, 1.0);
    SolveOptions o;
    o.snapshot_stride = 10;
    const auto traj = solve(Scheme::FOEU, make_preset({"validation", {}}),
                            GridFunction::sample(m, [](double s) { return s; }), m, o);
    EXPECT_THROW(monitor_invariants(traj, traj.bound_c, m), InputError);
}

TEST(MonitorInvariants, CssmSkipsBoundaryZero) {
    const Mesh m(50, 200, 0.5);
    const auto traj = all_levels(Scheme::SOEM_CSSM, {"weakstar_cssm", {}}, m);
    const auto report = monitor_invariants(traj, traj.bound_c, m);
    EXPECT_TRUE(report.ok());
    EXPECT_FALSE(report.worst_margin(InvariantKind::boundary_zero).has_value());
}
