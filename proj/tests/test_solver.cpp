#include "test_support.hpp"
#include "zk/approx_solution.hpp"
#include "zk/solver.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace zk;
using zk::testing::max_diff;

namespace {

SpectralField cos_x(const Grid& g) {
    SpectralField f(g);
    f.at(1, 0) = 0.5;
    f.at(-1, 0) = 0.5;
    return f;
}

SpectralField smooth_random(const Grid& g, int band, double l2, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SpectralField f = zk::testing::random_real(g, band, rng);
    f *= cplx(l2 / l2_norm(f), 0.0);
    return f;
}

SolverConfig config(double dt, double T, int stride = 1000000) {
    SolverConfig c;
    c.dt = dt;
    c.T = T;
    c.observer_stride = stride;
    return c;
}

}  // namespace

TEST(NonlinearTerm, ConstantGivesZero) {
    SpectralField c(Grid(16, 16));
    c.at(0, 0) = 3.0;
    EXPECT_EQ(nonlinear_term(c).max_abs(), 0.0);
}

TEST(NonlinearTerm, CosXClosedForm) {
    const SpectralField n = nonlinear_term(cos_x(Grid(16, 16)));
    // -(1/2) dx cos^2 x = (1/2) sin 2x
    EXPECT_NEAR(std::abs(n.coeff(2, 0) - cplx(0.0, -0.25)), 0.0, 1e-16);
    EXPECT_NEAR(std::abs(n.coeff(-2, 0) - cplx(0.0, 0.25)), 0.0, 1e-16);
    n.for_each_mode([](int m1, int m2, const cplx& c) {
        if (std::abs(m1) != 2 || m2 != 0) {
            EXPECT_LT(std::abs(c), 1e-16);
        }
    });
}

TEST(NonlinearTerm, MatchesExactConvolution) {
    std::mt19937_64 rng(21);
    const Grid g(16, 16, 1);
    for (int r = 0; r < 5; ++r) {
        const SpectralField w = zk::testing::random_real(g, 5, rng);
        SpectralField exact = zk::testing::convolve(w, w);
        exact.for_each_mode([](int m1, int, cplx& c) { c *= cplx(0.0, -0.5 * m1); });
        const SpectralField n = nonlinear_term(w);
        EXPECT_LT(max_diff(n, dealias(exact)), 1e-13 * exact.max_abs());
        EXPECT_TRUE(is_hermitian(n));
        for (int k = -5; k <= 5; ++k) EXPECT_EQ(n.coeff(0, k), cplx(0.0));
    }
}

TEST(NonlinearTerm, RejectsComplexField) {
    SpectralField f(Grid(16, 16));
    f.at(1, 1) = 1.0;
    EXPECT_THROW(nonlinear_term(f), std::domain_error);
}

TEST(Step, ZeroStaysZero) {
    const SpectralField z(Grid(16, 16));
    EXPECT_EQ(step(z, 1e-2).max_abs(), 0.0);
}

TEST(Step, LinearLimitIsPropagate) {
    const SpectralField w = smooth_random(Grid(32, 32), 8, 1.0, 22);
    EXPECT_LT(max_diff(step(w, 1e-2, 0.0), propagate(w, 1e-2)), 1e-13 * w.max_abs());
}

TEST(Step, LocalErrorIsFifthOrder) {
    const SpectralField w = smooth_random(Grid(32, 32, 1), 2, 1.0, 23);
    auto defect = [&](double dt) {
        const SpectralField one = step(w, dt);
        const SpectralField two = step(step(w, 0.5 * dt), 0.5 * dt);
        return l2_norm(one - two);
    };
    const double ratio = defect(0.005) / defect(0.0025);
    EXPECT_NEAR(ratio, 32.0, 3.2);
}

TEST(Step, BlowUpDetected) {
    SpectralField w(Grid(16, 16));
    w.at(1, 0) = 1e13;
    w.at(-1, 0) = 1e13;
    Stepper s;
    EXPECT_THROW(s.step(w, 1e-3), BlowUpError);
}

TEST(Solve, PureYDataIsStationary) {
    SpectralField w(Grid(32, 32));
    w.at(0, 2) = 0.4;
    w.at(0, -2) = 0.4;
    w.at(0, 5) = cplx(0.1, 0.2);
    w.at(0, -5) = cplx(0.1, -0.2);
    const Trajectory tr = solve(w, config(1e-2, 0.5, 10));
    ASSERT_TRUE(tr.completed());
    for (const auto& s : tr.states) EXPECT_EQ(max_diff(s, w), 0.0);
    EXPECT_NEAR(hs_growth_check(tr, 2.0).max_ratio, 1.0, 0.0);
}

TEST(Solve, ObserverSchedule) {
    const SpectralField w = smooth_random(Grid(16, 16), 3, 0.5, 24);
    const Trajectory tr = solve(w, config(0.1, 1.0, 3));
    ASSERT_TRUE(tr.completed());
    ASSERT_EQ(tr.times.size(), 5u);  // 0, 0.3, 0.6, 0.9, 1.0
    EXPECT_EQ(tr.times.front(), 0.0);
    EXPECT_NEAR(tr.times[1], 0.3, 1e-15);
    EXPECT_NEAR(tr.times.back(), 1.0, 1e-15);
}

TEST(Solve, Deterministic) {
    const SpectralField w = smooth_random(Grid(32, 32), 5, 1.0, 25);
    const Trajectory a = solve(w, config(1e-2, 0.2, 5));
    const Trajectory b = solve(w, config(1e-2, 0.2, 5));
    ASSERT_EQ(a.states.size(), b.states.size());
    for (std::size_t j = 0; j < a.states.size(); ++j) EXPECT_EQ(max_diff(a.states[j], b.states[j]), 0.0);
}

TEST(Solve, ApproxDataConservesInvariants) {
    const Grid g(256, 256);
    const SpectralField w0 = build({1.0, 64, 2.0}, g, 0.0);
    const Trajectory tr = solve(w0, config(5e-4, 1.0, 100));
    ASSERT_TRUE(tr.completed()) << tr.message;
    const DriftReport d = drift_report(tr);
    EXPECT_LT(d.mass, 1e-8);
    EXPECT_LT(d.l2, 1e-8);
    EXPECT_LT(d.energy, 1e-8);
    EXPECT_LT(d.x_mean, 1e-8);
}

TEST(Solve, GlobalOrderFour) {
    const SpectralField w0 = smooth_random(Grid(32, 32, 1), 2, 1.0, 26);
    auto final_state = [&](double dt) { return solve(w0, config(dt, 1.0)).states.back(); };
    const SpectralField ref = final_state(0.0003125);
    const double ratio = sobolev_norm(final_state(0.005) - ref, 2.0) / sobolev_norm(final_state(0.0025) - ref, 2.0);
    EXPECT_NEAR(std::log2(ratio), 4.0, 0.3);
}

TEST(Solve, Reversible) {
    const SpectralField w0 = build({1.0, 32, 2.0}, Grid(128, 128), 0.0);
    SolverConfig fwd = config(5e-4, 1.0);
    const Trajectory a = solve(w0, fwd);
    SolverConfig back = fwd;
    back.backward = true;
    const Trajectory b = solve(a.states.back(), back);
    ASSERT_TRUE(a.completed() && b.completed());
    EXPECT_LT(sobolev_norm(b.states.back() - w0, 2.0), 1e-6);
}

TEST(Solve, LinearLimit) {
    const SpectralField w0 = smooth_random(Grid(32, 32), 4, 2.0, 28);
    auto gap = [&](double lambda) {
        SolverConfig c = config(1e-2, 0.5);
        c.nonlinear_scale = lambda;
        return l2_norm(solve(w0, c).states.back() - propagate(w0, 0.5));
    };
    EXPECT_NEAR(gap(1e-2) / gap(5e-3), 2.0, 0.02);
    EXPECT_NEAR(gap(1e-3) / gap(5e-4), 2.0, 0.002);
}

TEST(Solve, StabilityViolationGivesPartialTrajectory) {
    const SpectralField w0 = smooth_random(Grid(64, 64), 8, 500.0, 29);
    const Trajectory tr = solve(w0, config(1e-2, 1.0));
    EXPECT_EQ(tr.status, RunStatus::stability_violation);
    EXPECT_FALSE(tr.completed());
    EXPECT_EQ(tr.states.size(), 1u);
}

TEST(Solve, RejectsBadInput) {
    SpectralField w(Grid(16, 16));
    w.at(1, 2) = 1.0;
    EXPECT_THROW(solve(w, config(1e-2, 1.0)), std::domain_error);
    const SpectralField z(Grid(16, 16));
    EXPECT_THROW(solve(z, config(2.0, 1.0)), std::invalid_argument);
    EXPECT_THROW(solve(z, config(0.0, 1.0)), std::invalid_argument);
    SolverConfig c = config(0.1, 1.0);
    c.observer_stride = 0;
    EXPECT_THROW(solve(z, c), std::invalid_argument);
}

TEST(Invariants, CosX) {
    const InvariantRecord r = invariants(cos_x(Grid(16, 16)));
    EXPECT_NEAR(r.mass, 0.0, 1e-15);
    EXPECT_NEAR(r.energy, pi * pi, 1e-12);
    EXPECT_NEAR(r.l2, pi * std::sqrt(2.0), 1e-13);
}

TEST(Invariants, EnergyAgainstQuadrature) {
    const SpectralField w = smooth_random(Grid(16, 16, 4), 3, 3.0, 30);
    const RealField v = synthesize(w, 4);
    const RealField gx = synthesize(dx(w), 4), gy = synthesize(dy(w), 4);
    double e = 0.0;
    for (std::size_t j = 0; j < v.values.size(); ++j)
        e += 0.5 * (gx.values[j] * gx.values[j] + gy.values[j] * gy.values[j]) - std::pow(v.values[j], 3) / 6.0;
    e *= (two_pi / v.nx()) * (two_pi / v.ny());
    EXPECT_NEAR(invariants(w).energy, e, 1e-11 * std::abs(e));
}

TEST(Invariants, XMeanOfApproxData) {
    const double theta = 0.6;
    const long long m = 8;
    const Grid g(32, 16);
    const InvariantRecord r = invariants(build({theta, m, 2.0}, g, 0.0));
    for (int k = 0; k < g.my(); ++k) {
        const int n = g.freq_y(k);
        const double expected = std::abs(n) == 2 ? theta / (2.0 * m) : 0.0;
        EXPECT_NEAR(std::abs(r.x_mean_modes[k] - expected), 0.0, 1e-16);
    }
}

TEST(Diagnostics, GtOfConstantField) {
    SpectralField c(Grid(16, 16));
    c.at(0, 0) = -0.7;
    const Trajectory tr = solve(c, config(0.05, 2.0, 4));
    EXPECT_NEAR(gT_diagnostic(tr), 0.7 * 2.0, 1e-14);
    Trajectory one;
    one.observers.push_back({});
    EXPECT_THROW(gT_diagnostic(one), std::invalid_argument);
}

TEST(Diagnostics, GtIsAdditive) {
    const SpectralField w0 = smooth_random(Grid(32, 32), 4, 1.0, 31);
    const Trajectory whole = solve(w0, config(1e-2, 1.0, 10));
    const Trajectory first = solve(w0, config(1e-2, 0.5, 10));
    const Trajectory second = solve(first.states.back(), config(1e-2, 0.5, 10));
    const double sum = gT_diagnostic(first) + gT_diagnostic(second);
    EXPECT_NEAR(gT_diagnostic(whole), sum, 1e-10 * sum);
}

TEST(Diagnostics, GrowthCheck) {
    const SpectralField w0 = smooth_random(Grid(32, 32), 5, 1.0, 32);
    SolverConfig lin = config(1e-2, 1.0, 10);
    lin.nonlinear_scale = 0.0;
    EXPECT_NEAR(hs_growth_check(solve(w0, lin), 2.0).max_ratio, 1.0, 1e-13);

    SpectralField small = w0;
    small *= cplx(0.1 / sobolev_norm(w0, 2.0), 0.0);
    const GrowthReport r = hs_growth_check(solve(small, config(1e-2, 1.0, 10)), 2.0);
    EXPECT_LE(r.max_ratio, 1.1);
    EXPECT_TRUE(r.within_ceiling);
    EXPECT_THROW(hs_growth_check(solve(small, lin), 0.5), std::invalid_argument);
}

TEST(Diagnostics, L1LinfRatioIsFinite) {
    const SpectralField w0 = smooth_random(Grid(32, 32), 5, 1.0, 33);
    const L1LinfReport r = l1_linf_ratio(solve(w0, config(1e-2, 1.0, 10)), 0.05);
    EXPECT_GT(r.ratio, 0.0);
    EXPECT_TRUE(std::isfinite(r.ratio));
}

TEST(Diagnostics, ObserverCsv) {
    const SpectralField w0 = smooth_random(Grid(16, 16), 3, 1.0, 34);
    SolverConfig c = config(0.1, 0.2, 1);
    c.hs_indices = {1.0, 2.5};
    std::ostringstream os;
    write_observers_csv(solve(w0, c), os);
    const std::string out = os.str();
    EXPECT_EQ(out.substr(0, out.find("\r\n")), "t,mass,l2,energy,hs_1,hs_2.5,sup_w,sup_grad_w");
    EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), 4);
}
