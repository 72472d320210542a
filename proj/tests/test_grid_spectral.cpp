#include "test_support.hpp"
#include "zk/spectral.hpp"
#include "zk/stats.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace zk;
using zk::testing::max_diff;

TEST(Grid, RejectsBadSizes) {
    EXPECT_THROW(Grid(12, 16), std::invalid_argument);
    EXPECT_THROW(Grid(4, 16), std::invalid_argument);
    EXPECT_THROW(Grid(16, 16, 0), std::invalid_argument);
    EXPECT_NO_THROW(Grid(8, 64));
}

TEST(Grid, FrequencyLayout) {
    const Grid g(16, 8);
    EXPECT_EQ(g.freq_x(0), 0);
    EXPECT_EQ(g.freq_x(7), 7);
    EXPECT_EQ(g.freq_x(8), -8);
    EXPECT_EQ(g.freq_x(15), -1);
    EXPECT_TRUE(g.contains(-8, -4));
    EXPECT_FALSE(g.contains(8, 0));
    for (int i = 0; i < g.mx(); ++i)
        for (int k = 0; k < g.my(); ++k) EXPECT_EQ(g.index(g.freq_x(i), g.freq_y(k)), std::size_t(i) * 8 + k);
    EXPECT_EQ(g.dealias_x(), 5);
}

TEST(Grid, SizeFor) {
    EXPECT_EQ(grid_size_for(1), 8);
    EXPECT_EQ(grid_size_for(8), 8);
    EXPECT_EQ(grid_size_for(9), 16);
    EXPECT_EQ(grid_size_for(385), 512);
}

TEST(Analyze, ConstantField) {
    const Grid g(8, 8, 1);
    RealField f{g, 1, std::vector<double>(64, 1.0)};
    const SpectralField c = analyze(f);
    EXPECT_NEAR(std::abs(c.coeff(0, 0) - 1.0), 0.0, 1e-15);
    c.for_each_mode([](int m1, int m2, const cplx& v) {
        if (m1 || m2) {
            EXPECT_LT(std::abs(v), 1e-15);
        }
    });
}

TEST(Analyze, CosTwoY) {
    for (int factor : {1, 2, 4}) {
        const Grid g(8, 8);
        RealField f{g, factor, {}};
        for (int j = 0; j < f.nx(); ++j)
            for (int k = 0; k < f.ny(); ++k) f.values.push_back(std::cos(2.0 * two_pi * k / f.ny()));
        const SpectralField c = analyze(f);
        EXPECT_NEAR(c.coeff(0, 2).real(), 0.5, 1e-15);
        EXPECT_NEAR(c.coeff(0, -2).real(), 0.5, 1e-15);
        EXPECT_NEAR(c.max_abs(), 0.5, 1e-15);
    }
}

TEST(Analyze, RejectsNonFinite) {
    const Grid g(8, 8, 1);
    RealField f{g, 1, std::vector<double>(64, 0.0)};
    f.values[5] = std::nan("");
    EXPECT_THROW(analyze(f), std::domain_error);
    f.values[5] = INFINITY;
    EXPECT_THROW(analyze(f), std::domain_error);
}

TEST(Synthesize, CosX) {
    const Grid g(16, 8);
    SpectralField c(g);
    c.at(1, 0) = 0.5;
    c.at(-1, 0) = 0.5;
    const RealField f = synthesize(c);
    for (int j = 0; j < f.nx(); ++j)
        for (int k = 0; k < f.ny(); ++k) EXPECT_NEAR(f(j, k), std::cos(two_pi * j / f.nx()), 1e-14);
}

TEST(Synthesize, ZeroField) {
    const RealField f = synthesize(SpectralField(Grid(8, 8)));
    for (double v : f.values) EXPECT_EQ(v, 0.0);
}

TEST(Synthesize, MatchesDirectSummation) {
    std::mt19937_64 rng(3);
    const Grid g(16, 16, 2);
    const SpectralField c = zk::testing::random_real(g, 7, rng);
    const RealField f = synthesize(c);
    std::uniform_int_distribution<int> pick(0, f.nx() - 1);
    for (int r = 0; r < 10; ++r) {
        const int j = pick(rng), k = pick(rng);
        const cplx exact = zk::testing::direct_sum(c, two_pi * j / f.nx(), two_pi * k / f.ny());
        EXPECT_NEAR(f(j, k), exact.real(), 1e-10);
        EXPECT_NEAR(exact.imag(), 0.0, 1e-10);
    }
}

TEST(Synthesize, RejectsNonHermitian) {
    SpectralField c(Grid(8, 8));
    c.at(1, 2) = 1.0;
    EXPECT_THROW(synthesize(c), std::domain_error);
}

TEST(Synthesize, RoundTripIncludingNyquist) {
    std::mt19937_64 rng(5);
    for (int factor : {1, 3, 4}) {
        const Grid g(16, 8, factor);
        const SpectralField c = zk::testing::random_real(g, 8, rng);  // band covers the Nyquist rows
        ASSERT_TRUE(is_hermitian(c));
        const SpectralField back = analyze(synthesize(c));
        EXPECT_LT(max_diff(back, c), 1e-12 * c.max_abs()) << "factor " << factor;
    }
}

TEST(Sobolev, SingleModes) {
    const Grid g(16, 16);
    SpectralField e(g);
    e.at(1, 0) = 1.0;
    EXPECT_NEAR(sobolev_norm(e, 1.0), two_pi * std::sqrt(2.0), 1e-13);

    SpectralField c(g);
    c.at(0, 2) = 0.5;
    c.at(0, -2) = 0.5;
    for (double s : {0.0, 0.5, 1.0, 2.0, 3.7}) {
        // brute force: (2 pi)^2 * 2 * (1/4) * 5^s
        double brute = 0.0;
        c.for_each_mode([&](int m1, int m2, const cplx& v) { brute += std::pow(1.0 + m1 * m1 + m2 * m2, s) * std::norm(v); });
        EXPECT_NEAR(sobolev_norm(c, s), two_pi * std::pow(5.0, s / 2) / std::sqrt(2.0), 1e-12 * two_pi * std::sqrt(brute));
        EXPECT_NEAR(sobolev_norm(c, s), two_pi * std::sqrt(brute), 1e-12 * two_pi * std::sqrt(brute));
    }
}

TEST(Sobolev, ZeroIndexIsParseval) {
    std::mt19937_64 rng(7);
    const Grid g(16, 16, 1);
    for (int r = 0; r < 100; ++r) {
        const SpectralField f = zk::testing::random_complex(g, 7, rng);
        double sum = 0.0;
        for (const auto& c : f.data()) sum += std::norm(c);
        EXPECT_NEAR(l2_norm(f), sobolev_norm(f, 0.0), 0.0);
        EXPECT_NEAR(l2_norm(f) * l2_norm(f), two_pi * two_pi * sum, 1e-12 * two_pi * two_pi * sum);
    }
}

TEST(Sobolev, ParsevalAgainstQuadrature) {
    std::mt19937_64 rng(8);
    const Grid g(16, 16, 2);
    const SpectralField c = zk::testing::random_real(g, 5, rng);
    const RealField f = synthesize(c);
    double q = 0.0;
    for (double v : f.values) q += v * v;
    q *= (two_pi / f.nx()) * (two_pi / f.ny());
    EXPECT_NEAR(l2_norm(c), std::sqrt(q), 1e-12 * std::sqrt(q));
}

TEST(LittlewoodPaley, Boundaries) {
    const Grid g(16, 16);
    SpectralField f(g);
    f.at(1, 0) = 1.0;
    f.at(0, 0) = 2.0;
    EXPECT_EQ(lp_project(f, DyadicBlock(0)).coeff(0, 0), cplx(2.0));
    EXPECT_EQ(lp_project(f, DyadicBlock(0)).coeff(1, 0), cplx(0.0));
    EXPECT_EQ(lp_project(f, DyadicBlock(1)).coeff(1, 0), cplx(1.0));
    EXPECT_EQ(lp_project(f, DyadicBlock(2)).max_abs(), 0.0);
    EXPECT_THROW(DyadicBlock(3), std::invalid_argument);
}

TEST(LittlewoodPaley, ProjectionAlgebra) {
    std::mt19937_64 rng(9);
    const Grid g(32, 32, 1);
    const SpectralField f = zk::testing::random_complex(g, 15, rng);
    const auto blocks = dyadic_blocks(g);
    SpectralField sum(g);
    double pieces = 0.0;
    for (const auto& b : blocks) {
        const SpectralField p = lp_project(f, b);
        EXPECT_EQ(max_diff(lp_project(p, b), p), 0.0);
        for (const auto& other : blocks)
            if (!(other == b)) {
                EXPECT_EQ(lp_project(p, other).max_abs(), 0.0);
            }
        sum += p;
        pieces += std::pow(l2_norm(p), 2);
    }
    EXPECT_EQ(max_diff(sum, f), 0.0);
    EXPECT_NEAR(pieces, std::pow(l2_norm(f), 2), 1e-12 * pieces);
}

TEST(LittlewoodPaley, NormEquivalence) {
    std::mt19937_64 rng(10);
    const Grid g(64, 64, 1);
    for (double s : {-1.5, -0.5, 0.0, 0.75, 1.0, 2.0}) {
        for (int r = 0; r < 10; ++r) {
            const SpectralField f = zk::testing::random_complex(g, 31, rng);
            double dyadic = 0.0;
            for (const auto& b : dyadic_blocks(g))
                dyadic += std::pow(double(b.scale()), 2 * s) * std::pow(l2_norm(lp_project(f, b)), 2);
            const double hs2 = std::pow(sobolev_norm(f, s), 2);
            const double C = std::pow(4.0, std::abs(s));
            EXPECT_LE(dyadic / C, hs2 * (1 + 1e-12));
            EXPECT_LE(hs2, C * dyadic * (1 + 1e-12));
        }
    }
}

TEST(Dispersion, Symbol) {
    EXPECT_TRUE(dispersion_symbol(1, 0) == 1);
    EXPECT_TRUE(dispersion_symbol(2, 3) == 26);
    for (int m = -20; m <= 20; ++m)
        for (int n = -20; n <= 20; ++n) {
            EXPECT_TRUE(dispersion_symbol(m, n) == dispersion_symbol(m, -n));
            EXPECT_EQ(dispersion_frequency(m, n), double(m * m * m + m * n * n));
        }
    EXPECT_TRUE(dispersion_symbol(200000, 200000) == wide_int(2) * 200000 * 200000 * 200000);
    EXPECT_THROW(dispersion_symbol(200001, 0), std::out_of_range);
}

TEST(Propagate, Identity) {
    std::mt19937_64 rng(11);
    const SpectralField f = zk::testing::random_complex(Grid(16, 16), 7, rng);
    EXPECT_EQ(max_diff(propagate(f, 0.0), f), 0.0);
}

TEST(Propagate, PureYModesFixed) {
    SpectralField f(Grid(16, 16));
    f.at(0, 3) = cplx(0.3, -0.2);
    EXPECT_EQ(max_diff(propagate(f, 7.3), f), 0.0);
}

TEST(Propagate, PhaseOfModeOneOne) {
    SpectralField f(Grid(16, 16));
    f.at(1, 1) = 1.0;
    const double t = 0.37;
    EXPECT_NEAR(std::abs(propagate(f, t).coeff(1, 1) - std::polar(1.0, 2.0 * t)), 0.0, 1e-15);
}

TEST(Propagate, UnitarityAndGroupLaw) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> ut(-10.0, 10.0);
    const Grid g(64, 64, 1);
    for (int r = 0; r < 20; ++r) {
        const SpectralField f = zk::testing::random_complex(g, 31, rng);
        const double t = ut(rng);
        const SpectralField w = propagate(f, t);
        for (double s : {0.0, 1.0, 2.0}) EXPECT_NEAR(sobolev_norm(w, s), sobolev_norm(f, s), 1e-12 * sobolev_norm(f, s));
        EXPECT_LT(max_diff(propagate(w, -t), f), 1e-12 * f.max_abs());
        // Dyadic times keep phi * t exact, so the composition is exact too.
        const double a = 0.375, b = -1.25;
        EXPECT_LT(max_diff(propagate(propagate(f, a), b), propagate(f, a + b)), 1e-12 * f.max_abs());
    }
}

TEST(Cutoff, Values) {
    for (double N : {1.0, 4.0, 16.0}) {
        EXPECT_EQ(smooth_cutoff(0.5 * N, N), 1.0);
        EXPECT_EQ(smooth_cutoff(N, N), 1.0);
        EXPECT_EQ(smooth_cutoff(2.0 * N, N), 0.0);
        const double mid = smooth_cutoff(1.5 * N, N);
        EXPECT_GT(mid, 0.0);
        EXPECT_LT(mid, 1.0);
        EXPECT_DOUBLE_EQ(mid, 0.5);
        EXPECT_EQ(smooth_cutoff(-1.3 * N, N), smooth_cutoff(1.3 * N, N));
    }
    EXPECT_THROW(smooth_cutoff(1.0, 0.5), std::invalid_argument);
}

TEST(Cutoff, MonotoneAndSmooth) {
    double prev = 1.0;
    for (int j = 0; j <= 1000; ++j) {
        const double r = 1.0 + j / 1000.0;
        const double v = bump(r);
        EXPECT_LE(v, prev);
        prev = v;
    }
    // One-sided derivatives vanish at the plateau edges.
    EXPECT_LT((bump(1.0 + 1e-3) - 1.0) / 1e-3, 1e-100);
    EXPECT_LT(bump(2.0 - 1e-3) / 1e-3, 1e-100);
}

TEST(SupNorm, SinAndConstant) {
    SpectralField s(Grid(16, 16, 4));
    s.at(1, 0) = cplx(0.0, -0.5);
    s.at(-1, 0) = cplx(0.0, 0.5);
    EXPECT_NEAR(sup_norm(synthesize(s)), 1.0, 1e-6);

    SpectralField c(Grid(8, 8));
    c.at(0, 0) = -2.5;
    EXPECT_EQ(sup_norm(synthesize(c)), 2.5);
}

TEST(SupNorm, RefinementMonotone) {
    std::mt19937_64 rng(13);
    const Grid g(16, 16);
    for (int r = 0; r < 10; ++r) {
        const SpectralField f = zk::testing::random_real(g, 7, rng);
        EXPECT_GE(sup_norm(synthesize(f, 8)), sup_norm(synthesize(f, 4)) - 1e-8);
    }
}

TEST(SupNorm, GradientOfComplexExponential) {
    SpectralField f(Grid(16, 16));
    f.at(1, 0) = 1.0;
    EXPECT_NEAR(sup_gradient(f, 4), 1.0, 1e-14);
    EXPECT_NEAR(sup_abs(f, 4), 1.0, 1e-14);
}

TEST(Dealias, Behaviour) {
    std::mt19937_64 rng(14);
    const Grid g(16, 16);
    const SpectralField in_band = zk::testing::random_complex(g, 5, rng);
    EXPECT_EQ(max_diff(dealias(in_band), in_band), 0.0);
    SpectralField nyq(g);
    nyq.at(-8, 0) = 1.0;
    nyq.at(6, 1) = 1.0;
    EXPECT_EQ(dealias(nyq).max_abs(), 0.0);
}

TEST(Dealias, ProductMatchesExactConvolution) {
    std::mt19937_64 rng(15);
    const Grid g(16, 16, 1);
    for (int r = 0; r < 5; ++r) {
        const SpectralField a = dealias(zk::testing::random_real(g, 8, rng));
        const SpectralField b = dealias(zk::testing::random_real(g, 8, rng));
        auto va = synthesize_complex(a, 1);
        const auto vb = synthesize_complex(b, 1);
        for (std::size_t j = 0; j < va.size(); ++j) va[j] *= vb[j];
        const SpectralField prod = dealias(analyze_complex(g, 1, va));
        const SpectralField exact = dealias(zk::testing::convolve(a, b));
        EXPECT_LT(max_diff(prod, exact), 1e-13 * exact.max_abs());
    }
}

TEST(Derivatives, MatchClosedForm) {
    SpectralField f(Grid(16, 16));
    f.at(3, 0) = cplx(0.0, -0.5);  // sin(3x)
    f.at(-3, 0) = cplx(0.0, 0.5);
    const RealField d = synthesize(dx(f), 1);
    for (int j = 0; j < d.nx(); ++j) EXPECT_NEAR(d(j, 0), 3.0 * std::cos(3.0 * two_pi * j / d.nx()), 1e-13);
    EXPECT_EQ(dy(f).max_abs(), 0.0);
    const SpectralField j2 = bessel_potential(f, 2.0);
    EXPECT_NEAR(std::abs(j2.coeff(3, 0)), 0.5 * 10.0, 1e-13);
}

TEST(Stats, LogLogFit) {
    std::vector<double> x{1, 2, 4, 8}, y;
    for (double v : x) y.push_back(3.0 * std::pow(v, -1.5));
    const auto f = fit_loglog(x, y);
    EXPECT_NEAR(f.slope, -1.5, 1e-12);
    EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-12);
    EXPECT_NEAR(f.residual, 0.0, 1e-12);
    EXPECT_THROW(fit_loglog(std::vector<double>{1.0}, std::vector<double>{1.0}), std::invalid_argument);
    EXPECT_THROW(fit_loglog(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, -1.0}), std::domain_error);
    const auto ls = log_space(1e-3, 1.0, 4);
    EXPECT_EQ(ls.front(), 1e-3);
    EXPECT_EQ(ls.back(), 1.0);
    EXPECT_NEAR(ls[1], 1e-2, 1e-15);
}
