#include "zk/zk.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace zk;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

Outcome resonance_exactness() {
    const std::int64_t B = 30;
    long long tuples = 0, mismatches = 0;
    for (std::int64_t m = -B; m <= B; ++m)
        for (std::int64_t m1 = -B; m1 <= B; ++m1)
            for (std::int64_t n = -B; n <= B; ++n)
                for (std::int64_t n1 = -B; n1 <= B; ++n1) {
                    ++tuples;
                    const wide_int r = resonance(m, m1, n, n1);
                    if (r != resonance_definitional(m, m1, n, n1)) ++mismatches;
                }
    long long bad_curvature = 0;
    for (std::int64_t m = 0; m <= 100000; ++m) {
        const auto [a, b] = curvature(m);
        if (a != -8 * wide_int(m) || b != -8 * wide_int(m)) ++bad_curvature;
    }
    return {mismatches == 0 && bad_curvature == 0,
            std::to_string(tuples) + " tuples, " + std::to_string(mismatches) + " mismatches; curvature failures for m <= 1e5: " +
                std::to_string(bad_curvature)};
}

Outcome propagator_laws() {
    const Grid g(64, 64);
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> tick(-2048, 2048);
    double worst_unitarity = 0.0, worst_group = 0.0;
    for (int k = 0; k < 100; ++k) {
        SpectralField f = random_real_field(g, 21, rng);
        const double a = tick(rng) / 1024.0, b = tick(rng) / 1024.0;
        const SpectralField fa = propagate(f, a);
        const SpectralField diff = propagate(fa, b) - propagate(f, a + b);
        for (double s : {0.0, 1.0, 2.0}) {
            const double base = sobolev_norm(f, s);
            worst_unitarity = std::max(worst_unitarity, std::abs(sobolev_norm(fa, s) / base - 1.0));
            worst_group = std::max(worst_group, sobolev_norm(diff, s) / base);
        }
    }
    return {worst_unitarity <= 1e-12 && worst_group <= 1e-12,
            "100 fields on 64x64, s in {0,1,2}: unitarity " + fmt(worst_unitarity) + ", group law " + fmt(worst_group)};
}

Outcome solver_conservation() {
    const Grid g(128, 128);
    SolverConfig cfg;
    cfg.dt = 5e-4;
    cfg.T = 1.0;
    cfg.observer_stride = 100;
    const Trajectory tr = solve(build({1.0, 32, 2.0}, g, 0.0), cfg);
    const DriftReport d = drift_report(tr);

    // order on a fixed smooth low-mode field against a fine reference
    std::mt19937_64 rng(20240601);
    SpectralField w0 = random_real_field(Grid(32, 32, 1), 2, rng);
    w0 *= cplx(1.0 / l2_norm(w0), 0.0);
    auto final_state = [&](double dt) {
        SolverConfig c;
        c.dt = dt;
        c.T = 1.0;
        c.observer_stride = 1 << 30;
        return solve(w0, c).states.back();
    };
    const SpectralField ref = final_state(0.0003125);
    std::vector<double> dts{0.01, 0.005, 0.0025}, errs;
    for (double dt : dts) errs.push_back(sobolev_norm(final_state(dt) - ref, 2.0));
    const SlopeFit order = fit_loglog(dts, errs);
    const double coarse = std::log2(sobolev_norm(final_state(0.02) - ref, 2.0) / errs.front());
    std::string halvings;
    for (std::size_t j = 0; j + 1 < errs.size(); ++j) halvings += (j ? "/" : "") + fmt(std::log2(errs[j] / errs[j + 1]), 3);

    const bool pass = tr.completed() && d.worst() <= 1e-8 && std::abs(order.slope - 4.0) <= 0.3;
    return {pass, "u_{1,32} on 128x128: mass " + fmt(d.mass) + ", l2 " + fmt(d.l2) + ", energy " + fmt(d.energy) + ", x-mean " +
                      fmt(d.x_mean) + "; order " + fmt(order.slope, 3) + " over dt 0.01..0.0025 (per halving " + halvings +
                      "; pre-asymptotic 0.02->0.01: " + fmt(coarse, 3) + ")"};
}

Outcome residual_scaling() {
    bool pass = true;
    std::string detail;
    double cancel = 0.0;
    for (double s : {1.7, 2.0, 2.5}) {
        const ResidualScan scan = residual_norm_scan(1.0, s, {8, 16, 32, 64});
        const bool ok = std::abs(scan.l2_fit.slope - scan.predicted_l2_slope) <= 0.15;
        pass = pass && ok;
        detail += (detail.empty() ? "" : "; ") + std::string("s=") + fmt(s) + " slope " + fmt(scan.l2_fit.slope) + " vs " +
                  fmt(scan.predicted_l2_slope) + (ok ? "" : " (off)");
        for (long long m : {8LL, 16LL, 32LL, 64LL})
            cancel = std::max(cancel, resonant_cancellation({1.0, m, s}, default_residual_times()));
    }
    pass = pass && cancel <= 1e-12;
    return {pass, detail + "; resonant coefficients at (+-m,+-1) " + fmt(cancel)};
}

Outcome illposedness() {
    const IllposednessReport rep = illposedness_study(IllposednessParams{});
    std::string detail;
    for (const auto& c : rep.checks) detail += (detail.empty() ? "" : "; ") + std::string(c.pass ? "" : "FAILED ") + c.name + ": " + c.detail;
    return {rep.pass(), detail};
}

Outcome kernel_decay() {
    const KernelDecayStudy kd = kernel_decay_study({4, 8, 16}, 8, 64);
    const double t = 1.0 / 16.0;
    const int trunc = poisson_truncation_for(4, t);
    const PoissonCheck pc = poisson_check({4, t, trunc});
    std::string per_n;
    for (std::size_t j = 0; j < kd.Ns.size(); ++j)
        per_n += (j ? ", " : "") + std::string("N=") + std::to_string(kd.Ns[j]) + ": " + fmt(kd.fits[j].slope, 3);
    const bool pass = kd.worst_constant_ratio() <= 2.0 && kd.worst_exponent() <= -0.55 && pc.relative_error() <= 1e-4;
    return {pass, "C_N/C_4 max " + fmt(kd.worst_constant_ratio(), 3) + "; t-exponents " + per_n + " (pooled " +
                      fmt(kd.pooled.slope, 3) + ", need <= -0.55); direct vs Poisson " + fmt(pc.relative_error()) +
                      " with " + std::to_string(trunc) + " images"};
}

Outcome airy_decay() {
    const AiryDecayStudy ad = airy_decay_study({4, 8, 16, 32, 64});
    const bool pass = ad.worst_exponent() <= -0.28 && ad.constant_spread() <= 2.0 && ad.far_constant() <= 1.0;
    return {pass, "worst exponent " + fmt(ad.worst_exponent(), 3) + ", C spread " + fmt(ad.constant_spread(), 3) +
                      ", far-field C' " + fmt(ad.far_constant(), 3)};
}

Outcome short_time() {
    const ShortTimeStudy st = short_time_study({4, 8, 16, 32, 64}, 64, 20240601);
    std::string ratios;
    for (const auto& s : st.stats) ratios += (ratios.empty() ? "" : ", ") + fmt(s.max_ratio);
    const bool pass = st.fit.slope <= -0.2 && st.max_l2_deviation() <= 1e-12;
    return {pass, "slope " + fmt(st.fit.slope, 3) + " (max ratios " + ratios + "), L2 deviation " + fmt(st.max_l2_deviation())};
}

Outcome commutator() {
    const CommutatorStudy cs = commutator_study({1.0, 2.0}, {4, 8}, 200, 20240601);
    std::string ratios;
    double worst = 0.0;
    for (const auto& s : cs.stats) {
        ratios += (ratios.empty() ? "" : ", ") + std::string("s=") + fmt(s.s) + " B=" + std::to_string(s.band) + ": " + fmt(s.max_ratio);
        worst = std::max(worst, s.max_ratio);
    }
    return {cs.worst_growth <= 1.1 && worst <= 10.0, ratios + "; worst growth under band doubling " + fmt(cs.worst_growth, 3)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"resonance exactness", resonance_exactness},
        {"propagator unitarity and group law", propagator_laws},
        {"solver conservation and order", solver_conservation},
        {"residual scaling", residual_scaling},
        {"ill-posedness experiment", illposedness},
        {"kernel decay", kernel_decay},
        {"Airy profile decay", airy_decay},
        {"short-time Strichartz", short_time},
        {"commutator inequality", commutator},
    };
    int failures = 0;
    for (std::size_t j = 0; j < criteria.size(); ++j) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[j].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += !out.pass;
        std::printf("%s %zu %s: %s [%.1f s]\n", out.pass ? "PASS" : "FAIL", j + 1, criteria[j].first.c_str(), out.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
