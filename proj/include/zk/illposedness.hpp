#ifndef ZK_ILLPOSEDNESS_HPP
#define ZK_ILLPOSEDNESS_HPP

#include "zk/approx_solution.hpp"
#include "zk/csv.hpp"
#include "zk/solver.hpp"
#include "zk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace zk {

struct IllposednessParams {
    double s = 2.0;
    std::vector<long long> ms{16, 32, 64};
    int mx = 256, my = 256;
    double dt = 5e-4;
    double T = 1.0;
    int observer_stride = 100;
    /// Distance lower bound is checked on t >= t_min.
    double t_min = 0.1;
    /// Fraction of 2 |sin(t/2)| pi sqrt(2) the distance must reach.
    double distance_fraction = 0.5;
    /// Slack on the uniform bound C = slack * (||u(0)|| + ||v(0)||) at the smallest m.
    double bound_slack = 1.1;

    void validate() const {
        if (!(s > 5.0 / 3.0)) throw std::invalid_argument("illposedness: s must exceed 5/3");
        if (ms.size() < 2) throw std::invalid_argument("illposedness: need at least two values of m");
        const Grid g(mx, my);
        for (long long m : ms) {
            if (m < 2) throw std::invalid_argument("illposedness: m must be >= 2");
            if (m > g.dealias_x() || 3 > g.dealias_y())
                throw std::invalid_argument("illposedness: m = " + std::to_string(m) + " does not fit the grid " +
                                            std::to_string(mx) + "x" + std::to_string(my));
        }
    }
};

struct IllposednessSample {
    double t = 0.0;
    double hs_u = 0.0;          ///< ||u_m(t)||_{H^s}
    double hs_v = 0.0;          ///< ||v_m(t)||_{H^s}
    double distance = 0.0;      ///< ||u_m(t) - v_m(t)||_{H^s}
    double predicted = 0.0;     ///< 2 |sin(t/2)| pi sqrt(2)
    double gap = 0.0;           ///< ||u_m(t) - u_{1,m}(t)||_{H^s}
};

struct IllposednessRun {
    long long m = 0;
    RunStatus status_u = RunStatus::completed;
    RunStatus status_v = RunStatus::completed;
    std::string message;
    std::vector<IllposednessSample> samples;

    bool completed() const { return status_u == RunStatus::completed && status_v == RunStatus::completed; }
    double sup_norm_sum() const {
        double c = 0.0;
        for (const auto& p : samples) c = std::max(c, p.hs_u + p.hs_v);
        return c;
    }
    double initial_distance() const { return samples.empty() ? 0.0 : samples.front().distance; }
    double sup_gap() const {
        double g = 0.0;
        for (const auto& p : samples) g = std::max(g, p.gap);
        return g;
    }
    /// Largest c with distance >= c t on [t_min, T].
    double fitted_c(double t_min) const {
        double c = INFINITY;
        for (const auto& p : samples)
            if (p.t >= t_min - 1e-12) c = std::min(c, p.distance / p.t);
        return c;
    }
};

struct IllposednessCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct IllposednessReport {
    IllposednessParams params;
    std::vector<IllposednessRun> runs;
    double uniform_bound = 0.0;       ///< C of (a)
    SlopeFit initial_distance_fit;    ///< slope should be -1
    SlopeFit gap_fit;                 ///< slope = -epsilon
    std::vector<IllposednessCheck> checks;

    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
    }
};

inline IllposednessRun illposedness_run(const IllposednessParams& p, long long m) {
    const Grid grid(p.mx, p.my);
    SolverConfig cfg;
    cfg.dt = p.dt;
    cfg.T = p.T;
    cfg.observer_stride = p.observer_stride;
    cfg.hs_indices = {p.s};
    const ApproxSolutionParams up{1.0, m, p.s}, vp{-1.0, m, p.s};
    const Trajectory tu = solve(build(up, grid, 0.0), cfg);
    const Trajectory tv = solve(build(vp, grid, 0.0), cfg);

    IllposednessRun run;
    run.m = m;
    run.status_u = tu.status;
    run.status_v = tv.status;
    run.message = tu.message.empty() ? tv.message : tu.message;
    const std::size_t n = std::min(tu.states.size(), tv.states.size());
    for (std::size_t j = 0; j < n; ++j) {
        const double t = tu.times[j];
        IllposednessSample smp;
        smp.t = t;
        smp.hs_u = tu.observers[j].hs[0];
        smp.hs_v = tv.observers[j].hs[0];
        smp.distance = sobolev_norm(tu.states[j] - tv.states[j], p.s);
        smp.predicted = 2.0 * std::abs(std::sin(0.5 * t)) * pi * std::sqrt(2.0);
        smp.gap = sobolev_norm(tu.states[j] - build(up, grid, t), p.s);
        run.samples.push_back(smp);
    }
    return run;
}

/// Solves from u_{1,m}(0) and u_{-1,m}(0) for every m and evaluates the four
/// ill-posedness properties: (a) uniform H^s bound, (b) initial distance ~ 1/m,
/// (c) distance >= fraction * 2|sin(t/2)| pi sqrt(2) on [t_min, T],
/// (d) positive decay exponent of sup_t ||u_m - u_{1,m}||_{H^s}.
inline IllposednessReport illposedness_study(const IllposednessParams& p) {
    p.validate();
    IllposednessReport rep;
    rep.params = p;
    std::vector<long long> ms = p.ms;
    std::sort(ms.begin(), ms.end());
    for (long long m : ms) rep.runs.push_back(illposedness_run(p, m));

    bool all_done = true;
    std::string failures;
    for (const auto& r : rep.runs)
        if (!r.completed()) {
            all_done = false;
            failures += " m=" + std::to_string(r.m) + ": " + r.message + ";";
        }
    rep.checks.push_back({"solver runs completed", all_done, all_done ? "all runs reached T" : failures});

    // (a)
    const auto& first = rep.runs.front().samples.front();
    rep.uniform_bound = p.bound_slack * (first.hs_u + first.hs_v);
    double worst = 0.0;
    for (const auto& r : rep.runs) worst = std::max(worst, r.sup_norm_sum());
    rep.checks.push_back({"(a) uniform H^s bound", worst <= rep.uniform_bound,
                          "max_m sup_t ||u||+||v|| = " + format_double(worst) + ", C = " +
                              format_double(rep.uniform_bound)});

    // (b)
    std::vector<double> xs, d0, gaps;
    bool halves = true;
    std::string ratios;
    for (std::size_t j = 0; j < rep.runs.size(); ++j) {
        xs.push_back(double(rep.runs[j].m));
        d0.push_back(rep.runs[j].initial_distance());
        gaps.push_back(rep.runs[j].sup_gap());
        if (j > 0) {
            const double expected = double(rep.runs[j].m) / double(rep.runs[j - 1].m);
            const double ratio = d0[j - 1] / d0[j];
            halves = halves && std::abs(ratio / expected - 1.0) <= 0.1;
            ratios += " " + format_double(ratio);
        }
    }
    rep.initial_distance_fit = fit_loglog(xs, d0);
    rep.checks.push_back({"(b) initial distance ~ 1/m", halves,
                          "successive ratios" + ratios + ", slope " + format_double(rep.initial_distance_fit.slope)});

    // (c)
    bool above = true;
    std::string worst_c;
    double min_margin = INFINITY;
    for (const auto& r : rep.runs)
        for (const auto& smp : r.samples) {
            if (smp.t < p.t_min - 1e-12) continue;
            const double margin = smp.distance / (p.distance_fraction * smp.predicted);
            if (margin < min_margin) {
                min_margin = margin;
                worst_c = "m=" + std::to_string(r.m) + " t=" + format_double(smp.t);
            }
            above = above && margin >= 1.0;
        }
    rep.checks.push_back({"(c) distance lower bound", above,
                          "min distance / bound = " + format_double(min_margin) + " at " + worst_c});

    // (d)
    bool positive_gaps = std::all_of(gaps.begin(), gaps.end(), [](double g) { return g > 0.0; });
    if (positive_gaps) rep.gap_fit = fit_loglog(xs, gaps);
    rep.checks.push_back({"(d) gap exponent epsilon > 0", positive_gaps && -rep.gap_fit.slope > 0.0,
                          "epsilon = " + format_double(-rep.gap_fit.slope)});
    return rep;
}

inline void write_illposedness_csv(const IllposednessReport& rep, std::ostream& os) {
    CsvWriter csv(os, {"m", "t", "hs_u", "hs_v", "distance", "predicted", "gap"});
    for (const auto& r : rep.runs)
        for (const auto& p : r.samples)
            csv.write_row({std::to_string(r.m), format_double(p.t), format_double(p.hs_u), format_double(p.hs_v),
                           format_double(p.distance), format_double(p.predicted), format_double(p.gap)});
}

}  // namespace zk

#endif
