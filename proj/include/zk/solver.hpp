#ifndef ZK_SOLVER_HPP
#define ZK_SOLVER_HPP

#include "zk/csv.hpp"
#include "zk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace zk {

class BlowUpError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class StabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolverConfig {
    double dt = 5e-4;
    double T = 1.0;
    int observer_stride = 100;
    bool dealias = true;
    /// Sobolev indices recorded by the observers.
    std::vector<double> hs_indices{2.0};
    /// Multiplies w dx w; 0 gives the linear flow.
    double nonlinear_scale = 1.0;
    /// dt * max|w| * (mx/3) must stay below this.
    double stability_limit = 0.5;
    /// Integrate towards negative times (w(-t) is stored at elapsed time t).
    bool backward = false;

    void validate() const {
        if (!(dt > 0.0) || !(T > 0.0)) throw std::invalid_argument("SolverConfig: dt and T must be positive");
        if (dt > T) throw std::invalid_argument("SolverConfig: dt must not exceed T");
        if (observer_stride < 1) throw std::invalid_argument("SolverConfig: observer_stride must be positive");
    }
};

struct ObserverRecord {
    double t = 0.0;
    double mass = 0.0;
    double l2 = 0.0;
    double energy = 0.0;
    std::vector<double> hs;
    double sup_w = 0.0;
    double sup_grad_w = 0.0;
};

struct InvariantRecord {
    double mass = 0.0;
    double l2 = 0.0;
    double energy = 0.0;
    /// c_{(0,n)} for every retained n, in FFT order of n.
    std::vector<cplx> x_mean_modes;
};

enum class RunStatus { completed, blow_up, stability_violation };

inline const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::completed: return "completed";
        case RunStatus::blow_up: return "blow_up";
        case RunStatus::stability_violation: return "stability_violation";
    }
    return "unknown";
}

struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralField> states;
    std::vector<ObserverRecord> observers;
    std::vector<double> hs_indices;
    double dt = 0.0;
    RunStatus status = RunStatus::completed;
    std::string message;

    bool completed() const { return status == RunStatus::completed; }
};

// ---------------------------------------------------------------------------

namespace detail {

inline double max_real_abs(const std::vector<cplx>& v) {
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z.real()));
    return m;
}

// -scale * w dx w = -(scale/2) dx(w^2), evaluated on the base collocation grid.
inline SpectralField nonlinear_eval(const SpectralField& w, bool use_dealias, double scale, double* max_abs_w) {
    const Grid& g = w.grid();
    auto vals = synthesize_complex(use_dealias ? dealias(w) : w, 1);
    if (max_abs_w) *max_abs_w = max_real_abs(vals);
    for (auto& v : vals) v = cplx(v.real() * v.real(), 0.0);
    SpectralField sq = analyze_complex(g, 1, vals);
    sq.for_each_mode([&](int m1, int, cplx& c) { c *= cplx(0.0, -0.5 * scale * m1); });
    return use_dealias ? dealias(std::move(sq)) : sq;
}

}  // namespace detail

/// N(w) = -w dx w, pseudo-spectral with 2/3-rule dealiasing.
inline SpectralField nonlinear_term(const SpectralField& w, bool use_dealias = true) {
    if (!is_hermitian(w, 1e-10)) throw std::domain_error("nonlinear_term: field is not real (Hermitian symmetry violated)");
    return detail::nonlinear_eval(w, use_dealias, 1.0, nullptr);
}

/// Integrating-factor RK4 (dispersion applied exactly through propagate).
class Stepper {
public:
    Stepper(bool use_dealias = true, double nonlinear_scale = 1.0)
        : dealias_(use_dealias), scale_(nonlinear_scale) {}

    /// Advances w by dt (dt may be negative). Records max|w| at the start of the step.
    SpectralField step(const SpectralField& w, double dt) {
        if (scale_ == 0.0) {
            last_max_abs_ = 0.0;
            return propagate(w, dt);
        }
        const double h = 0.5 * dt;
        SpectralField k1 = eval(w, &last_max_abs_);
        SpectralField tmp = w;
        axpy(tmp, h, k1);
        SpectralField k2 = eval(propagate(tmp, h), nullptr);
        SpectralField k3 = propagate(w, h);
        axpy(k3, h, k2);
        k3 = eval(k3, nullptr);
        SpectralField tmp4 = propagate(w, dt);
        axpy(tmp4, dt, propagate(k3, h));
        SpectralField k4 = eval(tmp4, nullptr);

        // w_new = E w + dt/6 (E k1 + 2 E_h (k2 + k3) + k4)
        SpectralField acc = propagate(k1, dt);
        SpectralField mid = k2;
        mid += k3;
        axpy(acc, 2.0, propagate(mid, h));
        acc += k4;
        SpectralField out = propagate(w, dt);
        axpy(out, dt / 6.0, acc);
        check_blow_up(out);
        return out;
    }

    double last_max_abs() const { return last_max_abs_; }

private:
    SpectralField eval(const SpectralField& w, double* max_abs) const {
        return detail::nonlinear_eval(w, dealias_, scale_, max_abs);
    }
    static void axpy(SpectralField& y, double a, const SpectralField& x) {
        auto yd = y.data();
        const auto xd = x.data();
        for (std::size_t j = 0; j < yd.size(); ++j) yd[j] += a * xd[j];
    }
    static void check_blow_up(const SpectralField& f) {
        for (const auto& c : f.data())
            if (!(std::abs(c) <= 1e12)) throw BlowUpError("step: coefficient magnitude exceeded 1e12");
    }

    bool dealias_;
    double scale_;
    double last_max_abs_ = 0.0;
};

inline SpectralField step(const SpectralField& w, double dt, double nonlinear_scale = 1.0) {
    Stepper s(true, nonlinear_scale);
    return s.step(w, dt);
}

// ---------------------------------------------------------------------------
// Diagnostics

/// Mass, L2 norm, energy int(|grad w|^2/2 - w^3/6) and the x-mean modes.
inline InvariantRecord invariants(const SpectralField& w) {
    InvariantRecord r;
    const Grid& g = w.grid();
    const double area = two_pi * two_pi;
    r.mass = area * w.coeff(0, 0).real();
    r.l2 = l2_norm(w);

    double grad2 = 0.0;
    w.for_each_mode([&](int m1, int m2, const cplx& c) { grad2 += (double(m1) * m1 + double(m2) * m2) * std::norm(c); });

    // Cubic term: w^2 from the dealiased field, dealiased again, paired with w.
    const SpectralField wd = dealias(w);
    auto vals = synthesize_complex(wd, 1);
    for (auto& v : vals) v = cplx(v.real() * v.real(), 0.0);
    const SpectralField sq = dealias(analyze_complex(g, 1, vals));
    double cubic = 0.0;
    sq.for_each_mode([&](int m1, int m2, const cplx& c) { cubic += (c * std::conj(wd.coeff(m1, m2))).real(); });

    r.energy = area * (0.5 * grad2 - cubic / 6.0);
    for (int k = 0; k < g.my(); ++k) r.x_mean_modes.push_back(w.coeff(0, g.freq_y(k)));
    return r;
}

inline ObserverRecord observe(const SpectralField& w, double t, const std::vector<double>& hs_indices) {
    const InvariantRecord inv = invariants(w);
    ObserverRecord o;
    o.t = t;
    o.mass = inv.mass;
    o.l2 = inv.l2;
    o.energy = inv.energy;
    for (double s : hs_indices) o.hs.push_back(sobolev_norm(w, s));
    const int factor = w.grid().oversample();
    o.sup_w = sup_abs(w, factor);
    o.sup_grad_w = sup_gradient(w, factor);
    return o;
}

/// Runs the flow map to cfg.T. Failures (blow-up, stability) end the run with a
/// partial trajectory whose status says why.
inline Trajectory solve(const SpectralField& w0, const SolverConfig& cfg) {
    cfg.validate();
    if (!is_hermitian(w0, 1e-12)) throw std::domain_error("solve: initial data is not real (Hermitian symmetry violated)");

    Trajectory traj;
    traj.hs_indices = cfg.hs_indices;
    const long long nsteps = static_cast<long long>(std::ceil(cfg.T / cfg.dt - 1e-9));
    const double dt = cfg.T / static_cast<double>(nsteps);
    traj.dt = dt;
    const double signed_dt = cfg.backward ? -dt : dt;
    const double kmax = w0.grid().dealias_x();

    auto record = [&](const SpectralField& w, double t) {
        traj.times.push_back(t);
        traj.states.push_back(w);
        traj.observers.push_back(observe(w, t, cfg.hs_indices));
    };

    Stepper stepper(cfg.dealias, cfg.nonlinear_scale);
    SpectralField w = w0;
    record(w, 0.0);

    const double initial_sup = sup_abs(dealias(w0), 1);
    if (cfg.nonlinear_scale != 0.0 && dt * std::abs(cfg.nonlinear_scale) * initial_sup * kmax > cfg.stability_limit) {
        traj.status = RunStatus::stability_violation;
        traj.message = "stability heuristic violated at t=0";
        return traj;
    }

    for (long long n = 1; n <= nsteps; ++n) {
        try {
            w = stepper.step(w, signed_dt);
        } catch (const BlowUpError& e) {
            traj.status = RunStatus::blow_up;
            traj.message = std::string(e.what()) + " at step " + std::to_string(n);
            return traj;
        }
        if (cfg.nonlinear_scale != 0.0 &&
            dt * std::abs(cfg.nonlinear_scale) * stepper.last_max_abs() * kmax > cfg.stability_limit) {
            traj.status = RunStatus::stability_violation;
            traj.message = "stability heuristic violated at step " + std::to_string(n);
            return traj;
        }
        if (n % cfg.observer_stride == 0 || n == nsteps) record(w, static_cast<double>(n) * dt);
    }
    return traj;
}

/// g(T) = int_0^T (||w||_inf + ||grad w||_inf) dt by the trapezoidal rule on observer times.
inline double gT_diagnostic(const Trajectory& traj) {
    if (traj.observers.size() < 2) throw std::invalid_argument("gT_diagnostic: need at least 2 observer records");
    double g = 0.0;
    for (std::size_t j = 1; j < traj.observers.size(); ++j) {
        const auto& a = traj.observers[j - 1];
        const auto& b = traj.observers[j];
        g += 0.5 * (b.t - a.t) * (a.sup_w + a.sup_grad_w + b.sup_w + b.sup_grad_w);
    }
    return g;
}

struct GrowthReport {
    double max_ratio = 1.0;   ///< max_t ||w(t)||_{H^s} / ||w0||_{H^s}
    double g_T = 0.0;
    double implied_constant = 0.0;  ///< log(max_ratio) / g(T)
    double ceiling = 0.0;           ///< exp(c_max g(T))
    bool within_ceiling = true;
};

/// A priori H^s growth check ||w||_{L^inf_T H^s} <= exp(c g(T)) ||w0||_{H^s}.
inline GrowthReport hs_growth_check(const Trajectory& traj, double s, double c_max = 10.0) {
    if (!(s >= 1.0)) throw std::invalid_argument("hs_growth_check: s must be >= 1");
    GrowthReport r;
    r.g_T = gT_diagnostic(traj);
    const double base = sobolev_norm(traj.states.front(), s);
    if (base == 0.0) return r;
    for (const auto& w : traj.states) r.max_ratio = std::max(r.max_ratio, sobolev_norm(w, s) / base);
    r.implied_constant = r.g_T > 0.0 ? std::log(r.max_ratio) / r.g_T : 0.0;
    r.ceiling = std::exp(c_max * r.g_T);
    r.within_ceiling = r.max_ratio <= r.ceiling * (1.0 + 1e-12);
    return r;
}

struct L1LinfReport {
    double l1_linf = 0.0;    ///< int_0^T ||w||_inf dt
    double hs_sup = 0.0;     ///< sup_t ||w||_{H^{2/3+eps}}
    double forcing = 0.0;    ///< int_0^T ||w^2/2||_{L^2} dt
    double ratio = 0.0;      ///< l1_linf / (T^{1/2} (hs_sup + forcing))
};

/// Measures the ratio in ||w||_{L^1_T L^inf} <~ T^{1/2} (||w||_{L^inf_T H^{2/3+eps}} + ||w^2/2||_{L^1_T L^2}).
/// No constant is asserted.
inline L1LinfReport l1_linf_ratio(const Trajectory& traj, double eps) {
    if (traj.observers.size() < 2) throw std::invalid_argument("l1_linf_ratio: need at least 2 observer records");
    L1LinfReport r;
    std::vector<double> forcing(traj.states.size());
    for (std::size_t j = 0; j < traj.states.size(); ++j) {
        const auto& w = traj.states[j];
        r.hs_sup = std::max(r.hs_sup, sobolev_norm(w, 2.0 / 3.0 + eps));
        auto vals = synthesize_complex(dealias(w), 1);
        for (auto& v : vals) v = cplx(0.5 * v.real() * v.real(), 0.0);
        forcing[j] = l2_norm(analyze_complex(w.grid(), 1, vals));
    }
    for (std::size_t j = 1; j < traj.observers.size(); ++j) {
        const double h = traj.observers[j].t - traj.observers[j - 1].t;
        r.l1_linf += 0.5 * h * (traj.observers[j].sup_w + traj.observers[j - 1].sup_w);
        r.forcing += 0.5 * h * (forcing[j] + forcing[j - 1]);
    }
    const double T = traj.observers.back().t - traj.observers.front().t;
    r.ratio = r.l1_linf / (std::sqrt(T) * (r.hs_sup + r.forcing));
    return r;
}

/// Worst relative drift of each conserved quantity over the stored states.
/// Mass and the x-mean modes can vanish identically, so they are measured
/// against their Cauchy-Schwarz ceilings 2 pi ||w0||_{L^2} and ||w0||_{L^2} / (2 pi).
struct DriftReport {
    double mass = 0.0;
    double l2 = 0.0;
    double energy = 0.0;
    double x_mean = 0.0;
    double worst() const { return std::max({mass, l2, energy, x_mean}); }
};

inline DriftReport drift_report(const Trajectory& traj) {
    if (traj.states.empty()) throw std::invalid_argument("drift_report: empty trajectory");
    const InvariantRecord first = invariants(traj.states.front());
    DriftReport d;
    if (first.l2 == 0.0) return d;
    const double mass_scale = two_pi * first.l2;
    const double mode_scale = first.l2 / two_pi;
    const double energy_scale = std::abs(first.energy) > 0.0 ? std::abs(first.energy) : 1.0;
    for (std::size_t j = 1; j < traj.states.size(); ++j) {
        const InvariantRecord cur = invariants(traj.states[j]);
        d.mass = std::max(d.mass, std::abs(cur.mass - first.mass) / mass_scale);
        d.l2 = std::max(d.l2, std::abs(cur.l2 - first.l2) / first.l2);
        d.energy = std::max(d.energy, std::abs(cur.energy - first.energy) / energy_scale);
        for (std::size_t k = 0; k < cur.x_mean_modes.size(); ++k)
            d.x_mean = std::max(d.x_mean, std::abs(cur.x_mean_modes[k] - first.x_mean_modes[k]) / mode_scale);
    }
    return d;
}

inline std::string hs_column_name(double s) {
    std::string v = format_double(s);
    return "hs_" + v;
}

/// Observer records as CSV: t, mass, l2, energy, hs_<s>..., sup_w, sup_grad_w.
inline void write_observers_csv(const Trajectory& traj, std::ostream& os) {
    std::vector<std::string> header{"t", "mass", "l2", "energy"};
    for (double s : traj.hs_indices) header.push_back(hs_column_name(s));
    header.push_back("sup_w");
    header.push_back("sup_grad_w");
    CsvWriter csv(os, header);
    for (const auto& o : traj.observers) {
        std::vector<double> row{o.t, o.mass, o.l2, o.energy};
        row.insert(row.end(), o.hs.begin(), o.hs.end());
        row.push_back(o.sup_w);
        row.push_back(o.sup_grad_w);
        csv.write_numbers(row);
    }
}

}  // namespace zk

#endif
