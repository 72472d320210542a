#ifndef ZK_APPROX_SOLUTION_HPP
#define ZK_APPROX_SOLUTION_HPP

#include "zk/csv.hpp"
#include "zk/resonance.hpp"
#include "zk/spectral.hpp"
#include "zk/stats.hpp"

#include <array>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace zk {

/// Parameters of the family
///
///   u_{theta,m}(t) = theta/m cos(2y)
///                  + cos(theta t/2) m^{-s} cos(mx - y + phi(m,-1) t)
///                  + sin(theta t/2) m^{-s} sin(mx + y + phi(m,1) t)
///                  + r_{theta,m}(t),
///
///   r_{theta,m}(t) = -(theta/2) m^{-s} / R(m,0,-1,2) cos(theta t/2) cos(mx - 3y + phi(m,-1) t)
///                    -(theta/2) m^{-s} / R(m,0,1,-2) sin(theta t/2) sin(mx + 3y + phi(m,1) t),
///
/// with R(m,0,-1,2) = R(m,0,1,-2) = -8m. The -(theta/2) factor makes the
/// correction cancel the theta cos(2y) interaction at (m,-3) and (m,3) and
/// vanish at theta = 0, where the remaining waves are free solutions.
struct ApproxSolutionParams {
    double theta = 1.0;
    long long m = 8;
    double s = 2.0;

    void validate() const {
        if (!(theta >= -1.0 && theta <= 1.0)) throw std::invalid_argument("ApproxSolutionParams: theta must lie in [-1, 1]");
        if (m < 2) throw std::invalid_argument("ApproxSolutionParams: m must be >= 2");
        check_frequency_range(m, "ApproxSolutionParams");
        if (!(s > 5.0 / 3.0)) throw std::invalid_argument("ApproxSolutionParams: s must exceed 5/3");
    }
};

enum class ApproxPart { mean, primary, secondary, correction };

/// One travelling wave f(t) exp(i (k.x + omega t)) plus its complex conjugate.
struct WaveTerm {
    ApproxPart part;
    long long k1, k2;
    double omega;
    cplx amplitude;   ///< f(t)
    cplx rate;        ///< f'(t)
};

/// The four wave pairs of u_{theta,m} at time t.
inline std::array<WaveTerm, 5> approx_terms(const ApproxSolutionParams& p, double t) {
    p.validate();
    const double m = static_cast<double>(p.m);
    const double A = std::pow(m, -p.s);
    const double h = 0.5 * p.theta;
    const double c = std::cos(h * t), sn = std::sin(h * t);
    const double dc = -h * sn, dsn = h * c;
    const double curv = static_cast<double>(resonance(p.m, 0, -1, 2));  // -8m
    const double kappa = -h * A / curv;
    const double omega = static_cast<double>(dispersion_symbol(p.m, 1));  // phi(m,1) = phi(m,-1)
    const cplx half_i = cplx(0.0, -0.5);  // 1/(2i)

    return {{
        {ApproxPart::mean, 0, 2, 0.0, cplx(p.theta / (2.0 * m), 0.0), cplx{}},
        {ApproxPart::primary, p.m, -1, omega, cplx(0.5 * c * A, 0.0), cplx(0.5 * dc * A, 0.0)},
        {ApproxPart::secondary, p.m, 1, omega, half_i * (sn * A), half_i * (dsn * A)},
        {ApproxPart::correction, p.m, -3, omega, cplx(0.5 * kappa * c, 0.0), cplx(0.5 * kappa * dc, 0.0)},
        {ApproxPart::correction, p.m, 3, omega, half_i * (kappa * sn), half_i * (kappa * dsn)},
    }};
}

namespace detail {

inline void require_grid(const Grid& g, long long kx, long long ky, const char* what) {
    if (kx > g.dealias_x() || ky > g.dealias_y())
        throw std::invalid_argument(std::string(what) + ": grid " + std::to_string(g.mx()) + "x" +
                                    std::to_string(g.my()) + " too small (needs |m1| <= " + std::to_string(kx) +
                                    " and |m2| <= " + std::to_string(ky) + " inside the 2/3 band)");
}

template <class Pick, class Value>
SpectralField assemble(const ApproxSolutionParams& p, const Grid& grid, double t, Pick&& pick, Value&& value) {
    SpectralField f(grid);
    for (const auto& w : approx_terms(p, t)) {
        if (!pick(w.part)) continue;
        const cplx v = value(w) * std::polar(1.0, w.omega * t);
        f.at(w.k1, w.k2) += v;
        f.at(-w.k1, -w.k2) += std::conj(v);
    }
    return f;
}

inline SpectralField product(const SpectralField& a, const SpectralField& b) {
    auto va = synthesize_complex(a, 1);
    const auto vb = synthesize_complex(b, 1);
    for (std::size_t j = 0; j < va.size(); ++j) va[j] *= vb[j];
    return analyze_complex(a.grid(), 1, va);
}

// dx Delta u: multiplier -i phi(m).
inline SpectralField dispersive_operator(const SpectralField& u) {
    return apply_multiplier(u, [](int m1, int m2) { return cplx(0.0, -dispersion_frequency(m1, m2)); });
}

}  // namespace detail

/// u_{theta,m}(t) in coefficient space (8 lattice points plus the mean pair).
inline SpectralField build(const ApproxSolutionParams& p, const Grid& grid, double t) {
    p.validate();
    detail::require_grid(grid, p.m, 3, "build");
    return detail::assemble(p, grid, t, [](ApproxPart) { return true; }, [](const WaveTerm& w) { return w.amplitude; });
}

inline SpectralField build_part(const ApproxSolutionParams& p, const Grid& grid, double t, ApproxPart part) {
    p.validate();
    detail::require_grid(grid, p.m, 3, "build");
    return detail::assemble(p, grid, t, [part](ApproxPart q) { return q == part; },
                            [](const WaveTerm& w) { return w.amplitude; });
}

/// r_{theta,m}(t)
inline SpectralField remainder(const ApproxSolutionParams& p, const Grid& grid, double t) {
    return build_part(p, grid, t, ApproxPart::correction);
}

/// Closed-form d/dt u_{theta,m}(t).
inline SpectralField time_derivative(const ApproxSolutionParams& p, const Grid& grid, double t) {
    p.validate();
    detail::require_grid(grid, p.m, 3, "time_derivative");
    return detail::assemble(p, grid, t, [](ApproxPart) { return true; },
                            [](const WaveTerm& w) { return w.rate + cplx(0.0, w.omega) * w.amplitude; });
}

/// G = (dt + dx Delta) u + u dx u, split into the part where the modulation is
/// designed to cancel the mean-mode interaction,
///   resonant = (dt + dx Delta)(u2 + u3 + r) + u1 dx (u2 + u3),
/// and the rest = u1 dx r + (u2 + u3 + r) dx u.
struct ResidualSplit {
    SpectralField total;
    SpectralField resonant;
    SpectralField rest;
};

inline ResidualSplit residual_split(const ApproxSolutionParams& p, const Grid& grid, double t) {
    p.validate();
    detail::require_grid(grid, 2 * p.m, 6, "residual");
    const SpectralField u1 = build_part(p, grid, t, ApproxPart::mean);
    SpectralField waves = build_part(p, grid, t, ApproxPart::primary);
    waves += build_part(p, grid, t, ApproxPart::secondary);
    const SpectralField r = remainder(p, grid, t);
    SpectralField osc = waves + r;
    const SpectralField u = u1 + osc;

    SpectralField dt_osc = time_derivative(p, grid, t);  // dt u1 = 0
    SpectralField resonant = dt_osc + detail::dispersive_operator(osc);
    resonant += detail::product(u1, dx(waves));

    SpectralField rest = detail::product(u1, dx(r));
    rest += detail::product(osc, dx(u));

    SpectralField total = resonant + rest;
    return {std::move(total), std::move(resonant), std::move(rest)};
}

inline SpectralField residual(const ApproxSolutionParams& p, const Grid& grid, double t) {
    return residual_split(p, grid, t).total;
}

/// Smallest grid on which residual() is exact for frequency m.
inline Grid residual_grid(long long m) { return Grid(grid_size_for(6 * m + 1), 32, 1); }
/// Smallest grid on which build() fits inside the 2/3 band.
inline Grid approx_grid(long long m) { return Grid(grid_size_for(3 * m + 1), 16, 1); }

struct ResidualScanRow {
    long long m = 0;
    double l2_residual = 0.0;   ///< sup over the time samples of ||G(t)||_{L^2}
    double hs_residual = 0.0;   ///< sup over the time samples of ||G(t)||_{H^s}
};

struct ResidualScan {
    double theta = 0.0;
    double s = 0.0;
    std::vector<ResidualScanRow> rows;
    SlopeFit l2_fit;
    SlopeFit hs_fit;
    /// max(-1-s, 1-2s)
    double predicted_l2_slope = 0.0;
};

inline std::vector<double> default_residual_times() {
    std::vector<double> ts;
    for (int j = 0; j <= 10; ++j) ts.push_back(0.1 * j);
    return ts;
}

inline ResidualScan residual_norm_scan(double theta, double s, const std::vector<long long>& ms,
                                       const std::vector<double>& ts = default_residual_times()) {
    if (ms.size() < 3) throw std::invalid_argument("residual_norm_scan: need at least 3 values of m");
    for (long long m : ms)
        if (!is_power_of_two(m)) throw std::invalid_argument("residual_norm_scan: m values must be dyadic");
    ResidualScan scan;
    scan.theta = theta;
    scan.s = s;
    scan.predicted_l2_slope = std::max(-1.0 - s, 1.0 - 2.0 * s);
    std::vector<double> xs, l2s, hss;
    for (long long m : ms) {
        const ApproxSolutionParams p{theta, m, s};
        const Grid g = residual_grid(m);
        ResidualScanRow row{m, 0.0, 0.0};
        for (double t : ts) {
            const SpectralField G = residual(p, g, t);
            row.l2_residual = std::max(row.l2_residual, l2_norm(G));
            row.hs_residual = std::max(row.hs_residual, sobolev_norm(G, s));
        }
        scan.rows.push_back(row);
        xs.push_back(double(m));
        l2s.push_back(row.l2_residual);
        hss.push_back(row.hs_residual);
    }
    scan.l2_fit = fit_loglog(xs, l2s);
    scan.hs_fit = fit_loglog(xs, hss);
    return scan;
}

inline void write_residual_scan_csv(const ResidualScan& scan, std::ostream& os) {
    CsvWriter csv(os, {"m", "l2_residual", "hs_residual"});
    for (const auto& r : scan.rows)
        csv.write_row({std::to_string(r.m), format_double(r.l2_residual), format_double(r.hs_residual)});
}

struct DistancePoint {
    double t = 0.0;
    double hs_distance = 0.0;   ///< ||u_{1,m}(t) - u_{-1,m}(t)||_{H^s}
    double predicted = 0.0;     ///< 2 |sin(t/2)| ||sin||_{L^2(T^2)} = 2 |sin(t/2)| pi sqrt(2)
};

inline std::vector<DistancePoint> distance_profile(long long m, double s, const std::vector<double>& ts) {
    const Grid g = approx_grid(m);
    std::vector<DistancePoint> out;
    for (double t : ts) {
        const SpectralField a = build({1.0, m, s}, g, t);
        const SpectralField b = build({-1.0, m, s}, g, t);
        out.push_back({t, sobolev_norm(a - b, s), 2.0 * std::abs(std::sin(0.5 * t)) * pi * std::sqrt(2.0)});
    }
    return out;
}

inline void write_distance_profile_csv(const std::vector<DistancePoint>& prof, std::ostream& os) {
    CsvWriter csv(os, {"t", "distance", "predicted"});
    for (const auto& d : prof) csv.write_numbers({d.t, d.hs_distance, d.predicted});
}

}  // namespace zk

#endif
