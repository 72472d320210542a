#ifndef ZK_STRICHARTZ_HPP
#define ZK_STRICHARTZ_HPP

#include "zk/csv.hpp"
#include "zk/spectral.hpp"
#include "zk/stats.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace zk {

inline const double sqrt3 = std::sqrt(3.0);

// ---------------------------------------------------------------------------
// Kernel K_N

/// Parameters of a kernel evaluation; the cutoff is bump(./4N) in both
/// directions m1 +- m2/sqrt(3).
struct KernelProbe {
    long long N = 4;
    double t = 1.0 / 16.0;
    /// Poisson images n with max(|n1 + sqrt3 n2|, |n1 - sqrt3 n2|) <= truncation.
    int truncation = 8;

    void validate() const {
        if (N < 1 || !is_power_of_two(N)) throw std::invalid_argument("KernelProbe: N must be a power of two >= 1");
        if (truncation < 4) throw std::invalid_argument("KernelProbe: truncation must be >= 4");
    }
    /// True when N^{-3} <= |t| <= N^{-2}.
    bool in_decay_regime() const {
        const double n = double(N);
        return std::abs(t) >= 1.0 / (n * n * n) * (1 - 1e-12) && std::abs(t) <= 1.0 / (n * n) * (1 + 1e-12);
    }
};

struct KernelMode {
    int m1, m2;
    double weight;  ///< bump(a/4N)^2 bump(b/4N)^2, a,b = m1 +- m2/sqrt3
    double omega;   ///< m1^3 + m1 m2^2
};

/// Lattice points where the kernel weight is nonzero (|m1 +- m2/sqrt3| < 8N).
inline std::vector<KernelMode> kernel_support(long long N) {
    const double scale = 4.0 * double(N);
    const int b1 = static_cast<int>(8 * N);
    const int b2 = static_cast<int>(std::ceil(8.0 * double(N) * sqrt3));
    std::vector<KernelMode> out;
    for (int m1 = -b1; m1 <= b1; ++m1)
        for (int m2 = -b2; m2 <= b2; ++m2) {
            const double a = bump((m1 + m2 / sqrt3) / scale);
            const double b = bump((m1 - m2 / sqrt3) / scale);
            const double w = a * a * b * b;
            if (w > 0.0) out.push_back({m1, m2, w, dispersion_frequency(m1, m2)});
        }
    return out;
}

/// Direct lattice sum K_N(x, y, t) = sum_m weight(m) exp(i (m.x + phi(m) t)).
inline cplx kernel_direct(const KernelProbe& probe, double x, double y) {
    probe.validate();
    cplx acc{};
    for (const auto& k : kernel_support(probe.N)) acc += k.weight * std::polar(1.0, k.m1 * x + k.m2 * y + k.omega * probe.t);
    return acc;
}

/// K_N on the n x n collocation grid (x_j, y_k) = 2 pi (j, k) / n; exact (the
/// lattice sum is folded modulo n and evaluated by one FFT).
inline std::vector<cplx> kernel_on_grid(const KernelProbe& probe, int n) {
    probe.validate();
    std::vector<cplx> buf(std::size_t(n) * n, cplx{});
    auto wrap = [n](int m) { return ((m % n) + n) % n; };
    for (const auto& k : kernel_support(probe.N))
        buf[std::size_t(wrap(k.m1)) * n + wrap(k.m2)] += k.weight * std::polar(1.0, k.omega * probe.t);
    fft2d(buf, n, n, +1);
    return buf;
}

inline double kernel_sup_on_grid(const KernelProbe& probe, int n = 64) {
    double m = 0.0;
    for (const auto& v : kernel_on_grid(probe, n)) m = std::max(m, std::abs(v));
    return m;
}

// ---------------------------------------------------------------------------
// Airy-type profile F_N(X) = int bump(xi/4N)^2 exp(i (xi X + xi^3 t / 2)) dxi

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// 2 int_0^{8N} bump(xi/4N)^2 cos(xi X + xi^3 t/2) dxi on `panels` Gauss-Legendre
// panels, accumulated in long double so far-field values sit well below the
// double-precision cancellation floor.
inline long double airy_gauss_legendre(double X, double t, long long N, long long panels) {
    using ld = long double;
    using rule = boost::math::quadrature::gauss<ld, 8>;
    const auto& nodes = rule::abscissa();
    const auto& weights = rule::weights();
    const ld L = 8.0L * N, scale = 4.0L * N;
    const ld h = L / ld(panels);
    ld total = 0.0L;
    for (long long p = 0; p < panels; ++p) {
        const ld mid = (ld(p) + 0.5L) * h, half = 0.5L * h;
        ld acc = 0.0L;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            const ld w = weights[j] * half;
            for (ld sgn : {-1.0L, 1.0L}) {
                if (nodes[j] == 0.0L && sgn > 0) continue;
                const ld xi = mid + sgn * nodes[j] * half;
                const ld b = bump_t(xi / scale);
                if (b == 0.0L) continue;
                acc += w * b * b * std::cos(xi * ld(X) + 0.5L * xi * xi * xi * ld(t));
            }
        }
        total += acc;
    }
    return 2.0L * total;
}

inline double airy_phase_slope(double X, double t, long long N) {
    const double L = 8.0 * double(N);
    return std::abs(X) + 1.5 * std::abs(t) * L * L;
}

}  // namespace detail

/// F_N(X) by composite Gauss-Legendre (8 nodes per panel, each panel at most
/// 1/8 of a local oscillation), doubling the panel count until two successive
/// values agree to 1e-8 relative (with an absolute floor of 1e-17 times the
/// cutoff mass).
inline cplx airy_profile(double X, double t, long long N) {
    if (t == 0.0) throw std::invalid_argument("airy_profile: t must be nonzero");
    if (N < 1) throw std::invalid_argument("airy_profile: N must be >= 1");
    const double L = 8.0 * double(N);
    const double h0 = std::min(two_pi / 8.0 / detail::airy_phase_slope(X, t, N), double(N) / 8.0);
    long long panels = static_cast<long long>(std::ceil(L / h0));
    long double prev = detail::airy_gauss_legendre(X, t, N, panels);
    const long double floor = 1e-17L * 12.0L * N;
    for (int iter = 0; iter < 4; ++iter) {
        panels *= 2;
        const long double cur = detail::airy_gauss_legendre(X, t, N, panels);
        if (std::abs(cur - prev) <= 1e-8L * std::abs(cur) + floor) return {double(cur), 0.0};
        prev = cur;
    }
    throw QuadratureError("airy_profile: quadrature did not converge at X=" + format_double(X));
}

/// Trapezoidal discretisation of F_N on a uniform xi grid, accurate for
/// |X| <= x_extent. The integrand is smooth with compact support, so the only
/// error is aliasing from F_N(X + 2 pi k / dxi), k != 0; the node spacing puts
/// those images beyond the stationary-phase region plus a decay margin.
class AiryProfile {
public:
    AiryProfile(long long N, double t, double x_extent) : N_(N), t_(t) {
        if (N < 1) throw std::invalid_argument("AiryProfile: N must be >= 1");
        const double L = 8.0 * double(N);
        const double stationary = 1.5 * std::abs(t) * L * L;
        dxi_ = pi / (x_extent + stationary + 100.0);
        half_ = static_cast<long long>(std::ceil(L / dxi_));
        const double scale = 4.0 * double(N);
        weights_.resize(2 * half_ + 1);
        for (long long j = -half_; j <= half_; ++j) {
            const double xi = double(j) * dxi_;
            const double b = bump(xi / scale);
            weights_[j + half_] = b == 0.0 ? cplx{} : dxi_ * b * b * std::polar(1.0, 0.5 * xi * xi * xi * t);
        }
    }

    cplx operator()(double X) const {
        cplx acc{};
        for (long long j = -half_; j <= half_; ++j) {
            const cplx& w = weights_[j + half_];
            if (w != cplx{}) acc += w * std::polar(1.0, double(j) * dxi_ * X);
        }
        return acc;
    }

    struct Table {
        double dx = 0.0;
        /// values[k] = F_N(k dx) for k in [-kmax, kmax], stored from -kmax.
        long long kmax = 0;
        std::vector<cplx> values;
        double x(long long idx) const { return double(idx - kmax) * dx; }
    };

    /// F_N on a uniform grid covering [-x_max, x_max] with spacing <= max_spacing (one FFT).
    Table table(double x_max, double max_spacing) const {
        long long M = 1;
        while (double(M) < two_pi / (max_spacing * dxi_) || M < 2 * half_ + 1) M *= 2;
        std::vector<cplx> buf(M, cplx{});
        for (long long j = -half_; j <= half_; ++j) buf[(j + M) % M] = weights_[j + half_];
        fft1d_backward(buf);
        Table tb;
        tb.dx = two_pi / (double(M) * dxi_);
        tb.kmax = std::min<long long>(static_cast<long long>(x_max / tb.dx), M / 2 - 1);
        for (long long k = -tb.kmax; k <= tb.kmax; ++k) tb.values.push_back(buf[(k + M) % M]);
        return tb;
    }

    long long N() const { return N_; }
    double t() const { return t_; }

private:
    static void fft1d_backward(std::vector<cplx>& buf) {
        // A 1 x M two-dimensional transform is the 1D transform.
        fft2d(buf, 1, static_cast<int>(buf.size()), +1);
    }

    long long N_;
    double t_;
    double dxi_ = 0.0;
    long long half_ = 0;
    std::vector<cplx> weights_;
};

struct AirySup {
    double x_at_max = 0.0;
    double value = 0.0;   ///< sup |F_N| over the window
};

/// sup_{|X| <= x_max} |F_N(X)|: dense FFT table, then golden-section refinement
/// of the best sample with the Gauss-Legendre evaluator.
inline AirySup airy_sup(long long N, double t, double x_max = 10.0) {
    const AiryProfile prof(N, t, x_max);
    const auto tb = prof.table(x_max, pi / (64.0 * double(N)));
    std::size_t best = 0;
    for (std::size_t k = 0; k < tb.values.size(); ++k)
        if (std::abs(tb.values[k]) > std::abs(tb.values[best])) best = k;
    double a = tb.x(static_cast<long long>(best)) - tb.dx, b = a + 2.0 * tb.dx;
    auto f = [&](double X) { return std::abs(airy_profile(X, t, N)); };
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 24; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    AirySup out{tb.x(static_cast<long long>(best)), std::abs(tb.values[best])};
    for (auto [x, v] : {std::pair{c, fc}, std::pair{d, fd}})
        if (v > out.value) out = {x, v};
    return out;
}

/// Poisson-resummed kernel (sqrt3/2) sum_n F_N(X1_n) F_N(X2_n) with
/// X1 = (x + sqrt3 y - 2 pi (n1 + sqrt3 n2)) / 2, X2 = (x - sqrt3 y - 2 pi (n1 - sqrt3 n2)) / 2.
inline cplx kernel_poisson(const KernelProbe& probe, double x, double y) {
    probe.validate();
    const double M = probe.truncation;
    const double extent = 0.5 * (std::abs(x) + sqrt3 * std::abs(y)) + pi * M + 1.0;
    const AiryProfile F(probe.N, probe.t, extent);
    const int n1max = static_cast<int>(M);
    const int n2max = static_cast<int>(std::floor(M / sqrt3));
    cplx acc{};
    for (int n1 = -n1max; n1 <= n1max; ++n1)
        for (int n2 = -n2max; n2 <= n2max; ++n2) {
            const double a = n1 + sqrt3 * n2, b = n1 - sqrt3 * n2;
            if (std::max(std::abs(a), std::abs(b)) > M) continue;
            const double X1 = 0.5 * (x + sqrt3 * y - two_pi * a);
            const double X2 = 0.5 * (x - sqrt3 * y - two_pi * b);
            acc += F(X1) * F(X2);
        }
    return 0.5 * sqrt3 * acc;
}

/// Image count that covers the stationary-phase region of F_N plus a margin.
inline int poisson_truncation_for(long long N, double t) {
    const double L = 8.0 * double(N);
    const double stationary = 1.5 * std::abs(t) * L * L;
    return std::max(4, static_cast<int>(std::ceil((stationary + 30.0) / pi)) + 2);
}

// ---------------------------------------------------------------------------
// Ensembles and Strichartz norms

struct EnsembleSpec {
    int count = 64;
    std::uint64_t seed = 20240601;
    long long band = 4;   ///< dyadic block N (0 or a power of two)
};

/// Shell data: unit-amplitude modes with independent uniform phases on N <= |m| < 2N
/// (the constant mode for N = 0). Complex-valued.
inline std::vector<SpectralField> shell_ensemble(const EnsembleSpec& ens, const Grid& grid) {
    const DyadicBlock block(ens.band);
    std::mt19937_64 rng(ens.seed);
    std::uniform_real_distribution<double> phase(0.0, two_pi);
    std::vector<SpectralField> out;
    out.reserve(ens.count);
    for (int j = 0; j < ens.count; ++j) {
        SpectralField f(grid);
        f.for_each_mode([&](int, int, cplx& c) { c = std::polar(1.0, phase(rng)); });
        out.push_back(lp_project(std::move(f), block));
    }
    return out;
}

/// Grid that resolves the shell N <= |m| < 2N.
inline Grid shell_grid(long long N, int oversample = 4) {
    return Grid(grid_size_for(std::max<long long>(8, 4 * N)), grid_size_for(std::max<long long>(8, 4 * N)), oversample);
}

struct LinearFlowNorm {
    double value = 0.0;           ///< ||W(t) f||_{L^2_I L^inf}
    double l2_deviation = 0.0;    ///< max_t | ||W(t) f||_{L^2} / ||f||_{L^2} - 1 |
};

/// ||W(t) f||_{L^2([0, length]) L^inf_xy} by the trapezoidal rule on `samples`
/// times, sup taken on the collocation grid refined by the field's oversample.
inline LinearFlowNorm linear_flow_norm(const SpectralField& f, double length, int samples) {
    if (samples < 2) throw std::invalid_argument("linear_flow_norm: need >= 2 time samples");
    const double base = l2_norm(f);
    std::vector<double> sq(samples);
    LinearFlowNorm out;
    for (int k = 0; k < samples; ++k) {
        const double t = length * double(k) / double(samples - 1);
        const SpectralField w = propagate(f, t);
        if (base > 0.0) out.l2_deviation = std::max(out.l2_deviation, std::abs(l2_norm(w) / base - 1.0));
        const double s = sup_abs(w, f.grid().oversample());
        sq[k] = s * s;
    }
    const double h = length / double(samples - 1);
    double acc = 0.0;
    for (int k = 0; k < samples; ++k) acc += (k == 0 || k == samples - 1 ? 0.5 : 1.0) * sq[k];
    out.value = std::sqrt(h * acc);
    return out;
}

struct StrichartzStats {
    long long N = 0;
    double interval = 0.0;   ///< |I|
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
    double max_l2_deviation = 0.0;
    std::vector<double> ratios;
};

inline StrichartzStats summarize(long long N, double interval, std::vector<double> ratios, double dev) {
    StrichartzStats s;
    s.N = N;
    s.interval = interval;
    s.max_l2_deviation = dev;
    double sum = 0.0;
    for (double r : ratios) {
        s.max_ratio = std::max(s.max_ratio, r);
        sum += r;
    }
    s.mean_ratio = ratios.empty() ? 0.0 : sum / double(ratios.size());
    s.ratios = std::move(ratios);
    return s;
}

/// max over the ensemble of ||W(t) P_N w0||_{L^2_I L^inf} / ||w0||_{L^2}, I = [0, (1 v N)^{-2}].
inline StrichartzStats short_time_strichartz(const EnsembleSpec& ens, int time_samples = 64, int oversample = 4) {
    const DyadicBlock block(ens.band);
    const double interval = 1.0 / double(block.scale() * block.scale());
    const Grid grid = shell_grid(ens.band, oversample);
    std::vector<double> ratios;
    double dev = 0.0;
    for (const auto& w0 : shell_ensemble(ens, grid)) {
        const auto nrm = linear_flow_norm(w0, interval, time_samples);
        ratios.push_back(nrm.value / l2_norm(w0));
        dev = std::max(dev, nrm.l2_deviation);
    }
    return summarize(ens.band, interval, std::move(ratios), dev);
}

/// max over the ensemble of ||W(t) w0||_{L^2_{[0,1]} L^inf} / ||w0||_{H^{s'}} for data on block ens.band.
inline StrichartzStats global_strichartz(double s_prime, const EnsembleSpec& ens, int time_samples = 128,
                                         int oversample = 4) {
    const Grid grid = shell_grid(ens.band, oversample);
    std::vector<double> ratios;
    double dev = 0.0;
    for (const auto& w0 : shell_ensemble(ens, grid)) {
        const auto nrm = linear_flow_norm(w0, 1.0, time_samples);
        ratios.push_back(nrm.value / sobolev_norm(w0, s_prime));
        dev = std::max(dev, nrm.l2_deviation);
    }
    return summarize(ens.band, 1.0, std::move(ratios), dev);
}

// ---------------------------------------------------------------------------
// Commutator estimate

struct CommutatorTerms {
    double lhs = 0.0;   ///< ||J^s(fg) - f J^s g||_{L^2}
    double rhs = 0.0;   ///< ||J^s f||_{L^2} ||g||_inf + (||f||_inf + ||grad f||_inf) ||J^{s-1} g||_{L^2}
    double ratio() const { return rhs > 0.0 ? lhs / rhs : 0.0; }
};

namespace detail {
inline SpectralField pointwise_product(const SpectralField& a, const SpectralField& b) {
    auto va = synthesize_complex(a, 1);
    const auto vb = synthesize_complex(b, 1);
    for (std::size_t j = 0; j < va.size(); ++j) va[j] *= vb[j];
    return analyze_complex(a.grid(), 1, va);
}
}  // namespace detail

/// Both sides of the commutator inequality. Products are exact when f, g lie in
/// the 2/3 band and their product fits the lattice.
inline CommutatorTerms commutator_terms(const SpectralField& f, const SpectralField& g, double s) {
    const int factor = f.grid().oversample();
    CommutatorTerms c;
    SpectralField comm = bessel_potential(detail::pointwise_product(f, g), s);
    comm -= detail::pointwise_product(f, bessel_potential(g, s));
    c.lhs = l2_norm(comm);
    c.rhs = sobolev_norm(f, s) * sup_abs(g, factor) +
            (sup_abs(f, factor) + sup_gradient(f, factor)) * sobolev_norm(g, s - 1.0);
    return c;
}

/// Real random field with unit-amplitude, uniformly phased modes on |m| <= band.
inline SpectralField random_real_field(const Grid& grid, long long band, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> phase(0.0, two_pi);
    SpectralField f(grid);
    const long long b2 = band * band;
    f.for_each_mode([&](int m1, int m2, cplx& c) {
        const long long r2 = (long long)m1 * m1 + (long long)m2 * m2;
        if (r2 > b2) return;
        // Fill one representative of each +-m pair, then mirror.
        if (m1 < 0 || (m1 == 0 && m2 < 0)) return;
        c = (m1 == 0 && m2 == 0) ? cplx(std::cos(phase(rng)), 0.0) : std::polar(1.0, phase(rng));
    });
    f.for_each_mode([&](int m1, int m2, cplx& c) {
        if (m1 < 0 || (m1 == 0 && m2 < 0)) c = std::conj(f.coeff(-m1, -m2));
    });
    return f;
}

inline Grid commutator_grid(long long band, int oversample = 4) {
    const int n = grid_size_for(4 * band + 2);
    return Grid(n, n, oversample);
}

struct CommutatorStats {
    long long band = 0;
    double s = 0.0;
    double max_ratio = 0.0;
    std::vector<double> ratios;
};

/// max LHS/RHS over ens.count random real pairs (f, g) supported on |m| <= ens.band.
inline CommutatorStats commutator_test(const EnsembleSpec& ens, double s) {
    if (!(s >= 1.0)) throw std::invalid_argument("commutator_test: s must be >= 1");
    if (ens.band < 1) throw std::invalid_argument("commutator_test: band must be >= 1");
    const Grid grid = commutator_grid(ens.band);
    std::mt19937_64 rng(ens.seed);
    CommutatorStats st;
    st.band = ens.band;
    st.s = s;
    for (int j = 0; j < ens.count; ++j) {
        const SpectralField f = random_real_field(grid, ens.band, rng);
        const SpectralField g = random_real_field(grid, ens.band, rng);
        const double r = commutator_terms(f, g, s).ratio();
        st.ratios.push_back(r);
        st.max_ratio = std::max(st.max_ratio, r);
    }
    return st;
}

// ---------------------------------------------------------------------------
// Decay scans

struct DecayPoint {
    long long N = 0;
    double t = 0.0;
    double value = 0.0;
};

/// sup over the n x n grid of |K_N(., ., t)| for `count` log-spaced t in [N^{-3}, N^{-2}].
inline std::vector<DecayPoint> kernel_decay_scan(long long N, int count = 8, int n = 64) {
    std::vector<DecayPoint> out;
    const double nn = double(N);
    for (double t : log_space(1.0 / (nn * nn * nn), 1.0 / (nn * nn), count))
        out.push_back({N, t, kernel_sup_on_grid({N, t, 4}, n)});
    return out;
}

inline std::vector<DecayPoint> airy_decay_scan(long long N, int count = 8, double x_max = 10.0) {
    std::vector<DecayPoint> out;
    const double nn = double(N);
    for (double t : log_space(1.0 / (nn * nn * nn), 1.0 / (nn * nn), count))
        out.push_back({N, t, airy_sup(N, t, x_max).value});
    return out;
}

/// Smallest C with value <= C |t|^{exponent} over the points.
inline double fitted_constant(const std::vector<DecayPoint>& pts, double exponent) {
    double c = 0.0;
    for (const auto& p : pts) c = std::max(c, p.value / std::pow(std::abs(p.t), exponent));
    return c;
}

inline SlopeFit decay_fit(const std::vector<DecayPoint>& pts) {
    std::vector<double> ts, vs;
    for (const auto& p : pts) {
        ts.push_back(p.t);
        vs.push_back(p.value);
    }
    return fit_loglog(ts, vs);
}

inline void write_decay_csv(const std::vector<DecayPoint>& pts, double constant, double exponent, std::ostream& os) {
    CsvWriter csv(os, {"N", "t", "value", "bound"});
    for (const auto& p : pts)
        csv.write_row({std::to_string(p.N), format_double(p.t), format_double(p.value),
                       format_double(constant * std::pow(std::abs(p.t), exponent))});
}

// ---------------------------------------------------------------------------
// Studies behind the acceptance checks and the CLI summaries

struct KernelDecayStudy {
    std::vector<long long> Ns;
    std::vector<std::vector<DecayPoint>> scans;
    std::vector<SlopeFit> fits;
    /// C_N = max_t sup|K_N| |t|^{2/3}
    std::vector<double> constants;
    /// Pooled fit over every (N, t) point.
    SlopeFit pooled;

    double reference_constant() const { return constants.front(); }
    double worst_exponent() const {
        double e = -INFINITY;
        for (const auto& f : fits) e = std::max(e, f.slope);
        return e;
    }
    double worst_constant_ratio() const {
        double r = 0.0;
        for (double c : constants) r = std::max(r, c / reference_constant());
        return r;
    }
};

inline KernelDecayStudy kernel_decay_study(const std::vector<long long>& Ns, int t_points = 8, int grid = 64) {
    if (Ns.empty()) throw std::invalid_argument("kernel_decay_study: empty N list");
    KernelDecayStudy st;
    st.Ns = Ns;
    std::vector<double> all_t, all_v;
    for (long long N : Ns) {
        auto pts = kernel_decay_scan(N, t_points, grid);
        st.fits.push_back(decay_fit(pts));
        st.constants.push_back(fitted_constant(pts, -2.0 / 3.0));
        for (const auto& p : pts) {
            all_t.push_back(p.t);
            all_v.push_back(p.value);
        }
        st.scans.push_back(std::move(pts));
    }
    st.pooled = fit_loglog(all_t, all_v);
    return st;
}

struct PoissonCheck {
    KernelProbe probe;
    double central = 0.0;     ///< |K_N(0, 0, t)| direct
    double max_error = 0.0;   ///< max |direct - poisson| over the sample points
    std::vector<std::array<double, 2>> points;
    std::vector<cplx> direct, poisson;
    double relative_error() const { return max_error / central; }
};

inline std::vector<std::array<double, 2>> default_kernel_points() {
    return {{0.0, 0.0}, {0.3, 0.7}, {1.5, -2.0}, {3.0, 3.0}, {-2.5, 0.9}, {pi, -pi}};
}

/// Direct lattice sum vs Poisson image sum at a handful of points.
inline PoissonCheck poisson_check(const KernelProbe& probe,
                                  const std::vector<std::array<double, 2>>& points = default_kernel_points()) {
    PoissonCheck c;
    c.probe = probe;
    c.points = points;
    c.central = std::abs(kernel_direct(probe, 0.0, 0.0));
    for (const auto& [x, y] : points) {
        c.direct.push_back(kernel_direct(probe, x, y));
        c.poisson.push_back(kernel_poisson(probe, x, y));
        c.max_error = std::max(c.max_error, std::abs(c.direct.back() - c.poisson.back()));
    }
    return c;
}

struct FarFieldPoint {
    long long N = 0;
    double t = 0.0;
    double X = 0.0;
    double value = 0.0;
    /// |F_N(X)| N^2 |X|^3
    double constant() const { return value * double(N) * double(N) * std::pow(std::abs(X), 3); }
};

struct AiryDecayStudy {
    std::vector<long long> Ns;
    std::vector<std::vector<DecayPoint>> scans;
    std::vector<SlopeFit> fits;
    std::vector<double> constants;   ///< max_t sup_X |F_N| |t|^{1/3}
    std::vector<FarFieldPoint> far;

    double worst_exponent() const {
        double e = -INFINITY;
        for (const auto& f : fits) e = std::max(e, f.slope);
        return e;
    }
    double constant_spread() const {
        const auto [lo, hi] = std::minmax_element(constants.begin(), constants.end());
        return *hi / *lo;
    }
    double far_constant() const {
        double c = 0.0;
        for (const auto& p : far) c = std::max(c, p.constant());
        return c;
    }
};

inline std::vector<double> default_far_field_points() { return {-1000.0, -300.0, -150.0, -101.0, 101.0, 150.0, 300.0, 1000.0}; }

inline AiryDecayStudy airy_decay_study(const std::vector<long long>& Ns, int t_points = 8, double x_max = 10.0,
                                       const std::vector<double>& far_X = default_far_field_points()) {
    if (Ns.empty()) throw std::invalid_argument("airy_decay_study: empty N list");
    AiryDecayStudy st;
    st.Ns = Ns;
    for (long long N : Ns) {
        auto pts = airy_decay_scan(N, t_points, x_max);
        st.fits.push_back(decay_fit(pts));
        st.constants.push_back(fitted_constant(pts, -1.0 / 3.0));
        st.scans.push_back(std::move(pts));
        const double nn = double(N);
        for (double t : {1.0 / (nn * nn * nn), 1.0 / (nn * nn)})
            for (double X : far_X) st.far.push_back({N, t, X, std::abs(airy_profile(X, t, N))});
    }
    return st;
}

struct ShortTimeStudy {
    std::vector<StrichartzStats> stats;
    SlopeFit fit;
    double max_l2_deviation() const {
        double d = 0.0;
        for (const auto& s : stats) d = std::max(d, s.max_l2_deviation);
        return d;
    }
};

inline ShortTimeStudy short_time_study(const std::vector<long long>& Ns, int count, std::uint64_t seed,
                                       int time_samples = 64) {
    ShortTimeStudy st;
    std::vector<double> xs, ys;
    for (long long N : Ns) {
        st.stats.push_back(short_time_strichartz({count, seed, N}, time_samples));
        xs.push_back(double(std::max<long long>(N, 1)));
        ys.push_back(st.stats.back().max_ratio);
    }
    if (xs.size() >= 2) st.fit = fit_loglog(xs, ys);
    return st;
}

struct CommutatorStudy {
    std::vector<CommutatorStats> stats;   ///< grouped by s, bands ascending
    /// max over s and successive bands of max_ratio(2B) / max_ratio(B)
    double worst_growth = 0.0;
};

inline CommutatorStudy commutator_study(const std::vector<double>& ss, const std::vector<long long>& bands, int pairs,
                                        std::uint64_t seed) {
    CommutatorStudy st;
    for (double s : ss) {
        double prev = 0.0;
        for (std::size_t j = 0; j < bands.size(); ++j) {
            st.stats.push_back(commutator_test({pairs, seed, bands[j]}, s));
            const double cur = st.stats.back().max_ratio;
            if (j > 0) st.worst_growth = std::max(st.worst_growth, cur / prev);
            prev = cur;
        }
    }
    return st;
}

}  // namespace zk

#endif
