#ifndef ZK_SPECTRAL_HPP
#define ZK_SPECTRAL_HPP

#include "zk/fft.hpp"
#include "zk/grid.hpp"
#include "zk/wide_int.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace zk {

/// Littlewood-Paley block index: 0 or a power of two.
class DyadicBlock {
public:
    explicit DyadicBlock(long long n) : n_(n) {
        if (n != 0 && !is_power_of_two(n))
            throw std::invalid_argument("DyadicBlock: N must be 0 or a power of two, got " + std::to_string(n));
    }
    long long value() const { return n_; }
    /// 1 v N
    long long scale() const { return n_ == 0 ? 1 : n_; }
    friend bool operator==(DyadicBlock a, DyadicBlock b) { return a.n_ == b.n_; }

private:
    long long n_;
};

/// Fourier coefficients c_m of f(x) = sum_m c_m exp(i m.x) on a truncated lattice.
class SpectralField {
public:
    explicit SpectralField(Grid grid) : grid_(grid), coeffs_(grid.size(), cplx{0.0, 0.0}) {}

    const Grid& grid() const { return grid_; }
    std::span<cplx> data() { return coeffs_; }
    std::span<const cplx> data() const { return coeffs_; }

    /// Coefficient at frequency (m1, m2); zero outside the lattice.
    cplx coeff(long long m1, long long m2) const {
        return grid_.contains(m1, m2) ? coeffs_[grid_.index(m1, m2)] : cplx{};
    }

    cplx& at(long long m1, long long m2) {
        if (!grid_.contains(m1, m2))
            throw std::out_of_range("SpectralField: frequency (" + std::to_string(m1) + "," + std::to_string(m2) +
                                    ") outside the " + std::to_string(grid_.mx()) + "x" +
                                    std::to_string(grid_.my()) + " lattice");
        return coeffs_[grid_.index(m1, m2)];
    }

    /// Calls f(m1, m2, c) for every stored coefficient.
    template <class F>
    void for_each_mode(F&& f) {
        const int mx = grid_.mx(), my = grid_.my();
        for (int i = 0; i < mx; ++i)
            for (int k = 0; k < my; ++k) f(grid_.freq_x(i), grid_.freq_y(k), coeffs_[std::size_t(i) * my + k]);
    }
    template <class F>
    void for_each_mode(F&& f) const {
        const int mx = grid_.mx(), my = grid_.my();
        for (int i = 0; i < mx; ++i)
            for (int k = 0; k < my; ++k) f(grid_.freq_x(i), grid_.freq_y(k), coeffs_[std::size_t(i) * my + k]);
    }

    SpectralField& operator+=(const SpectralField& o) {
        require_same_grid(o);
        for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] += o.coeffs_[j];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        require_same_grid(o);
        for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] -= o.coeffs_[j];
        return *this;
    }
    SpectralField& operator*=(cplx a) {
        for (auto& c : coeffs_) c *= a;
        return *this;
    }
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(cplx a, SpectralField b) { return b *= a; }

    double max_abs() const {
        double m = 0.0;
        for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

private:
    void require_same_grid(const SpectralField& o) const {
        if (!(grid_ == o.grid_)) throw std::invalid_argument("SpectralField: grid mismatch");
    }

    Grid grid_;
    std::vector<cplx> coeffs_;
};

/// Real samples on the (factor*mx) x (factor*my) collocation grid, row-major in x.
struct RealField {
    Grid grid;
    int factor = 1;
    std::vector<double> values;

    int nx() const { return factor * grid.mx(); }
    int ny() const { return factor * grid.my(); }
    double operator()(int j, int k) const { return values[std::size_t(j) * ny() + k]; }
};

// ---------------------------------------------------------------------------
// Dispersion

/// m^3 + m n^2, exactly.
inline wide_int dispersion_symbol(std::int64_t m, std::int64_t n) {
    check_frequency_range(m, "dispersion_symbol");
    check_frequency_range(n, "dispersion_symbol");
    const wide_int wm = m, wn = n;
    return wm * wm * wm + wm * wn * wn;
}

/// Same value as a double, for phase computations on grid frequencies.
inline double dispersion_frequency(long long m1, long long m2) {
    return static_cast<double>(static_cast<std::int64_t>(m1 * m1 * m1 + m1 * m2 * m2));
}

// ---------------------------------------------------------------------------
// Transforms

inline bool is_hermitian(const SpectralField& f, double rel_tol = 1e-12) {
    const double scale = std::max(f.max_abs(), 1e-300);
    const Grid& g = f.grid();
    bool ok = true;
    f.for_each_mode([&](int m1, int m2, const cplx& c) {
        // On the base lattice the Nyquist frequency is its own partner.
        const long long p1 = (m1 == -g.mx() / 2) ? m1 : -m1;
        const long long p2 = (m2 == -g.my() / 2) ? m2 : -m2;
        if (std::abs(c - std::conj(f.coeff(p1, p2))) > rel_tol * scale) ok = false;
    });
    return ok;
}

namespace detail {

// Frequencies of the refined lattice that carry base frequency m (Nyquist is
// split evenly between -n/2 and +n/2 when refining so real data stays real).
inline int refined_targets(int m, int n, int factor, int out[2]) {
    if (factor > 1 && m == -n / 2) {
        out[0] = -n / 2;
        out[1] = n / 2;
        return 2;
    }
    out[0] = m;
    return 1;
}

inline std::size_t refined_index(int m1, int m2, int nx, int ny) {
    const int i = m1 < 0 ? m1 + nx : m1;
    const int k = m2 < 0 ? m2 + ny : m2;
    return std::size_t(i) * ny + k;
}

}  // namespace detail

/// Values of sum_m c_m exp(i m.x) on the grid refined by `factor`.
inline std::vector<cplx> synthesize_complex(const SpectralField& f, int factor) {
    if (factor < 1) throw std::invalid_argument("synthesize: factor must be positive");
    const Grid& g = f.grid();
    const int nx = factor * g.mx(), ny = factor * g.my();
    std::vector<cplx> buf(std::size_t(nx) * ny, cplx{});
    f.for_each_mode([&](int m1, int m2, const cplx& c) {
        if (c == cplx{}) return;
        int tx[2], ty[2];
        const int cx = detail::refined_targets(m1, g.mx(), factor, tx);
        const int cy = detail::refined_targets(m2, g.my(), factor, ty);
        const double w = 1.0 / (cx * cy);
        for (int a = 0; a < cx; ++a)
            for (int b = 0; b < cy; ++b) buf[detail::refined_index(tx[a], ty[b], nx, ny)] += w * c;
    });
    fft2d(buf, nx, ny, +1);
    return buf;
}

/// Real collocation values; rejects fields that are not Hermitian-symmetric.
inline RealField synthesize(const SpectralField& f, int factor) {
    if (!is_hermitian(f)) throw std::domain_error("synthesize: field is not Hermitian-symmetric (not real)");
    const auto buf = synthesize_complex(f, factor);
    RealField out{f.grid(), factor, std::vector<double>(buf.size())};
    for (std::size_t j = 0; j < buf.size(); ++j) out.values[j] = buf[j].real();
    return out;
}

inline RealField synthesize(const SpectralField& f) { return synthesize(f, f.grid().oversample()); }

/// Fourier coefficients of collocation values (exact for trigonometric
/// polynomials resolved by the grid).
inline SpectralField analyze_complex(const Grid& grid, int factor, std::span<const cplx> values) {
    const int nx = factor * grid.mx(), ny = factor * grid.my();
    if (values.size() != std::size_t(nx) * ny) throw std::invalid_argument("analyze: value count does not match grid");
    std::vector<cplx> buf(values.begin(), values.end());
    for (const auto& v : buf)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::domain_error("analyze: non-finite collocation value");
    fft2d(buf, nx, ny, -1);
    const double norm = 1.0 / (double(nx) * double(ny));
    SpectralField out(grid);
    out.for_each_mode([&](int m1, int m2, cplx& c) {
        int tx[2], ty[2];
        const int cx = detail::refined_targets(m1, grid.mx(), factor, tx);
        const int cy = detail::refined_targets(m2, grid.my(), factor, ty);
        cplx acc{};
        for (int a = 0; a < cx; ++a)
            for (int b = 0; b < cy; ++b) acc += buf[detail::refined_index(tx[a], ty[b], nx, ny)];
        c = acc * norm;
    });
    return out;
}

inline SpectralField analyze(const RealField& f) {
    std::vector<cplx> buf(f.values.size());
    for (std::size_t j = 0; j < buf.size(); ++j) {
        if (!std::isfinite(f.values[j])) throw std::domain_error("analyze: non-finite collocation value");
        buf[j] = f.values[j];
    }
    return analyze_complex(f.grid, f.factor, buf);
}

// ---------------------------------------------------------------------------
// Norms and multipliers

/// ||f||_{H^s} = 2*pi * (sum (1+|m|^2)^s |c_m|^2)^{1/2}.
inline double sobolev_norm(const SpectralField& f, double s) {
    double acc = 0.0;
    f.for_each_mode([&](int m1, int m2, const cplx& c) {
        const double a = std::norm(c);
        if (a == 0.0) return;
        acc += (s == 0.0 ? 1.0 : std::pow(1.0 + double(m1) * m1 + double(m2) * m2, s)) * a;
    });
    return two_pi * std::sqrt(acc);
}

inline double l2_norm(const SpectralField& f) { return sobolev_norm(f, 0.0); }

/// Applies a Fourier multiplier symbol(m1, m2) -> cplx.
template <class Symbol>
SpectralField apply_multiplier(SpectralField f, Symbol&& symbol) {
    f.for_each_mode([&](int m1, int m2, cplx& c) { c *= symbol(m1, m2); });
    return f;
}

inline SpectralField dx(const SpectralField& f) {
    return apply_multiplier(f, [](int m1, int) { return cplx(0.0, double(m1)); });
}
inline SpectralField dy(const SpectralField& f) {
    return apply_multiplier(f, [](int, int m2) { return cplx(0.0, double(m2)); });
}

/// J^s: multiplier (1+|m|^2)^{s/2}.
inline SpectralField bessel_potential(const SpectralField& f, double s) {
    return apply_multiplier(f, [s](int m1, int m2) {
        return cplx(std::pow(1.0 + double(m1) * m1 + double(m2) * m2, 0.5 * s), 0.0);
    });
}

/// Sharp Littlewood-Paley projection onto N <= |m| < 2N (|m| < 1 for N = 0).
inline SpectralField lp_project(SpectralField f, DyadicBlock block) {
    const long long n = block.value();
    const long long lo2 = n * n;
    const long long hi2 = n == 0 ? 1 : 4 * n * n;
    f.for_each_mode([&](int m1, int m2, cplx& c) {
        const long long r2 = (long long)m1 * m1 + (long long)m2 * m2;
        if (r2 < lo2 || r2 >= hi2) c = cplx{};
    });
    return f;
}

/// Dyadic blocks {0, 1, 2, 4, ...} that meet the lattice of `grid`.
inline std::vector<DyadicBlock> dyadic_blocks(const Grid& grid) {
    const long long r2max = (long long)(grid.mx() / 2) * (grid.mx() / 2) + (long long)(grid.my() / 2) * (grid.my() / 2);
    std::vector<DyadicBlock> out{DyadicBlock(0)};
    for (long long n = 1; n * n <= r2max; n *= 2) out.emplace_back(n);
    return out;
}

/// 2/3 rule: zero |m1| > mx/3 or |m2| > my/3.
inline SpectralField dealias(SpectralField f) {
    const int kx = f.grid().dealias_x(), ky = f.grid().dealias_y();
    f.for_each_mode([&](int m1, int m2, cplx& c) {
        if (std::abs(m1) > kx || std::abs(m2) > ky) c = cplx{};
    });
    return f;
}

/// Linear ZK flow: c_m -> exp(i (m1^3 + m1 m2^2) t) c_m.
inline SpectralField propagate(SpectralField f, double t) {
    if (t == 0.0) return f;
    f.for_each_mode([&](int m1, int m2, cplx& c) {
        if (m1 == 0 || c == cplx{}) return;
        const double phase = dispersion_frequency(m1, m2) * t;
        c *= cplx(std::cos(phase), std::sin(phase));
    });
    return f;
}

// ---------------------------------------------------------------------------
// Cutoffs and sup norms

namespace detail {
template <class Real>
Real bump_psi(Real x) { return x > Real(0) ? std::exp(Real(-1) / x) : Real(0); }
}  // namespace detail

/// C_0^infty(-2, 2) bump: 1 on |r| <= 1, 0 on |r| >= 2, smooth monotone transition.
template <class Real>
Real bump_t(Real r) {
    const Real a = std::abs(r);
    if (a <= Real(1)) return Real(1);
    if (a >= Real(2)) return Real(0);
    const Real up = detail::bump_psi(Real(2) - a);
    const Real down = detail::bump_psi(a - Real(1));
    return up / (up + down);
}

inline double bump(double r) { return bump_t(r); }

/// bump(r / N)
inline double smooth_cutoff(double r, double n) {
    if (!(n >= 1.0)) throw std::invalid_argument("smooth_cutoff: N must be >= 1");
    return bump(r / n);
}

/// Grid maximum of |f|. A lower bound for the true sup that converges under
/// refinement of the collocation grid.
inline double sup_norm(const RealField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

/// sup |f| for complex-valued fields on the grid refined by `factor`.
inline double sup_abs(const SpectralField& f, int factor) {
    const auto v = synthesize_complex(f, factor);
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
}

/// sup |grad f| on the grid refined by `factor`.
inline double sup_gradient(const SpectralField& f, int factor) {
    const auto gx = synthesize_complex(dx(f), factor);
    const auto gy = synthesize_complex(dy(f), factor);
    double m = 0.0;
    for (std::size_t j = 0; j < gx.size(); ++j) m = std::max(m, std::hypot(std::abs(gx[j]), std::abs(gy[j])));
    return m;
}

}  // namespace zk

#endif
