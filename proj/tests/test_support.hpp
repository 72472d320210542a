#ifndef ZK_TEST_SUPPORT_HPP
#define ZK_TEST_SUPPORT_HPP

#include "zk/spectral.hpp"

#include <random>

namespace zk::testing {

/// Complex coefficients with |m1|, |m2| <= band, Gaussian amplitudes.
inline SpectralField random_complex(const Grid& g, int band, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    SpectralField f(g);
    f.for_each_mode([&](int m1, int m2, cplx& c) {
        if (std::abs(m1) <= band && std::abs(m2) <= band) c = cplx(n(rng), n(rng));
    });
    return f;
}

/// Hermitian-symmetric version of random_complex.
inline SpectralField random_real(const Grid& g, int band, std::mt19937_64& rng) {
    SpectralField f = random_complex(g, band, rng);
    SpectralField out(g);
    // On the lattice the Nyquist row/column is its own partner.
    const int nx = g.mx() / 2, ny = g.my() / 2;
    out.for_each_mode([&](int m1, int m2, cplx& c) {
        const int p1 = m1 == -nx ? m1 : -m1, p2 = m2 == -ny ? m2 : -m2;
        c = 0.5 * (f.coeff(m1, m2) + std::conj(f.coeff(p1, p2)));
    });
    return out;
}

/// Direct evaluation of sum_m c_m exp(i m.x).
inline cplx direct_sum(const SpectralField& f, double x, double y) {
    cplx acc{};
    f.for_each_mode([&](int m1, int m2, const cplx& c) {
        if (c != cplx{}) acc += c * std::polar(1.0, m1 * x + m2 * y);
    });
    return acc;
}

/// Exact discrete convolution (a*b)_k = sum_{p+q=k} a_p b_q, restricted to the lattice of a.
inline SpectralField convolve(const SpectralField& a, const SpectralField& b) {
    SpectralField out(a.grid());
    a.for_each_mode([&](int p1, int p2, const cplx& ca) {
        if (ca == cplx{}) return;
        b.for_each_mode([&](int q1, int q2, const cplx& cb) {
            if (cb == cplx{}) return;
            if (out.grid().contains(p1 + q1, p2 + q2)) out.at(p1 + q1, p2 + q2) += ca * cb;
        });
    });
    return out;
}

inline double max_diff(const SpectralField& a, const SpectralField& b) { return (a - b).max_abs(); }

}  // namespace zk::testing

#endif
