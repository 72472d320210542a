#ifndef ZK_RESONANCE_HPP
#define ZK_RESONANCE_HPP

#include "zk/csv.hpp"
#include "zk/wide_int.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

namespace zk {

struct ResonanceQuadruple {
    std::int64_t m = 0, m1 = 0, n = 0, n1 = 0;
    wide_int value = 0;

    auto key() const { return std::tie(m, m1, n, n1); }
    friend bool operator<(const ResonanceQuadruple& a, const ResonanceQuadruple& b) { return a.key() < b.key(); }
    friend bool operator==(const ResonanceQuadruple& a, const ResonanceQuadruple& b) {
        return a.key() == b.key() && a.value == b.value;
    }
};

/// R(m,m1,n,n1) = phi(m,n) - phi(m-m1,n-n1) - phi(m1,n1) in expanded form
/// 3 m m1 (m-m1) + 2 n n1 (m-m1) + m1 n^2 - m n1^2.
inline wide_int resonance(std::int64_t m, std::int64_t m1, std::int64_t n, std::int64_t n1) {
    check_frequency_range(m, "resonance");
    check_frequency_range(m1, "resonance");
    check_frequency_range(n, "resonance");
    check_frequency_range(n1, "resonance");
    const wide_int a = m, a1 = m1, b = n, b1 = n1;
    return 3 * a * a1 * (a - a1) + 2 * b * b1 * (a - a1) + a1 * b * b - a * b1 * b1;
}

/// Definitional difference of dispersion symbols; independent of the expanded form.
inline wide_int resonance_definitional(std::int64_t m, std::int64_t m1, std::int64_t n, std::int64_t n1) {
    check_frequency_range(m, "resonance");
    check_frequency_range(m1, "resonance");
    check_frequency_range(n, "resonance");
    check_frequency_range(n1, "resonance");
    auto phi = [](wide_int p, wide_int q) { return p * p * p + p * q * q; };
    return phi(m, n) - phi(wide_int(m) - m1, wide_int(n) - n1) - phi(m1, n1);
}

/// (R(m,0,-1,2), R(m,0,1,-2)); both equal -8m.
inline std::pair<wide_int, wide_int> curvature(std::int64_t m) {
    return {resonance(m, 0, -1, 2), resonance(m, 0, 1, -2)};
}

namespace detail {

inline bool exact_isqrt(wide_int v, wide_int& root) {
    if (v < 0) return false;
    auto r = static_cast<wide_int>(std::sqrt(static_cast<long double>(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    root = r;
    return r * r == v;
}

}  // namespace detail

/// All (m,m1,n,n1) with max |.| <= bound and R = 0, sorted lexicographically.
///
/// For fixed (m, m1, n), R is the quadratic -m n1^2 + 2 n (m-m1) n1 + (3 m m1 (m-m1) + m1 n^2)
/// in n1, so integer roots are read off an exact discriminant; m = 0 leaves a
/// linear equation and m = m1 = 0 makes every n1 resonant.
inline std::vector<ResonanceQuadruple> enumerate_resonances(std::int64_t bound) {
    if (bound < 1 || bound > 200) throw std::invalid_argument("enumerate_resonances: bound must be in [1, 200]");
    std::vector<ResonanceQuadruple> out;
    auto push = [&](std::int64_t m, std::int64_t m1, std::int64_t n, std::int64_t n1) {
        out.push_back({m, m1, n, n1, 0});
    };
    for (std::int64_t m = -bound; m <= bound; ++m) {
        for (std::int64_t m1 = -bound; m1 <= bound; ++m1) {
            for (std::int64_t n = -bound; n <= bound; ++n) {
                const wide_int a = -wide_int(m);                         // n1^2
                const wide_int b = 2 * wide_int(n) * (m - m1);           // n1
                const wide_int c = 3 * wide_int(m) * m1 * (m - m1) + wide_int(m1) * n * n;
                if (a == 0) {
                    if (b == 0) {
                        if (c == 0)
                            for (std::int64_t n1 = -bound; n1 <= bound; ++n1) push(m, m1, n, n1);
                        continue;
                    }
                    if (c % b == 0) {
                        const wide_int r = -c / b;
                        if (r >= -bound && r <= bound) push(m, m1, n, static_cast<std::int64_t>(r));
                    }
                    continue;
                }
                const wide_int disc = b * b - 4 * a * c;
                wide_int root;
                if (!detail::exact_isqrt(disc, root)) continue;
                for (const wide_int num : {-b - root, -b + root}) {
                    if (num % (2 * a) != 0) continue;
                    const wide_int r = num / (2 * a);
                    if (r >= -bound && r <= bound) push(m, m1, n, static_cast<std::int64_t>(r));
                    if (root == 0) break;
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](const auto& x, const auto& y) { return x.key() == y.key(); }),
              out.end());
    return out;
}

/// R evaluated at real arguments (m, m1, sqrt3 m, -sqrt3 m1); zero up to rounding
/// for the exact sqrt(3).
inline double sqrt3_family_value(double m, double m1, double root = std::sqrt(3.0)) {
    const double n = root * m, n1 = -root * m1;
    return 3.0 * m * m1 * (m - m1) + 2.0 * n * n1 * (m - m1) + m1 * n * n - m * n1 * n1;
}

inline void write_resonances_csv(const std::vector<ResonanceQuadruple>& list, std::ostream& os) {
    CsvWriter csv(os, {"m", "m1", "n", "n1", "value"});
    for (const auto& q : list)
        csv.write_row({std::to_string(q.m), std::to_string(q.m1), std::to_string(q.n), std::to_string(q.n1),
                       to_string(q.value)});
}

}  // namespace zk

#endif
