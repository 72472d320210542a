#ifndef ZK_GRID_HPP
#define ZK_GRID_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zk {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline bool is_power_of_two(long long v) { return v > 0 && (v & (v - 1)) == 0; }

/// Truncated Fourier lattice on the 2-torus (period 2*pi in both directions).
///
/// Coefficients are stored in FFT order: index i along x holds the signed
/// frequency m1 = i for i < mx/2 and m1 = i - mx otherwise, so the retained
/// band is -mx/2 <= m1 < mx/2 (likewise for y). Collocation points are
/// x_j = 2*pi*j/mx, y_k = 2*pi*k/my; sup norms are taken on the grid refined
/// by `oversample`.
class Grid {
public:
    Grid(int mx, int my, int oversample = 4) : mx_(mx), my_(my), oversample_(oversample) {
        if (!is_power_of_two(mx) || !is_power_of_two(my) || mx < 8 || my < 8)
            throw std::invalid_argument("Grid: mx and my must be powers of two >= 8, got " +
                                        std::to_string(mx) + "x" + std::to_string(my));
        if (oversample < 1)
            throw std::invalid_argument("Grid: oversample must be positive");
    }

    int mx() const { return mx_; }
    int my() const { return my_; }
    int oversample() const { return oversample_; }
    std::size_t size() const { return static_cast<std::size_t>(mx_) * static_cast<std::size_t>(my_); }

    int freq_x(int i) const { return i < mx_ / 2 ? i : i - mx_; }
    int freq_y(int k) const { return k < my_ / 2 ? k : k - my_; }

    bool contains(long long m1, long long m2) const {
        return m1 >= -mx_ / 2 && m1 < mx_ / 2 && m2 >= -my_ / 2 && m2 < my_ / 2;
    }

    /// Flat index of frequency (m1, m2); caller guarantees contains(m1, m2).
    std::size_t index(long long m1, long long m2) const {
        const long long i = m1 < 0 ? m1 + mx_ : m1;
        const long long k = m2 < 0 ? m2 + my_ : m2;
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(my_) + static_cast<std::size_t>(k);
    }

    /// Largest |m1| (resp. |m2|) kept by the 2/3 rule.
    int dealias_x() const { return mx_ / 3; }
    int dealias_y() const { return my_ / 3; }

    Grid with_oversample(int factor) const { return Grid(mx_, my_, factor); }

    friend bool operator==(const Grid& a, const Grid& b) { return a.mx_ == b.mx_ && a.my_ == b.my_; }

private:
    int mx_;
    int my_;
    int oversample_;
};

/// Smallest power of two >= max(v, 8).
inline int grid_size_for(long long v) {
    int n = 8;
    while (n < v) n *= 2;
    return n;
}

}  // namespace zk

#endif
