#ifndef ZK_WIDE_INT_HPP
#define ZK_WIDE_INT_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace zk {

/// 128-bit signed integer used for exact dispersion and resonance values.
using wide_int = __int128;

/// Inputs to the cubic dispersion/resonance polynomials are limited to this
/// magnitude so that every intermediate product is exact.
inline constexpr std::int64_t max_exact_frequency = 200000;

inline void check_frequency_range(std::int64_t v, const char* what) {
    if (v > max_exact_frequency || v < -max_exact_frequency)
        throw std::out_of_range(std::string(what) + ": |argument| exceeds " +
                                std::to_string(max_exact_frequency) + " (got " + std::to_string(v) + ")");
}

inline std::string to_string(wide_int v) {
    if (v == 0) return "0";
    const bool neg = v < 0;
    // Work with non-positive values so INT128_MIN does not overflow.
    std::string out;
    wide_int x = neg ? v : -v;
    while (x != 0) {
        const int digit = -static_cast<int>(x % 10);
        out.push_back(static_cast<char>('0' + digit));
        x /= 10;
    }
    if (neg) out.push_back('-');
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace zk

#endif
