#ifndef ZK_STATS_HPP
#define ZK_STATS_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace zk {

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// Root-mean-square residual of the fit in log space.
    double residual = 0.0;
};

/// Least-squares fit log(y) = intercept + slope * log(x).
inline SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_loglog: need >= 2 matched points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!(x[j] > 0.0) || !(y[j] > 0.0)) throw std::domain_error("fit_loglog: values must be positive");
        const double lx = std::log(x[j]), ly = std::log(y[j]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    SlopeFit f;
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::domain_error("fit_loglog: degenerate abscissae");
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    double r2 = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double e = std::log(y[j]) - (f.intercept + f.slope * std::log(x[j]));
        r2 += e * e;
    }
    f.residual = std::sqrt(r2 / n);
    return f;
}

inline SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    return fit_loglog(std::span<const double>(x), std::span<const double>(y));
}

/// Pairwise summation; fixed reduction order for any input length.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t h = v.size() / 2;
    return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

/// n points geometrically spaced on [a, b] (inclusive).
inline std::vector<double> log_space(double a, double b, int n) {
    if (n < 2 || !(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("log_space: need n >= 2 and positive ends");
    std::vector<double> out(n);
    const double la = std::log(a), lb = std::log(b);
    for (int j = 0; j < n; ++j) out[j] = std::exp(la + (lb - la) * j / (n - 1));
    out.front() = a;
    out.back() = b;
    return out;
}

}  // namespace zk

#endif
