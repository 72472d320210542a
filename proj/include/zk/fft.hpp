#ifndef ZK_FFT_HPP
#define ZK_FFT_HPP

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <tuple>

namespace zk {

using cplx = std::complex<double>;

namespace detail {

inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// 2D complex transform with its own aligned buffer. Buffers are always
// fftw_malloc'd so FFTW picks the same codelets every run (bit-identical
// output for identical input).
class Fft2d {
public:
    Fft2d(int n0, int n1, int sign) : n0_(n0), n1_(n1) {
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * size()));
        std::lock_guard lock(fftw_planner_mutex());
        plan_ = fftw_plan_dft_2d(n0, n1, buf_, buf_, sign, FFTW_ESTIMATE);
    }
    ~Fft2d() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan_);
        fftw_free(buf_);
    }
    Fft2d(const Fft2d&) = delete;
    Fft2d& operator=(const Fft2d&) = delete;

    std::size_t size() const { return static_cast<std::size_t>(n0_) * static_cast<std::size_t>(n1_); }

    std::span<cplx> data() { return {reinterpret_cast<cplx*>(buf_), size()}; }
    void execute() { fftw_execute(plan_); }

private:
    int n0_;
    int n1_;
    fftw_complex* buf_ = nullptr;
    fftw_plan plan_ = nullptr;
};

inline Fft2d& cached_fft(int n0, int n1, int sign) {
    thread_local std::map<std::tuple<int, int, int>, std::unique_ptr<Fft2d>> cache;
    auto& slot = cache[{n0, n1, sign}];
    if (!slot) slot = std::make_unique<Fft2d>(n0, n1, sign);
    return *slot;
}

}  // namespace detail

/// In-place unnormalized 2D DFT, out[j] = sum_k in[k] exp(sign * 2*pi*i*j.k/n).
/// sign = +1 evaluates a trigonometric polynomial at collocation points.
inline void fft2d(std::span<cplx> data, int n0, int n1, int sign) {
    auto& f = detail::cached_fft(n0, n1, sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD);
    std::copy(data.begin(), data.end(), f.data().begin());
    f.execute();
    std::copy(f.data().begin(), f.data().end(), data.begin());
}

}  // namespace zk

#endif
