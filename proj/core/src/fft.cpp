#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

namespace modloc::detail {
namespace {

std::mutex planner_mutex;

std::vector<std::complex<double>> run(const std::vector<std::complex<double>>& x, int sign) {
    const int n = static_cast<int>(x.size());
    std::vector<std::complex<double>> out(n);
    if (n == 0) return out;
    fftw_complex* in = fftw_alloc_complex(n);
    fftw_complex* res = fftw_alloc_complex(n);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        plan = fftw_plan_dft_1d(n, in, res, sign, FFTW_ESTIMATE);
    }
    std::memcpy(in, x.data(), sizeof(fftw_complex) * n);
    fftw_execute(plan);
    std::memcpy(static_cast<void*>(out.data()), res, sizeof(fftw_complex) * n);
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(res);
    return out;
}

}  // namespace

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x) { return run(x, FFTW_FORWARD); }

std::vector<std::complex<double>> idft(const std::vector<std::complex<double>>& x) {
    auto y = run(x, FFTW_BACKWARD);
    const double s = 1.0 / static_cast<double>(x.size());
    for (auto& v : y) v *= s;
    return y;
}

std::vector<double> angular_frequencies(int n, double d) {
    std::vector<double> k(n);
    const double base = 2.0 * M_PI / (n * d);
    for (int m = 0; m < n; ++m) {
        const int f = m <= (n - 1) / 2 ? m : m - n;
        k[m] = base * f;
    }
    return k;
}

}  // namespace modloc::detail
