#include "hrv/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace hrv {

namespace {

// The FFTW planner is not thread-safe; plans are created once per length
// under a lock and then executed concurrently via the new-array interface
// on fftw_malloc'd (hence identically aligned) buffers.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_plan cached_r2c_plan(std::size_t n, double* in, fftw_complex* out) {
    static std::unordered_map<std::size_t, fftw_plan> plans;
    std::lock_guard lock(planner_mutex());
    auto it = plans.find(n);
    if (it == plans.end()) {
        fftw_plan p = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
        it = plans.emplace(n, p).first;
    }
    return it->second;
}

fftw_plan cached_c2r_plan(std::size_t n, fftw_complex* in, double* out) {
    static std::unordered_map<std::size_t, fftw_plan> plans;
    std::lock_guard lock(planner_mutex());
    auto it = plans.find(n);
    if (it == plans.end()) {
        fftw_plan p = fftw_plan_dft_c2r_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
        it = plans.emplace(n, p).first;
    }
    return it->second;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t bytes) : p(fftw_malloc(bytes)) {
        if (!p) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(p); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    void* p;
};

} // namespace

std::vector<std::complex<double>> rfft(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) throw std::invalid_argument("rfft: empty input");
    const std::size_t nc = n / 2 + 1;

    FftwBuffer inb(sizeof(double) * n);
    FftwBuffer outb(sizeof(fftw_complex) * nc);
    double* in = static_cast<double*>(inb.p);
    fftw_complex* out = static_cast<fftw_complex*>(outb.p);

    fftw_plan plan = cached_r2c_plan(n, in, out);
    std::copy(x.begin(), x.end(), in);
    fftw_execute_dft_r2c(plan, in, out);

    std::vector<std::complex<double>> result(nc);
    for (std::size_t k = 0; k < nc; ++k) result[k] = {out[k][0], out[k][1]};
    return result;
}

std::vector<double> irfft(std::span<const std::complex<double>> spectrum, std::size_t n) {
    const std::size_t nc = n / 2 + 1;
    if (n == 0 || spectrum.size() != nc)
        throw std::invalid_argument("irfft: spectrum length must be n/2+1");

    FftwBuffer inb(sizeof(fftw_complex) * nc);
    FftwBuffer outb(sizeof(double) * n);
    fftw_complex* in = static_cast<fftw_complex*>(inb.p);
    double* out = static_cast<double*>(outb.p);

    fftw_plan plan = cached_c2r_plan(n, in, out);
    for (std::size_t k = 0; k < nc; ++k) {
        in[k][0] = spectrum[k].real();
        in[k][1] = spectrum[k].imag();
    }
    fftw_execute_dft_c2r(plan, in, out);

    std::vector<double> result(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) result[i] = out[i] * scale;
    return result;
}

} // namespace hrv
