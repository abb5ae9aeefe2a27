#ifndef HRV_FFT_HPP
#define HRV_FFT_HPP

#include <complex>
#include <span>
#include <vector>

namespace hrv {

/// Forward real-to-complex DFT; returns n/2+1 one-sided coefficients with
/// the unnormalized FFTW convention. Thread-safe.
std::vector<std::complex<double>> rfft(std::span<const double> x);

/// Inverse of rfft for an output of length n (n/2+1 input coefficients).
/// Scaled by 1/n so irfft(rfft(x), x.size()) == x. Thread-safe.
std::vector<double> irfft(std::span<const std::complex<double>> spectrum, std::size_t n);

} // namespace hrv

#endif // HRV_FFT_HPP
