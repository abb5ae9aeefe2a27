#include "hrv/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include "hrv/errors.hpp"
#include "hrv/fft.hpp"

namespace hrv {

double Psd::total_power() const {
    double sum = 0.0;
    for (double p : power) sum += p;
    return sum * df_hz();
}

Psd periodogram_psd(std::span<const double> samples_ms, double rate_hz,
                    std::size_t expected_len) {
    const std::size_t n = samples_ms.size();
    if (expected_len != 0 && n != expected_len)
        throw ShapeError("periodogram expects " + std::to_string(expected_len) +
                         " samples, got " + std::to_string(n));
    if (n < 4 || n % 2 != 0)
        throw ShapeError("periodogram needs an even sample count >= 4");

    double mean = 0.0;
    for (double v : samples_ms) mean += v;
    mean /= static_cast<double>(n);

    std::vector<double> windowed(n);
    double wsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w =
            0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                   static_cast<double>(n - 1));
        windowed[i] = (samples_ms[i] - mean) * w;
        wsq += w * w;
    }

    const auto spectrum = rfft(windowed);
    const std::size_t n_bins = spectrum.size(); // n/2 + 1
    const double scale = 1.0 / (rate_hz * wsq);
    const double df = rate_hz / static_cast<double>(n);

    Psd psd;
    psd.freqs_hz.resize(n_bins);
    psd.power.resize(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k) {
        psd.freqs_hz[k] = static_cast<double>(k) * df;
        double p = std::norm(spectrum[k]) * scale;
        if (k != 0 && k != n_bins - 1) p *= 2.0; // fold negative frequencies
        psd.power[k] = p;
    }
    return psd;
}

namespace {

// First/last bin index whose frequency lies in the band; a 1e-9 slack in
// bin units absorbs the inexact edge/df quotients.
std::size_t first_bin_at_or_above(const Psd& psd, double f) {
    const double k = f / psd.df_hz();
    const double c = std::ceil(k - 1e-9);
    return c <= 0.0 ? 0 : static_cast<std::size_t>(c);
}

std::size_t last_bin_below(const Psd& psd, double f) {
    const double k = f / psd.df_hz();
    double fl = std::floor(k - 1e-9); // strictly below f
    return fl <= 0.0 ? 0 : static_cast<std::size_t>(fl);
}

std::size_t last_bin_at_or_below(const Psd& psd, double f) {
    const double k = f / psd.df_hz();
    double fl = std::floor(k + 1e-9);
    return fl <= 0.0 ? 0 : static_cast<std::size_t>(fl);
}

double integrate_bins(const Psd& psd, std::size_t k_lo, std::size_t k_hi) {
    if (k_lo > k_hi || k_lo >= psd.power.size()) return 0.0;
    k_hi = std::min(k_hi, psd.power.size() - 1);
    double sum = 0.0;
    for (std::size_t k = k_lo; k <= k_hi; ++k) sum += psd.power[k];
    return sum * psd.df_hz();
}

} // namespace

BandPowers band_powers(const Psd& psd, const BandEdges& edges) {
    if (psd.freqs_hz.size() != psd.power.size() || psd.freqs_hz.size() < 2)
        throw ShapeError("malformed PSD");

    BandPowers bp;
    bp.lf_ms2 = integrate_bins(psd, first_bin_at_or_above(psd, edges.lf_lo_hz),
                               last_bin_below(psd, edges.lf_hi_hz));
    bp.hf_ms2 = integrate_bins(psd, first_bin_at_or_above(psd, edges.hf_lo_hz),
                               last_bin_at_or_below(psd, edges.hf_hi_hz));

    const double total = bp.lf_ms2 + bp.hf_ms2;
    if (total <= 0.0)
        throw DegenerateSpectrumError("no power in the LF+HF range");
    bp.lfn = bp.lf_ms2 / total;
    bp.hfn = bp.hf_ms2 / total;
    if (bp.hf_ms2 > 0.0) bp.lf_hf = bp.lf_ms2 / bp.hf_ms2;
    return bp;
}

double beta_exponent(const Psd& psd, double lo_hz, double hi_hz, std::size_t min_bins) {
    const std::size_t k_lo = std::max<std::size_t>(1, first_bin_at_or_above(psd, lo_hz));
    const std::size_t k_hi = std::min(last_bin_at_or_below(psd, hi_hz), psd.power.size() - 1);

    // OLS of y = ln(power) on x = ln(f) over positive-power bins.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t m = 0;
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        if (!(psd.power[k] > 0.0)) continue;
        const double x = std::log(psd.freqs_hz[k]);
        const double y = std::log(psd.power[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < min_bins)
        throw DegenerateSpectrumError("beta fit needs >= " + std::to_string(min_bins) +
                                      " positive bins, got " + std::to_string(m));
    const double dm = static_cast<double>(m);
    const double denom = sxx - sx * sx / dm;
    if (!(denom > 0.0)) throw DegenerateSpectrumError("beta fit has degenerate abscissa");
    return (sxy - sx * sy / dm) / denom;
}

void write_psd(const std::filesystem::path& path, const Psd& psd) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "freq_hz\tpower\n";
    char buf[80];
    for (std::size_t k = 0; k < psd.freqs_hz.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.9g\t%.12g\n", psd.freqs_hz[k], psd.power[k]);
        out << buf;
    }
}

} // namespace hrv
