#ifndef HRV_SPECTRAL_HPP
#define HRV_SPECTRAL_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace hrv {

/// One-sided power spectral density in ms^2/Hz on the DC..Nyquist grid.
struct Psd {
    std::vector<double> freqs_hz;
    std::vector<double> power;

    double df_hz() const { return freqs_hz.size() > 1 ? freqs_hz[1] - freqs_hz[0] : 0.0; }
    /// Integral of the PSD, i.e. total power in ms^2.
    double total_power() const;
};

struct BandEdges {
    double lf_lo_hz = 0.04;
    double lf_hi_hz = 0.15; // exclusive: the shared edge belongs to HF
    double hf_lo_hz = 0.15;
    double hf_hi_hz = 0.40; // inclusive
};

struct BandPowers {
    double lf_ms2 = 0.0;
    double hf_ms2 = 0.0;
    std::optional<double> lf_hf; // empty when hf == 0
    double lfn = 0.0;
    double hfn = 0.0;
};

/// Mean-removed, Hamming-windowed periodogram of one uniform segment.
///
/// expected_len pins the contract to the 300 s x 2 Hz segment (600 samples,
/// 301 bins at 1/300 Hz); pass 0 to accept any even length. The estimate is
/// normalized by rate * sum(w^2) with interior bins doubled, so that
/// sum(power) * df recovers the windowed signal's mean square.
Psd periodogram_psd(std::span<const double> samples_ms, double rate_hz = 2.0,
                    std::size_t expected_len = 600);

/// Integrate the PSD over the LF and HF bands and derive the normalized
/// powers. Throws DegenerateSpectrumError when lf + hf == 0; callers treat
/// that segment's spectral features as missing.
BandPowers band_powers(const Psd& psd, const BandEdges& edges = {});

/// Slope of the OLS regression of ln(power) on ln(frequency) over bins with
/// lo_hz < f <= hi_hz, skipping zero-power bins. Needs at least min_bins
/// usable bins.
double beta_exponent(const Psd& psd, double lo_hz = 0.0, double hi_hz = 0.40,
                     std::size_t min_bins = 10);

/// Debug dump: freq_hz, power rows (tab-separated).
void write_psd(const std::filesystem::path& path, const Psd& psd);

} // namespace hrv

#endif // HRV_SPECTRAL_HPP
