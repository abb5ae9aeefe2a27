#ifndef HRV_SYNTH_HPP
#define HRV_SYNTH_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "hrv/rr_series.hpp"

namespace hrv {

/// Generator recipe for one synthetic 24 h-style RR recording: sinusoidal
/// LF (0.10 Hz) and HF (0.25 Hz) modulations around a base RR plus
/// power-law noise (spectrum proportional to f^noise_beta).
struct RrProfile {
    double base_rr_ms = 900.0;
    double lf_amp_ms = 30.0;
    double hf_amp_ms = 20.0;
    double noise_sd_ms = 30.0;
    double noise_beta = -1.0;
    double artifact_rate = 0.0; // per-beat spike probability, [0, 0.05]
    double duration_s = 86400.0;
};

struct DemographicsSpec {
    double age_mean = 60.0;
    double age_sd = 15.0;
    double male_fraction = 0.5;
};

struct ClassSpec {
    RrProfile profile;
    DemographicsSpec demographics;
};

/// Defaults follow the usual clinical picture: the IHD class runs at a
/// shorter RR with visibly lower variability, is older and more male.
struct CohortSpec {
    std::size_t n_normal = 681;
    std::size_t n_ihd = 284;
    ClassSpec normal{{900.0, 40.0, 30.0, 40.0, -1.0, 0.0, 86400.0}, {63.0, 15.0, 0.46}};
    ClassSpec ihd{{800.0, 20.0, 12.0, 18.0, -1.0, 0.0, 86400.0}, {72.0, 10.0, 0.78}};
    double profile_jitter = 0.10; // relative spread of per-subject parameters
    std::uint64_t master_seed = 42;
};

struct RrGroundTruth {
    RrProfile profile; // per-subject (jittered) parameters
    std::vector<std::size_t> artifact_indices;
};

struct SynthCohort {
    Cohort cohort;
    std::vector<RrGroundTruth> truths; // aligned with cohort.subjects
};

/// Zero-mean noise with one-sided spectrum proportional to f^beta,
/// synthesized with random phases and normalized to the requested SD.
std::vector<double> shaped_noise(std::size_t n, double dt_s, double beta, double sd,
                                 std::uint64_t seed);

/// Place beats by integrating the instantaneous RR: interval i is the
/// profile evaluated at the i-th beat's onset. Isolated spikes (x3 or x0.4
/// of the local RR) are injected at the configured rate and their indices
/// recorded.
std::pair<RRSeries, RrGroundTruth> gen_rr_series(const RrProfile& profile, std::uint64_t seed);

SynthCohort gen_cohort(const CohortSpec& spec);

/// Write RR files, the manifest, and a ground-truth sidecar under dir.
/// Returns the manifest path.
std::filesystem::path write_cohort(const std::filesystem::path& dir, const SynthCohort& synth);

CohortSpec load_cohort_spec(const std::filesystem::path& path);
void save_cohort_spec(const std::filesystem::path& path, const CohortSpec& spec);

} // namespace hrv

#endif // HRV_SYNTH_HPP
