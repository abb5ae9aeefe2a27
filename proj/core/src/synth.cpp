#include "hrv/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "hrv/errors.hpp"
#include "hrv/fft.hpp"
#include "hrv/ingest.hpp"
#include "hrv/rng.hpp"

namespace hrv {

namespace {

using nlohmann::json;

void validate(const RrProfile& p) {
    if (p.base_rr_ms < 400.0 || p.base_rr_ms > 1500.0)
        throw ConfigError("base_rr_ms must be in [400, 1500]");
    if (p.lf_amp_ms < 0.0 || p.hf_amp_ms < 0.0 || p.noise_sd_ms < 0.0)
        throw ConfigError("modulation amplitudes must be non-negative");
    if (p.duration_s < 300.0) throw ConfigError("duration_s must be >= 300");
    if (p.artifact_rate < 0.0 || p.artifact_rate > 0.05)
        throw ConfigError("artifact_rate must be in [0, 0.05]");
}

constexpr double kLfFreqHz = 0.10;
constexpr double kHfFreqHz = 0.25;

} // namespace

std::vector<double> shaped_noise(std::size_t n, double dt_s, double beta, double sd,
                                 std::uint64_t seed) {
    if (n < 4) throw ConfigError("shaped_noise needs n >= 4");
    if (!(dt_s > 0.0)) throw ConfigError("shaped_noise needs dt > 0");
    if (sd == 0.0) return std::vector<double>(n, 0.0);

    Rng rng(seed);
    const std::size_t nc = n / 2 + 1;
    std::vector<std::complex<double>> spectrum(nc, {0.0, 0.0});
    const double df = 1.0 / (dt_s * static_cast<double>(n));
    for (std::size_t k = 1; k < nc; ++k) {
        const double f = static_cast<double>(k) * df;
        const double mag = std::pow(f, beta / 2.0);
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        spectrum[k] = std::polar(mag, phase);
    }
    if (n % 2 == 0) spectrum[nc - 1] = {spectrum[nc - 1].real(), 0.0}; // Nyquist must be real

    std::vector<double> x = irfft(spectrum, n);

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    const double scale = var > 0.0 ? sd / std::sqrt(var) : 0.0;
    for (double& v : x) v = (v - mean) * scale;
    return x;
}

std::pair<RRSeries, RrGroundTruth> gen_rr_series(const RrProfile& profile, std::uint64_t seed) {
    validate(profile);

    // Noise is synthesized on a 2 Hz grid and linearly interpolated at the
    // beat onsets; a short pad covers the last beat landing past duration.
    const double noise_dt = 0.5;
    const std::size_t noise_len =
        static_cast<std::size_t>(std::ceil(profile.duration_s / noise_dt)) + 16;
    std::vector<double> noise;
    if (profile.noise_sd_ms > 0.0)
        noise = shaped_noise(noise_len, noise_dt, profile.noise_beta, profile.noise_sd_ms,
                             derive_seed(seed, 1));
    auto noise_at = [&](double t) -> double {
        if (noise.empty()) return 0.0;
        const double pos = t / noise_dt;
        const std::size_t i = std::min(noise.size() - 2, static_cast<std::size_t>(pos));
        const double frac = pos - static_cast<double>(i);
        return noise[i] * (1.0 - frac) + noise[i + 1] * frac;
    };

    std::vector<double> intervals;
    intervals.reserve(static_cast<std::size_t>(profile.duration_s * 1000.0 / profile.base_rr_ms) +
                      8);
    double t = 0.0;
    while (t < profile.duration_s) {
        double rr = profile.base_rr_ms +
                    profile.lf_amp_ms * std::sin(2.0 * std::numbers::pi * kLfFreqHz * t) +
                    profile.hf_amp_ms * std::sin(2.0 * std::numbers::pi * kHfFreqHz * t) +
                    noise_at(t);
        rr = std::clamp(rr, 100.0, 4800.0);
        intervals.push_back(rr);
        t += rr / 1000.0;
    }

    RrGroundTruth truth;
    truth.profile = profile;
    if (profile.artifact_rate > 0.0) {
        Rng rng(derive_seed(seed, 2));
        std::size_t last_injected = 0;
        bool any = false;
        for (std::size_t i = 2; i + 1 < intervals.size(); ++i) {
            if (any && i - last_injected < 3) continue; // keep spikes isolated
            if (!rng.bernoulli(profile.artifact_rate)) continue;
            const double factor = rng.bernoulli(0.5) ? 3.0 : 0.4;
            intervals[i] = std::clamp(intervals[i] * factor, 40.0, 4800.0);
            truth.artifact_indices.push_back(i);
            last_injected = i;
            any = true;
        }
    }

    return {make_rr_series(std::move(intervals)), std::move(truth)};
}

namespace {

RrProfile jitter_profile(const RrProfile& base, double jitter, Rng& rng) {
    auto scale = [&](double v) { return v * (1.0 + jitter * (2.0 * rng.uniform01() - 1.0)); };
    RrProfile p = base;
    p.base_rr_ms = std::clamp(scale(base.base_rr_ms), 400.0, 1500.0);
    p.lf_amp_ms = scale(base.lf_amp_ms);
    p.hf_amp_ms = scale(base.hf_amp_ms);
    p.noise_sd_ms = scale(base.noise_sd_ms);
    return p;
}

SubjectRecord make_subject(const ClassSpec& cls, ClassLabel label, const std::string& id,
                           double jitter, std::uint64_t seed, RrGroundTruth& truth_out) {
    Rng rng(derive_seed(seed, 3));
    const RrProfile profile = jitter_profile(cls.profile, jitter, rng);

    SubjectRecord rec;
    rec.subject_id = id;
    rec.label = label;
    rec.gender = rng.bernoulli(cls.demographics.male_fraction) ? Gender::male : Gender::female;
    const double age = rng.normal(cls.demographics.age_mean, cls.demographics.age_sd);
    rec.age = static_cast<int>(std::clamp(std::round(age), 18.0, 100.0));

    auto [series, truth] = gen_rr_series(profile, derive_seed(seed, 4));
    rec.rr = std::move(series);
    truth_out = std::move(truth);
    return rec;
}

} // namespace

SynthCohort gen_cohort(const CohortSpec& spec) {
    if (spec.n_normal == 0 || spec.n_ihd == 0)
        throw ConfigError("cohort needs subjects in both classes");

    SynthCohort out;
    out.cohort.subjects.reserve(spec.n_normal + spec.n_ihd);
    out.truths.reserve(spec.n_normal + spec.n_ihd);

    char id[16];
    for (std::size_t i = 0; i < spec.n_normal; ++i) {
        std::snprintf(id, sizeof id, "N%04zu", i + 1);
        RrGroundTruth truth;
        out.cohort.subjects.push_back(make_subject(spec.normal, ClassLabel::normal, id,
                                                   spec.profile_jitter,
                                                   derive_seed(spec.master_seed, 0, i), truth));
        out.truths.push_back(std::move(truth));
    }
    for (std::size_t i = 0; i < spec.n_ihd; ++i) {
        std::snprintf(id, sizeof id, "I%04zu", i + 1);
        RrGroundTruth truth;
        out.cohort.subjects.push_back(make_subject(spec.ihd, ClassLabel::ihd, id,
                                                   spec.profile_jitter,
                                                   derive_seed(spec.master_seed, 1, i), truth));
        out.truths.push_back(std::move(truth));
    }
    return out;
}

std::filesystem::path write_cohort(const std::filesystem::path& dir, const SynthCohort& synth) {
    std::filesystem::create_directories(dir / "rr");

    std::string manifest = "subject_id,rr_path,age,gender,label\n";
    json truth_json;
    truth_json["format_version"] = 1;
    json subjects = json::array();

    for (std::size_t i = 0; i < synth.cohort.subjects.size(); ++i) {
        const SubjectRecord& rec = synth.cohort.subjects[i];
        const std::string rel = "rr/" + rec.subject_id + ".rr";
        write_rr_file(dir / rel, rec.rr);
        manifest += rec.subject_id + ',' + rel + ',' + std::to_string(rec.age) + ',' +
                    to_string(rec.gender) + ',' + to_string(rec.label) + '\n';

        const RrGroundTruth& truth = synth.truths[i];
        json s;
        s["subject_id"] = rec.subject_id;
        s["label"] = to_string(rec.label);
        s["profile"] = {{"base_rr_ms", truth.profile.base_rr_ms},
                        {"lf_amp_ms", truth.profile.lf_amp_ms},
                        {"hf_amp_ms", truth.profile.hf_amp_ms},
                        {"noise_sd_ms", truth.profile.noise_sd_ms},
                        {"noise_beta", truth.profile.noise_beta},
                        {"artifact_rate", truth.profile.artifact_rate},
                        {"duration_s", truth.profile.duration_s}};
        s["n_artifacts"] = truth.artifact_indices.size();
        s["n_beats"] = rec.rr.size();
        subjects.push_back(std::move(s));
    }
    truth_json["subjects"] = std::move(subjects);

    const auto manifest_path = dir / "manifest.csv";
    {
        std::ofstream out(manifest_path, std::ios::binary);
        if (!out) throw IoError("cannot write " + manifest_path.string());
        out << manifest;
    }
    {
        std::ofstream out(dir / "ground_truth.json", std::ios::binary);
        if (!out) throw IoError("cannot write ground_truth.json");
        out << truth_json.dump(2) << '\n';
    }
    return manifest_path;
}

namespace {

RrProfile profile_from_json(const json& j, const RrProfile& defaults) {
    RrProfile p = defaults;
    p.base_rr_ms = j.value("base_rr_ms", p.base_rr_ms);
    p.lf_amp_ms = j.value("lf_amp_ms", p.lf_amp_ms);
    p.hf_amp_ms = j.value("hf_amp_ms", p.hf_amp_ms);
    p.noise_sd_ms = j.value("noise_sd_ms", p.noise_sd_ms);
    p.noise_beta = j.value("noise_beta", p.noise_beta);
    p.artifact_rate = j.value("artifact_rate", p.artifact_rate);
    p.duration_s = j.value("duration_s", p.duration_s);
    return p;
}

json profile_to_json(const RrProfile& p) {
    return {{"base_rr_ms", p.base_rr_ms},   {"lf_amp_ms", p.lf_amp_ms},
            {"hf_amp_ms", p.hf_amp_ms},     {"noise_sd_ms", p.noise_sd_ms},
            {"noise_beta", p.noise_beta},   {"artifact_rate", p.artifact_rate},
            {"duration_s", p.duration_s}};
}

DemographicsSpec demographics_from_json(const json& j, const DemographicsSpec& defaults) {
    DemographicsSpec d = defaults;
    d.age_mean = j.value("age_mean", d.age_mean);
    d.age_sd = j.value("age_sd", d.age_sd);
    d.male_fraction = j.value("male_fraction", d.male_fraction);
    return d;
}

json demographics_to_json(const DemographicsSpec& d) {
    return {{"age_mean", d.age_mean}, {"age_sd", d.age_sd}, {"male_fraction", d.male_fraction}};
}

} // namespace

CohortSpec load_cohort_spec(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    json j = json::parse(in, nullptr, true, true);

    CohortSpec spec;
    spec.n_normal = j.value("n_normal", spec.n_normal);
    spec.n_ihd = j.value("n_ihd", spec.n_ihd);
    spec.profile_jitter = j.value("profile_jitter", spec.profile_jitter);
    spec.master_seed = j.value("master_seed", spec.master_seed);
    if (j.contains("normal")) {
        spec.normal.profile = profile_from_json(j["normal"].value("profile", json::object()),
                                                spec.normal.profile);
        spec.normal.demographics = demographics_from_json(
            j["normal"].value("demographics", json::object()), spec.normal.demographics);
    }
    if (j.contains("ihd")) {
        spec.ihd.profile =
            profile_from_json(j["ihd"].value("profile", json::object()), spec.ihd.profile);
        spec.ihd.demographics = demographics_from_json(
            j["ihd"].value("demographics", json::object()), spec.ihd.demographics);
    }
    validate(spec.normal.profile);
    validate(spec.ihd.profile);
    return spec;
}

void save_cohort_spec(const std::filesystem::path& path, const CohortSpec& spec) {
    json j;
    j["n_normal"] = spec.n_normal;
    j["n_ihd"] = spec.n_ihd;
    j["profile_jitter"] = spec.profile_jitter;
    j["master_seed"] = spec.master_seed;
    j["normal"] = {{"profile", profile_to_json(spec.normal.profile)},
                   {"demographics", demographics_to_json(spec.normal.demographics)}};
    j["ihd"] = {{"profile", profile_to_json(spec.ihd.profile)},
                {"demographics", demographics_to_json(spec.ihd.demographics)}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

} // namespace hrv
