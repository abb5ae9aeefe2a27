#include "hrv/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>

#include "hrv/spline.hpp"

namespace hrv {

namespace {

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (n % 2 == 1) return *mid;
    double hi = *mid;
    double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

} // namespace

std::vector<bool> detect_artifacts(const RRSeries& rr, const ArtifactParams& params) {
    const std::size_t n = rr.size();
    if (n < 5) throw TooShortError("artifact detection needs >= 5 beats, got " + std::to_string(n));

    std::vector<bool> mask(n, false);
    std::deque<double> accepted;
    std::size_t flagged = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = rr.intervals_ms[i];
        bool bad = v < params.min_rr_ms || v > params.max_rr_ms;
        if (!bad && !accepted.empty()) {
            const double med = median_of({accepted.begin(), accepted.end()});
            bad = std::abs(v - med) > params.ratio_threshold * med;
        }
        mask[i] = bad;
        if (bad) {
            ++flagged;
        } else {
            accepted.push_back(v);
            if (accepted.size() > params.median_window) accepted.pop_front();
        }
    }
    if (flagged == n) throw AllArtifactsError("every beat was flagged as artifact");
    return mask;
}

CleanSeries correct_artifacts(const RRSeries& rr, const std::vector<bool>& mask) {
    const std::size_t n = rr.size();
    if (mask.size() != n) throw ShapeError("artifact mask length does not match series");

    std::vector<double> normal_t, normal_rr;
    normal_t.reserve(n);
    normal_rr.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!mask[i]) {
            normal_t.push_back(rr.beat_times_s[i]);
            normal_rr.push_back(rr.intervals_ms[i]);
        }
    }
    const std::size_t n_flagged = n - normal_t.size();

    CleanSeries out;
    out.artifact_mask = mask;
    out.artifact_fraction = static_cast<double>(n_flagged) / static_cast<double>(n);

    if (n_flagged == 0) {
        out.rr = rr;
        return out;
    }
    if (normal_t.size() < 4)
        throw InsufficientSupportError("cubic spline substitution needs >= 4 normal beats, have " +
                                       std::to_string(normal_t.size()));

    CubicSpline spline(std::move(normal_t), std::move(normal_rr));
    std::vector<double> corrected = rr.intervals_ms;
    for (std::size_t i = 0; i < n; ++i)
        if (mask[i]) corrected[i] = std::max(1.0, spline(rr.beat_times_s[i]));

    out.rr = make_rr_series(std::move(corrected));
    return out;
}

UniformTachogram resample_uniform(const CleanSeries& clean, double rate_hz,
                                  double min_duration_s) {
    if (!(rate_hz > 0.0)) throw ConfigError("resample rate must be positive");
    const RRSeries& rr = clean.rr;
    const double duration = rr.duration_s();
    if (duration < min_duration_s)
        throw TooShortError("recording lasts " + std::to_string(duration) + " s, needs >= " +
                            std::to_string(min_duration_s) + " s");

    // Knots at interval onsets; the final beat time only bounds the grid.
    std::vector<double> t(rr.beat_times_s.begin(), rr.beat_times_s.end() - 1);
    CubicSpline spline(std::move(t), rr.intervals_ms);

    UniformTachogram out;
    out.rate_hz = rate_hz;
    out.t0_s = rr.beat_times_s.front();
    const std::size_t count =
        static_cast<std::size_t>(std::floor(duration * rate_hz + 1e-9)) + 1;
    out.samples_ms.resize(count);
    const double dt = 1.0 / rate_hz;
    for (std::size_t k = 0; k < count; ++k)
        out.samples_ms[k] = spline(out.t0_s + static_cast<double>(k) * dt);
    return out;
}

std::vector<Segment> segment_series(const CleanSeries& clean, const UniformTachogram& uniform,
                                    const SegmentationParams& params) {
    const RRSeries& rr = clean.rr;
    const double duration = rr.duration_s();
    const std::size_t samples_per_window =
        static_cast<std::size_t>(std::lround(params.segment_s * params.rate_hz));
    const std::size_t n_windows =
        static_cast<std::size_t>(std::floor((duration + 1e-9) / params.segment_s));
    if (n_windows == 0)
        throw TooShortError("recording shorter than one segment");

    std::vector<Segment> segments;
    segments.reserve(n_windows);
    std::size_t beat = 0; // onsets are sorted; sweep once
    const std::size_t n_beats = rr.size();
    for (std::size_t w = 0; w < n_windows; ++w) {
        const double start = uniform.t0_s + static_cast<double>(w) * params.segment_s;
        const double end = start + params.segment_s;

        while (beat < n_beats && rr.beat_times_s[beat] < start) ++beat;
        std::size_t first = beat;
        std::size_t flagged = 0;
        while (beat < n_beats && rr.beat_times_s[beat] < end) {
            if (clean.artifact_mask[beat]) ++flagged;
            ++beat;
        }
        const std::size_t count = beat - first;

        const std::size_t s0 = w * samples_per_window;
        if (s0 + samples_per_window > uniform.samples_ms.size())
            break; // grid exhausted by floating-point shortfall
        if (count < params.min_beats) continue;
        const double frac = static_cast<double>(flagged) / static_cast<double>(count);
        if (frac > params.max_artifact_fraction) continue;

        Segment seg;
        seg.start_s = start;
        seg.end_s = end;
        seg.artifact_fraction = frac;
        seg.rr_slice_ms.assign(rr.intervals_ms.begin() + static_cast<std::ptrdiff_t>(first),
                               rr.intervals_ms.begin() + static_cast<std::ptrdiff_t>(beat));
        seg.uniform_slice_ms.assign(
            uniform.samples_ms.begin() + static_cast<std::ptrdiff_t>(s0),
            uniform.samples_ms.begin() + static_cast<std::ptrdiff_t>(s0 + samples_per_window));
        segments.push_back(std::move(seg));
    }
    if (segments.empty()) throw NoSegmentsError("no segment survived quality filtering");
    return segments;
}

void write_clean_series(const std::filesystem::path& path, const CleanSeries& clean) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "beat_index\tt_s\trr_ms\tis_artifact\n";
    char buf[96];
    for (std::size_t i = 0; i < clean.rr.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu\t%.6f\t%.6f\t%d\n", i, clean.rr.beat_times_s[i],
                      clean.rr.intervals_ms[i], clean.artifact_mask[i] ? 1 : 0);
        out << buf;
    }
}

} // namespace hrv
