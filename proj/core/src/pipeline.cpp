#include "hrv/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hrv/nonlinear.hpp"
#include "hrv/report.hpp"
#include "hrv/spectral.hpp"
#include "hrv/time_features.hpp"

namespace hrv {

namespace {

using nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Eigen::VectorXd vector_from_json(const json& a) {
    Eigen::VectorXd v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    return v;
}

} // namespace

FeatureParams feature_params(const PipelineConfig& cfg) {
    FeatureParams p;
    p.bands = cfg.bands;
    p.beta_fit_lo_hz = cfg.beta_fit_lo_hz;
    p.beta_fit_hi_hz = cfg.beta_fit_hi_hz;
    p.higuchi_k_max = cfg.higuchi_k_max;
    p.nn_threshold_ms = cfg.nn_threshold_ms;
    p.rate_hz = cfg.segmentation.rate_hz;
    p.samples_per_segment = static_cast<std::size_t>(
        std::lround(cfg.segmentation.segment_s * cfg.segmentation.rate_hz));
    return p;
}

SegmentFeatures compute_segment_features(const Segment& segment, const FeatureParams& params) {
    SegmentFeatures f;

    const TimeFeatures tf = compute_time_features(segment.rr_slice_ms, params.nn_threshold_ms);
    f[kMeanRr] = tf.mean_rr_ms;
    f[kSdnn] = tf.sdnn_ms;
    f[kRmssd] = tf.rmssd_ms;
    f[kNn50] = tf.nn50;
    f[kPnn50] = tf.pnn50;

    const Psd psd =
        periodogram_psd(segment.uniform_slice_ms, params.rate_hz, params.samples_per_segment);
    try {
        const BandPowers bp = band_powers(psd, params.bands);
        f[kLf] = bp.lf_ms2;
        f[kHf] = bp.hf_ms2;
        if (bp.lf_hf) f[kLfHf] = *bp.lf_hf;
        f[kLfn] = bp.lfn;
        f[kHfn] = bp.hfn;
    } catch (const DegenerateSpectrumError&) {
        // all five stay missing for this segment
    }
    try {
        f[kBeta] = beta_exponent(psd, params.beta_fit_lo_hz, params.beta_fit_hi_hz);
    } catch (const DegenerateSpectrumError&) {
    }

    const PoincareFeatures pf = poincare(segment.rr_slice_ms);
    f[kSd1] = pf.sd1_ms;
    f[kSd2] = pf.sd2_ms;
    if (pf.sd1_sd2) f[kSd1Sd2] = *pf.sd1_sd2;

    const auto [min_it, max_it] =
        std::minmax_element(segment.rr_slice_ms.begin(), segment.rr_slice_ms.end());
    if (*min_it < *max_it)
        f[kFd] = higuchi_fd(segment.rr_slice_ms, params.higuchi_k_max).fd;

    return f;
}

SubjectOutcome process_subject(const SubjectRecord& subject, const PipelineConfig& cfg,
                               const std::filesystem::path& dump_dir) {
    SubjectOutcome outcome;
    outcome.subject_id = subject.subject_id;
    try {
        const auto mask = detect_artifacts(subject.rr, cfg.artifacts);
        const CleanSeries clean = correct_artifacts(subject.rr, mask);
        outcome.artifact_fraction = clean.artifact_fraction;

        SegmentationParams seg_params = cfg.segmentation;
        // The FD lag bound dictates how many beats a window must hold.
        seg_params.min_beats = std::max(seg_params.min_beats, 2 * cfg.higuchi_k_max + 2);

        const UniformTachogram uniform =
            resample_uniform(clean, seg_params.rate_hz, seg_params.segment_s);
        const std::vector<Segment> segments = segment_series(clean, uniform, seg_params);

        const FeatureParams params = feature_params(cfg);
        std::vector<SegmentFeatures> per_segment;
        per_segment.reserve(segments.size());
        for (const Segment& s : segments) per_segment.push_back(compute_segment_features(s, params));

        outcome.features =
            average_subject_features(per_segment, subject.age, subject.gender);
        outcome.n_segments = segments.size();

        if (!dump_dir.empty()) {
            std::filesystem::create_directories(dump_dir);
            if (cfg.dump_preprocessed)
                write_clean_series(dump_dir / (subject.subject_id + "_clean.tsv"), clean);
            if (cfg.dump_psd) {
                for (std::size_t i = 0; i < segments.size(); ++i) {
                    const Psd psd = periodogram_psd(segments[i].uniform_slice_ms, params.rate_hz,
                                                    params.samples_per_segment);
                    write_psd(dump_dir / (subject.subject_id + "_seg" + std::to_string(i) +
                                          "_psd.tsv"),
                              psd);
                }
            }
        }
    } catch (const std::exception& e) {
        outcome.features.reset();
        outcome.reject_reason = e.what();
    }
    return outcome;
}

std::vector<const SubjectOutcome*> FeatureExtraction::rejects() const {
    std::vector<const SubjectOutcome*> r;
    for (const auto& o : outcomes)
        if (!o.features) r.push_back(&o);
    return r;
}

FeatureExtraction extract_features(const Cohort& cohort, const PipelineConfig& cfg,
                                   std::size_t jobs) {
    const std::size_t n = cohort.subjects.size();
    std::vector<SubjectOutcome> outcomes(n);

    const std::filesystem::path dump_dir =
        (cfg.dump_preprocessed || cfg.dump_psd)
            ? std::filesystem::path(cfg.out_dir) / "debug"
            : std::filesystem::path{};

    std::size_t workers = jobs != 0 ? jobs : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min(workers, n);

    auto work = [&](std::size_t i) {
        outcomes[i] = process_subject(cohort.subjects[i], cfg, dump_dir);
    };
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n) break;
                    work(i);
                }
            });
        for (auto& t : pool) t.join();
    }

    FeatureExtraction result;
    std::size_t accepted = 0;
    for (const auto& o : outcomes)
        if (o.features) ++accepted;

    result.matrix.rows.resize(static_cast<Eigen::Index>(accepted),
                              static_cast<Eigen::Index>(kFeatureCount));
    Eigen::Index row = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!outcomes[i].features) continue;
        for (std::size_t c = 0; c < kFeatureCount; ++c)
            result.matrix.rows(row, static_cast<Eigen::Index>(c)) = (*outcomes[i].features)[c];
        result.matrix.labels.push_back(cohort.subjects[i].label);
        result.matrix.subject_ids.push_back(cohort.subjects[i].subject_id);
        ++row;
    }
    result.outcomes = std::move(outcomes);
    return result;
}

void write_features_csv(const std::filesystem::path& path, const FeatureMatrix& matrix) {
    std::string out = "subject_id";
    for (const char* name : kFeatureNames) out += std::string(",") + name;
    out += ",label\n";
    for (std::size_t i = 0; i < matrix.n_subjects(); ++i) {
        out += matrix.subject_ids[i];
        for (std::size_t c = 0; c < kFeatureCount; ++c)
            out += ',' + fmt_double(matrix.rows(static_cast<Eigen::Index>(i),
                                                static_cast<Eigen::Index>(c)));
        out += ',';
        out += to_string(matrix.labels[i]);
        out += '\n';
    }
    atomic_write_text(path, out);
}

FeatureMatrix load_features_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());

    FeatureMatrix matrix;
    std::vector<std::array<double, kFeatureCount>> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (!header_seen) {
            if (fields.size() != kFeatureCount + 2)
                throw SchemaError("feature table header has wrong column count");
            header_seen = true;
            continue;
        }
        if (fields.size() != kFeatureCount + 2)
            throw ParseError("feature row has wrong column count", line_no);
        matrix.subject_ids.push_back(fields[0]);
        std::array<double, kFeatureCount> row{};
        for (std::size_t c = 0; c < kFeatureCount; ++c) {
            const std::string& s = fields[c + 1];
            double v = 0.0;
            auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || end != s.data() + s.size())
                throw ParseError("bad numeric field '" + s + "'", line_no);
            row[c] = v;
        }
        rows.push_back(row);
        const std::string& label = fields.back();
        if (label == "NORMAL")
            matrix.labels.push_back(ClassLabel::normal);
        else if (label == "IHD")
            matrix.labels.push_back(ClassLabel::ihd);
        else
            throw SchemaError("unknown label token '" + label + "'");
    }
    matrix.rows.resize(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(kFeatureCount));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < kFeatureCount; ++c)
            matrix.rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return matrix;
}

void write_rejects_csv(const std::filesystem::path& path,
                       const std::vector<SubjectOutcome>& outcomes) {
    std::string out = "subject_id,reason\n";
    for (const auto& o : outcomes) {
        if (o.features) continue;
        std::string reason = o.reject_reason;
        std::replace(reason.begin(), reason.end(), ',', ';');
        std::replace(reason.begin(), reason.end(), '\n', ' ');
        out += o.subject_id + ',' + reason + '\n';
    }
    atomic_write_text(path, out);
}

void save_model(const std::filesystem::path& path, const ModelBundle& bundle) {
    json j;
    j["format_version"] = 1;
    j["scheme_name"] = bundle.scheme_name;
    j["hidden"] = bundle.hidden;
    j["seed"] = bundle.seed;
    j["scheme"] = json::parse(scheme_to_json_string(bundle.scheme));
    j["network"] = json::parse(network_to_json_string(bundle.net));
    j["input_stats"] = {{"mean", vector_to_json(bundle.input_stats.mean)},
                        {"sd", vector_to_json(bundle.input_stats.sd)}};
    atomic_write_text(path, j.dump(2) + "\n");
}

ModelBundle load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    json j = json::parse(in, nullptr, true, true);
    if (j.value("format_version", 0) != 1)
        throw SchemaError("unsupported model file version in " + path.string());

    ModelBundle bundle;
    bundle.scheme = scheme_from_json_string(j.at("scheme").dump());
    bundle.net = network_from_json_string(j.at("network").dump());
    bundle.scheme_name = j.value("scheme_name", std::string{});
    bundle.hidden = j.value("hidden", std::size_t{0});
    bundle.seed = j.value("seed", std::uint64_t{0});
    bundle.input_stats.mean = vector_from_json(j.at("input_stats").at("mean"));
    bundle.input_stats.sd = vector_from_json(j.at("input_stats").at("sd"));

    if (bundle.input_stats.mean.size() != static_cast<Eigen::Index>(bundle.scheme.dimension()) ||
        bundle.net.n_inputs() != static_cast<Eigen::Index>(bundle.scheme.dimension()))
        throw SchemaError("model file is internally inconsistent: " + path.string());
    return bundle;
}

Prediction predict_subject(const ModelBundle& bundle, const RRSeries& rr, int age, Gender gender,
                           const PipelineConfig& cfg) {
    SubjectRecord rec;
    rec.subject_id = "query";
    rec.rr = rr;
    rec.age = age;
    rec.gender = gender;
    const SubjectOutcome outcome = process_subject(rec, cfg);
    if (!outcome.features) throw Error("subject rejected: " + outcome.reject_reason);

    const Eigen::VectorXd inputs = bundle.scheme.transform(*outcome.features);
    return predict(bundle.net, bundle.input_stats.apply(inputs));
}

} // namespace hrv
