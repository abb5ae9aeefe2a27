#include "hrv/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <numeric>
#include <thread>

#include "hrv/errors.hpp"
#include "hrv/rng.hpp"

namespace hrv {

SplitPlan split(const std::vector<ClassLabel>& labels, double train_fraction, std::uint64_t seed,
                bool stratified) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ConfigError("train fraction must be in (0, 1)");
    const std::size_t n = labels.size();

    std::vector<std::size_t> normal_rows, ihd_rows;
    for (std::size_t i = 0; i < n; ++i)
        (labels[i] == ClassLabel::ihd ? ihd_rows : normal_rows).push_back(i);
    if (normal_rows.size() < 4 || ihd_rows.size() < 4)
        throw ConfigError("each class needs >= 4 subjects to split");

    Rng rng(seed);
    SplitPlan plan;
    plan.seed = seed;
    auto take = [&](std::vector<std::size_t>& rows, std::size_t n_train) {
        rng.shuffle(rows);
        for (std::size_t i = 0; i < rows.size(); ++i)
            (i < n_train ? plan.train_rows : plan.test_rows).push_back(rows[i]);
    };

    const auto total_train = static_cast<std::size_t>(std::lround(train_fraction *
                                                                  static_cast<double>(n)));
    if (stratified) {
        // Largest-remainder allocation keeps the overall training size at
        // round(fraction * n) while class ratios stay within rounding. Every
        // class retains at least one test row.
        const double f_normal = train_fraction * static_cast<double>(normal_rows.size());
        const double f_ihd = train_fraction * static_cast<double>(ihd_rows.size());
        std::size_t n_normal = static_cast<std::size_t>(std::floor(f_normal));
        std::size_t n_ihd = static_cast<std::size_t>(std::floor(f_ihd));
        std::size_t extras = total_train - n_normal - n_ihd;
        const double rem_normal = f_normal - std::floor(f_normal);
        const double rem_ihd = f_ihd - std::floor(f_ihd);
        bool normal_first = rem_normal > rem_ihd ||
                            (rem_normal == rem_ihd && normal_rows.size() >= ihd_rows.size());
        while (extras > 0) {
            if (normal_first && n_normal + 1 < normal_rows.size())
                ++n_normal;
            else if (n_ihd + 1 < ihd_rows.size())
                ++n_ihd;
            else
                ++n_normal;
            --extras;
            normal_first = !normal_first;
        }
        take(normal_rows, n_normal);
        take(ihd_rows, n_ihd);
    } else {
        std::vector<std::size_t> rows(n);
        std::iota(rows.begin(), rows.end(), std::size_t{0});
        take(rows, total_train);
    }
    std::sort(plan.train_rows.begin(), plan.train_rows.end());
    std::sort(plan.test_rows.begin(), plan.test_rows.end());
    return plan;
}

Metrics confusion_metrics(const std::vector<ClassLabel>& predictions,
                          const std::vector<ClassLabel>& labels) {
    if (predictions.size() != labels.size())
        throw ShapeError("predictions and labels differ in length");
    if (predictions.empty()) throw ShapeError("confusion_metrics on empty input");

    Metrics m;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool pred_pos = predictions[i] == ClassLabel::ihd;
        const bool is_pos = labels[i] == ClassLabel::ihd;
        if (pred_pos && is_pos)
            ++m.tp;
        else if (pred_pos && !is_pos)
            ++m.fp;
        else if (!pred_pos && is_pos)
            ++m.fn;
        else
            ++m.tn;
    }
    auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return 100.0 * static_cast<double>(num) / static_cast<double>(den);
    };
    m.sen = ratio(m.tp, m.tp + m.fn);
    m.spe = ratio(m.tn, m.tn + m.fp);
    m.pre = ratio(m.tp, m.tp + m.fp);
    m.acc = ratio(m.tp + m.tn, m.tp + m.fp + m.fn + m.tn);
    return m;
}

RocCurve roc(const std::vector<double>& scores, const std::vector<ClassLabel>& labels) {
    if (scores.size() != labels.size()) throw ShapeError("scores and labels differ in length");
    std::size_t n_pos = 0, n_neg = 0;
    for (ClassLabel l : labels) (l == ClassLabel::ihd ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0)
        throw DegenerateLabelsError("ROC needs both classes present");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });

    RocCurve curve;
    curve.points.emplace_back(0.0, 0.0);
    std::size_t tp = 0, fp = 0;
    double auc = 0.0;
    double prev_fpr = 0.0, prev_tpr = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double threshold = scores[order[i]];
        // One step per distinct threshold: everything scoring >= it is IHD.
        while (i < order.size() && scores[order[i]] == threshold) {
            if (labels[order[i]] == ClassLabel::ihd)
                ++tp;
            else
                ++fp;
            ++i;
        }
        const double tpr = static_cast<double>(tp) / static_cast<double>(n_pos);
        const double fpr = static_cast<double>(fp) / static_cast<double>(n_neg);
        auc += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
        curve.points.emplace_back(fpr, tpr);
        prev_fpr = fpr;
        prev_tpr = tpr;
    }
    curve.auc = auc;
    return curve;
}

namespace {

struct Job {
    std::size_t scheme_index;
    std::size_t hidden;
    std::size_t rep;
    std::uint64_t seed;
    std::size_t slot; // index into the result vector
};

Eigen::MatrixXd one_hot_targets(const std::vector<ClassLabel>& labels,
                                const std::vector<std::size_t>& rows) {
    Eigen::MatrixXd t(static_cast<Eigen::Index>(rows.size()), 2);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const bool ihd = labels[rows[i]] == ClassLabel::ihd;
        t(static_cast<Eigen::Index>(i), 0) = ihd ? 0.0 : 1.0;
        t(static_cast<Eigen::Index>(i), 1) = ihd ? 1.0 : 0.0;
    }
    return t;
}

InputScheme fit_scheme(const SchemeSpec& spec, const Eigen::MatrixXd& rows,
                       const std::vector<ClassLabel>& labels,
                       const std::vector<std::size_t>& fit_rows) {
    switch (spec.kind) {
        case SchemeKind::all: return all_features_scheme();
        case SchemeKind::pca: {
            auto [standardized, stats] = standardize(rows, fit_rows);
            std::vector<std::size_t> idx = fit_rows;
            if (idx.empty()) {
                idx.resize(static_cast<std::size_t>(rows.rows()));
                std::iota(idx.begin(), idx.end(), std::size_t{0});
            }
            Eigen::MatrixXd fit_matrix(static_cast<Eigen::Index>(idx.size()), rows.cols());
            for (std::size_t i = 0; i < idx.size(); ++i)
                fit_matrix.row(static_cast<Eigen::Index>(i)) =
                    standardized.row(static_cast<Eigen::Index>(idx[i]));
            return pca_fit(fit_matrix, spec.pca, &stats);
        }
        case SchemeKind::stepwise: {
            auto [standardized, stats] = standardize(rows, fit_rows);
            std::vector<std::size_t> idx = fit_rows;
            if (idx.empty()) {
                idx.resize(static_cast<std::size_t>(rows.rows()));
                std::iota(idx.begin(), idx.end(), std::size_t{0});
            }
            Eigen::MatrixXd fit_matrix(static_cast<Eigen::Index>(idx.size()), rows.cols());
            std::vector<ClassLabel> fit_labels(idx.size());
            for (std::size_t i = 0; i < idx.size(); ++i) {
                fit_matrix.row(static_cast<Eigen::Index>(i)) =
                    standardized.row(static_cast<Eigen::Index>(idx[i]));
                fit_labels[i] = labels[idx[i]];
            }
            return stepwise_select(fit_matrix, fit_labels, spec.stepwise);
        }
    }
    return all_features_scheme();
}

} // namespace

const RepetitionResult& best_repetition(const SchemeRun& run) {
    if (!run.has_best) throw Error("scheme '" + run.name + "' has no usable repetition");
    return run.reps[run.best_index];
}

RunReport run_experiment(const FeatureMatrix& features, const std::vector<SchemeSpec>& schemes,
                         const ExperimentConfig& cfg) {
    if (schemes.empty()) throw ConfigError("no schemes requested");
    if (cfg.repetitions == 0) throw ConfigError("repetitions must be positive");
    if (cfg.hidden_sizes.empty()) throw ConfigError("no hidden sizes requested");
    if (features.n_subjects() != features.labels.size())
        throw ShapeError("feature matrix and labels disagree");

    RunReport report;
    report.config = cfg;

    // Cohort-level scheme fit; kept as the reference fit even when
    // per_split_fit re-fits per repetition.
    for (const SchemeSpec& spec : schemes) {
        SchemeRun run;
        run.scheme = fit_scheme(spec, features.rows, features.labels, {});
        run.name = to_string(spec.kind);
        for (const std::string& w : run.scheme.warnings)
            report.warnings.push_back(run.name + ": " + w);
        report.schemes.push_back(std::move(run));
    }

    std::vector<Job> jobs;
    for (std::size_t s = 0; s < schemes.size(); ++s)
        for (std::size_t hidden : cfg.hidden_sizes)
            for (std::size_t rep = 0; rep < cfg.repetitions; ++rep)
                jobs.push_back(
                    {s, hidden, rep, derive_seed(cfg.master_seed, s, hidden, rep), jobs.size()});

    std::vector<RepetitionResult> results(jobs.size());

    auto run_job = [&](const Job& job) {
        RepetitionResult r;
        r.scheme_index = job.scheme_index;
        r.hidden = job.hidden;
        r.rep = job.rep;
        r.seed = job.seed;
        try {
            const SplitPlan plan = split(features.labels, cfg.train_fraction,
                                         derive_seed(job.seed, 0), cfg.stratified);

            InputScheme local_scheme;
            const InputScheme* scheme = &report.schemes[job.scheme_index].scheme;
            if (cfg.per_split_fit) {
                local_scheme = fit_scheme(schemes[job.scheme_index], features.rows,
                                          features.labels, plan.train_rows);
                scheme = &local_scheme;
            }

            const Eigen::MatrixXd inputs = scheme->transform(features.rows);
            ColumnStats stats = fit_column_stats(inputs, plan.train_rows);
            const Eigen::MatrixXd z = stats.apply(inputs);

            Eigen::MatrixXd train_x(static_cast<Eigen::Index>(plan.train_rows.size()), z.cols());
            for (std::size_t i = 0; i < plan.train_rows.size(); ++i)
                train_x.row(static_cast<Eigen::Index>(i)) =
                    z.row(static_cast<Eigen::Index>(plan.train_rows[i]));
            const Eigen::MatrixXd train_t = one_hot_targets(features.labels, plan.train_rows);

            TrainConfig tc = cfg.train;
            tc.seed = derive_seed(job.seed, 2);
            Network net = init_network(static_cast<std::size_t>(z.cols()), job.hidden,
                                       derive_seed(job.seed, 1));
            TrainResult trained = train(std::move(net), train_x, train_t, tc);

            std::vector<ClassLabel> predictions, test_labels;
            std::vector<double> scores;
            predictions.reserve(plan.test_rows.size());
            for (std::size_t row : plan.test_rows) {
                const Prediction p =
                    predict(trained.net, z.row(static_cast<Eigen::Index>(row)).transpose());
                predictions.push_back(p.label);
                scores.push_back(p.score);
                test_labels.push_back(features.labels[row]);
            }
            r.metrics = confusion_metrics(predictions, test_labels);
            r.auc = roc(scores, test_labels).auc;
            r.net = std::move(trained.net);
            r.input_stats = std::move(stats);
            r.test_scores = std::move(scores);
            r.test_labels = std::move(test_labels);
            if (cfg.per_split_fit) r.per_rep_scheme = std::move(local_scheme);
        } catch (const std::exception& e) {
            r.failure = e.what();
        }
        results[job.slot] = std::move(r);
    };

    std::size_t workers = cfg.jobs != 0 ? cfg.jobs : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min(workers, jobs.size());

    if (workers <= 1) {
        for (const Job& job : jobs) run_job(job);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= jobs.size()) break;
                    run_job(jobs[i]);
                }
            });
        for (auto& t : pool) t.join();
    }

    // Merge by slot order so parallel and serial runs agree bit for bit.
    for (RepetitionResult& r : results) {
        SchemeRun& run = report.schemes[r.scheme_index];
        run.reps.push_back(std::move(r));
    }

    for (std::size_t s = 0; s < report.schemes.size(); ++s) {
        SchemeRun& run = report.schemes[s];
        std::size_t failed = 0;
        for (std::size_t i = 0; i < run.reps.size(); ++i) {
            const RepetitionResult& r = run.reps[i];
            if (!r.failure.empty()) {
                ++failed;
                report.warnings.push_back(run.name + " hidden=" + std::to_string(r.hidden) +
                                          " rep=" + std::to_string(r.rep) +
                                          " excluded: " + r.failure);
                continue;
            }
            if (!run.has_best) {
                run.best_index = i;
                run.has_best = true;
                continue;
            }
            const RepetitionResult& b = run.reps[run.best_index];
            // Highest accuracy wins; reps are ordered by (hidden, rep), so a
            // strict comparison keeps the smaller configuration on ties.
            if (r.metrics.acc.value_or(-1.0) > b.metrics.acc.value_or(-1.0)) run.best_index = i;
        }
        const double frac = static_cast<double>(failed) / static_cast<double>(run.reps.size());
        if (frac > cfg.max_divergent_fraction)
            throw ExperimentError("scheme '" + run.name + "': " + std::to_string(failed) + " of " +
                                  std::to_string(run.reps.size()) + " repetitions failed");
        if (run.has_best && cfg.per_split_fit)
            run.best_scheme = run.reps[run.best_index].per_rep_scheme;
    }

    for (const std::string& w : report.warnings) std::cerr << "warning: " << w << '\n';
    return report;
}

} // namespace hrv
