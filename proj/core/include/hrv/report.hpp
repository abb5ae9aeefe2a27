#ifndef HRV_REPORT_HPP
#define HRV_REPORT_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hrv/evaluation.hpp"

namespace hrv {

/// max / mean / sample-SD of one index over the usable repetitions.
struct MetricSummary {
    std::optional<double> max;
    std::optional<double> mean;
    std::optional<double> sd;
    std::size_t n = 0;
};

struct CellSummary {
    std::size_t hidden = 0;
    std::size_t n_usable = 0;
    MetricSummary sen, spe, pre, acc, auc; // percentages
};

struct SchemeSummary {
    std::string name;
    std::size_t input_dimension = 0;
    std::vector<CellSummary> cells;   // one per hidden size
    std::size_t best_hidden = 0;      // cell of the best repetition
    std::optional<double> best_acc;
    double best_auc = 0.0;
};

struct Summary {
    std::vector<SchemeSummary> schemes;
};

Summary summarize(const RunReport& report);

/// Per-repetition rows: scheme,hidden,rep,seed,sen,spe,pre,acc,auc (percent;
/// missing values are empty fields).
void write_repetitions_csv(const std::filesystem::path& path, const RunReport& report);

/// Long-form summary: scheme,hidden,n,metric,max,mean,sd.
void write_summary_csv(const std::filesystem::path& path, const Summary& summary);

/// Human-readable table mirroring the classic max / mean+-SD layout, one
/// row-group per scheme at its best hidden size.
void write_summary_table(const std::filesystem::path& path, const Summary& summary,
                         const RunReport& report);

/// Histogram bin counts per (scheme, hidden, metric), 1 %-wide bins.
void write_histograms_csv(const std::filesystem::path& path, const RunReport& report);

/// Best repetition's ROC points for one scheme: threshold-ordered fpr,tpr.
void write_roc_csv(const std::filesystem::path& path, const RocCurve& curve);

/// Fixed-format floating-point rendering shared by every writer, so that
/// identical runs produce byte-identical files.
std::string fmt_double(double v);

/// Write via a temp file and rename, so partially written reports never
/// appear under the final name.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

} // namespace hrv

#endif // HRV_REPORT_HPP
