#include "hrv/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "hrv/errors.hpp"

namespace hrv {

namespace {

MetricSummary summarize_values(const std::vector<double>& values) {
    MetricSummary s;
    s.n = values.size();
    if (values.empty()) return s;
    double sum = 0.0, vmax = values.front();
    for (double v : values) {
        sum += v;
        vmax = std::max(vmax, v);
    }
    const double mean = sum / static_cast<double>(values.size());
    s.max = vmax;
    s.mean = mean;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    } else {
        s.sd = 0.0;
    }
    return s;
}

std::string fmt_opt(const std::optional<double>& v) {
    return v ? fmt_double(*v) : std::string{};
}

// The five reported indexes of one repetition, all in percent.
std::array<std::optional<double>, 5> rep_values(const RepetitionResult& r) {
    return {r.metrics.sen, r.metrics.spe, r.metrics.pre, r.metrics.acc, 100.0 * r.auc};
}

constexpr std::array<const char*, 5> kIndexNames = {"SEN", "SPE", "PRE", "ACC", "AUC"};

} // namespace

std::string fmt_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << content;
        if (!out) throw IoError("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Summary summarize(const RunReport& report) {
    Summary summary;
    for (const SchemeRun& run : report.schemes) {
        SchemeSummary ss;
        ss.name = run.name;
        ss.input_dimension = run.scheme.dimension();

        std::map<std::size_t, std::array<std::vector<double>, 5>> per_hidden;
        for (const RepetitionResult& r : run.reps) {
            if (!r.failure.empty()) continue;
            auto vals = rep_values(r);
            auto& buckets = per_hidden[r.hidden];
            for (std::size_t i = 0; i < vals.size(); ++i)
                if (vals[i]) buckets[i].push_back(*vals[i]);
        }
        for (std::size_t hidden : report.config.hidden_sizes) {
            CellSummary cell;
            cell.hidden = hidden;
            auto it = per_hidden.find(hidden);
            if (it != per_hidden.end()) {
                cell.sen = summarize_values(it->second[0]);
                cell.spe = summarize_values(it->second[1]);
                cell.pre = summarize_values(it->second[2]);
                cell.acc = summarize_values(it->second[3]);
                cell.auc = summarize_values(it->second[4]);
                cell.n_usable = it->second[3].size();
            }
            ss.cells.push_back(std::move(cell));
        }
        if (run.has_best) {
            const RepetitionResult& best = run.reps[run.best_index];
            ss.best_hidden = best.hidden;
            ss.best_acc = best.metrics.acc;
            ss.best_auc = 100.0 * best.auc;
        }
        summary.schemes.push_back(std::move(ss));
    }
    return summary;
}

void write_repetitions_csv(const std::filesystem::path& path, const RunReport& report) {
    std::string out = "scheme,hidden,rep,seed,sen,spe,pre,acc,auc\n";
    for (const SchemeRun& run : report.schemes) {
        for (const RepetitionResult& r : run.reps) {
            out += run.name;
            out += ',' + std::to_string(r.hidden);
            out += ',' + std::to_string(r.rep);
            out += ',' + std::to_string(r.seed);
            if (r.failure.empty()) {
                for (const auto& v : rep_values(r)) out += ',' + fmt_opt(v);
            } else {
                out += ",,,,,"; // five empty index fields
            }
            out += '\n';
        }
    }
    atomic_write_text(path, out);
}

void write_summary_csv(const std::filesystem::path& path, const Summary& summary) {
    std::string out = "scheme,hidden,n,metric,max,mean,sd\n";
    for (const SchemeSummary& ss : summary.schemes) {
        for (const CellSummary& cell : ss.cells) {
            const std::array<const MetricSummary*, 5> metrics = {&cell.sen, &cell.spe, &cell.pre,
                                                                 &cell.acc, &cell.auc};
            for (std::size_t i = 0; i < metrics.size(); ++i) {
                out += ss.name;
                out += ',' + std::to_string(cell.hidden);
                out += ',' + std::to_string(metrics[i]->n);
                out += ',';
                out += kIndexNames[i];
                out += ',' + fmt_opt(metrics[i]->max);
                out += ',' + fmt_opt(metrics[i]->mean);
                out += ',' + fmt_opt(metrics[i]->sd);
                out += '\n';
            }
        }
    }
    atomic_write_text(path, out);
}

namespace {

std::string fmt_cell(const MetricSummary& m) {
    char buf[96];
    if (!m.mean) return "-";
    std::snprintf(buf, sizeof buf, "max=%.1f  %.1f +- %.1f", m.max.value_or(0.0), *m.mean,
                  m.sd.value_or(0.0));
    return buf;
}

} // namespace

void write_summary_table(const std::filesystem::path& path, const Summary& summary,
                         const RunReport& report) {
    (void)report;
    std::string out;
    out += "Classification performance over repetitions (percent, test phase)\n";
    out += "index        ";
    for (const SchemeSummary& ss : summary.schemes) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%-28s", (ss.name + " (h=" +
                                                 std::to_string(ss.best_hidden) + ")").c_str());
        out += buf;
    }
    out += '\n';
    for (std::size_t i = 0; i < kIndexNames.size(); ++i) {
        char head[32];
        std::snprintf(head, sizeof head, "%-13s", kIndexNames[i]);
        out += head;
        for (const SchemeSummary& ss : summary.schemes) {
            const CellSummary* cell = nullptr;
            for (const CellSummary& c : ss.cells)
                if (c.hidden == ss.best_hidden) cell = &c;
            const std::array<const MetricSummary*, 5> metrics =
                cell ? std::array<const MetricSummary*, 5>{&cell->sen, &cell->spe, &cell->pre,
                                                           &cell->acc, &cell->auc}
                     : std::array<const MetricSummary*, 5>{};
            char buf[64];
            std::snprintf(buf, sizeof buf, "%-28s",
                          cell ? fmt_cell(*metrics[i]).c_str() : "-");
            out += buf;
        }
        out += '\n';
    }
    atomic_write_text(path, out);
}

void write_histograms_csv(const std::filesystem::path& path, const RunReport& report) {
    // 1 %-wide bins over [0, 100]; the last bin is closed at 100.
    std::string out = "scheme,hidden,metric,bin_lo,bin_hi,count\n";
    for (const SchemeRun& run : report.schemes) {
        std::map<std::size_t, std::array<std::array<std::size_t, 100>, 5>> hist;
        for (const RepetitionResult& r : run.reps) {
            if (!r.failure.empty()) continue;
            auto vals = rep_values(r);
            auto& h = hist.try_emplace(r.hidden).first->second;
            for (std::size_t i = 0; i < vals.size(); ++i) {
                if (!vals[i]) continue;
                auto bin = static_cast<std::size_t>(
                    std::min(99.0, std::max(0.0, std::floor(*vals[i]))));
                ++h[i][bin];
            }
        }
        for (const auto& [hidden, h] : hist) {
            for (std::size_t i = 0; i < kIndexNames.size(); ++i) {
                for (std::size_t bin = 0; bin < 100; ++bin) {
                    if (h[i][bin] == 0) continue;
                    out += run.name;
                    out += ',' + std::to_string(hidden);
                    out += ',';
                    out += kIndexNames[i];
                    out += ',' + std::to_string(bin);
                    out += ',' + std::to_string(bin + 1);
                    out += ',' + std::to_string(h[i][bin]);
                    out += '\n';
                }
            }
        }
    }
    atomic_write_text(path, out);
}

void write_roc_csv(const std::filesystem::path& path, const RocCurve& curve) {
    std::string out = "fpr,tpr\n";
    for (const auto& [fpr, tpr] : curve.points)
        out += fmt_double(fpr) + ',' + fmt_double(tpr) + '\n';
    atomic_write_text(path, out);
}

} // namespace hrv
