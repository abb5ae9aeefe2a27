#include "hrv/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace hrv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string_view> split_csv_row(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

} // namespace

RRSeries parse_rr_file(std::string_view text) {
    std::vector<double> intervals;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        double value = 0.0;
        auto [end, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
        if (ec != std::errc{} || end != line.data() + line.size())
            throw ParseError("not a number: '" + std::string(line) + "'", line_no);
        if (!(value > 0.0) || value > kMaxParsableRrMs)
            throw RangeError("RR interval " + std::to_string(value) + " ms out of (0, " +
                             std::to_string(static_cast<int>(kMaxParsableRrMs)) + "] at line " +
                             std::to_string(line_no));
        intervals.push_back(value);
    }
    return make_rr_series(std::move(intervals));
}

RRSeries read_rr_file(const std::filesystem::path& path) {
    return parse_rr_file(read_text_file(path));
}

std::string serialize_rr(const RRSeries& series) {
    std::string out;
    out.reserve(series.size() * 8);
    char buf[64];
    for (double v : series.intervals_ms) {
        int n = std::snprintf(buf, sizeof buf, "%.17g\n", v);
        out.append(buf, static_cast<std::size_t>(n));
    }
    return out;
}

void write_rr_file(const std::filesystem::path& path, const RRSeries& series) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << serialize_rr(series);
    if (!out) throw IoError("short write to " + path.string());
}

Cohort load_cohort(const std::filesystem::path& manifest_path) {
    const std::string text = read_text_file(manifest_path);
    const auto base_dir = manifest_path.parent_path();

    Cohort cohort;
    std::set<std::string> seen_ids;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        auto fields = split_csv_row(sv);
        if (!header_seen) {
            const std::vector<std::string_view> expected = {"subject_id", "rr_path", "age",
                                                            "gender", "label"};
            if (fields.size() != expected.size() ||
                !std::equal(fields.begin(), fields.end(), expected.begin()))
                throw SchemaError("manifest header must be subject_id,rr_path,age,gender,label");
            header_seen = true;
            continue;
        }
        if (fields.size() != 5)
            throw ParseError("expected 5 columns, got " + std::to_string(fields.size()), line_no);

        SubjectRecord rec;
        rec.subject_id = std::string(fields[0]);
        if (rec.subject_id.empty()) throw SchemaError("empty subject_id in manifest");
        if (!seen_ids.insert(rec.subject_id).second)
            throw SchemaError("duplicate subject_id '" + rec.subject_id + "'");

        int age = 0;
        auto [end, ec] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), age);
        if (ec != std::errc{} || end != fields[2].data() + fields[2].size())
            throw SchemaError("bad age '" + std::string(fields[2]) + "' for subject " +
                              rec.subject_id);
        if (age < 0 || age > 130)
            throw SchemaError("age " + std::to_string(age) + " out of [0,130] for subject " +
                              rec.subject_id);
        rec.age = age;

        if (fields[3] == "M")
            rec.gender = Gender::male;
        else if (fields[3] == "F")
            rec.gender = Gender::female;
        else
            throw SchemaError("unknown gender token '" + std::string(fields[3]) + "' for subject " +
                              rec.subject_id);

        if (fields[4] == "NORMAL")
            rec.label = ClassLabel::normal;
        else if (fields[4] == "IHD")
            rec.label = ClassLabel::ihd;
        else
            throw SchemaError("unknown label token '" + std::string(fields[4]) + "' for subject " +
                              rec.subject_id);

        std::filesystem::path rr_path{std::string(fields[1])};
        if (rr_path.is_relative()) rr_path = base_dir / rr_path;
        if (!std::filesystem::exists(rr_path))
            throw IoError("missing RR file for subject " + rec.subject_id + ": " +
                          rr_path.string());
        rec.rr = read_rr_file(rr_path);
        cohort.subjects.push_back(std::move(rec));
    }
    if (!header_seen) throw SchemaError("manifest is empty");
    if (cohort.subjects.empty()) throw SchemaError("manifest lists no subjects");
    return cohort;
}

} // namespace hrv
