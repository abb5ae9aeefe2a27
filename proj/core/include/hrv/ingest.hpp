#ifndef HRV_INGEST_HPP
#define HRV_INGEST_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "hrv/rr_series.hpp"

namespace hrv {

/// Upper bound accepted at parse time; anything above is rejected as a
/// recording fault rather than an artifact to be corrected later.
inline constexpr double kMaxParsableRrMs = 5000.0;

/// Parse a line-oriented RR listing: one interval in ms per line, blank
/// lines and `#` comments ignored.
RRSeries parse_rr_file(std::string_view text);

/// Read and parse an RR file from disk.
RRSeries read_rr_file(const std::filesystem::path& path);

/// Serialize a series back to the one-value-per-line format. Values are
/// written with enough digits to round-trip exactly.
std::string serialize_rr(const RRSeries& series);

void write_rr_file(const std::filesystem::path& path, const RRSeries& series);

/// Load a cohort manifest (CSV with header subject_id,rr_path,age,gender,label;
/// gender in {M,F}, label in {NORMAL,IHD}). rr_path entries are resolved
/// relative to the manifest's directory.
Cohort load_cohort(const std::filesystem::path& manifest_path);

} // namespace hrv

#endif // HRV_INGEST_HPP
