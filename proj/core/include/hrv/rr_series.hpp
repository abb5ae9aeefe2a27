#ifndef HRV_RR_SERIES_HPP
#define HRV_RR_SERIES_HPP

#include <string>
#include <vector>

#include "hrv/errors.hpp"

namespace hrv {

/// One subject's ordered RR intervals.
///
/// intervals_ms[i] is the time between beats i and i+1, so a series of n
/// intervals is bounded by n+1 beats. beat_times_s holds the onset time of
/// every beat, beat_times_s[0] == 0 and beat_times_s[n] == total duration;
/// interval i starts at beat_times_s[i].
struct RRSeries {
    std::vector<double> intervals_ms;
    std::vector<double> beat_times_s;

    std::size_t size() const { return intervals_ms.size(); }
    double duration_s() const { return beat_times_s.back() - beat_times_s.front(); }
};

/// Validate intervals and attach cumulative beat times.
RRSeries make_rr_series(std::vector<double> intervals_ms);

enum class Gender { female = 0, male = 1 };
enum class ClassLabel { normal = 0, ihd = 1 };

const char* to_string(Gender g);
const char* to_string(ClassLabel l);

struct SubjectRecord {
    std::string subject_id;
    RRSeries rr;
    int age = 0;
    Gender gender = Gender::female;
    ClassLabel label = ClassLabel::normal;
};

struct Cohort {
    std::vector<SubjectRecord> subjects;

    std::size_t count(ClassLabel l) const {
        std::size_t n = 0;
        for (const auto& s : subjects)
            if (s.label == l) ++n;
        return n;
    }
};

inline RRSeries make_rr_series(std::vector<double> intervals_ms) {
    if (intervals_ms.size() < 2)
        throw TooShortError("RR series needs at least 2 intervals, got " +
                            std::to_string(intervals_ms.size()));
    RRSeries s;
    s.beat_times_s.reserve(intervals_ms.size() + 1);
    s.beat_times_s.push_back(0.0);
    for (double v : intervals_ms) {
        if (!(v > 0.0))
            throw RangeError("RR interval must be positive, got " + std::to_string(v));
        s.beat_times_s.push_back(s.beat_times_s.back() + v / 1000.0);
    }
    s.intervals_ms = std::move(intervals_ms);
    return s;
}

inline const char* to_string(Gender g) { return g == Gender::male ? "M" : "F"; }
inline const char* to_string(ClassLabel l) { return l == ClassLabel::ihd ? "IHD" : "NORMAL"; }

} // namespace hrv

#endif // HRV_RR_SERIES_HPP
