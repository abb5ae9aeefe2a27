#ifndef HRV_ERRORS_HPP
#define HRV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hrv {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed text input (non-numeric RR line, bad CSV row).
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Value outside its physiologically admissible range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Input shorter than the operation's minimum length.
class TooShortError : public Error {
public:
    using Error::Error;
};

/// File could not be opened or read.
class IoError : public Error {
public:
    using Error::Error;
};

/// Manifest or config token not in the accepted vocabulary.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Every beat of a series was flagged as artifact.
class AllArtifactsError : public Error {
public:
    using Error::Error;
};

/// Fewer than four normal beats: no cubic-spline support.
class InsufficientSupportError : public Error {
public:
    using Error::Error;
};

/// No segment survived windowing and quality filtering.
class NoSegmentsError : public Error {
public:
    using Error::Error;
};

/// Dimension mismatch between operands.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Spectrum carries no usable power for the requested quantity.
class DegenerateSpectrumError : public Error {
public:
    using Error::Error;
};

/// A feature column is constant on the fitting rows.
class ConstantFeatureError : public Error {
public:
    using Error::Error;
};

/// Stepwise selection terminated with no feature below the entry p-value.
class EmptySelectionError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration value.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// ROC requested on labels that contain a single class.
class DegenerateLabelsError : public Error {
public:
    using Error::Error;
};

/// Too many repetitions of an experiment failed.
class ExperimentError : public Error {
public:
    using Error::Error;
};

} // namespace hrv

#endif // HRV_ERRORS_HPP
