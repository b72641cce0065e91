#ifndef GSOFTMAX_ERRORS_HPP
#define GSOFTMAX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gsoftmax {

/// Malformed or inconsistent configuration (schema violations, unknown keys,
/// out-of-range hyperparameters). CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Unreadable or malformed input data (missing files, bad record sizes,
/// unparsable CSV). CLI exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numeric failure at run time: training divergence, gradient checks out of
/// tolerance. CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Statistic is undefined on the given sample (e.g. a paired test where every
/// difference is identical). Distinct from ValidationError so callers can
/// report "no decision" instead of "bad input".
class DegenerateDataError : public std::domain_error {
public:
    explicit DegenerateDataError(const std::string& what) : std::domain_error(what) {}
};

} // namespace gsoftmax

#endif
