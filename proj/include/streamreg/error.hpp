#pragma once

#include <stdexcept>
#include <string>

namespace streamreg {

/// Malformed or unusable input data (bad CSV, empty stream, schema mismatch).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration: unknown names, contradictory options, out-of-range parameters.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A statistic whose preconditions do not hold (zero variance, too few points).
class UndefinedStatistic : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

} // namespace streamreg
