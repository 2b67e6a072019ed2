#pragma once

#include "streamreg/schema.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace streamreg {

enum class CorrelationMethod { pearson, spearman };

CorrelationMethod correlation_method_from_string(std::string_view text);
std::string_view to_string(CorrelationMethod method);

/// Product-moment correlation. Throws UndefinedStatistic on mismatched or
/// short (< 2) input, or when either side has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

double correlation(CorrelationMethod method, std::span<const double> x, std::span<const double> y);

/// Name of the numeric feature with the largest |correlation| to the target.
/// Ties go to the lower column index; zero-variance columns are not candidates.
/// Throws DataError when no numeric feature qualifies.
std::string select_drifting_feature(std::span<const Instance> data, const Schema& schema,
                                    CorrelationMethod method);

} // namespace streamreg
