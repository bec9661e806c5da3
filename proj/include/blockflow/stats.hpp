#pragma once

#include <vector>

namespace blockflow {

// Median of a sample; even length averages the two middle values.
double median(std::vector<double> v);

// Pearson correlation coefficient. A constant sample is an error.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Maps each value to (avg_rank - 1) / (n - 1) with ties sharing the average
// of their rank block. A single element maps to 0.5, as does every element
// of an all-equal sample.
std::vector<double> rank_percentile(const std::vector<double>& v);

// Two-sided p-value of Student's t statistic with (possibly fractional)
// degrees of freedom.
double t_two_sided_p(double t, double df);

// Two-sided Welch's t-test. When both samples have zero variance the test
// is degenerate: p = 1 if the means coincide, else 0.
double welch_p(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace blockflow
