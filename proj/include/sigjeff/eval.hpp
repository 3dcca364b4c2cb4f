#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sigjeff/simdata.hpp"
#include "sigjeff/types.hpp"

namespace sigjeff {

// curve[k-1] = number of true non-null variables among the first k of `ranked`,
// for k = 1..max_k. Requires 1 <= max_k <= ranked.size().
std::vector<std::size_t> true_nonnull_curve(std::span<const int> ranked,
                                            const GroundTruth& truth, std::size_t max_k);

// curve[k-1] = (k - true_nonnull(k)) / k, the false discovery proportion of the
// top-k prefix.
std::vector<double> fdp_curve(std::span<const int> ranked, const GroundTruth& truth,
                              std::size_t max_k);

// Misclassification rate on `test` of pooled-covariance LDA fitted on `train`
// restricted to `selected`. A singular pooled covariance (always when
// selected.size() > n - 2) gets a ridge of 1e-6 times the mean diagonal.
double lda_error(const LabeledMatrix& train, const LabeledMatrix& test,
                 std::span<const int> selected);

}  // namespace sigjeff
