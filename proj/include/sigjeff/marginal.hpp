#pragma once

#include <vector>

#include "sigjeff/stats_core.hpp"
#include "sigjeff/types.hpp"

namespace sigjeff {

// Variables ordered by |two-sample t| descending, ties by index. This is both
// the marginal baseline ranking and the waiting-list order of the fast
// partition scheme.
std::vector<int> rank_marginal(const TwoSampleSummary& s);

struct PrescreenResult {
    LabeledMatrix data;      // kept columns, original row order
    std::vector<int> kept;   // original column indices, ascending
};

// Drops columns whose overall (label-blind, n-1) standard deviation is not
// strictly above `threshold`. Threshold 0 only removes exactly-constant
// columns. Removing every column is an error.
PrescreenResult prescreen_by_sd(const LabeledMatrix& data, double threshold);

}  // namespace sigjeff
