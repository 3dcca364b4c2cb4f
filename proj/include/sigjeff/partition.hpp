#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sigjeff/stats_core.hpp"
#include "sigjeff/types.hpp"

namespace sigjeff {

enum class PartitionMode { exhaustive, fast };

// Disjoint pairing of all variables, greedily promoting the pair with the
// largest joint statistic. `pairs` is in promotion order; for odd d one
// variable is left over and later assessed on its own.
struct Partition {
    std::vector<PairStat> pairs;
    std::optional<int> leftover;
    PartitionMode mode = PartitionMode::exhaustive;
    int d0 = 0;                         // fast mode: active-set width actually used
    bool d0_clamped = false;            // fast mode: requested d0 exceeded d
    std::size_t pairs_evaluated = 0;    // statistic evaluations performed
    std::size_t peak_active_pairs = 0;  // fast mode: high-water mark of the active set
};

// Evaluates every pair (i < j), then promotes greedily. Promoted statistics
// are non-increasing. Memory grows with d^2; intended for moderate d.
Partition partition_exhaustive(const TwoSampleSummary& s);

// Active-set variant: seeds the d0 variables with the largest |t|, promotes
// the best active pair, retires its variables, and refills from the waiting
// list two variables at a time. Pair storage stays O(d0^2) and evaluations
// O(d * d0) regardless of d. Odd d0 is rounded up; d0 > d is clamped (flagged
// in the result); d0 < 2 is an error. With d0 == d the result matches
// partition_exhaustive exactly.
Partition partition_fast(const TwoSampleSummary& s, int d0);

// Closed-form evaluation count of the fast scheme:
//   d0*(d0-1)/2 + (1 + 2*(d0-2)) * floor((d-d0)/2)
// Exact when d - d0 is even. Requires 2 <= d0 <= d.
std::size_t pair_count_fast(std::size_t d, std::size_t d0);

}  // namespace sigjeff
