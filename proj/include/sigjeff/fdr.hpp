#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sigjeff/permutation.hpp"

namespace sigjeff {

struct FdrRow {
    double cutoff = 0.0;
    std::size_t n_called = 0;        // observed statistics strictly above cutoff
    double median_null_called = 0.0; // nearest-rank median of per-permutation counts
    double p90_null_called = 0.0;    // nearest-rank 90th percentile of the same
    double fdr_median = 0.0;         // pi0 * median_null_called / n_called, capped at 1
    double fdr_p90 = 0.0;
    double fdr_median_raw = 0.0;     // uncapped values kept alongside
    double fdr_p90_raw = 0.0;
};

struct FdrTable {
    double pi0 = 1.0;
    std::vector<FdrRow> rows;
};

// Null-proportion estimate: the fraction of observed statistics below the
// nearest-rank median of the pooled permuted statistics, divided by 0.5 (half
// the pairs are expected below the null median), truncated at 1.
double estimate_pi0(std::span<const double> observed, std::span<const double> null_flat);

// Per-cutoff false discovery rate estimates from the permutation null. Only
// true pairs enter (an odd-d singleton entry is excluded). Empty `cutoffs`
// means the sorted unique observed statistics. n_called == 0 yields FDR 0.
FdrTable estimate_fdr(const PermutationResult& result,
                      std::span<const double> cutoffs = {});

}  // namespace sigjeff
