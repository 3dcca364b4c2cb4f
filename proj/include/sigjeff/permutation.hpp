#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sigjeff/partition.hpp"
#include "sigjeff/stats_core.hpp"
#include "sigjeff/types.hpp"

namespace sigjeff {

enum class PValueMethod { empirical, gaussian, robust };

struct PermutationConfig {
    int permutations = 1000;
    PValueMethod method = PValueMethod::empirical;
    std::uint64_t seed = 0;
    // Parallelism hint only; results are byte-identical for any value. 0 means
    // use the hardware thread count.
    int workers = 1;
};

// One partitioned pair (or the odd-d singleton, i == j) with its observed
// statistic, permutation p-value and null-sample summary.
struct EntryResult {
    int i = -1, j = -1;
    double observed = 0.0;
    double pvalue = 1.0;
    double null_mean = 0.0, null_std = 0.0;
    double null_median = 0.0, null_mad = 0.0;  // mad already scaled by 1.4826
    int regularized_draws = 0;       // permuted statistics that needed the ridge
    bool empirical_fallback = false; // Gaussian fit had zero/invalid scale
};

struct PermutationResult {
    std::vector<EntryResult> entries;  // partition order; singleton (if any) last
    int permutations = 0;
    PValueMethod method = PValueMethod::empirical;
    std::uint64_t seed = 0;

    // Row-per-permutation layout: null_stats[p * entries.size() + e]. Each slot
    // is owned by exactly one permutation, which is what makes the result
    // independent of worker scheduling.
    std::vector<double> null_stats;

    double null_at(int p, int e) const {
        return null_stats[static_cast<std::size_t>(p) * entries.size() + e];
    }
    std::vector<double> null_sample(int e) const;  // gathered column copy
};

// Label-permutation null for every partitioned pair. Permutation p draws its
// labels by shuffling the observed label vector with the RNG stream derived
// from (seed, p), so class sizes are preserved and any worker count produces
// the same bytes. Permuted draws that trigger the covariance ridge are counted
// and kept, never dropped.
PermutationResult run_permutations(const LabeledMatrix& data, const TwoSampleSummary& s,
                                   const Partition& partition,
                                   const PermutationConfig& config);
// Convenience overload that builds the summary itself.
PermutationResult run_permutations(const LabeledMatrix& data, const Partition& partition,
                                   const PermutationConfig& config);

// Fraction of null draws strictly above the observed value; multiples of 1/P.
double pvalue_empirical(double observed, std::span<const double> null_sample);

// Upper-tail p under a Gaussian fitted to the null sample: plain fit uses
// (mean, sd), robust fit uses (median, 1.4826 * MAD). A non-positive or
// non-finite scale falls back to the empirical p-value.
double pvalue_gaussian(double observed, std::span<const double> null_sample, bool robust);

struct RankedEntry {
    int i = -1, j = -1;
    double m = 0.0;
    double pvalue = 1.0;
};

struct RankedList {
    std::vector<RankedEntry> entries;  // ascending p, ties by larger m then pair index
    std::vector<int> variables;        // entries flattened in rank order
};

RankedList rank_pairs(const PermutationResult& result);

}  // namespace sigjeff
