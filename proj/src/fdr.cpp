#include "sigjeff/fdr.hpp"

#include <algorithm>
#include <cmath>

#include "sigjeff/types.hpp"

namespace sigjeff {

namespace {

// Nearest-rank percentile of a sorted sample: value at rank ceil(q * n).
double percentile_nearest_rank(const std::vector<double>& sorted, double q) {
    const std::size_t n = sorted.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    return sorted[rank - 1];
}

}  // namespace

double estimate_pi0(std::span<const double> observed, std::span<const double> null_flat) {
    if (observed.empty()) throw invalid_input("pi0 needs observed statistics");
    if (null_flat.empty()) throw invalid_input("pi0 needs permuted statistics");

    std::vector<double> sorted(null_flat.begin(), null_flat.end());
    std::sort(sorted.begin(), sorted.end());
    const double q50 = percentile_nearest_rank(sorted, 0.5);

    std::size_t below = 0;
    for (double m : observed)
        if (m < q50) ++below;
    const double pi0 =
        static_cast<double>(below) / (0.5 * static_cast<double>(observed.size()));
    return std::min(pi0, 1.0);
}

FdrTable estimate_fdr(const PermutationResult& result, std::span<const double> cutoffs) {
    const int P = result.permutations;
    const std::size_t stride = result.entries.size();

    std::vector<std::size_t> pair_idx;
    std::vector<double> observed;
    for (std::size_t e = 0; e < result.entries.size(); ++e) {
        if (result.entries[e].i == result.entries[e].j) continue;  // singleton
        pair_idx.push_back(e);
        observed.push_back(result.entries[e].observed);
    }
    if (pair_idx.empty()) throw invalid_input("FDR needs at least one pair");
    const std::size_t n_pairs = pair_idx.size();

    // Pooled null for pi0; per-permutation sorted rows for the count percentiles.
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(P) * n_pairs);
    std::vector<std::vector<double>> rows(P);
    for (int p = 0; p < P; ++p) {
        auto& row = rows[p];
        row.resize(n_pairs);
        for (std::size_t k = 0; k < n_pairs; ++k)
            row[k] = result.null_stats[static_cast<std::size_t>(p) * stride + pair_idx[k]];
        flat.insert(flat.end(), row.begin(), row.end());
        std::sort(row.begin(), row.end());
    }

    FdrTable table;
    table.pi0 = estimate_pi0(observed, flat);

    std::vector<double> grid;
    if (cutoffs.empty()) {
        grid = observed;
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    } else {
        grid.assign(cutoffs.begin(), cutoffs.end());
        for (double c : grid)
            if (!std::isfinite(c)) throw invalid_input("FDR cutoff must be finite");
    }

    std::vector<double> sorted_obs = observed;
    std::sort(sorted_obs.begin(), sorted_obs.end());

    std::vector<double> counts(P);
    table.rows.reserve(grid.size());
    for (double c : grid) {
        FdrRow row;
        row.cutoff = c;
        row.n_called = sorted_obs.end() -
                       std::upper_bound(sorted_obs.begin(), sorted_obs.end(), c);
        for (int p = 0; p < P; ++p)
            counts[p] = static_cast<double>(
                rows[p].end() - std::upper_bound(rows[p].begin(), rows[p].end(), c));
        std::sort(counts.begin(), counts.end());
        row.median_null_called = percentile_nearest_rank(counts, 0.5);
        row.p90_null_called = percentile_nearest_rank(counts, 0.9);

        if (row.n_called == 0) {
            row.fdr_median_raw = row.fdr_p90_raw = 0.0;
        } else {
            const double called = static_cast<double>(row.n_called);
            row.fdr_median_raw = table.pi0 * row.median_null_called / called;
            row.fdr_p90_raw = table.pi0 * row.p90_null_called / called;
        }
        row.fdr_median = std::min(row.fdr_median_raw, 1.0);
        row.fdr_p90 = std::min(row.fdr_p90_raw, 1.0);
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace sigjeff
