#include "sigjeff/permutation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "sigjeff/kernels.hpp"
#include "sigjeff/rng.hpp"

namespace sigjeff {

namespace {

constexpr double kMadToSigma = 1.4826;

double gaussian_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

/// Conventional median: average of the two middle order statistics for even n.
double median_of_sorted(const std::vector<double>& sorted) {
    const std::size_t n = sorted.size();
    if (n % 2) return sorted[n / 2];
    return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

struct NullSummary {
    double mean, sd, median, mad;
};

NullSummary summarize_null(std::span<const double> vals) {
    const std::size_t p = vals.size();
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(p);
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    const double sd = p > 1 ? std::sqrt(ss / static_cast<double>(p - 1)) : 0.0;

    std::vector<double> sorted(vals.begin(), vals.end());
    std::sort(sorted.begin(), sorted.end());
    const double med = median_of_sorted(sorted);
    for (double& v : sorted) v = std::fabs(v - med);
    std::sort(sorted.begin(), sorted.end());
    const double mad = kMadToSigma * median_of_sorted(sorted);
    return {mean, sd, med, mad};
}

int effective_workers(int requested, int permutations) {
    int w = requested;
    if (w <= 0) w = static_cast<int>(std::thread::hardware_concurrency());
    if (w < 1) w = 1;
    return std::min(w, std::max(permutations, 1));
}

}  // namespace

std::vector<double> PermutationResult::null_sample(int e) const {
    std::vector<double> out(permutations);
    const std::size_t stride = entries.size();
    for (int p = 0; p < permutations; ++p)
        out[p] = null_stats[static_cast<std::size_t>(p) * stride + e];
    return out;
}

double pvalue_empirical(double observed, std::span<const double> null_sample) {
    if (null_sample.empty()) throw invalid_input("empty null sample");
    std::size_t exceed = 0;
    for (double v : null_sample)
        if (v > observed) ++exceed;
    return static_cast<double>(exceed) / static_cast<double>(null_sample.size());
}

double pvalue_gaussian(double observed, std::span<const double> null_sample, bool robust) {
    if (null_sample.empty()) throw invalid_input("empty null sample");
    const NullSummary ns = summarize_null(null_sample);
    const double center = robust ? ns.median : ns.mean;
    const double scale = robust ? ns.mad : ns.sd;
    if (!(scale > 0.0) || !std::isfinite(scale))
        return pvalue_empirical(observed, null_sample);
    return gaussian_upper_tail((observed - center) / scale);
}

PermutationResult run_permutations(const LabeledMatrix& data, const TwoSampleSummary& s,
                                   const Partition& partition,
                                   const PermutationConfig& config) {
    if (config.permutations < 1) throw invalid_input("permutation count must be positive");
    if (partition.pairs.empty() && !partition.leftover)
        throw invalid_input("partition is empty");

    const int P = config.permutations;
    const int n = s.n();
    const std::size_t n_pairs = partition.pairs.size();
    const std::size_t n_entries = n_pairs + (partition.leftover ? 1 : 0);

    PermutationResult out;
    out.permutations = P;
    out.method = config.method;
    out.seed = config.seed;
    out.entries.resize(n_entries);
    out.null_stats.resize(static_cast<std::size_t>(P) * n_entries);

    // Permutation-invariant second moments, one dot per pair up front.
    struct EntryPre {
        int i, j;
        double q_ii, q_jj, q_ij;
        const double* col_i;
        const double* col_j;  // null for the singleton
    };
    std::vector<EntryPre> pre(n_entries);
    for (std::size_t e = 0; e < n_pairs; ++e) {
        const PairStat& ps = partition.pairs[e];
        pre[e] = {ps.i,
                  ps.j,
                  s.col_sum_sq(ps.i),
                  s.col_sum_sq(ps.j),
                  s.cross_moment(ps.i, ps.j),
                  s.centered_col(ps.i).data(),
                  s.centered_col(ps.j).data()};
        out.entries[e].i = ps.i;
        out.entries[e].j = ps.j;
        out.entries[e].observed = ps.m;
    }
    if (partition.leftover) {
        const int v = *partition.leftover;
        pre[n_pairs] = {v, v, s.col_sum_sq(v), 0.0, 0.0, s.centered_col(v).data(), nullptr};
        out.entries[n_pairs].i = v;
        out.entries[n_pairs].j = v;
        out.entries[n_pairs].observed = mahalanobis_single(s, v).m;
    }

    std::vector<std::uint8_t> reg_flags(out.null_stats.size(), 0);
    std::vector<std::exception_ptr> errors(P);
    const auto& kern = kernels::active();
    const int n1 = s.n1(), n2 = s.n2();

    std::atomic<int> next{0};
    auto worker = [&] {
        std::vector<int> perm;
        std::vector<double> indicator(n);
        for (;;) {
            const int p = next.fetch_add(1, std::memory_order_relaxed);
            if (p >= P) break;
            try {
                Rng rng = Rng::stream(config.seed, static_cast<std::uint64_t>(p));
                perm = data.labels;
                rng.shuffle(perm);
                for (int r = 0; r < n; ++r) indicator[r] = perm[r] == 1 ? 1.0 : 0.0;

                double* row = out.null_stats.data() + static_cast<std::size_t>(p) * n_entries;
                std::uint8_t* flags = reg_flags.data() + static_cast<std::size_t>(p) * n_entries;
                for (std::size_t e = 0; e < n_entries; ++e) {
                    const EntryPre& ep = pre[e];
                    const double t_i = kern.dot(ep.col_i, indicator.data(), n);
                    bool reg = false;
                    if (ep.col_j) {
                        const double t_j = kern.dot(ep.col_j, indicator.data(), n);
                        row[e] = mahalanobis_from_moments(
                            {t_i, t_j, ep.q_ii, ep.q_jj, ep.q_ij}, n1, n2, ep.i, ep.j, &reg);
                    } else {
                        row[e] = mahalanobis_single_from_moments(t_i, ep.q_ii, n1, n2, ep.i,
                                                                 &reg);
                    }
                    flags[e] = reg ? 1 : 0;
                }
            } catch (...) {
                errors[p] = std::current_exception();
            }
        }
    };

    const int n_workers = effective_workers(config.workers, P);
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(n_workers);
        for (int t = 0; t < n_workers; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    // Lowest permutation index wins so the reported error does not depend on
    // thread scheduling.
    for (int p = 0; p < P; ++p)
        if (errors[p]) std::rethrow_exception(errors[p]);

    std::vector<double> column(P);
    for (std::size_t e = 0; e < n_entries; ++e) {
        EntryResult& er = out.entries[e];
        int reg_count = 0;
        for (int p = 0; p < P; ++p) {
            column[p] = out.null_stats[static_cast<std::size_t>(p) * n_entries + e];
            reg_count += reg_flags[static_cast<std::size_t>(p) * n_entries + e];
        }
        er.regularized_draws = reg_count;

        const NullSummary ns = summarize_null(column);
        er.null_mean = ns.mean;
        er.null_std = ns.sd;
        er.null_median = ns.median;
        er.null_mad = ns.mad;

        switch (config.method) {
            case PValueMethod::empirical:
                er.pvalue = pvalue_empirical(er.observed, column);
                break;
            case PValueMethod::gaussian:
            case PValueMethod::robust: {
                const bool robust = config.method == PValueMethod::robust;
                const double center = robust ? ns.median : ns.mean;
                const double scale = robust ? ns.mad : ns.sd;
                if (!(scale > 0.0) || !std::isfinite(scale)) {
                    er.pvalue = pvalue_empirical(er.observed, column);
                    er.empirical_fallback = true;
                } else {
                    er.pvalue = gaussian_upper_tail((er.observed - center) / scale);
                }
                break;
            }
        }
    }
    return out;
}

PermutationResult run_permutations(const LabeledMatrix& data, const Partition& partition,
                                   const PermutationConfig& config) {
    const TwoSampleSummary s = summarize(data);
    return run_permutations(data, s, partition, config);
}

RankedList rank_pairs(const PermutationResult& result) {
    RankedList out;
    out.entries.reserve(result.entries.size());
    for (const EntryResult& er : result.entries)
        out.entries.push_back({er.i, er.j, er.observed, er.pvalue});

    std::sort(out.entries.begin(), out.entries.end(),
              [](const RankedEntry& a, const RankedEntry& b) {
                  if (a.pvalue != b.pvalue) return a.pvalue < b.pvalue;
                  if (a.m != b.m) return a.m > b.m;
                  if (a.i != b.i) return a.i < b.i;
                  return a.j < b.j;
              });

    out.variables.reserve(2 * out.entries.size());
    for (const RankedEntry& e : out.entries) {
        out.variables.push_back(e.i);
        if (e.j != e.i) out.variables.push_back(e.j);
    }
    return out;
}

}  // namespace sigjeff
