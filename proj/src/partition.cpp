#include "sigjeff/partition.hpp"

#include <algorithm>

#include "sigjeff/marginal.hpp"

namespace sigjeff {

namespace {

struct Candidate {
    double m;
    int i, j;
};

// Promotion order: largest m first, ties to the lexicographically smallest pair.
bool better(const Candidate& a, const Candidate& b) {
    if (a.m != b.m) return a.m > b.m;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
}

}  // namespace

Partition partition_exhaustive(const TwoSampleSummary& s) {
    const int d = s.dim();
    if (d < 2) throw invalid_input("partition needs at least 2 variables");

    Partition out;
    out.mode = PartitionMode::exhaustive;

    std::vector<Candidate> all;
    all.reserve(static_cast<std::size_t>(d) * (d - 1) / 2);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) all.push_back({mahalanobis_pair(s, i, j).m, i, j});
    out.pairs_evaluated = all.size();
    out.peak_active_pairs = all.size();

    std::sort(all.begin(), all.end(), better);

    std::vector<char> used(d, 0);
    out.pairs.reserve(d / 2);
    for (const auto& c : all) {
        if (used[c.i] || used[c.j]) continue;
        used[c.i] = used[c.j] = 1;
        out.pairs.push_back({c.i, c.j, c.m});
        if (out.pairs.size() == static_cast<std::size_t>(d / 2)) break;
    }
    if (d % 2) {
        for (int v = 0; v < d; ++v)
            if (!used[v]) {
                out.leftover = v;
                break;
            }
    }
    return out;
}

Partition partition_fast(const TwoSampleSummary& s, int d0_requested) {
    const int d = s.dim();
    if (d < 2) throw invalid_input("partition needs at least 2 variables");
    if (d0_requested < 2) throw invalid_input("d0 must be at least 2");

    int d0 = d0_requested;
    if (d0 % 2) ++d0;  // keep the active set even so refills stay in lockstep
    bool clamped = false;
    if (d0 > d) {
        d0 = d;
        clamped = d0_requested > d;
    }

    Partition out;
    out.mode = PartitionMode::fast;
    out.d0 = d0;
    out.d0_clamped = clamped;

    const std::vector<int> waiting = rank_marginal(s);
    std::size_t w_pos = 0;

    std::vector<char> active(d, 0);
    std::vector<int> active_vars;
    active_vars.reserve(d0);
    std::vector<Candidate> pool;
    pool.reserve(static_cast<std::size_t>(d0) * (d0 - 1) / 2 + 2 * d0);

    auto evaluate = [&](int i, int j) {
        const PairStat p = mahalanobis_pair(s, i, j);
        pool.push_back({p.m, p.i, p.j});
        ++out.pairs_evaluated;
        out.peak_active_pairs = std::max(out.peak_active_pairs, pool.size());
    };

    // Seed: all pairs among the d0 variables with the strongest marginal signal.
    for (int k = 0; k < d0; ++k) {
        const int v = waiting[w_pos++];
        for (int a : active_vars) evaluate(std::min(a, v), std::max(a, v));
        active[v] = 1;
        active_vars.push_back(v);
    }

    auto promote = [&] {
        std::size_t best = 0;
        for (std::size_t k = 1; k < pool.size(); ++k)
            if (better(pool[k], pool[best])) best = k;
        const Candidate c = pool[best];
        out.pairs.push_back({c.i, c.j, c.m});
        active[c.i] = active[c.j] = 0;
        std::erase_if(active_vars, [&](int v) { return v == c.i || v == c.j; });
        std::erase_if(pool, [&](const Candidate& p) {
            return p.i == c.i || p.i == c.j || p.j == c.i || p.j == c.j;
        });
    };

    auto refill = [&] {
        for (int take = 0; take < 2 && w_pos < waiting.size(); ++take) {
            const int v = waiting[w_pos++];
            for (int a : active_vars) evaluate(std::min(a, v), std::max(a, v));
            active[v] = 1;
            active_vars.push_back(v);
        }
    };

    while (true) {
        if (!pool.empty()) promote();
        const bool can_refill = w_pos < waiting.size();
        if (can_refill) refill();
        if (pool.empty() && !can_refill) break;
    }

    if (active_vars.size() == 1) out.leftover = active_vars.front();
    return out;
}

std::size_t pair_count_fast(std::size_t d, std::size_t d0) {
    if (d0 < 2 || d0 > d) throw invalid_input("pair_count_fast requires 2 <= d0 <= d");
    return d0 * (d0 - 1) / 2 + (1 + 2 * (d0 - 2)) * ((d - d0) / 2);
}

}  // namespace sigjeff
