#include "sigjeff/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sigjeff/kernels.hpp"

namespace sigjeff {

std::vector<int> rank_marginal(const TwoSampleSummary& s) {
    std::vector<int> order(s.dim());
    std::iota(order.begin(), order.end(), 0);
    const auto t = s.tstat();
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double ta = std::fabs(t[a]), tb = std::fabs(t[b]);
        if (ta != tb) return ta > tb;
        return a < b;
    });
    return order;
}

PrescreenResult prescreen_by_sd(const LabeledMatrix& data, double threshold) {
    if (!(threshold >= 0.0)) throw invalid_input("sd threshold must be >= 0");

    const auto& k = kernels::active();
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();

    std::vector<int> kept;
    std::vector<double> centered(n);
    for (std::size_t v = 0; v < d; ++v) {
        const auto col = data.values.col(v);
        const double mean = k.sum(col.data(), n) / static_cast<double>(n);
        k.shift(centered.data(), col.data(), n, mean);
        const double sd = std::sqrt(k.dot(centered.data(), centered.data(), n) /
                                    static_cast<double>(n - 1));
        if (sd > threshold) kept.push_back(static_cast<int>(v));
    }
    if (kept.empty())
        throw invalid_input(
            "sd prescreen removed every variable; lower --sd-threshold (current " +
            std::to_string(threshold) + ")");

    Matrix values(n, kept.size());
    std::vector<std::string> names;
    if (!data.names.empty()) names.reserve(kept.size());
    for (std::size_t c = 0; c < kept.size(); ++c) {
        const auto src = data.values.col(kept[c]);
        std::copy(src.begin(), src.end(), values.col(c).begin());
        if (!data.names.empty()) names.push_back(data.names[kept[c]]);
    }

    PrescreenResult out{LabeledMatrix::create(std::move(values), data.labels,
                                              std::move(names)),
                        std::move(kept)};
    return out;
}

}  // namespace sigjeff
