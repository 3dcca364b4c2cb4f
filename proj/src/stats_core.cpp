#include "sigjeff/stats_core.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "sigjeff/kernels.hpp"

namespace sigjeff {

namespace {

constexpr double kDetTol = 1e-12;    // relative singularity threshold
constexpr double kRidgeScale = 1e-8; // ridge, relative to mean diagonal

std::string pair_label(int i, int j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

TwoSampleSummary TwoSampleSummary::build(const LabeledMatrix& data) {
    const auto& k = kernels::active();
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();

    int n1 = 0, n2 = 0;
    for (int lab : data.labels) (lab == 1 ? n1 : n2)++;
    if (n1 < 2 || n2 < 2)
        throw invalid_input("each class needs at least 2 samples");

    TwoSampleSummary s;
    s.n_ = static_cast<int>(n);
    s.n1_ = n1;
    s.n2_ = n2;
    s.centered_ = Matrix(n, d);
    s.delta_.resize(d);
    s.pooled_var_.resize(d);
    s.tstat_.resize(d);
    s.class1_sum_.resize(d);
    s.col_sum_sq_.resize(d);

    std::vector<double> indicator(n);
    for (std::size_t r = 0; r < n; ++r) indicator[r] = data.labels[r] == 1 ? 1.0 : 0.0;

    const double inv_groups = 1.0 / n1 + 1.0 / n2;
    const double inv_df = 1.0 / (s.n_ - 2);

    for (std::size_t v = 0; v < d; ++v) {
        const auto src = data.values.col(v);
        auto dst = s.centered_.col(v);
        const double mean = k.sum(src.data(), n) / static_cast<double>(n);
        k.shift(dst.data(), src.data(), n, mean);

        const double t = k.dot(dst.data(), indicator.data(), n);
        const double q = k.dot(dst.data(), dst.data(), n);
        s.class1_sum_[v] = t;
        s.col_sum_sq_[v] = q;
        s.delta_[v] = t * inv_groups;
        const double scatter = std::max(q - t * t * inv_groups, 0.0);
        s.pooled_var_[v] = scatter * inv_df;

        const double se = std::sqrt(s.pooled_var_[v] * inv_groups);
        if (se > 0.0)
            s.tstat_[v] = s.delta_[v] / se;
        else
            // Degenerate within-class variance: +-inf keeps |t| ordering total.
            s.tstat_[v] = s.delta_[v] == 0.0
                              ? 0.0
                              : std::copysign(std::numeric_limits<double>::infinity(),
                                              s.delta_[v]);
    }
    return s;
}

TwoSampleSummary summarize(const LabeledMatrix& data) { return TwoSampleSummary::build(data); }

double TwoSampleSummary::cross_moment(int i, int j) const {
    const auto a = centered_.col(i);
    const auto b = centered_.col(j);
    return kernels::active().dot(a.data(), b.data(), a.size());
}

double TwoSampleSummary::pooled_cov(int i, int j) const {
    if (i == j) return pooled_var_[i];
    const double inv_groups = 1.0 / n1_ + 1.0 / n2_;
    return (cross_moment(i, j) - class1_sum_[i] * class1_sum_[j] * inv_groups) / (n_ - 2);
}

double mahalanobis_from_moments(const PairMoments& pm, int n1, int n2, int i, int j,
                                bool* regularized) {
    const int n = n1 + n2;
    const double inv_groups = 1.0 / n1 + 1.0 / n2;
    const double inv_df = 1.0 / (n - 2);

    const double di = pm.t_i * inv_groups;
    const double dj = pm.t_j * inv_groups;
    double sii = std::max(pm.q_ii - pm.t_i * pm.t_i * inv_groups, 0.0) * inv_df;
    double sjj = std::max(pm.q_jj - pm.t_j * pm.t_j * inv_groups, 0.0) * inv_df;
    const double sij = (pm.q_ij - pm.t_i * pm.t_j * inv_groups) * inv_df;

    double det = sii * sjj - sij * sij;
    bool reg = false;
    if (det <= kDetTol * sii * sjj) {
        const double ridge = kRidgeScale * 0.5 * (sii + sjj);
        sii += ridge;
        sjj += ridge;
        det = sii * sjj - sij * sij;
        reg = true;
    }
    if (regularized) *regularized = reg;

    const double num = di * di * sjj - 2.0 * di * dj * sij + dj * dj * sii;
    const double m = num / det;
    if (!std::isfinite(m))
        throw numeric_error("pair statistic not finite for variables " + pair_label(i, j),
                            i, j);
    return m;
}

double mahalanobis_single_from_moments(double t_v, double q_vv, int n1, int n2, int v,
                                       bool* regularized) {
    const int n = n1 + n2;
    const double inv_groups = 1.0 / n1 + 1.0 / n2;
    const double dv = t_v * inv_groups;
    double svv = std::max(q_vv - t_v * t_v * inv_groups, 0.0) / (n - 2);

    bool reg = false;
    if (svv <= 0.0) {
        svv += kRidgeScale * svv;  // 1x1 analogue of the diagonal ridge
        reg = true;
    }
    if (regularized) *regularized = reg;

    const double m = dv * dv / svv;
    if (!std::isfinite(m))
        throw numeric_error("single-variable statistic not finite for variable " +
                                std::to_string(v),
                            v, v);
    return m;
}

PairStat mahalanobis_pair(const TwoSampleSummary& s, int i, int j) {
    const int d = s.dim();
    if (i < 0 || j < 0 || i >= d || j >= d)
        throw invalid_input("pair index out of range " + pair_label(i, j));
    if (i == j) throw invalid_input("pair needs two distinct variables");
    // Canonical order makes m(i,j) and m(j,i) bit-identical.
    const int a = std::min(i, j), b = std::max(i, j);
    const PairMoments pm{s.class1_sum(a), s.class1_sum(b), s.col_sum_sq(a),
                         s.col_sum_sq(b), s.cross_moment(a, b)};
    return {a, b, mahalanobis_from_moments(pm, s.n1(), s.n2(), a, b)};
}

PairStat mahalanobis_single(const TwoSampleSummary& s, int v) {
    if (v < 0 || v >= s.dim()) throw invalid_input("variable index out of range");
    return {v, v,
            mahalanobis_single_from_moments(s.class1_sum(v), s.col_sum_sq(v), s.n1(),
                                            s.n2(), v)};
}

}  // namespace sigjeff
