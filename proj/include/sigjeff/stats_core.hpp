#pragma once

#include <span>
#include <vector>

#include "sigjeff/types.hpp"

namespace sigjeff {

// Sufficient statistics shared by the pair statistic, the observed two-sample
// summaries and the permutation engine.
//
// Columns are centered on their overall (label-blind) mean once at
// construction. Centering leaves mean differences and within-class scatter
// unchanged and keeps the moment arithmetic below well conditioned. On
// centered columns, with t_v the class(+1) sum of column v and q_ij the dot of
// columns i and j:
//
//   delta_v          = t_v * n / (n1 * n2)
//   scatter_ij       = q_ij - t_i * t_j * (1/n1 + 1/n2)
//   pooled sigma_ij  = scatter_ij / (n - 2)
//
// A permutation only changes the class sums t_v; q_ij is invariant. That is
// what makes the permutation stage cheap: per permutation and pair, two dots
// against the permuted class indicator and O(1) arithmetic.
class TwoSampleSummary {
public:
    static TwoSampleSummary build(const LabeledMatrix& data);

    int n() const { return n_; }
    int n1() const { return n1_; }
    int n2() const { return n2_; }
    int dim() const { return static_cast<int>(centered_.cols()); }

    std::span<const double> delta() const { return delta_; }
    std::span<const double> pooled_var() const { return pooled_var_; }
    std::span<const double> tstat() const { return tstat_; }

    // Class(+1) sum of centered column v under the observed labels.
    double class1_sum(int v) const { return class1_sum_[v]; }
    // Dot of centered columns (i may equal j). One kernel dot per call.
    double cross_moment(int i, int j) const;
    // Cached cross_moment(v, v).
    double col_sum_sq(int v) const { return col_sum_sq_[v]; }
    // Pooled within-class covariance entry, divisor n - 2.
    double pooled_cov(int i, int j) const;

    std::span<const double> centered_col(int v) const { return centered_.col(v); }

private:
    Matrix centered_;
    std::vector<double> delta_, pooled_var_, tstat_;
    std::vector<double> class1_sum_, col_sum_sq_;
    int n_ = 0, n1_ = 0, n2_ = 0;
};

TwoSampleSummary summarize(const LabeledMatrix& data);

// Moment form of the pair statistic: class(+1) sums and second moments of two
// centered columns. The same routine scores observed and permuted labelings,
// so the two paths cannot drift apart numerically.
struct PairMoments {
    double t_i, t_j;          // class(+1) sums
    double q_ii, q_jj, q_ij;  // second moments
};

// Squared Mahalanobis distance of the two-variable mean difference under the
// pooled 2x2 covariance block, by closed-form inverse. Near-singular blocks
// (det <= 1e-12 * s_ii * s_jj) get a ridge of 1e-8 * mean diagonal added to
// the diagonal; `regularized` (optional) reports that. A non-finite result
// after regularization throws numeric_error naming the pair.
double mahalanobis_from_moments(const PairMoments& pm, int n1, int n2, int i, int j,
                                bool* regularized = nullptr);

// Single-variable analogue, delta^2 / sigma_vv, for an odd-d leftover.
double mahalanobis_single_from_moments(double t_v, double q_vv, int n1, int n2, int v,
                                       bool* regularized = nullptr);

PairStat mahalanobis_pair(const TwoSampleSummary& s, int i, int j);
PairStat mahalanobis_single(const TwoSampleSummary& s, int v);

}  // namespace sigjeff
