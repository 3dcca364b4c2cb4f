#include "sigjeff/eval.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>

namespace sigjeff {

namespace {

void check_ranked(std::span<const int> ranked, const GroundTruth& truth,
                  std::size_t max_k) {
    if (max_k < 1 || max_k > ranked.size())
        throw invalid_input("curve length must be between 1 and the ranking size");
    const int d = static_cast<int>(truth.non_null.size());
    for (int v : ranked)
        if (v < 0 || v >= d) throw invalid_input("ranked variable out of range");
}

}  // namespace

std::vector<std::size_t> true_nonnull_curve(std::span<const int> ranked,
                                            const GroundTruth& truth,
                                            std::size_t max_k) {
    check_ranked(ranked, truth, max_k);
    std::vector<std::size_t> curve(max_k);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < max_k; ++k) {
        if (truth.is_non_null(ranked[k])) ++hits;
        curve[k] = hits;
    }
    return curve;
}

std::vector<double> fdp_curve(std::span<const int> ranked, const GroundTruth& truth,
                              std::size_t max_k) {
    const std::vector<std::size_t> tn = true_nonnull_curve(ranked, truth, max_k);
    std::vector<double> curve(max_k);
    for (std::size_t k = 1; k <= max_k; ++k)
        curve[k - 1] =
            1.0 - static_cast<double>(tn[k - 1]) / static_cast<double>(k);
    return curve;
}

double lda_error(const LabeledMatrix& train, const LabeledMatrix& test,
                 std::span<const int> selected) {
    if (selected.empty()) throw invalid_input("LDA needs a non-empty variable set");
    if (test.cols() != train.cols())
        throw invalid_input("train and test dimensions differ");
    {
        std::set<int> uniq(selected.begin(), selected.end());
        if (uniq.size() != selected.size())
            throw invalid_input("selected variables must be distinct");
        if (*uniq.begin() < 0 || *uniq.rbegin() >= static_cast<int>(train.cols()))
            throw invalid_input("selected variable out of range");
    }

    const int k = static_cast<int>(selected.size());
    const int n = static_cast<int>(train.rows());
    const int n1 = static_cast<int>(train.n1);
    const int n2 = static_cast<int>(train.n2);

    Eigen::MatrixXd x(n, k);
    for (int c = 0; c < k; ++c) {
        const auto col = train.values.col(selected[c]);
        for (int r = 0; r < n; ++r) x(r, c) = col[r];
    }

    Eigen::VectorXd mu1 = Eigen::VectorXd::Zero(k), mu2 = Eigen::VectorXd::Zero(k);
    for (int r = 0; r < n; ++r)
        (train.labels[r] == 1 ? mu1 : mu2) += x.row(r).transpose();
    mu1 /= n1;
    mu2 /= n2;

    Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(k, k);
    for (int r = 0; r < n; ++r) {
        const Eigen::VectorXd dev =
            x.row(r).transpose() - (train.labels[r] == 1 ? mu1 : mu2);
        scatter.noalias() += dev * dev.transpose();
    }
    Eigen::MatrixXd pooled = scatter / static_cast<double>(n - 2);

    // Ridge whenever the pooled covariance cannot be trusted to factor.
    const bool force_ridge = k > n - 2;
    Eigen::LLT<Eigen::MatrixXd> llt;
    if (!force_ridge) llt.compute(pooled);
    if (force_ridge || llt.info() != Eigen::Success) {
        const double ridge = 1e-6 * pooled.diagonal().mean();
        pooled.diagonal().array() += ridge;
        llt.compute(pooled);
        if (llt.info() != Eigen::Success)
            throw numeric_error("pooled covariance not factorizable for LDA", -1, -1);
    }

    const Eigen::VectorXd w = llt.solve(mu1 - mu2);
    const Eigen::VectorXd mid = 0.5 * (mu1 + mu2);
    const double prior = std::log(static_cast<double>(n1) / static_cast<double>(n2));

    std::size_t wrong = 0;
    const int nt = static_cast<int>(test.rows());
    Eigen::VectorXd xt(k);
    for (int r = 0; r < nt; ++r) {
        for (int c = 0; c < k; ++c) xt[c] = test.values.col(selected[c])[r];
        const double score = w.dot(xt - mid) + prior;
        const int pred = score > 0.0 ? 1 : -1;
        if (pred != test.labels[r]) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(nt);
}

}  // namespace sigjeff
