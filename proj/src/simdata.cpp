#include "sigjeff/simdata.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "sigjeff/rng.hpp"

namespace sigjeff {

namespace {

constexpr int kSignalVars = 50;
constexpr int kBlockSize = 10;
constexpr int kBlockCount = 5;
constexpr double kBlockValue = -0.8;
constexpr int kBlockEdges = 4;
constexpr double kDiagMargin = 0.05;

std::vector<double> signal_pattern(int d) {
    std::vector<double> v(d, 0.0);
    for (int k = 0; k < kSignalVars; ++k) v[k] = std::sqrt(static_cast<double>(kSignalVars - k));
    return v;
}

// v' Sigma^-1 v for the ar1 design via the tridiagonal inverse: diagonal
// (1, 1+rho^2, ..., 1+rho^2, 1), off-diagonal -rho, all over (1 - rho^2).
double quad_form_ar1(const std::vector<double>& v, double rho) {
    const int d = static_cast<int>(v.size());
    const double mid = 1.0 + rho * rho;
    double acc = 0.0;
    for (int k = 0; k < d; ++k) {
        const double a = (k == 0 || k == d - 1) ? 1.0 : mid;
        acc += a * v[k] * v[k];
    }
    double cross = 0.0;
    for (int k = 0; k + 1 < d; ++k) cross += v[k] * v[k + 1];
    return (acc - 2.0 * rho * cross) / (1.0 - rho * rho);
}

Eigen::MatrixXd build_block_sigma0(Rng& rng) {
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(kBlockSize, kBlockSize);

    // 4 distinct upper-triangle positions set to -0.8.
    std::vector<int> slots(kBlockSize * (kBlockSize - 1) / 2);
    std::iota(slots.begin(), slots.end(), 0);
    for (int t = 0; t < kBlockEdges; ++t) {
        const std::size_t pick =
            t + static_cast<std::size_t>(rng.bounded(slots.size() - t));
        std::swap(slots[t], slots[pick]);
        int s = slots[t];
        int r = 0;
        while (s >= kBlockSize - 1 - r) {
            s -= kBlockSize - 1 - r;
            ++r;
        }
        const int c = r + 1 + s;
        sigma(r, c) = sigma(c, r) = kBlockValue;
    }

    // Shift the diagonal past the smallest eigenvalue, then rescale every
    // entry so the diagonal is 1 again.
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
    const double lam_min = es.eigenvalues().minCoeff();
    const double shift = std::fabs(std::min(lam_min, 0.0)) + kDiagMargin;
    sigma.diagonal().array() += shift;
    sigma /= (1.0 + shift);
    return sigma;
}

}  // namespace

std::size_t GroundTruth::count() const {
    return std::count(non_null.begin(), non_null.end(), char(1));
}

SimData generate(const SimSpec& spec) {
    if (spec.d < kSignalVars)
        throw invalid_input("simulated dimension must be at least 50 (mean pattern)");
    if (spec.n_per_class < 2) throw invalid_input("need at least 2 samples per class");
    if (!(spec.signal > 0.0)) throw invalid_input("signal must be positive");
    if (spec.design == SimDesign::ar1 && !(std::fabs(spec.rho) < 1.0))
        throw invalid_input("ar1 correlation must satisfy |rho| < 1");

    const int d = spec.d;
    const int n = 2 * spec.n_per_class;
    Rng rng(spec.seed);

    SimData out;
    const std::vector<double> v = signal_pattern(d);

    Eigen::MatrixXd sigma0;
    Eigen::MatrixXd chol_l;
    double quad = 0.0;
    switch (spec.design) {
        case SimDesign::ar1:
            quad = quad_form_ar1(v, spec.rho);
            break;
        case SimDesign::independent:
            for (int k = 0; k < d; ++k) quad += v[k] * v[k];
            break;
        case SimDesign::block_diagonal: {
            sigma0 = build_block_sigma0(rng);
            const Eigen::LLT<Eigen::MatrixXd> llt(sigma0);
            chol_l = llt.matrixL();
            for (int b = 0; b < kBlockCount; ++b) {
                Eigen::VectorXd vb(kBlockSize);
                for (int k = 0; k < kBlockSize; ++k) vb[k] = v[b * kBlockSize + k];
                quad += vb.dot(llt.solve(vb));
            }
            out.block_sigma0.assign(sigma0.data(), sigma0.data() + sigma0.size());
            break;
        }
    }

    const double c =
        spec.signal_is_squared ? std::sqrt(spec.signal / quad) : spec.signal / std::sqrt(quad);
    out.shift_scale = c;
    out.mean_shift.resize(d);
    for (int k = 0; k < d; ++k) out.mean_shift[k] = c * v[k];

    Matrix values(n, d);
    const double innov_sd = std::sqrt(1.0 - spec.rho * spec.rho);
    std::vector<double> z(kBlockSize);
    for (int r = 0; r < n; ++r) {
        switch (spec.design) {
            case SimDesign::ar1: {
                double prev = rng.normal();
                values(r, 0) = prev;
                for (int t = 1; t < d; ++t) {
                    prev = spec.rho * prev + innov_sd * rng.normal();
                    values(r, t) = prev;
                }
                break;
            }
            case SimDesign::independent:
                for (int t = 0; t < d; ++t) values(r, t) = rng.normal();
                break;
            case SimDesign::block_diagonal: {
                for (int b = 0; b < kBlockCount; ++b) {
                    for (int k = 0; k < kBlockSize; ++k) z[k] = rng.normal();
                    for (int k = 0; k < kBlockSize; ++k) {
                        double x = 0.0;
                        for (int l = 0; l <= k; ++l) x += chol_l(k, l) * z[l];
                        values(r, b * kBlockSize + k) = x;
                    }
                }
                for (int t = kBlockCount * kBlockSize; t < d; ++t)
                    values(r, t) = rng.normal();
                break;
            }
        }
        if (r < spec.n_per_class)
            for (int k = 0; k < kSignalVars; ++k) values(r, k) += out.mean_shift[k];
    }

    std::vector<int> labels(n, -1);
    std::fill(labels.begin(), labels.begin() + spec.n_per_class, 1);
    std::vector<std::string> names(d);
    for (int k = 0; k < d; ++k) names[k] = "V" + std::to_string(k + 1);

    out.data = LabeledMatrix::create(std::move(values), std::move(labels), std::move(names));
    out.truth.non_null.assign(d, 0);
    std::fill(out.truth.non_null.begin(), out.truth.non_null.begin() + kSignalVars, 1);
    return out;
}

}  // namespace sigjeff
