#pragma once

#include <cstdint>
#include <vector>

#include "sigjeff/types.hpp"

namespace sigjeff {

enum class SimDesign { ar1, block_diagonal, independent };

// Two-class Gaussian benchmark data. Class -1 has mean zero; class +1 is
// shifted by c * v where v_k = sqrt(50), sqrt(49), ..., sqrt(1) on the first
// 50 variables and 0 after, and c is calibrated so the population Mahalanobis
// distance between the class means equals `signal` (or, with
// signal_is_squared, so the squared distance does).
struct SimSpec {
    SimDesign design = SimDesign::ar1;
    int d = 500;
    int n_per_class = 50;
    double rho = -0.8;  // lag-1 correlation of the ar1 design
    double signal = 2.5;
    bool signal_is_squared = false;
    std::uint64_t seed = 0;
};

struct GroundTruth {
    std::vector<char> non_null;  // size d, 1 where the class means differ

    bool is_non_null(int v) const { return non_null[v] != 0; }
    std::size_t count() const;
};

struct SimData {
    LabeledMatrix data;  // class +1 rows first, labels and names filled in
    GroundTruth truth;
    double shift_scale = 0.0;            // the calibrated c
    std::vector<double> mean_shift;      // c * v, length d
    std::vector<double> block_sigma0;    // block design: 10x10 row-major block, else empty
};

// Designs:
//   ar1:            stationary AR(1) rows, marginal variance 1, lag-1
//                   correlation rho; calibration uses the tridiagonal inverse
//                   in O(d).
//   block_diagonal: first five 10-variable blocks share a covariance built
//                   from the identity by setting 4 random off-diagonal
//                   positions to -0.8, then shifting the diagonal until
//                   positive definite and rescaling back to unit diagonal;
//                   remaining variables independent.
//   independent:    identity covariance.
SimData generate(const SimSpec& spec);

}  // namespace sigjeff
