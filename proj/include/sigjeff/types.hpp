#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sigjeff {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or ill-posed input (bad labels, degenerate class sizes, bad config).
class invalid_input : public error {
public:
    using error::error;
};

// Non-finite result that survived regularization; carries the offending variables.
class numeric_error : public error {
public:
    numeric_error(const std::string& msg, int var_i, int var_j)
        : error(msg), var_i(var_i), var_j(var_j) {}
    int var_i;
    int var_j;
};

// Dense column-major matrix. Column-major because every hot loop walks one
// column (one variable) over all samples.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

    std::span<double> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
    std::span<const double> col(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }

    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Samples-by-variables data with +-1 labels. Construction validates the
// invariants every downstream stage relies on: labels in {+1,-1}, at least two
// samples per class, all entries finite.
struct LabeledMatrix {
    Matrix values;
    std::vector<int> labels;         // size rows(), entries +1 or -1
    std::vector<std::string> names;  // size cols(), or empty
    std::size_t n1 = 0;              // count of +1 labels
    std::size_t n2 = 0;              // count of -1 labels

    std::size_t rows() const { return values.rows(); }
    std::size_t cols() const { return values.cols(); }

    static LabeledMatrix create(Matrix values, std::vector<int> labels,
                                std::vector<std::string> names = {});

    // Variable name for reports; falls back to 1-based "V<k>" when unnamed.
    std::string name_of(std::size_t v) const;
};

struct PairStat {
    int i = -1;  // variable indices, i < j for true pairs; i == j marks a singleton
    int j = -1;
    double m = 0.0;  // squared Mahalanobis distance of the (i,j) mean difference

    bool is_singleton() const { return i == j; }
};

}  // namespace sigjeff
