#include "sigjeff/types.hpp"

#include <cmath>

namespace sigjeff {

LabeledMatrix LabeledMatrix::create(Matrix values, std::vector<int> labels,
                                    std::vector<std::string> names) {
    const std::size_t n = values.rows();
    const std::size_t d = values.cols();
    if (d == 0 || n == 0) throw invalid_input("data matrix is empty");
    if (labels.size() != n)
        throw invalid_input("label count " + std::to_string(labels.size()) +
                            " does not match sample count " + std::to_string(n));
    if (!names.empty() && names.size() != d)
        throw invalid_input("variable name count does not match column count");

    std::size_t n1 = 0, n2 = 0;
    for (std::size_t r = 0; r < n; ++r) {
        if (labels[r] == 1)
            ++n1;
        else if (labels[r] == -1)
            ++n2;
        else
            throw invalid_input("label at row " + std::to_string(r) +
                                " is not +1 or -1");
    }
    if (n1 < 2 || n2 < 2)
        throw invalid_input("each class needs at least 2 samples (got " +
                            std::to_string(n1) + " and " + std::to_string(n2) + ")");

    for (std::size_t c = 0; c < d; ++c)
        for (double x : values.col(c))
            if (!std::isfinite(x))
                throw invalid_input("non-finite entry in column " + std::to_string(c));

    LabeledMatrix out;
    out.values = std::move(values);
    out.labels = std::move(labels);
    out.names = std::move(names);
    out.n1 = n1;
    out.n2 = n2;
    return out;
}

std::string LabeledMatrix::name_of(std::size_t v) const {
    if (v < names.size()) return names[v];
    return "V" + std::to_string(v + 1);
}

}  // namespace sigjeff
