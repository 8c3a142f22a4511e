#include "sasim/matrix.hpp"

#include <stdexcept>
#include <string>

#include "sasim/rng.hpp"

namespace sasim {

namespace {

void check_dims(int rows, int cols) {
    if (rows <= 0 || cols <= 0)
        throw std::invalid_argument("matrix dimensions must be positive, got " +
                                    std::to_string(rows) + "x" + std::to_string(cols));
}

}  // namespace

DenseMatrix::DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    check_dims(rows, cols);
    data_.assign(static_cast<std::size_t>(rows) * cols, 0.0f);
}

DenseMatrix::DenseMatrix(int rows, int cols, std::vector<float> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    check_dims(rows, cols);
    if (data_.size() != static_cast<std::size_t>(rows) * cols)
        throw std::invalid_argument("matrix data size " + std::to_string(data_.size()) +
                                    " does not match " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
}

Sparsity measure_sparsity(const DenseMatrix& m) {
    Sparsity s;
    s.total = m.size();
    for (float v : m.data())
        if (v == 0.0f) ++s.zero_count;
    return s;
}

DenseMatrix gemm_ref(const DenseMatrix& w, const DenseMatrix& x) {
    if (w.cols() != x.rows())
        throw std::invalid_argument("gemm dimension mismatch: " + std::to_string(w.cols()) +
                                    " vs " + std::to_string(x.rows()));
    DenseMatrix out(w.rows(), x.cols());
    for (int i = 0; i < w.rows(); ++i) {
        for (int j = 0; j < x.cols(); ++j) {
            double acc = 0.0;
            for (int k = 0; k < w.cols(); ++k)
                acc += static_cast<double>(w.at(i, k)) * static_cast<double>(x.at(k, j));
            out.at(i, j) = static_cast<float>(acc);
        }
    }
    return out;
}

DenseMatrix random_sparse(int rows, int cols, double sparsity, uint64_t seed) {
    if (sparsity < 0.0 || sparsity > 1.0)
        throw std::invalid_argument("sparsity must lie in [0, 1], got " + std::to_string(sparsity));
    DenseMatrix m(rows, cols);
    Xoshiro256pp rng(seed);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (rng.next_unit() < sparsity)
                continue;  // stays zero
            m.at(i, j) = rng.next_signed_unit_nonzero();
        }
    }
    return m;
}

}  // namespace sasim
