#pragma once

#include <cstdint>
#include <vector>

namespace sasim {

// Row-major dense float32 matrix. The single value type used throughout:
// weights, inputs and outputs are all 32-bit floats.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols);
    DenseMatrix(int rows, int cols, std::vector<float> data);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    float& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    float at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    const std::vector<float>& data() const { return data_; }
    std::vector<float>& data() { return data_; }

    bool operator==(const DenseMatrix& other) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<float> data_;
};

struct Sparsity {
    std::size_t zero_count = 0;
    std::size_t total = 0;

    double fraction() const { return total == 0 ? 0.0 : static_cast<double>(zero_count) / static_cast<double>(total); }
};

Sparsity measure_sparsity(const DenseMatrix& m);

// Reference GEMM: accumulates every dot product in 64-bit floats and rounds
// once to float32 per output element. Serves as the functional oracle for
// the simulator, whose PEs accumulate in 32-bit.
DenseMatrix gemm_ref(const DenseMatrix& w, const DenseMatrix& x);

// Bernoulli-sparse random matrix: each element is zero with probability
// `sparsity`, otherwise drawn uniformly from [-1, 1] excluding zero.
// Element decisions are made in row-major order from a Xoshiro256pp stream,
// so (rows, cols, sparsity, seed) fully determines the result.
DenseMatrix random_sparse(int rows, int cols, double sparsity, uint64_t seed);

}  // namespace sasim
