#pragma once

#include <string>
#include <vector>

#include "sasim/matrix.hpp"

namespace sasim {

// Conv weights arrive flattened as out_channels x (in_channels*kernel_h*kernel_w)
// with the column index laid out channel-major, then kernel row, then kernel
// column. Inputs arrive as in_channels x (input_h*input_w).
struct Conv2dSpec {
    int in_channels = 1;
    int out_channels = 1;
    int kernel_h = 1;
    int kernel_w = 1;
    int stride = 1;
    int padding = 0;
    int input_h = 1;
    int input_w = 1;

    int out_h() const;
    int out_w() const;
    void validate() const;
};

struct FcSpec {
    int in_features = 1;
    int out_features = 1;
    int batch = 1;

    void validate() const;
};

struct OperatorSpec {
    enum class Kind { Conv2d, Fc };

    Kind kind = Kind::Fc;
    std::string name;
    Conv2dSpec conv;
    FcSpec fc;

    // GEMM dimensions after lowering: weights are m x k, inputs k x n.
    int gemm_m() const;
    int gemm_k() const;
    int gemm_n() const;
    void validate() const;
};

// im2col: turns a convolution into one GEMM. The weight matrix keeps the raw
// flattened layout; the input matrix gathers one receptive-field patch per
// output pixel, zero-filled where the window hangs over the padding border.
DenseMatrix im2col_weights(const Conv2dSpec& spec, const DenseMatrix& raw_weights);
DenseMatrix im2col_inputs(const Conv2dSpec& spec, const DenseMatrix& raw_inputs);

DenseMatrix fc_weights(const FcSpec& spec, const DenseMatrix& raw_weights);
DenseMatrix fc_inputs(const FcSpec& spec, const DenseMatrix& raw_inputs);

DenseMatrix lower_weights(const OperatorSpec& op, const DenseMatrix& raw_weights);
DenseMatrix lower_inputs(const OperatorSpec& op, const DenseMatrix& raw_inputs);

// Regular tiling with zero-padded edge tiles. Tiles are stored row-major in
// grid order; tile (ti, tj) covers rows [ti*tile_rows, ...) of the source.
struct TileGrid {
    int source_rows = 0, source_cols = 0;
    int tile_rows = 0, tile_cols = 0;
    int grid_rows = 0, grid_cols = 0;
    std::vector<DenseMatrix> tiles;

    const DenseMatrix& tile(int ti, int tj) const { return tiles[static_cast<std::size_t>(ti) * grid_cols + tj]; }
};

TileGrid tile_matrix(const DenseMatrix& m, int tile_rows, int tile_cols);

// Inverse of tile_matrix: crops the padding back off.
DenseMatrix assemble_tiles(const TileGrid& grid);

}  // namespace sasim
