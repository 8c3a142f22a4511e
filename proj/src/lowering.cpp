#include "sasim/lowering.hpp"

#include <stdexcept>
#include <string>

namespace sasim {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

int Conv2dSpec::out_h() const { return (input_h + 2 * padding - kernel_h) / stride + 1; }
int Conv2dSpec::out_w() const { return (input_w + 2 * padding - kernel_w) / stride + 1; }

void Conv2dSpec::validate() const {
    require(in_channels > 0 && out_channels > 0, "conv: channel counts must be positive");
    require(kernel_h > 0 && kernel_w > 0, "conv: kernel dimensions must be positive");
    require(stride > 0, "conv: stride must be positive");
    require(padding >= 0, "conv: padding must be non-negative");
    require(input_h > 0 && input_w > 0, "conv: input dimensions must be positive");
    require(input_h + 2 * padding >= kernel_h && input_w + 2 * padding >= kernel_w,
            "conv: kernel does not fit the padded input");
}

void FcSpec::validate() const {
    require(in_features > 0 && out_features > 0 && batch > 0,
            "fc: feature and batch counts must be positive");
}

int OperatorSpec::gemm_m() const { return kind == Kind::Conv2d ? conv.out_channels : fc.out_features; }
int OperatorSpec::gemm_k() const {
    return kind == Kind::Conv2d ? conv.in_channels * conv.kernel_h * conv.kernel_w : fc.in_features;
}
int OperatorSpec::gemm_n() const {
    return kind == Kind::Conv2d ? conv.out_h() * conv.out_w() : fc.batch;
}

void OperatorSpec::validate() const {
    if (kind == Kind::Conv2d)
        conv.validate();
    else
        fc.validate();
}

DenseMatrix im2col_weights(const Conv2dSpec& spec, const DenseMatrix& raw_weights) {
    spec.validate();
    const int k = spec.in_channels * spec.kernel_h * spec.kernel_w;
    require(raw_weights.rows() == spec.out_channels && raw_weights.cols() == k,
            "conv weights must be out_channels x (in_channels*kernel_h*kernel_w)");
    // the flattened layout already matches the GEMM weight matrix
    return raw_weights;
}

DenseMatrix im2col_inputs(const Conv2dSpec& spec, const DenseMatrix& raw_inputs) {
    spec.validate();
    require(raw_inputs.rows() == spec.in_channels &&
                raw_inputs.cols() == spec.input_h * spec.input_w,
            "conv inputs must be in_channels x (input_h*input_w)");

    const int kh = spec.kernel_h, kw = spec.kernel_w;
    const int oh = spec.out_h(), ow = spec.out_w();
    DenseMatrix cols(spec.in_channels * kh * kw, oh * ow);
    for (int c = 0; c < spec.in_channels; ++c) {
        for (int r = 0; r < kh; ++r) {
            for (int s = 0; s < kw; ++s) {
                const int patch_row = c * kh * kw + r * kw + s;
                for (int y = 0; y < oh; ++y) {
                    const int iy = y * spec.stride - spec.padding + r;
                    for (int x = 0; x < ow; ++x) {
                        const int ix = x * spec.stride - spec.padding + s;
                        if (iy < 0 || iy >= spec.input_h || ix < 0 || ix >= spec.input_w) continue;
                        cols.at(patch_row, y * ow + x) = raw_inputs.at(c, iy * spec.input_w + ix);
                    }
                }
            }
        }
    }
    return cols;
}

DenseMatrix fc_weights(const FcSpec& spec, const DenseMatrix& raw_weights) {
    spec.validate();
    require(raw_weights.rows() == spec.out_features && raw_weights.cols() == spec.in_features,
            "fc weights must be out_features x in_features");
    return raw_weights;
}

DenseMatrix fc_inputs(const FcSpec& spec, const DenseMatrix& raw_inputs) {
    spec.validate();
    require(raw_inputs.rows() == spec.in_features && raw_inputs.cols() == spec.batch,
            "fc inputs must be in_features x batch");
    return raw_inputs;
}

DenseMatrix lower_weights(const OperatorSpec& op, const DenseMatrix& raw_weights) {
    return op.kind == OperatorSpec::Kind::Conv2d ? im2col_weights(op.conv, raw_weights)
                                                 : fc_weights(op.fc, raw_weights);
}

DenseMatrix lower_inputs(const OperatorSpec& op, const DenseMatrix& raw_inputs) {
    return op.kind == OperatorSpec::Kind::Conv2d ? im2col_inputs(op.conv, raw_inputs)
                                                 : fc_inputs(op.fc, raw_inputs);
}

TileGrid tile_matrix(const DenseMatrix& m, int tile_rows, int tile_cols) {
    require(tile_rows > 0 && tile_cols > 0, "tile dimensions must be positive");
    TileGrid grid;
    grid.source_rows = m.rows();
    grid.source_cols = m.cols();
    grid.tile_rows = tile_rows;
    grid.tile_cols = tile_cols;
    grid.grid_rows = (m.rows() + tile_rows - 1) / tile_rows;
    grid.grid_cols = (m.cols() + tile_cols - 1) / tile_cols;
    grid.tiles.reserve(static_cast<std::size_t>(grid.grid_rows) * grid.grid_cols);
    for (int ti = 0; ti < grid.grid_rows; ++ti) {
        for (int tj = 0; tj < grid.grid_cols; ++tj) {
            DenseMatrix tile(tile_rows, tile_cols);
            for (int r = 0; r < tile_rows; ++r) {
                const int src_r = ti * tile_rows + r;
                if (src_r >= m.rows()) break;
                for (int c = 0; c < tile_cols; ++c) {
                    const int src_c = tj * tile_cols + c;
                    if (src_c >= m.cols()) break;
                    tile.at(r, c) = m.at(src_r, src_c);
                }
            }
            grid.tiles.push_back(std::move(tile));
        }
    }
    return grid;
}

DenseMatrix assemble_tiles(const TileGrid& grid) {
    DenseMatrix m(grid.source_rows, grid.source_cols);
    for (int ti = 0; ti < grid.grid_rows; ++ti) {
        for (int tj = 0; tj < grid.grid_cols; ++tj) {
            const DenseMatrix& tile = grid.tile(ti, tj);
            for (int r = 0; r < grid.tile_rows; ++r) {
                const int dst_r = ti * grid.tile_rows + r;
                if (dst_r >= m.rows()) break;
                for (int c = 0; c < grid.tile_cols; ++c) {
                    const int dst_c = tj * grid.tile_cols + c;
                    if (dst_c >= m.cols()) break;
                    m.at(dst_r, dst_c) = tile.at(r, c);
                }
            }
        }
    }
    return m;
}

}  // namespace sasim
