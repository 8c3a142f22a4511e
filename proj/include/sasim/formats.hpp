#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sasim/matrix.hpp"

namespace sasim {

enum class FormatKind {
    Dense,
    Csr,
    Csc,
    Coo,
    Rle4,
    Bitmap,
    TwoStageBitmap,
    Csb,
};

const char* format_name(FormatKind kind);
FormatKind format_from_name(const std::string& name);
std::vector<FormatKind> all_formats();

// Compressed sparse row. Indices are 16-bit, row pointers 32-bit, which caps
// encodable dimensions at 65535.
struct CsrMatrix {
    int rows = 0, cols = 0;
    std::vector<float> values;
    std::vector<uint16_t> col_indices;
    std::vector<uint32_t> row_ptrs;
};

struct CscMatrix {
    int rows = 0, cols = 0;
    std::vector<float> values;
    std::vector<uint16_t> row_indices;
    std::vector<uint32_t> col_ptrs;
};

struct CooEntry {
    uint16_t row = 0, col = 0;
    float value = 0.0f;
};

struct CooMatrix {
    int rows = 0, cols = 0;
    std::vector<CooEntry> entries;  // row-major scan order
};

// Zero-run-length encoding with 4-bit run codes over the row-major element
// stream. A code k in [0, 14] means "k zeros, then the next stored value".
// Code 15 means "15 zeros and the run continues": it is NOT followed by a
// value. Runs longer than 15 therefore split into 15-codes plus a final
// short code. Trailing zeros after the last value are encoded the same way;
// a final code below 15 with no values left stands for zeros only.
struct Rle4Stream {
    int rows = 0, cols = 0;
    std::vector<uint8_t> codes;  // one 4-bit code per entry, stored unpacked
    std::vector<float> values;
};

// Element bitmap over the full matrix plus the packed non-zero values,
// both in row-major order. Bit i of word i/32 covers element i.
struct BitmapMatrix {
    int rows = 0, cols = 0;
    std::vector<uint32_t> bits;  // ceil(rows*cols/32) words
    std::vector<float> values;
};

// Two-stage bitmap: a column bitmap marks columns that hold any non-zero;
// element bits exist only for those columns. Element bits and values are
// ordered column-by-column over the non-zero columns, top to bottom, which
// matches the column-streaming order of the sparse dataflows.
struct TwoStageBitmapTile {
    int rows = 0, cols = 0;
    std::vector<uint32_t> col_bitmap;   // ceil(cols/32) words
    std::vector<uint32_t> elem_bitmap;  // ceil(rows*nzc/32) words
    std::vector<float> values;
};

// Compressed sparse block: non-zero columns with disjoint row supports are
// merged into one stored column (greedy first-fit over ascending column
// index). Every merged column stores exactly `rows` entries; col_index -1
// marks a slot where no merged-in column has a non-zero.
struct CsbEntry {
    float value = 0.0f;
    int16_t col_index = -1;
};

struct CsbTile {
    int rows = 0, cols = 0;       // cols = original column count
    int merged_col_count = 0;
    std::vector<CsbEntry> entries;  // merged_col_count * rows, column-major
};

CsrMatrix encode_csr(const DenseMatrix& m);
DenseMatrix decode_csr(const CsrMatrix& csr);
CscMatrix encode_csc(const DenseMatrix& m);
DenseMatrix decode_csc(const CscMatrix& csc);
CooMatrix encode_coo(const DenseMatrix& m);
DenseMatrix decode_coo(const CooMatrix& coo);
Rle4Stream encode_rle4(const DenseMatrix& m);
DenseMatrix decode_rle4(const Rle4Stream& rle);
BitmapMatrix encode_bitmap(const DenseMatrix& m);
DenseMatrix decode_bitmap(const BitmapMatrix& bm);
TwoStageBitmapTile encode_two_stage_bitmap(const DenseMatrix& tile);
DenseMatrix decode_two_stage_bitmap(const TwoStageBitmapTile& tsb);
CsbTile encode_csb(const DenseMatrix& tile);
DenseMatrix decode_csb(const CsbTile& csb);

// 32-bit data words occupied by an encoded tile, the unit the memory
// interface moves per port per cycle.
uint64_t stored_words(const TwoStageBitmapTile& tsb);
uint64_t stored_words(const CsbTile& csb);

// Closed-form storage cost of `m` held in `kind`, in bits. Bitmaps count
// word-padded; CSR/CSC index arrays count at their native widths.
uint64_t footprint_bits(const DenseMatrix& m, FormatKind kind);

// Probability that a column of height n is entirely zero when elements are
// zero independently with probability `sparsity`.
double zero_column_probability(double sparsity, int n);

// Serialized container for encoded matrices (CLI `encode` subcommand);
// byte-level layout is documented in docs/formats.md.
std::vector<uint8_t> serialize_encoding(const DenseMatrix& m, FormatKind kind);
DenseMatrix deserialize_encoding(const std::vector<uint8_t>& bytes, FormatKind* kind_out = nullptr);

}  // namespace sasim
