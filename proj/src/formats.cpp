#include "sasim/formats.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace sasim {

namespace {

constexpr int kMaxEncodeDim = 65535;  // 16-bit index formats cap the dimensions

void check_encodable(const DenseMatrix& m, const char* what) {
    if (m.rows() > kMaxEncodeDim || m.cols() > kMaxEncodeDim)
        throw std::invalid_argument(std::string(what) + ": dimensions exceed the 16-bit index range");
}

uint64_t count_nonzeros(const DenseMatrix& m) {
    uint64_t nnz = 0;
    for (float v : m.data())
        if (v != 0.0f) ++nnz;
    return nnz;
}

std::vector<int> nonzero_columns(const DenseMatrix& m) {
    std::vector<int> cols;
    for (int c = 0; c < m.cols(); ++c) {
        for (int r = 0; r < m.rows(); ++r) {
            if (m.at(r, c) != 0.0f) {
                cols.push_back(c);
                break;
            }
        }
    }
    return cols;
}

uint64_t words_for_bits(uint64_t bits) { return (bits + 31) / 32; }

void set_bit(std::vector<uint32_t>& words, uint64_t i) { words[i / 32] |= uint32_t(1) << (i % 32); }

bool get_bit(const std::vector<uint32_t>& words, uint64_t i) {
    return (words[i / 32] >> (i % 32)) & 1u;
}

}  // namespace

const char* format_name(FormatKind kind) {
    switch (kind) {
        case FormatKind::Dense: return "dense";
        case FormatKind::Csr: return "csr";
        case FormatKind::Csc: return "csc";
        case FormatKind::Coo: return "coo";
        case FormatKind::Rle4: return "rle4";
        case FormatKind::Bitmap: return "bitmap";
        case FormatKind::TwoStageBitmap: return "two-stage-bitmap";
        case FormatKind::Csb: return "csb";
    }
    throw std::logic_error("unreachable");
}

FormatKind format_from_name(const std::string& name) {
    for (FormatKind kind : all_formats())
        if (name == format_name(kind)) return kind;
    throw std::invalid_argument("unknown format '" + name + "'");
}

std::vector<FormatKind> all_formats() {
    return {FormatKind::Dense,  FormatKind::Csr,    FormatKind::Csc,
            FormatKind::Coo,    FormatKind::Rle4,   FormatKind::Bitmap,
            FormatKind::TwoStageBitmap, FormatKind::Csb};
}

CsrMatrix encode_csr(const DenseMatrix& m) {
    check_encodable(m, "csr");
    CsrMatrix csr;
    csr.rows = m.rows();
    csr.cols = m.cols();
    csr.row_ptrs.reserve(m.rows() + 1);
    csr.row_ptrs.push_back(0);
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            if (m.at(r, c) != 0.0f) {
                csr.values.push_back(m.at(r, c));
                csr.col_indices.push_back(static_cast<uint16_t>(c));
            }
        }
        csr.row_ptrs.push_back(static_cast<uint32_t>(csr.values.size()));
    }
    return csr;
}

DenseMatrix decode_csr(const CsrMatrix& csr) {
    if (csr.row_ptrs.size() != static_cast<std::size_t>(csr.rows) + 1 ||
        csr.row_ptrs.front() != 0 || csr.row_ptrs.back() != csr.values.size() ||
        csr.values.size() != csr.col_indices.size())
        throw std::runtime_error("csr: inconsistent stream structure");
    DenseMatrix m(csr.rows, csr.cols);
    for (int r = 0; r < csr.rows; ++r) {
        if (csr.row_ptrs[r] > csr.row_ptrs[r + 1])
            throw std::runtime_error("csr: row pointers not monotone");
        int prev = -1;
        for (uint32_t i = csr.row_ptrs[r]; i < csr.row_ptrs[r + 1]; ++i) {
            int c = csr.col_indices[i];
            if (c >= csr.cols || c <= prev)
                throw std::runtime_error("csr: column index out of range or out of order");
            m.at(r, c) = csr.values[i];
            prev = c;
        }
    }
    return m;
}

CscMatrix encode_csc(const DenseMatrix& m) {
    check_encodable(m, "csc");
    CscMatrix csc;
    csc.rows = m.rows();
    csc.cols = m.cols();
    csc.col_ptrs.reserve(m.cols() + 1);
    csc.col_ptrs.push_back(0);
    for (int c = 0; c < m.cols(); ++c) {
        for (int r = 0; r < m.rows(); ++r) {
            if (m.at(r, c) != 0.0f) {
                csc.values.push_back(m.at(r, c));
                csc.row_indices.push_back(static_cast<uint16_t>(r));
            }
        }
        csc.col_ptrs.push_back(static_cast<uint32_t>(csc.values.size()));
    }
    return csc;
}

DenseMatrix decode_csc(const CscMatrix& csc) {
    if (csc.col_ptrs.size() != static_cast<std::size_t>(csc.cols) + 1 ||
        csc.col_ptrs.front() != 0 || csc.col_ptrs.back() != csc.values.size() ||
        csc.values.size() != csc.row_indices.size())
        throw std::runtime_error("csc: inconsistent stream structure");
    DenseMatrix m(csc.rows, csc.cols);
    for (int c = 0; c < csc.cols; ++c) {
        if (csc.col_ptrs[c] > csc.col_ptrs[c + 1])
            throw std::runtime_error("csc: column pointers not monotone");
        int prev = -1;
        for (uint32_t i = csc.col_ptrs[c]; i < csc.col_ptrs[c + 1]; ++i) {
            int r = csc.row_indices[i];
            if (r >= csc.rows || r <= prev)
                throw std::runtime_error("csc: row index out of range or out of order");
            m.at(r, c) = csc.values[i];
            prev = r;
        }
    }
    return m;
}

CooMatrix encode_coo(const DenseMatrix& m) {
    check_encodable(m, "coo");
    CooMatrix coo;
    coo.rows = m.rows();
    coo.cols = m.cols();
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            if (m.at(r, c) != 0.0f)
                coo.entries.push_back({static_cast<uint16_t>(r), static_cast<uint16_t>(c), m.at(r, c)});
    return coo;
}

DenseMatrix decode_coo(const CooMatrix& coo) {
    DenseMatrix m(coo.rows, coo.cols);
    int64_t prev = -1;
    for (const CooEntry& e : coo.entries) {
        if (e.row >= coo.rows || e.col >= coo.cols)
            throw std::runtime_error("coo: entry out of range");
        int64_t pos = static_cast<int64_t>(e.row) * coo.cols + e.col;
        if (pos <= prev) throw std::runtime_error("coo: entries out of order or duplicated");
        m.at(e.row, e.col) = e.value;
        prev = pos;
    }
    return m;
}

Rle4Stream encode_rle4(const DenseMatrix& m) {
    Rle4Stream rle;
    rle.rows = m.rows();
    rle.cols = m.cols();
    uint64_t run = 0;
    for (float v : m.data()) {
        if (v == 0.0f) {
            ++run;
            continue;
        }
        while (run >= 15) {
            rle.codes.push_back(15);
            run -= 15;
        }
        rle.codes.push_back(static_cast<uint8_t>(run));
        rle.values.push_back(v);
        run = 0;
    }
    // trailing zeros: continuation codes plus one short code if a remainder is left
    while (run >= 15) {
        rle.codes.push_back(15);
        run -= 15;
    }
    if (run > 0) rle.codes.push_back(static_cast<uint8_t>(run));
    return rle;
}

DenseMatrix decode_rle4(const Rle4Stream& rle) {
    const uint64_t total = static_cast<uint64_t>(rle.rows) * rle.cols;
    std::vector<float> data;
    data.reserve(total);
    std::size_t vi = 0;
    for (std::size_t ci = 0; ci < rle.codes.size(); ++ci) {
        uint8_t code = rle.codes[ci];
        if (code > 15) throw std::runtime_error("rle4: code exceeds 4 bits");
        for (uint8_t z = 0; z < code && code < 16; ++z) data.push_back(0.0f);
        if (code < 15) {
            if (vi < rle.values.size()) {
                data.push_back(rle.values[vi++]);
            } else if (ci + 1 != rle.codes.size()) {
                throw std::runtime_error("rle4: values exhausted before the final code");
            }
        }
    }
    if (vi != rle.values.size()) throw std::runtime_error("rle4: unused values in stream");
    if (data.size() != total)
        throw std::runtime_error("rle4: decoded element count does not match dimensions");
    return DenseMatrix(rle.rows, rle.cols, std::move(data));
}

BitmapMatrix encode_bitmap(const DenseMatrix& m) {
    BitmapMatrix bm;
    bm.rows = m.rows();
    bm.cols = m.cols();
    bm.bits.assign(words_for_bits(m.size()), 0);
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m.data()[i] != 0.0f) {
            set_bit(bm.bits, i);
            bm.values.push_back(m.data()[i]);
        }
    }
    return bm;
}

DenseMatrix decode_bitmap(const BitmapMatrix& bm) {
    const uint64_t total = static_cast<uint64_t>(bm.rows) * bm.cols;
    if (bm.bits.size() != words_for_bits(total))
        throw std::runtime_error("bitmap: bit array size mismatch");
    uint64_t popcount = 0;
    for (uint32_t w : bm.bits) popcount += __builtin_popcount(w);
    if (popcount != bm.values.size())
        throw std::runtime_error("bitmap: popcount does not match value count");
    DenseMatrix m(bm.rows, bm.cols);
    std::size_t vi = 0;
    for (uint64_t i = 0; i < total; ++i)
        if (get_bit(bm.bits, i)) m.data()[i] = bm.values[vi++];
    // set bits beyond the element range would have inflated popcount; recheck
    for (uint64_t i = total; i < bm.bits.size() * 32ull; ++i)
        if (get_bit(bm.bits, i)) throw std::runtime_error("bitmap: set bit beyond element range");
    return m;
}

TwoStageBitmapTile encode_two_stage_bitmap(const DenseMatrix& tile) {
    TwoStageBitmapTile tsb;
    tsb.rows = tile.rows();
    tsb.cols = tile.cols();
    const std::vector<int> nz_cols = nonzero_columns(tile);
    tsb.col_bitmap.assign(words_for_bits(tile.cols()), 0);
    tsb.elem_bitmap.assign(words_for_bits(static_cast<uint64_t>(tile.rows()) * nz_cols.size()), 0);
    uint64_t bit = 0;
    for (int c : nz_cols) {
        set_bit(tsb.col_bitmap, c);
        for (int r = 0; r < tile.rows(); ++r, ++bit) {
            if (tile.at(r, c) != 0.0f) {
                set_bit(tsb.elem_bitmap, bit);
                tsb.values.push_back(tile.at(r, c));
            }
        }
    }
    return tsb;
}

DenseMatrix decode_two_stage_bitmap(const TwoStageBitmapTile& tsb) {
    if (tsb.col_bitmap.size() != words_for_bits(tsb.cols))
        throw std::runtime_error("two-stage bitmap: column bitmap size mismatch");
    for (uint64_t i = tsb.cols; i < tsb.col_bitmap.size() * 32ull; ++i)
        if (get_bit(tsb.col_bitmap, i))
            throw std::runtime_error("two-stage bitmap: column bit beyond range");
    uint64_t nzc = 0;
    for (uint32_t w : tsb.col_bitmap) nzc += __builtin_popcount(w);

    const uint64_t elem_bits = static_cast<uint64_t>(tsb.rows) * nzc;
    if (tsb.elem_bitmap.size() != words_for_bits(elem_bits))
        throw std::runtime_error("two-stage bitmap: element bitmap size mismatch");
    for (uint64_t i = elem_bits; i < tsb.elem_bitmap.size() * 32ull; ++i)
        if (get_bit(tsb.elem_bitmap, i))
            throw std::runtime_error("two-stage bitmap: element bit beyond range");
    uint64_t popcount = 0;
    for (uint32_t w : tsb.elem_bitmap) popcount += __builtin_popcount(w);
    if (popcount != tsb.values.size())
        throw std::runtime_error("two-stage bitmap: popcount does not match value count");

    DenseMatrix m(tsb.rows, tsb.cols);
    uint64_t bit = 0;
    std::size_t vi = 0;
    for (int c = 0; c < tsb.cols; ++c) {
        if (!get_bit(tsb.col_bitmap, c)) continue;
        bool any = false;
        for (int r = 0; r < tsb.rows; ++r, ++bit) {
            if (get_bit(tsb.elem_bitmap, bit)) {
                m.at(r, c) = tsb.values[vi++];
                any = true;
            }
        }
        if (!any)
            throw std::runtime_error("two-stage bitmap: column flagged non-zero has no element bits");
    }
    return m;
}

CsbTile encode_csb(const DenseMatrix& tile) {
    if (tile.cols() > 32767)
        throw std::invalid_argument("csb: column count exceeds the int16 index range");
    CsbTile csb;
    csb.rows = tile.rows();
    csb.cols = tile.cols();

    // Greedy first-fit: walk non-zero columns in ascending order and merge
    // each into the first group whose accumulated support it does not touch.
    struct Group {
        std::vector<bool> support;
        std::vector<int> members;
    };
    std::vector<Group> groups;
    for (int c : nonzero_columns(tile)) {
        std::vector<bool> support(tile.rows(), false);
        for (int r = 0; r < tile.rows(); ++r) support[r] = tile.at(r, c) != 0.0f;
        Group* home = nullptr;
        for (Group& g : groups) {
            bool overlap = false;
            for (int r = 0; r < tile.rows(); ++r)
                if (support[r] && g.support[r]) {
                    overlap = true;
                    break;
                }
            if (!overlap) {
                home = &g;
                break;
            }
        }
        if (!home) {
            groups.push_back({std::vector<bool>(tile.rows(), false), {}});
            home = &groups.back();
        }
        for (int r = 0; r < tile.rows(); ++r)
            if (support[r]) home->support[r] = true;
        home->members.push_back(c);
    }

    csb.merged_col_count = static_cast<int>(groups.size());
    csb.entries.assign(static_cast<std::size_t>(csb.merged_col_count) * tile.rows(), CsbEntry{});
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (int c : groups[g].members) {
            for (int r = 0; r < tile.rows(); ++r) {
                if (tile.at(r, c) != 0.0f)
                    csb.entries[g * tile.rows() + r] = {tile.at(r, c), static_cast<int16_t>(c)};
            }
        }
    }
    return csb;
}

DenseMatrix decode_csb(const CsbTile& csb) {
    if (csb.entries.size() != static_cast<std::size_t>(csb.merged_col_count) * csb.rows)
        throw std::runtime_error("csb: entry count does not match merged_col_count * rows");
    DenseMatrix m(csb.rows, csb.cols);
    std::vector<bool> written(m.size(), false);
    for (int g = 0; g < csb.merged_col_count; ++g) {
        for (int r = 0; r < csb.rows; ++r) {
            const CsbEntry& e = csb.entries[static_cast<std::size_t>(g) * csb.rows + r];
            if (e.col_index < 0) {
                if (e.col_index != -1) throw std::runtime_error("csb: negative index other than -1");
                continue;
            }
            if (e.col_index >= csb.cols) throw std::runtime_error("csb: col_index out of range");
            std::size_t pos = static_cast<std::size_t>(r) * csb.cols + e.col_index;
            if (written[pos]) throw std::runtime_error("csb: overlapping entries for one element");
            written[pos] = true;
            m.at(r, e.col_index) = e.value;
        }
    }
    return m;
}

uint64_t stored_words(const TwoStageBitmapTile& tsb) {
    return tsb.col_bitmap.size() + tsb.elem_bitmap.size() + tsb.values.size();
}

uint64_t stored_words(const CsbTile& csb) {
    // value word plus half an index word per entry, plus the count header
    return 1 + csb.entries.size() + (csb.entries.size() + 1) / 2;
}

uint64_t footprint_bits(const DenseMatrix& m, FormatKind kind) {
    const uint64_t rows = m.rows(), cols = m.cols();
    const uint64_t nnz = count_nonzeros(m);
    switch (kind) {
        case FormatKind::Dense:
            return rows * cols * 32;
        case FormatKind::Csr:
            return nnz * (32 + 16) + (rows + 1) * 32;
        case FormatKind::Csc:
            return nnz * (32 + 16) + (cols + 1) * 32;
        case FormatKind::Coo:
            return nnz * (16 + 16 + 32);
        case FormatKind::Rle4:
            return encode_rle4(m).codes.size() * 4 + nnz * 32;
        case FormatKind::Bitmap:
            return nnz * 32 + words_for_bits(rows * cols) * 32;
        case FormatKind::TwoStageBitmap: {
            const uint64_t nzc = nonzero_columns(m).size();
            return nnz * 32 + words_for_bits(cols) * 32 + words_for_bits(rows * nzc) * 32;
        }
        case FormatKind::Csb: {
            const CsbTile csb = encode_csb(m);
            return static_cast<uint64_t>(csb.merged_col_count) * rows * (32 + 16) + 32;
        }
    }
    throw std::logic_error("unreachable");
}

double zero_column_probability(double sparsity, int n) {
    if (n < 1) throw std::invalid_argument("column height must be at least 1");
    if (sparsity < 0.0 || sparsity > 1.0)
        throw std::invalid_argument("sparsity must lie in [0, 1]");
    return std::pow(sparsity, n);
}

}  // namespace sasim
