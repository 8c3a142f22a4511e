#include <cstring>
#include <stdexcept>

#include "sasim/formats.hpp"

// Byte-level container for encoded matrices, layout documented in
// docs/formats.md. All multi-byte fields are little-endian.

namespace sasim {

namespace {

constexpr char kMagic[4] = {'F', 'S', 'E', 'N'};

class ByteWriter {
public:
    std::vector<uint8_t> bytes;

    void u8(uint8_t v) { bytes.push_back(v); }
    void u16(uint16_t v) {
        for (int i = 0; i < 2; ++i) bytes.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void f32(float f) {
        uint32_t bits;
        std::memcpy(&bits, &f, 4);
        u32(bits);
    }
};

class ByteReader {
public:
    explicit ByteReader(const std::vector<uint8_t>& bytes) : bytes_(bytes) {}

    uint8_t u8() { return bytes_[need(1)]; }
    uint16_t u16() {
        std::size_t p = need(2);
        return static_cast<uint16_t>(bytes_[p] | (bytes_[p + 1] << 8));
    }
    uint32_t u32() {
        std::size_t p = need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(bytes_[p + i]) << (8 * i);
        return v;
    }
    uint64_t u64() {
        std::size_t p = need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(bytes_[p + i]) << (8 * i);
        return v;
    }
    float f32() {
        uint32_t bits = u32();
        float f;
        std::memcpy(&f, &bits, 4);
        return f;
    }
    bool exhausted() const { return pos_ == bytes_.size(); }

private:
    std::size_t need(std::size_t n) {
        if (pos_ + n > bytes_.size()) throw std::runtime_error("encoding container truncated");
        std::size_t p = pos_;
        pos_ += n;
        return p;
    }

    const std::vector<uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

uint64_t checked_count(uint64_t n, uint64_t limit) {
    if (n > limit) throw std::runtime_error("encoding container: implausible element count");
    return n;
}

}  // namespace

std::vector<uint8_t> serialize_encoding(const DenseMatrix& m, FormatKind kind) {
    ByteWriter w;
    w.bytes.insert(w.bytes.end(), kMagic, kMagic + 4);
    w.u8(static_cast<uint8_t>(kind));
    w.u64(static_cast<uint64_t>(m.rows()));
    w.u64(static_cast<uint64_t>(m.cols()));
    switch (kind) {
        case FormatKind::Dense:
            for (float v : m.data()) w.f32(v);
            break;
        case FormatKind::Csr: {
            CsrMatrix csr = encode_csr(m);
            w.u64(csr.values.size());
            for (float v : csr.values) w.f32(v);
            for (uint16_t c : csr.col_indices) w.u16(c);
            for (uint32_t p : csr.row_ptrs) w.u32(p);
            break;
        }
        case FormatKind::Csc: {
            CscMatrix csc = encode_csc(m);
            w.u64(csc.values.size());
            for (float v : csc.values) w.f32(v);
            for (uint16_t r : csc.row_indices) w.u16(r);
            for (uint32_t p : csc.col_ptrs) w.u32(p);
            break;
        }
        case FormatKind::Coo: {
            CooMatrix coo = encode_coo(m);
            w.u64(coo.entries.size());
            for (const CooEntry& e : coo.entries) {
                w.u16(e.row);
                w.u16(e.col);
                w.f32(e.value);
            }
            break;
        }
        case FormatKind::Rle4: {
            Rle4Stream rle = encode_rle4(m);
            w.u64(rle.codes.size());
            for (std::size_t i = 0; i < rle.codes.size(); i += 2) {
                uint8_t packed = rle.codes[i] & 0x0f;
                if (i + 1 < rle.codes.size()) packed |= (rle.codes[i + 1] & 0x0f) << 4;
                w.u8(packed);
            }
            w.u64(rle.values.size());
            for (float v : rle.values) w.f32(v);
            break;
        }
        case FormatKind::Bitmap: {
            BitmapMatrix bm = encode_bitmap(m);
            for (uint32_t word : bm.bits) w.u32(word);
            w.u64(bm.values.size());
            for (float v : bm.values) w.f32(v);
            break;
        }
        case FormatKind::TwoStageBitmap: {
            TwoStageBitmapTile tsb = encode_two_stage_bitmap(m);
            for (uint32_t word : tsb.col_bitmap) w.u32(word);
            w.u64(tsb.elem_bitmap.size());
            for (uint32_t word : tsb.elem_bitmap) w.u32(word);
            w.u64(tsb.values.size());
            for (float v : tsb.values) w.f32(v);
            break;
        }
        case FormatKind::Csb: {
            CsbTile csb = encode_csb(m);
            w.u32(static_cast<uint32_t>(csb.merged_col_count));
            for (const CsbEntry& e : csb.entries) {
                w.f32(e.value);
                w.u16(static_cast<uint16_t>(e.col_index));
            }
            break;
        }
    }
    return w.bytes;
}

DenseMatrix deserialize_encoding(const std::vector<uint8_t>& bytes, FormatKind* kind_out) {
    ByteReader r(bytes);
    char magic[4];
    for (char& ch : magic) ch = static_cast<char>(r.u8());
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("not an encoding container (bad magic)");
    uint8_t kind_byte = r.u8();
    if (kind_byte > static_cast<uint8_t>(FormatKind::Csb))
        throw std::runtime_error("encoding container: unknown format id");
    FormatKind kind = static_cast<FormatKind>(kind_byte);
    if (kind_out) *kind_out = kind;

    uint64_t rows64 = r.u64(), cols64 = r.u64();
    if (rows64 == 0 || cols64 == 0 || rows64 > 1u << 20 || cols64 > 1u << 20)
        throw std::runtime_error("encoding container: implausible dimensions");
    const int rows = static_cast<int>(rows64), cols = static_cast<int>(cols64);
    const uint64_t total = rows64 * cols64;

    DenseMatrix out;
    switch (kind) {
        case FormatKind::Dense: {
            std::vector<float> data;
            data.reserve(total);
            for (uint64_t i = 0; i < total; ++i) data.push_back(r.f32());
            out = DenseMatrix(rows, cols, std::move(data));
            break;
        }
        case FormatKind::Csr: {
            CsrMatrix csr;
            csr.rows = rows;
            csr.cols = cols;
            uint64_t nnz = checked_count(r.u64(), total);
            for (uint64_t i = 0; i < nnz; ++i) csr.values.push_back(r.f32());
            for (uint64_t i = 0; i < nnz; ++i) csr.col_indices.push_back(r.u16());
            for (int i = 0; i <= rows; ++i) csr.row_ptrs.push_back(r.u32());
            out = decode_csr(csr);
            break;
        }
        case FormatKind::Csc: {
            CscMatrix csc;
            csc.rows = rows;
            csc.cols = cols;
            uint64_t nnz = checked_count(r.u64(), total);
            for (uint64_t i = 0; i < nnz; ++i) csc.values.push_back(r.f32());
            for (uint64_t i = 0; i < nnz; ++i) csc.row_indices.push_back(r.u16());
            for (int i = 0; i <= cols; ++i) csc.col_ptrs.push_back(r.u32());
            out = decode_csc(csc);
            break;
        }
        case FormatKind::Coo: {
            CooMatrix coo;
            coo.rows = rows;
            coo.cols = cols;
            uint64_t nnz = checked_count(r.u64(), total);
            for (uint64_t i = 0; i < nnz; ++i) {
                CooEntry e;
                e.row = r.u16();
                e.col = r.u16();
                e.value = r.f32();
                coo.entries.push_back(e);
            }
            out = decode_coo(coo);
            break;
        }
        case FormatKind::Rle4: {
            Rle4Stream rle;
            rle.rows = rows;
            rle.cols = cols;
            uint64_t code_count = checked_count(r.u64(), total + total / 15 + 1);
            for (uint64_t i = 0; i < code_count; i += 2) {
                uint8_t packed = r.u8();
                rle.codes.push_back(packed & 0x0f);
                if (i + 1 < code_count) rle.codes.push_back(packed >> 4);
            }
            uint64_t nnz = checked_count(r.u64(), total);
            for (uint64_t i = 0; i < nnz; ++i) rle.values.push_back(r.f32());
            out = decode_rle4(rle);
            break;
        }
        case FormatKind::Bitmap: {
            BitmapMatrix bm;
            bm.rows = rows;
            bm.cols = cols;
            for (uint64_t i = 0; i < (total + 31) / 32; ++i) bm.bits.push_back(r.u32());
            uint64_t nnz = checked_count(r.u64(), total);
            for (uint64_t i = 0; i < nnz; ++i) bm.values.push_back(r.f32());
            out = decode_bitmap(bm);
            break;
        }
        case FormatKind::TwoStageBitmap: {
            TwoStageBitmapTile tsb;
            tsb.rows = rows;
            tsb.cols = cols;
            for (uint64_t i = 0; i < (cols64 + 31) / 32; ++i) tsb.col_bitmap.push_back(r.u32());
            uint64_t elem_words = checked_count(r.u64(), (total + 31) / 32);
            for (uint64_t i = 0; i < elem_words; ++i) tsb.elem_bitmap.push_back(r.u32());
            uint64_t nnz = checked_count(r.u64(), total);
            for (uint64_t i = 0; i < nnz; ++i) tsb.values.push_back(r.f32());
            out = decode_two_stage_bitmap(tsb);
            break;
        }
        case FormatKind::Csb: {
            CsbTile csb;
            csb.rows = rows;
            csb.cols = cols;
            csb.merged_col_count = static_cast<int>(checked_count(r.u32(), cols64));
            for (int i = 0; i < csb.merged_col_count * rows; ++i) {
                CsbEntry e;
                e.value = r.f32();
                e.col_index = static_cast<int16_t>(r.u16());
                csb.entries.push_back(e);
            }
            out = decode_csb(csb);
            break;
        }
    }
    if (!r.exhausted()) throw std::runtime_error("encoding container: trailing bytes");
    return out;
}

}  // namespace sasim
