#include "sasim/matrix_io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace sasim {

namespace {

constexpr char kMagic[4] = {'F', 'S', 'M', 'X'};
constexpr uint8_t kVersion = 0x01;

void put_u64(std::ostream& os, uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(buf), 8);
}

uint64_t get_u64(std::istream& is) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(buf[i]) << (8 * i);
    return v;
}

void put_f32(std::ostream& os, float f) {
    uint32_t bits;
    std::memcpy(&bits, &f, 4);
    unsigned char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>(bits >> (8 * i));
    os.write(reinterpret_cast<const char*>(buf), 4);
}

float get_f32(std::istream& is) {
    unsigned char buf[4];
    is.read(reinterpret_cast<char*>(buf), 4);
    uint32_t bits = 0;
    for (int i = 0; i < 4; ++i) bits |= static_cast<uint32_t>(buf[i]) << (8 * i);
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
}

}  // namespace

void store_fsmx(const DenseMatrix& m, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os.write(kMagic, 4);
    os.put(static_cast<char>(kVersion));
    put_u64(os, static_cast<uint64_t>(m.rows()));
    put_u64(os, static_cast<uint64_t>(m.cols()));
    for (float v : m.data()) put_f32(os, v);
    if (!os) throw std::runtime_error("write failed for " + path);
}

DenseMatrix load_fsmx(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);

    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error(path + ": not an FSMX file (bad magic)");
    int version = is.get();
    if (version != kVersion)
        throw std::runtime_error(path + ": unsupported FSMX version " + std::to_string(version));

    uint64_t rows = get_u64(is);
    uint64_t cols = get_u64(is);
    if (!is) throw std::runtime_error(path + ": truncated FSMX header");
    constexpr uint64_t dim_limit = std::numeric_limits<int>::max();
    if (rows == 0 || cols == 0 || rows > dim_limit || cols > dim_limit ||
        rows > (uint64_t(1) << 31) / cols)
        throw std::runtime_error(path + ": unreasonable FSMX dimensions " + std::to_string(rows) +
                                 "x" + std::to_string(cols));

    std::vector<float> data;
    data.reserve(rows * cols);
    for (uint64_t i = 0; i < rows * cols; ++i) {
        data.push_back(get_f32(is));
        if (!is) throw std::runtime_error(path + ": truncated FSMX payload");
    }
    if (is.peek() != EOF) throw std::runtime_error(path + ": trailing bytes after FSMX payload");
    return DenseMatrix(static_cast<int>(rows), static_cast<int>(cols), std::move(data));
}

void store_csv(const DenseMatrix& m, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os.precision(9);  // round-trips float32 exactly
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j) os << ',';
            os << m.at(i, j);
        }
        os << '\n';
    }
    if (!os) throw std::runtime_error("write failed for " + path);
}

DenseMatrix load_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);

    std::vector<float> data;
    int cols = -1;
    int rows = 0;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() && is.peek() == EOF) break;
        std::stringstream ls(line);
        std::string cell;
        int line_cols = 0;
        while (std::getline(ls, cell, ',')) {
            try {
                std::size_t used = 0;
                data.push_back(std::stof(cell, &used));
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw std::runtime_error(path + ": bad CSV cell '" + cell + "' on line " +
                                         std::to_string(rows + 1));
            }
            ++line_cols;
        }
        if (cols < 0)
            cols = line_cols;
        else if (cols != line_cols)
            throw std::runtime_error(path + ": ragged CSV row on line " + std::to_string(rows + 1));
        ++rows;
    }
    if (rows == 0 || cols <= 0) throw std::runtime_error(path + ": empty CSV");
    return DenseMatrix(rows, cols, std::move(data));
}

}  // namespace sasim
