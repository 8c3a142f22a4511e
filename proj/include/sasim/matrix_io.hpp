#pragma once

#include <string>

#include "sasim/matrix.hpp"

namespace sasim {

// FSMX: the on-disk matrix container. Little-endian layout:
//   bytes 0-3   magic "FSMX"
//   byte  4     format version, currently 0x01
//   bytes 5-12  rows, uint64
//   bytes 13-20 cols, uint64
//   then rows*cols float32 values, row-major
// Loaders reject bad magic, unknown versions, truncated payloads and
// dimension overflows with std::runtime_error.
void store_fsmx(const DenseMatrix& m, const std::string& path);
DenseMatrix load_fsmx(const std::string& path);

// Plain CSV, one matrix row per line. Import infers dimensions and rejects
// ragged rows and unparseable cells.
void store_csv(const DenseMatrix& m, const std::string& path);
DenseMatrix load_csv(const std::string& path);

}  // namespace sasim
