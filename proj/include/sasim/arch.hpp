#pragma once

#include <string>
#include <vector>

namespace sasim {

// Geometry and memory interface of one accelerator instance. The PE grid is
// pe_rows x pe_cols; load units sit on the left column and top row, store
// units on the bottom row and right column. The memory interface moves one
// 32-bit word per port per cycle.
struct ArchConfig {
    int pe_rows = 4;
    int pe_cols = 4;
    int regfile_size = 9;
    int mem_ports = 8;
    int port_width_bits = 32;
    int word_bits = 32;

    void validate() const;
};

// The seven supported dataflows. Lower-case d prefixes the dense schedules,
// s the sparse ones driven by two-stage-bitmap weights; cs-OS streams
// merged-column weights.
enum class Dataflow { Dos, Dws, Dis, Sos, Sws, Sis, CsOs };

const char* dataflow_name(Dataflow df);
Dataflow dataflow_from_name(const std::string& name);
std::vector<Dataflow> all_dataflows();  // fixed enumeration order, also the tie-break order
bool dataflow_is_sparse(Dataflow df);

}  // namespace sasim
