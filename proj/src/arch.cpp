#include "sasim/arch.hpp"

#include <stdexcept>

namespace sasim {

void ArchConfig::validate() const {
    if (pe_rows < 2 || pe_cols < 2) {
        throw std::invalid_argument("ArchConfig: PE grid must be at least 2x2");
    }
    if (regfile_size < 9) {
        throw std::invalid_argument("ArchConfig: register file needs at least 9 slots per PE");
    }
    if (mem_ports < 1) {
        throw std::invalid_argument("ArchConfig: need at least one memory port");
    }
    if (port_width_bits != 32) {
        throw std::invalid_argument("ArchConfig: only 32-bit ports are supported");
    }
    if (word_bits != 32) {
        throw std::invalid_argument("ArchConfig: only 32-bit words are supported");
    }
}

const char* dataflow_name(Dataflow df) {
    switch (df) {
        case Dataflow::Dos: return "dOS";
        case Dataflow::Dws: return "dWS";
        case Dataflow::Dis: return "dIS";
        case Dataflow::Sos: return "sOS";
        case Dataflow::Sws: return "sWS";
        case Dataflow::Sis: return "sIS";
        case Dataflow::CsOs: return "csOS";
    }
    throw std::invalid_argument("dataflow_name: unknown dataflow");
}

Dataflow dataflow_from_name(const std::string& name) {
    for (Dataflow df : all_dataflows()) {
        if (name == dataflow_name(df)) return df;
    }
    throw std::invalid_argument("unknown dataflow name: " + name);
}

std::vector<Dataflow> all_dataflows() {
    return {Dataflow::Dos, Dataflow::Dws, Dataflow::Dis, Dataflow::Sos,
            Dataflow::Sws, Dataflow::Sis, Dataflow::CsOs};
}

bool dataflow_is_sparse(Dataflow df) {
    return df == Dataflow::Sos || df == Dataflow::Sws || df == Dataflow::Sis ||
           df == Dataflow::CsOs;
}

}  // namespace sasim
