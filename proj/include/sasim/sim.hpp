#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "sasim/arch.hpp"
#include "sasim/lowering.hpp"
#include "sasim/matrix.hpp"

namespace sasim {

// Aggregate counters produced by one simulation run.
//
// cycles == controller_steps + drain_steps + stall_cycles always holds:
// every scheduled step costs at least one cycle, and a step whose memory
// transactions exceed the port count stretches into extra stall cycles.
//
// Word counters count actual 32-bit memory words moved. Transactions that
// the zero-decoder answers locally occupy a load-unit slot for the step but
// move no word and increment no counter.
struct SimResult {
    uint64_t cycles = 0;
    uint64_t controller_steps = 0;  // numbered schedule steps across all tiles
    uint64_t drain_steps = 0;       // output-forwarding steps after OS-style tiles
    uint64_t stall_cycles = 0;      // extra cycles from port oversubscription

    uint64_t weight_words_read = 0;  // weight values plus encoding metadata
    uint64_t input_words_read = 0;
    uint64_t output_words_written = 0;
    uint64_t partial_sum_words_read = 0;  // re-fetched partial outputs (WS/IS chunking)

    uint64_t mac_ops = 0;
    uint64_t weight_col_loads = 0;  // weight column / merged-column / row load phases

    std::vector<uint32_t> steps_per_tile;  // numbered steps only; drain excluded
};

// Optional observers. `trace` receives one event per 32-bit word transaction
// (including zero-decoder fills, which move no actual word); `step_stats`
// records, per scheduled step, how many port transactions were issued and how
// many memory words actually moved.
struct StepStat {
    uint32_t requests = 0;
    uint32_t words = 0;
    uint32_t cost_cycles = 0;
};

// Trace addresses are word indices within the operand being touched:
// row-major element index for weight/input/output traffic, storage-slot index
// for merged-column value words, and stream offset for metadata words.
struct TraceEvent {
    uint64_t step = 0;
    const char* unit = "";    // "LU", "SU", "DecU"
    const char* action = "";  // "read", "write", "zero-fill", "meta-read"
    uint64_t address = 0;
};

struct SimHooks {
    std::function<void(const TraceEvent&)> trace;
    std::vector<StepStat>* step_stats = nullptr;
};

// Simulates one GEMM  out = w * x  (w: MxK, x: KxN) under the given dataflow
// and returns the counters. When `out` is non-null it receives the computed
// product, accumulated in f32 exactly as the PE grid orders the operations.
SimResult simulate_gemm(const ArchConfig& arch, Dataflow df, const DenseMatrix& w,
                        const DenseMatrix& x, DenseMatrix* out = nullptr,
                        const SimHooks* hooks = nullptr);

// Lowers the operator to a GEMM (im2col for convolutions) and simulates it.
SimResult simulate_operator(const ArchConfig& arch, Dataflow df, const OperatorSpec& op,
                            const DenseMatrix& weights, const DenseMatrix& inputs,
                            DenseMatrix* out = nullptr);

// Runs all seven dataflows on the lowered operator and returns the one with
// the fewest cycles; ties resolve in enumeration order (dOS first).
std::pair<Dataflow, SimResult> best_dataflow(const ArchConfig& arch, const OperatorSpec& op,
                                             const DenseMatrix& weights,
                                             const DenseMatrix& inputs);

}  // namespace sasim
