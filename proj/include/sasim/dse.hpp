#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sasim/arch.hpp"
#include "sasim/lowering.hpp"
#include "sasim/matrix.hpp"
#include "sasim/pruning.hpp"
#include "sasim/sim.hpp"

namespace sasim {

struct ShapeOption {
    int rows = 0;
    int cols = 0;
};

// All PE grid shapes that spend the budget exactly: factor pairs
// rows * cols == pe_budget with both sides >= min_dim, ascending by rows.
std::vector<ShapeOption> enumerate_shapes(int pe_budget, int min_dim = 2);

// Weight-pruning variant evaluated alongside the unmodified operator.
// Column binds the vector length to the candidate shape's PE rows (segments
// match the column height the sparse dataflows skip by); Row binds it to the
// PE columns.
enum class PruneVariant { None, Column, Row };

const char* prune_variant_name(PruneVariant v);

struct DseWorkloadItem {
    OperatorSpec op;
    DenseMatrix weights;
    DenseMatrix inputs;
};

struct DseConfig {
    int pe_budget = 72;
    int min_dim = 2;
    std::vector<PruneVariant> variants{PruneVariant::None};
    std::vector<Dataflow> dataflows;  // empty means all seven
    double prune_sparsity = 0.5;      // sparsity applied by the pruning variants
    int jobs = 1;
};

// One evaluated grid point. Cells are stored in a fixed enumeration order:
// shape-major, then variant, then operator, then dataflow. A cell whose
// evaluation throws is marked failed (with the error text) instead of
// aborting the sweep; failed cells are never selected.
struct DseCell {
    int shape_index = 0;
    ShapeOption shape;
    PruneVariant variant = PruneVariant::None;
    std::size_t op_index = 0;
    Dataflow dataflow = Dataflow::Dos;
    SimResult result;
    bool failed = false;
    std::string error;
};

struct DseSelection {
    int shape_index = 0;
    ShapeOption shape;
    PruneVariant variant = PruneVariant::None;
    std::vector<Dataflow> per_op_dataflow;  // cycle-optimal flow per operator
    uint64_t total_cycles = 0;              // sum of the per-operator minima
};

struct DseResult {
    std::vector<ShapeOption> shapes;
    std::vector<DseCell> cells;
    DseSelection best;
};

// Evaluates every (shape, variant, operator, dataflow) combination and picks
// the (shape, variant) whose summed per-operator-best cycles are lowest.
// Ties resolve in enumeration order. `jobs` worker threads split the cells;
// results are assembled by index, so the outcome is independent of jobs.
DseResult run_dse(const std::vector<DseWorkloadItem>& workload, const DseConfig& cfg);

}  // namespace sasim
