#pragma once

#include <functional>
#include <vector>

#include "sasim/matrix.hpp"

namespace sasim {

// Vector pruning zeroes whole length-n segments of the weight matrices so
// the column-oriented sparse dataflows (or row-oriented ones) can skip them
// structurally. Column orientation cuts each column into vertical segments
// of `vector_len` rows; row orientation cuts each row into horizontal
// segments of `vector_len` columns. Segments at the far edge may be shorter.
enum class PruneOrientation { Column, Row };

struct PruneConfig {
    PruneOrientation orientation = PruneOrientation::Column;
    int vector_len = 4;
    double sparsity = 0.0;  // fraction of vectors to zero, in [0, 1]
};

struct PruneStats {
    std::size_t vectors_total = 0;
    std::size_t vectors_zeroed = 0;  // floor(sparsity * vectors_total)

    double zero_fraction() const {
        return vectors_total == 0
                   ? 0.0
                   : static_cast<double>(vectors_zeroed) / static_cast<double>(vectors_total);
    }
};

// Zeroes the floor(sparsity * V) weakest vectors across the whole group,
// ranked by ascending L2 norm; ties resolve in enumeration order (matrix,
// then column/row, then segment). Already-zero vectors rank first, so
// pruning a pruned group again at the same or higher sparsity only extends
// the zeroed set.
std::vector<DenseMatrix> prune_vectors(const std::vector<DenseMatrix>& group,
                                       const PruneConfig& cfg, PruneStats* stats = nullptr);

// Accuracy oracle: maps a candidate pruned group to a score. Implementations
// range from analytic proxies to external evaluation commands.
using AccuracyOracle = std::function<double(const std::vector<DenseMatrix>&)>;

struct PruneScheduleConfig {
    PruneOrientation orientation = PruneOrientation::Column;
    int vector_len = 4;
    double start_sparsity = 0.0;   // first level tried
    double step = 0.05;            // level increment, must be > 0
    double max_sparsity = 1.0;     // levels above this are never tried
    double target_accuracy = 0.0;  // accept a level when acc >= target - tolerance
    double tolerance = 0.0;
    int max_attempts = 1;  // oracle calls per level before giving up
};

struct PruneEvaluation {
    double sparsity = 0.0;
    int attempt = 0;  // 0-based attempt index at this level
    double accuracy = 0.0;
    bool accepted = false;
};

struct PruneScheduleResult {
    std::vector<DenseMatrix> group;          // last accepted state
    double sparsity = 0.0;                   // last accepted level, 0 if none
    bool any_accepted = false;
    std::vector<PruneEvaluation> history;    // one entry per oracle call
};

// Walks sparsity levels s0, s0+step, s0+2*step, ... pruning the original
// group to each level and asking the oracle to bless the result. A level is
// retried up to max_attempts times (useful for noisy oracles); the first
// rejection that exhausts its attempts stops the walk. Returns the last
// accepted group — the unpruned input if the very first level fails.
PruneScheduleResult prune_schedule(const std::vector<DenseMatrix>& group,
                                   const PruneScheduleConfig& cfg, const AccuracyOracle& oracle);

}  // namespace sasim
