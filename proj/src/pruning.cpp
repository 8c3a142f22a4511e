#include "sasim/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sasim {
namespace {

struct VectorRef {
    std::size_t matrix = 0;
    int line = 0;   // column (column orientation) or row (row orientation)
    int seg = 0;    // segment index along the line
    double norm_sq = 0.0;
};

void validate_group(const std::vector<DenseMatrix>& group) {
    if (group.empty()) throw std::invalid_argument("prune: empty operator group");
    for (const DenseMatrix& m : group) {
        if (m.rows() <= 0 || m.cols() <= 0)
            throw std::invalid_argument("prune: matrices must be non-empty");
    }
}

// Enumerates every length-n segment in canonical order and computes its
// squared L2 norm in double precision.
std::vector<VectorRef> collect_vectors(const std::vector<DenseMatrix>& group,
                                       PruneOrientation orientation, int n) {
    std::vector<VectorRef> refs;
    for (std::size_t mi = 0; mi < group.size(); ++mi) {
        const DenseMatrix& m = group[mi];
        if (orientation == PruneOrientation::Column) {
            const int segs = (m.rows() + n - 1) / n;
            for (int c = 0; c < m.cols(); ++c) {
                for (int s = 0; s < segs; ++s) {
                    VectorRef ref{mi, c, s, 0.0};
                    const int r_end = std::min(m.rows(), (s + 1) * n);
                    for (int r = s * n; r < r_end; ++r) {
                        const double v = m.at(r, c);
                        ref.norm_sq += v * v;
                    }
                    refs.push_back(ref);
                }
            }
        } else {
            const int segs = (m.cols() + n - 1) / n;
            for (int r = 0; r < m.rows(); ++r) {
                for (int s = 0; s < segs; ++s) {
                    VectorRef ref{mi, r, s, 0.0};
                    const int c_end = std::min(m.cols(), (s + 1) * n);
                    for (int c = s * n; c < c_end; ++c) {
                        const double v = m.at(r, c);
                        ref.norm_sq += v * v;
                    }
                    refs.push_back(ref);
                }
            }
        }
    }
    return refs;
}

void zero_vector(DenseMatrix& m, PruneOrientation orientation, int n, const VectorRef& ref) {
    if (orientation == PruneOrientation::Column) {
        const int r_end = std::min(m.rows(), (ref.seg + 1) * n);
        for (int r = ref.seg * n; r < r_end; ++r) m.at(r, ref.line) = 0.0f;
    } else {
        const int c_end = std::min(m.cols(), (ref.seg + 1) * n);
        for (int c = ref.seg * n; c < c_end; ++c) m.at(ref.line, c) = 0.0f;
    }
}

}  // namespace

std::vector<DenseMatrix> prune_vectors(const std::vector<DenseMatrix>& group,
                                       const PruneConfig& cfg, PruneStats* stats) {
    validate_group(group);
    if (cfg.vector_len < 1) throw std::invalid_argument("prune: vector_len must be >= 1");
    if (cfg.sparsity < 0.0 || cfg.sparsity > 1.0)
        throw std::invalid_argument("prune: sparsity must lie in [0, 1]");

    std::vector<VectorRef> refs = collect_vectors(group, cfg.orientation, cfg.vector_len);
    const std::size_t total = refs.size();
    const std::size_t quota = static_cast<std::size_t>(
        std::floor(cfg.sparsity * static_cast<double>(total) + 1e-9));

    // Weakest vectors first; stable sort keeps enumeration order on ties, so
    // already-zero vectors (norm 0) are always consumed before live ones.
    std::stable_sort(refs.begin(), refs.end(),
                     [](const VectorRef& a, const VectorRef& b) { return a.norm_sq < b.norm_sq; });

    std::vector<DenseMatrix> pruned = group;
    for (std::size_t i = 0; i < quota && i < total; ++i) {
        zero_vector(pruned[refs[i].matrix], cfg.orientation, cfg.vector_len, refs[i]);
    }
    if (stats) {
        stats->vectors_total = total;
        stats->vectors_zeroed = std::min(quota, total);
    }
    return pruned;
}

PruneScheduleResult prune_schedule(const std::vector<DenseMatrix>& group,
                                   const PruneScheduleConfig& cfg, const AccuracyOracle& oracle) {
    validate_group(group);
    if (!oracle) throw std::invalid_argument("prune_schedule: oracle is required");
    if (cfg.step <= 0.0) throw std::invalid_argument("prune_schedule: step must be > 0");
    if (cfg.max_attempts < 1)
        throw std::invalid_argument("prune_schedule: max_attempts must be >= 1");
    if (cfg.start_sparsity < 0.0 || cfg.start_sparsity > 1.0)
        throw std::invalid_argument("prune_schedule: start_sparsity must lie in [0, 1]");
    if (cfg.tolerance < 0.0 || cfg.tolerance > cfg.target_accuracy)
        throw std::invalid_argument(
            "prune_schedule: tolerance must lie in [0, target_accuracy]");

    PruneScheduleResult result;
    result.group = group;

    for (int k = 0;; ++k) {
        double s = cfg.start_sparsity + static_cast<double>(k) * cfg.step;
        if (std::abs(s - 1.0) < 1e-9) s = 1.0;  // absorb accumulated float error at the top level
        if (s > std::min(cfg.max_sparsity, 1.0) + 1e-12) break;

        PruneConfig level{cfg.orientation, cfg.vector_len, std::min(s, 1.0)};
        std::vector<DenseMatrix> candidate = prune_vectors(group, level);

        bool accepted = false;
        for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
            const double acc = oracle(candidate);
            accepted = acc >= cfg.target_accuracy - cfg.tolerance;
            result.history.push_back({s, attempt, acc, accepted});
            if (accepted) break;
        }
        if (!accepted) break;

        result.group = std::move(candidate);
        result.sparsity = s;
        result.any_accepted = true;
    }
    return result;
}

}  // namespace sasim
