#include "sasim/dse.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

namespace sasim {

std::vector<ShapeOption> enumerate_shapes(int pe_budget, int min_dim) {
    if (pe_budget < 1) throw std::invalid_argument("enumerate_shapes: budget must be positive");
    if (min_dim < 1) throw std::invalid_argument("enumerate_shapes: min_dim must be positive");
    std::vector<ShapeOption> shapes;
    for (int r = min_dim; r <= pe_budget / min_dim; ++r) {
        if (pe_budget % r != 0) continue;
        const int c = pe_budget / r;
        if (c >= min_dim) shapes.push_back({r, c});
    }
    return shapes;
}

const char* prune_variant_name(PruneVariant v) {
    switch (v) {
        case PruneVariant::None: return "none";
        case PruneVariant::Column: return "column";
        case PruneVariant::Row: return "row";
    }
    throw std::invalid_argument("prune_variant_name: unknown variant");
}

DseResult run_dse(const std::vector<DseWorkloadItem>& workload, const DseConfig& cfg) {
    if (workload.empty()) throw std::invalid_argument("run_dse: empty workload");
    if (cfg.variants.empty()) throw std::invalid_argument("run_dse: no variants selected");
    if (cfg.jobs < 1) throw std::invalid_argument("run_dse: jobs must be >= 1");
    if (cfg.prune_sparsity < 0.0 || cfg.prune_sparsity > 1.0)
        throw std::invalid_argument("run_dse: prune_sparsity must lie in [0, 1]");

    DseResult result;
    result.shapes = enumerate_shapes(cfg.pe_budget, cfg.min_dim);
    if (result.shapes.empty())
        throw std::invalid_argument("run_dse: budget admits no PE grid shape");

    // Lower every operator once; the GEMM view is shared by all cells.
    std::vector<DenseMatrix> lowered_w, lowered_x;
    lowered_w.reserve(workload.size());
    lowered_x.reserve(workload.size());
    for (const DseWorkloadItem& item : workload) {
        lowered_w.push_back(lower_weights(item.op, item.weights));
        lowered_x.push_back(lower_inputs(item.op, item.inputs));
    }

    const std::vector<Dataflow> flows = cfg.dataflows.empty() ? all_dataflows() : cfg.dataflows;
    const std::size_t n_shapes = result.shapes.size();
    const std::size_t n_variants = cfg.variants.size();
    const std::size_t n_ops = workload.size();
    const std::size_t n_flows = flows.size();
    const std::size_t total = n_shapes * n_variants * n_ops * n_flows;
    result.cells.resize(total);

    auto evaluate = [&](std::size_t flat) {
        std::size_t rem = flat;
        const std::size_t di = rem % n_flows;
        rem /= n_flows;
        const std::size_t oi = rem % n_ops;
        rem /= n_ops;
        const std::size_t vi = rem % n_variants;
        const std::size_t si = rem / n_variants;

        const ShapeOption shape = result.shapes[si];
        const PruneVariant variant = cfg.variants[vi];

        DseCell& cell = result.cells[flat];
        cell.shape_index = static_cast<int>(si);
        cell.shape = shape;
        cell.variant = variant;
        cell.op_index = oi;
        cell.dataflow = flows[di];
        try {
            const DenseMatrix* w = &lowered_w[oi];
            DenseMatrix pruned;
            if (variant != PruneVariant::None) {
                PruneConfig pc;
                pc.orientation = (variant == PruneVariant::Column) ? PruneOrientation::Column
                                                                   : PruneOrientation::Row;
                pc.vector_len = (variant == PruneVariant::Column) ? shape.rows : shape.cols;
                pc.sparsity = cfg.prune_sparsity;
                pruned = std::move(prune_vectors({*w}, pc)[0]);
                w = &pruned;
            }

            ArchConfig arch;
            arch.pe_rows = shape.rows;
            arch.pe_cols = shape.cols;
            cell.result = simulate_gemm(arch, flows[di], *w, lowered_x[oi]);
        } catch (const std::exception& e) {
            cell.failed = true;
            cell.error = e.what();
        }
    };

    if (cfg.jobs == 1 || total == 1) {
        for (std::size_t i = 0; i < total; ++i) evaluate(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), total);
        pool.reserve(n_workers);
        for (std::size_t wk = 0; wk < n_workers; ++wk) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) evaluate(i);
            });
        }
        for (std::thread& th : pool) th.join();
    }

    // Selection: per operator the cheapest dataflow, per (shape, variant) the
    // summed minima; lowest sum wins, earliest enumeration on ties. Failed
    // cells are skipped; a combination missing every dataflow for some
    // operator is unusable.
    bool have = false;
    for (std::size_t si = 0; si < n_shapes; ++si) {
        for (std::size_t vi = 0; vi < n_variants; ++vi) {
            uint64_t sum = 0;
            bool usable = true;
            std::vector<Dataflow> picks(n_ops, Dataflow::Dos);
            for (std::size_t oi = 0; oi < n_ops; ++oi) {
                const std::size_t base = ((si * n_variants + vi) * n_ops + oi) * n_flows;
                bool found = false;
                uint64_t best_cycles = 0;
                for (std::size_t di = 0; di < n_flows; ++di) {
                    const DseCell& cell = result.cells[base + di];
                    if (cell.failed) continue;
                    if (!found || cell.result.cycles < best_cycles) {
                        found = true;
                        best_cycles = cell.result.cycles;
                        picks[oi] = flows[di];
                    }
                }
                if (!found) {
                    usable = false;
                    break;
                }
                sum += best_cycles;
            }
            if (!usable) continue;
            if (!have || sum < result.best.total_cycles) {
                have = true;
                result.best.shape_index = static_cast<int>(si);
                result.best.shape = result.shapes[si];
                result.best.variant = cfg.variants[vi];
                result.best.per_op_dataflow = picks;
                result.best.total_cycles = sum;
            }
        }
    }
    if (!have) throw std::runtime_error("run_dse: every candidate configuration failed");
    return result;
}

}  // namespace sasim
