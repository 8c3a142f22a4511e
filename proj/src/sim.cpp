#include "sasim/sim.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sasim/formats.hpp"

namespace sasim {
namespace {

uint64_t ceil_div_u64(uint64_t a, uint64_t b) { return (a + b - 1) / b; }

enum class StepKind { Numbered, Drain };

// Charges cycles for one controller step at a time. A step costs one cycle
// unless the port transactions issued during it exceed the memory port
// count, in which case the step stretches and the extra cycles are stalls.
// Transactions answered by the zero-decoder occupy a slot but move no word.
class Stepper {
public:
    Stepper(const ArchConfig& arch, SimResult& res, const SimHooks* hooks)
        : arch_(arch), res_(res), hooks_(hooks) {}

    void begin() {
        requests_ = 0;
        words_ = 0;
    }

    bool tracing() const { return hooks_ && hooks_->trace != nullptr; }

    // One trace row per word-sized transaction. Addresses are word indices
    // within the operand being touched (row-major element index for matrix
    // traffic, storage-slot index for merged-column values, stream offset
    // for metadata).
    void trace_word(const char* unit, const char* action, uint64_t address) {
        if (tracing()) hooks_->trace(TraceEvent{step_index_, unit, action, address});
    }

    // `slots` load-unit transactions of which `words` hit memory; the
    // remaining slots are declared-zero and filled by the zero-decoder.
    void weight_read(uint64_t slots, uint64_t words) {
        requests_ += slots;
        words_ += words;
        res_.weight_words_read += words;
    }

    // Encoding metadata (bitmaps, packed indices, headers) counts as weight
    // traffic: it describes the weight operand.
    void meta_read(uint64_t words) {
        if (words == 0) return;
        requests_ += words;
        words_ += words;
        res_.weight_words_read += words;
        if (tracing())
            for (uint64_t i = 0; i < words; ++i) trace_word("LU", "meta-read", i);
    }

    void input_read(uint64_t words) {
        requests_ += words;
        words_ += words;
        res_.input_words_read += words;
    }

    void partial_read(uint64_t words) {
        requests_ += words;
        words_ += words;
        res_.partial_sum_words_read += words;
    }

    void output_write(uint64_t words) {
        requests_ += words;
        words_ += words;
        res_.output_words_written += words;
    }

    void end(StepKind kind, uint32_t* tile_steps = nullptr) {
        const uint64_t ports = static_cast<uint64_t>(arch_.mem_ports);
        const uint64_t cost = std::max<uint64_t>(1, ceil_div_u64(requests_, ports));
        res_.cycles += cost;
        res_.stall_cycles += cost - 1;
        if (kind == StepKind::Numbered) {
            res_.controller_steps += 1;
            if (tile_steps) *tile_steps += 1;
        } else {
            res_.drain_steps += 1;
        }
        if (hooks_ && hooks_->step_stats) {
            hooks_->step_stats->push_back({static_cast<uint32_t>(requests_),
                                           static_cast<uint32_t>(words_),
                                           static_cast<uint32_t>(cost)});
        }
        ++step_index_;
    }

private:
    const ArchConfig& arch_;
    SimResult& res_;
    const SimHooks* hooks_;
    uint64_t requests_ = 0;
    uint64_t words_ = 0;
    uint64_t step_index_ = 0;
};

// One processing element: weight register, input register, partial-sum
// register. Values only ever move between adjacent registers, one hop per
// step, exactly as the schedules dictate.
struct Pe {
    float weight = 0.0f;
    float input = 0.0f;
    float psum = 0.0f;
};

struct Grid {
    int rows, cols;
    std::vector<Pe> pes;

    Grid(int r, int c) : rows(r), cols(c), pes(static_cast<std::size_t>(r) * c) {}
    Pe& at(int r, int c) { return pes[static_cast<std::size_t>(r) * cols + c]; }
    void reset() { std::fill(pes.begin(), pes.end(), Pe{}); }
};

struct Ctx {
    const ArchConfig& arch;
    const DenseMatrix& w;
    const DenseMatrix& x;
    DenseMatrix& out;
    SimResult& res;
    Stepper& stepper;
};

struct PendingWrite {
    uint64_t due;
    int row, col;
    float value;
};

// Store units buffer one result register and write it out on the following
// step; dues are strictly increasing, so the queue drains in order.
void flush_pending(Ctx& c, std::vector<PendingWrite>& pending, std::size_t& head, uint64_t t) {
    while (head < pending.size() && pending[head].due == t) {
        c.stepper.output_write(1);
        c.stepper.trace_word("SU", "write",
                             static_cast<uint64_t>(pending[head].row) * c.out.cols() +
                                 pending[head].col);
        c.out.at(pending[head].row, pending[head].col) = pending[head].value;
        ++head;
    }
}

std::vector<int> band_nz_columns(const DenseMatrix& w, int row0, int rows_valid) {
    std::vector<int> cols;
    for (int k = 0; k < w.cols(); ++k) {
        for (int i = 0; i < rows_valid; ++i) {
            if (w.at(row0 + i, k) != 0.0f) {
                cols.push_back(k);
                break;
            }
        }
    }
    return cols;
}

// Two-stage-bitmap metadata: column bitmap over all columns plus element
// bits for every (bitmap_row, non-zero column) pair.
uint64_t tsb_meta_words(int total_cols, int bitmap_rows, std::size_t nzc) {
    return ceil_div_u64(static_cast<uint64_t>(total_cols), 32) +
           ceil_div_u64(static_cast<uint64_t>(bitmap_rows) * nzc, 32);
}

// The padded R x K horizontal band starting at row0; rows past the matrix
// edge are structural zeros.
DenseMatrix band_tile(const DenseMatrix& w, int row0, int height) {
    DenseMatrix band(height, w.cols());
    const int rv = std::min(height, w.rows() - row0);
    for (int i = 0; i < rv; ++i)
        for (int k = 0; k < w.cols(); ++k) band.at(i, k) = w.at(row0 + i, k);
    return band;
}

// Output forwarding after an output-stationary tile: partial sums shift one
// column right per step and the right-edge store units write them out. The
// full valid tile region is written, zeros included, so downstream readers
// always see dense output memory. These steps follow the numbered schedule,
// so they count as drain.
void drain_outputs(Ctx& c, Grid& grid, int rv, int cv, int row0, int col0) {
    const int R = grid.rows, C = grid.cols;
    const int N = c.out.cols();
    for (int t = 0; t < C; ++t) {
        c.stepper.begin();
        const int src = C - 1 - t;  // original grid column now at the right edge
        if (src < cv) {
            c.stepper.output_write(static_cast<uint64_t>(rv));
            for (int i = 0; i < rv; ++i) {
                c.stepper.trace_word("SU", "write",
                                     static_cast<uint64_t>(row0 + i) * N + col0 + src);
                c.out.at(row0 + i, col0 + src) = grid.at(i, C - 1).psum;
            }
        }
        for (int i = 0; i < R; ++i)
            for (int j = C - 1; j > 0; --j) grid.at(i, j).psum = grid.at(i, j - 1).psum;
        c.stepper.end(StepKind::Drain);
    }
}

// Column-shared output-stationary tile: one merged weight column loads, then
// each distinct source column indexed in it streams its input row in a pass
// that sweeps down just far enough to cover the unfinished rows.
void run_csos_tile(Ctx& c, Grid& grid, const CsbTile& csb, int col0, int cv,
                   uint32_t* tile_steps) {
    const int R = grid.rows, C = grid.cols;
    const int N = c.x.cols();
    if (csb.merged_col_count == 0) {
        // nothing to stream; the controller still fetches the header word
        c.stepper.begin();
        c.stepper.meta_read(1);
        c.stepper.end(StepKind::Numbered, tile_steps);
        return;
    }
    bool first = true;
    for (int g = 0; g < csb.merged_col_count; ++g) {
        const CsbEntry* col = &csb.entries[static_cast<std::size_t>(g) * R];

        // Load the merged column: every slot stores a value word (sentinel
        // slots hold 0), plus two packed 16-bit source indices per word.
        // Weights copy across the row as part of the load.
        c.stepper.begin();
        if (first) {
            c.stepper.meta_read(1);  // merged-column count header
            first = false;
        }
        c.stepper.weight_read(static_cast<uint64_t>(R), static_cast<uint64_t>(R));
        if (c.stepper.tracing())
            for (int i = 0; i < R; ++i)
                c.stepper.trace_word("LU", "read", static_cast<uint64_t>(g) * R + i);
        c.stepper.meta_read(ceil_div_u64(static_cast<uint64_t>(R), 2));
        for (int i = 0; i < R; ++i)
            for (int j = 0; j < C; ++j) grid.at(i, j).weight = col[i].value;
        c.stepper.end(StepKind::Numbered, tile_steps);
        c.res.weight_col_loads += 1;

        std::vector<bool> done(static_cast<std::size_t>(R), false);
        while (true) {
            // source column of the topmost unfinished non-sentinel row
            int v = -1;
            for (int r = 0; r < R; ++r) {
                if (!done[r] && col[r].col_index >= 0) {
                    v = col[r].col_index;
                    break;
                }
            }
            if (v < 0) break;  // only sentinel rows remain: nothing to compute
            int depth = 0;
            for (int r = 0; r < R; ++r)
                if (!done[r]) depth = r;

            for (int rel = 0; rel <= depth; ++rel) {
                c.stepper.begin();
                if (rel == 0) {
                    c.stepper.input_read(static_cast<uint64_t>(cv));
                    if (c.stepper.tracing())
                        for (int j = 0; j < cv; ++j)
                            c.stepper.trace_word("LU", "read",
                                                 static_cast<uint64_t>(v) * N + col0 + j);
                    for (int j = 0; j < C; ++j)
                        grid.at(0, j).input = (j < cv) ? c.x.at(v, col0 + j) : 0.0f;
                } else {
                    for (int j = 0; j < C; ++j) grid.at(rel, j).input = grid.at(rel - 1, j).input;
                }
                if (!done[rel]) {
                    if (col[rel].col_index == v) {
                        for (int j = 0; j < cv; ++j) {
                            Pe& pe = grid.at(rel, j);
                            pe.psum += pe.weight * pe.input;
                        }
                        c.res.mac_ops += static_cast<uint64_t>(cv);
                        done[rel] = true;
                    } else if (col[rel].col_index < 0) {
                        done[rel] = true;  // sentinel row: swept over for free
                    }
                }
                c.stepper.end(StepKind::Numbered, tile_steps);
            }
        }
    }
}

void run_output_stationary(Ctx& c, Dataflow df) {
    const int R = c.arch.pe_rows, C = c.arch.pe_cols;
    const int M = c.w.rows(), K = c.w.cols(), N = c.x.cols();
    const int m_tiles = (M + R - 1) / R;
    const int n_tiles = (N + C - 1) / C;
    Grid grid(R, C);

    for (int mi = 0; mi < m_tiles; ++mi) {
        const int row0 = mi * R;
        const int rv = std::min(R, M - row0);

        std::vector<int> plan;  // source column per load phase (dense / bitmap-skipped)
        CsbTile csb;
        uint64_t meta_words = 0;
        if (df == Dataflow::Dos) {
            plan.resize(static_cast<std::size_t>(K));
            for (int k = 0; k < K; ++k) plan[static_cast<std::size_t>(k)] = k;
        } else if (df == Dataflow::Sos) {
            plan = band_nz_columns(c.w, row0, rv);
            meta_words = tsb_meta_words(K, R, plan.size());
        } else {
            csb = encode_csb(band_tile(c.w, row0, R));
        }

        for (int nj = 0; nj < n_tiles; ++nj) {
            const int col0 = nj * C;
            const int cv = std::min(C, N - col0);
            grid.reset();
            uint32_t tile_steps = 0;

            if (df == Dataflow::CsOs) {
                run_csos_tile(c, grid, csb, col0, cv, &tile_steps);
            } else if (plan.empty()) {
                // all-zero band: fetch the column bitmap, stream nothing
                c.stepper.begin();
                c.stepper.meta_read(ceil_div_u64(static_cast<uint64_t>(K), 32));
                c.stepper.end(StepKind::Numbered, &tile_steps);
            } else {
                bool first = true;
                for (int k : plan) {
                    // load phase: weight column into the left PE column,
                    // matching input row into the top PE row
                    c.stepper.begin();
                    if (first) {
                        c.stepper.meta_read(meta_words);
                        first = false;
                    }
                    if (df == Dataflow::Dos) {
                        c.stepper.weight_read(static_cast<uint64_t>(rv), static_cast<uint64_t>(rv));
                        if (c.stepper.tracing())
                            for (int i = 0; i < rv; ++i)
                                c.stepper.trace_word("LU", "read",
                                                     static_cast<uint64_t>(row0 + i) * K + k);
                    } else {
                        uint64_t stored = 0;
                        for (int i = 0; i < rv; ++i)
                            if (c.w.at(row0 + i, k) != 0.0f) ++stored;
                        c.stepper.weight_read(static_cast<uint64_t>(R), stored);
                        if (c.stepper.tracing()) {
                            for (int i = 0; i < R; ++i) {
                                const bool real = i < rv && c.w.at(row0 + i, k) != 0.0f;
                                c.stepper.trace_word(real ? "LU" : "DecU",
                                                     real ? "read" : "zero-fill",
                                                     static_cast<uint64_t>(row0 + i) * K + k);
                            }
                        }
                    }
                    for (int i = 0; i < R; ++i)
                        grid.at(i, 0).weight = (i < rv) ? c.w.at(row0 + i, k) : 0.0f;
                    c.stepper.input_read(static_cast<uint64_t>(cv));
                    if (c.stepper.tracing())
                        for (int j = 0; j < cv; ++j)
                            c.stepper.trace_word("LU", "read",
                                                 static_cast<uint64_t>(k) * N + col0 + j);
                    for (int j = 0; j < C; ++j)
                        grid.at(0, j).input = (j < cv) ? c.x.at(k, col0 + j) : 0.0f;
                    c.stepper.end(StepKind::Numbered, &tile_steps);
                    c.res.weight_col_loads += 1;

                    // wavefront: weights travel right, inputs travel down,
                    // PE (i,j) fires on anti-diagonal i+j
                    for (int d = 0; d <= R + C - 2; ++d) {
                        c.stepper.begin();
                        for (int i = std::max(0, d - C + 1); i <= std::min(R - 1, d); ++i) {
                            const int j = d - i;
                            Pe& pe = grid.at(i, j);
                            if (j > 0) pe.weight = grid.at(i, j - 1).weight;
                            if (i > 0) pe.input = grid.at(i - 1, j).input;
                            pe.psum += pe.weight * pe.input;
                            c.res.mac_ops += 1;
                        }
                        c.stepper.end(StepKind::Numbered, &tile_steps);
                    }
                }
            }

            c.res.steps_per_tile.push_back(tile_steps);
            drain_outputs(c, grid, rv, cv, row0, col0);
        }
    }
}

void run_weight_stationary(Ctx& c, bool sparse) {
    const int R = c.arch.pe_rows, C = c.arch.pe_cols;
    const int M = c.w.rows(), K = c.w.cols(), N = c.x.cols();
    const int m_tiles = (M + R - 1) / R;
    Grid grid(R, C);

    for (int mi = 0; mi < m_tiles; ++mi) {
        const int row0 = mi * R;
        const int rv = std::min(R, M - row0);

        std::vector<int> cols;
        uint64_t meta_words = 0;
        if (sparse) {
            cols = band_nz_columns(c.w, row0, rv);
            meta_words = tsb_meta_words(K, R, cols.size());
        } else {
            cols.resize(static_cast<std::size_t>(K));
            for (int k = 0; k < K; ++k) cols[static_cast<std::size_t>(k)] = k;
        }

        if (cols.empty()) {
            // all-zero band: column bitmap only, nothing stays resident
            uint32_t tile_steps = 0;
            c.stepper.begin();
            c.stepper.meta_read(ceil_div_u64(static_cast<uint64_t>(K), 32));
            c.stepper.end(StepKind::Numbered, &tile_steps);
            c.res.steps_per_tile.push_back(tile_steps);
            continue;
        }

        const int groups = static_cast<int>((cols.size() + static_cast<std::size_t>(C) - 1) /
                                            static_cast<std::size_t>(C));
        std::vector<PendingWrite> pending;
        std::size_t phead = 0;
        uint64_t t = 0;  // absolute numbered step within this band's timeline
        grid.reset();
        std::vector<float> pinit(static_cast<std::size_t>(R), 0.0f);

        for (int gi = 0; gi < groups; ++gi) {
            uint32_t tile_steps = 0;
            const int base = gi * C;
            const int gw = std::min<int>(C, static_cast<int>(cols.size()) - base);

            // stationary load: up to C weight columns settle into the grid
            c.stepper.begin();
            flush_pending(c, pending, phead, t);
            if (gi == 0) c.stepper.meta_read(meta_words);
            uint64_t stored = 0;
            for (int j = 0; j < gw; ++j)
                for (int i = 0; i < rv; ++i)
                    if (c.w.at(row0 + i, cols[static_cast<std::size_t>(base + j)]) != 0.0f) ++stored;
            const uint64_t slots = sparse ? static_cast<uint64_t>(R) * gw
                                          : static_cast<uint64_t>(rv) * gw;
            c.stepper.weight_read(slots, sparse ? stored : static_cast<uint64_t>(rv) * gw);
            if (c.stepper.tracing()) {
                for (int j = 0; j < gw; ++j) {
                    const int k = cols[static_cast<std::size_t>(base + j)];
                    const int span = sparse ? R : rv;
                    for (int i = 0; i < span; ++i) {
                        const bool real = i < rv && c.w.at(row0 + i, k) != 0.0f;
                        c.stepper.trace_word(real || !sparse ? "LU" : "DecU",
                                             real || !sparse ? "read" : "zero-fill",
                                             static_cast<uint64_t>(row0 + i) * K + k);
                    }
                }
            }
            for (int j = 0; j < C; ++j)
                for (int i = 0; i < R; ++i)
                    grid.at(i, j).weight =
                        (j < gw && i < rv)
                            ? c.w.at(row0 + i, cols[static_cast<std::size_t>(base + j)])
                            : 0.0f;
            c.stepper.end(StepKind::Numbered, &tile_steps);
            ++t;
            c.res.weight_col_loads += static_cast<uint64_t>(gw);

            // one streamed phase per input column: inputs enter the top row
            // staggered, partial sums ripple right and leave at the right edge
            for (int n = 0; n < N; ++n) {
                for (int d = 0; d <= R + C - 2; ++d) {
                    c.stepper.begin();
                    flush_pending(c, pending, phead, t);
                    if (d < gw) {
                        const int k = cols[static_cast<std::size_t>(base + d)];
                        c.stepper.input_read(1);
                        c.stepper.trace_word("LU", "read", static_cast<uint64_t>(k) * N + n);
                        grid.at(0, d).input = c.x.at(k, n);
                    }
                    if (d < rv && gi > 0) {
                        c.stepper.partial_read(1);
                        c.stepper.trace_word("LU", "read",
                                             static_cast<uint64_t>(row0 + d) * N + n);
                        pinit[static_cast<std::size_t>(d)] = c.out.at(row0 + d, n);
                    }
                    for (int i = std::max(0, d - C + 1); i <= std::min(R - 1, d); ++i) {
                        const int j = d - i;
                        Pe& pe = grid.at(i, j);
                        if (i > 0) pe.input = grid.at(i - 1, j).input;
                        const float left =
                            (j == 0) ? ((gi > 0 && i < rv) ? pinit[static_cast<std::size_t>(i)]
                                                           : 0.0f)
                                     : grid.at(i, j - 1).psum;
                        pe.psum = left + pe.weight * pe.input;
                        c.res.mac_ops += 1;
                        if (j == C - 1 && i < rv)
                            pending.push_back({t + 1, row0 + i, n, pe.psum});
                    }
                    c.stepper.end(StepKind::Numbered, &tile_steps);
                    ++t;
                }
            }

            if (gi == groups - 1) {
                while (phead < pending.size()) {
                    c.stepper.begin();
                    flush_pending(c, pending, phead, t);
                    c.stepper.end(StepKind::Numbered, &tile_steps);
                    ++t;
                }
            }
            c.res.steps_per_tile.push_back(tile_steps);
        }
    }
}

void run_input_stationary(Ctx& c, bool sparse) {
    const int R = c.arch.pe_rows, C = c.arch.pe_cols;
    const int M = c.w.rows(), K = c.w.cols(), N = c.x.cols();
    const int n_tiles = (N + C - 1) / C;
    Grid grid(R, C);

    // Stationary chunks cover the globally useful weight columns; streamed
    // rows cover the globally non-zero weight rows. Both lists are whole-
    // matrix properties, shared by every output column range.
    std::vector<int> klist;
    std::vector<int> rowlist;
    uint64_t meta_words = 0;
    if (sparse) {
        klist = band_nz_columns(c.w, 0, M);
        for (int m = 0; m < M; ++m) {
            for (int k = 0; k < K; ++k) {
                if (c.w.at(m, k) != 0.0f) {
                    rowlist.push_back(m);
                    break;
                }
            }
        }
        meta_words = tsb_meta_words(K, M, klist.size());
    } else {
        klist.resize(static_cast<std::size_t>(K));
        for (int k = 0; k < K; ++k) klist[static_cast<std::size_t>(k)] = k;
        rowlist.resize(static_cast<std::size_t>(M));
        for (int m = 0; m < M; ++m) rowlist[static_cast<std::size_t>(m)] = m;
    }
    const int chunks = static_cast<int>((klist.size() + static_cast<std::size_t>(R) - 1) /
                                        static_cast<std::size_t>(R));

    for (int nj = 0; nj < n_tiles; ++nj) {
        const int col0 = nj * C;
        const int cw = std::min(C, N - col0);

        if (klist.empty()) {
            // all-zero weights: the column bitmap is all the controller reads
            uint32_t tile_steps = 0;
            c.stepper.begin();
            c.stepper.meta_read(ceil_div_u64(static_cast<uint64_t>(K), 32));
            c.stepper.end(StepKind::Numbered, &tile_steps);
            c.res.steps_per_tile.push_back(tile_steps);
            continue;
        }

        std::vector<char> row_written(static_cast<std::size_t>(M), 0);
        std::vector<PendingWrite> pending;
        std::size_t phead = 0;
        uint64_t t = 0;
        grid.reset();
        std::vector<float> pinit(static_cast<std::size_t>(C), 0.0f);

        for (int ci = 0; ci < chunks; ++ci) {
            uint32_t tile_steps = 0;
            const int base = ci * R;
            const int kw = std::min<int>(R, static_cast<int>(klist.size()) - base);

            // stationary load: an input block (chunk rows x output columns)
            // settles into the grid
            c.stepper.begin();
            flush_pending(c, pending, phead, t);
            if (ci == 0) c.stepper.meta_read(meta_words);
            c.stepper.input_read(static_cast<uint64_t>(kw) * cw);
            if (c.stepper.tracing())
                for (int r = 0; r < kw; ++r)
                    for (int j = 0; j < cw; ++j)
                        c.stepper.trace_word(
                            "LU", "read",
                            static_cast<uint64_t>(klist[static_cast<std::size_t>(base + r)]) * N +
                                col0 + j);
            for (int r = 0; r < R; ++r)
                for (int j = 0; j < C; ++j)
                    grid.at(r, j).input =
                        (r < kw && j < cw)
                            ? c.x.at(klist[static_cast<std::size_t>(base + r)], col0 + j)
                            : 0.0f;
            c.stepper.end(StepKind::Numbered, &tile_steps);
            ++t;

            // one streamed phase per useful weight row: its elements enter
            // the left column staggered, partial sums ripple down and leave
            // at the bottom edge
            for (int m : rowlist) {
                for (int d = 0; d <= R + C - 2; ++d) {
                    c.stepper.begin();
                    flush_pending(c, pending, phead, t);
                    float injected = 0.0f;
                    if (d < kw) {
                        const int k = klist[static_cast<std::size_t>(base + d)];
                        const float wv = c.w.at(m, k);
                        const bool real = !sparse || wv != 0.0f;
                        c.stepper.weight_read(1, real ? 1 : 0);
                        c.stepper.trace_word(real ? "LU" : "DecU", real ? "read" : "zero-fill",
                                             static_cast<uint64_t>(m) * K + k);
                        injected = wv;
                    }
                    if (d < cw && row_written[static_cast<std::size_t>(m)]) {
                        c.stepper.partial_read(1);
                        c.stepper.trace_word("LU", "read",
                                             static_cast<uint64_t>(m) * N + col0 + d);
                        pinit[static_cast<std::size_t>(d)] = c.out.at(m, col0 + d);
                    }
                    for (int r = std::max(0, d - C + 1); r <= std::min(R - 1, d); ++r) {
                        const int j = d - r;
                        Pe& pe = grid.at(r, j);
                        if (j > 0) {
                            pe.weight = grid.at(r, j - 1).weight;
                        } else {
                            pe.weight = (r < kw) ? injected : 0.0f;
                        }
                        const float top =
                            (r == 0)
                                ? ((row_written[static_cast<std::size_t>(m)] && j < cw)
                                       ? pinit[static_cast<std::size_t>(j)]
                                       : 0.0f)
                                : grid.at(r - 1, j).psum;
                        pe.psum = top + pe.weight * pe.input;
                        c.res.mac_ops += 1;
                        if (r == R - 1 && j < cw)
                            pending.push_back({t + 1, m, col0 + j, pe.psum});
                    }
                    c.stepper.end(StepKind::Numbered, &tile_steps);
                    ++t;
                }
                row_written[static_cast<std::size_t>(m)] = 1;
                c.res.weight_col_loads += 1;
            }

            if (ci == chunks - 1) {
                while (phead < pending.size()) {
                    c.stepper.begin();
                    flush_pending(c, pending, phead, t);
                    c.stepper.end(StepKind::Numbered, &tile_steps);
                    ++t;
                }
            }
            c.res.steps_per_tile.push_back(tile_steps);
        }
    }
}

}  // namespace

SimResult simulate_gemm(const ArchConfig& arch, Dataflow df, const DenseMatrix& w,
                        const DenseMatrix& x, DenseMatrix* out, const SimHooks* hooks) {
    arch.validate();
    if (w.rows() <= 0 || w.cols() <= 0 || x.rows() <= 0 || x.cols() <= 0) {
        throw std::invalid_argument("simulate_gemm: matrices must be non-empty");
    }
    if (w.cols() != x.rows()) {
        throw std::invalid_argument("simulate_gemm: inner dimensions do not match");
    }

    SimResult res;
    DenseMatrix result(w.rows(), x.cols());
    Stepper stepper(arch, res, hooks);
    Ctx ctx{arch, w, x, result, res, stepper};

    switch (df) {
        case Dataflow::Dos:
        case Dataflow::Sos:
        case Dataflow::CsOs:
            run_output_stationary(ctx, df);
            break;
        case Dataflow::Dws:
            run_weight_stationary(ctx, false);
            break;
        case Dataflow::Sws:
            run_weight_stationary(ctx, true);
            break;
        case Dataflow::Dis:
            run_input_stationary(ctx, false);
            break;
        case Dataflow::Sis:
            run_input_stationary(ctx, true);
            break;
    }

    if (out) *out = std::move(result);
    return res;
}

SimResult simulate_operator(const ArchConfig& arch, Dataflow df, const OperatorSpec& op,
                            const DenseMatrix& weights, const DenseMatrix& inputs,
                            DenseMatrix* out) {
    const DenseMatrix w = lower_weights(op, weights);
    const DenseMatrix x = lower_inputs(op, inputs);
    return simulate_gemm(arch, df, w, x, out);
}

std::pair<Dataflow, SimResult> best_dataflow(const ArchConfig& arch, const OperatorSpec& op,
                                             const DenseMatrix& weights,
                                             const DenseMatrix& inputs) {
    const DenseMatrix w = lower_weights(op, weights);
    const DenseMatrix x = lower_inputs(op, inputs);
    bool have = false;
    Dataflow best_df = Dataflow::Dos;
    SimResult best;
    for (Dataflow df : all_dataflows()) {
        SimResult r = simulate_gemm(arch, df, w, x);
        if (!have || r.cycles < best.cycles) {
            have = true;
            best_df = df;
            best = std::move(r);
        }
    }
    return {best_df, best};
}

}  // namespace sasim
