// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when any
// criterion fails. All tolerances are pinned as constants below.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sasim/dse.hpp"
#include "sasim/formats.hpp"
#include "sasim/lowering.hpp"
#include "sasim/matrix.hpp"
#include "sasim/pruning.hpp"
#include "sasim/rng.hpp"
#include "sasim/sim.hpp"

namespace {

// Pinned tolerances and thresholds.
constexpr double kGemmTol = 1e-5;           // per element, relative to max(1, |reference|)
constexpr double kSpeedupLo = 1.5;          // memory-scaling bracket, lower edge
constexpr double kSpeedupHi = 2.5;          // memory-scaling bracket, upper edge
constexpr double kOracleAccept = 0.83;      // schedule oracle accepts iff zero fraction <= this
constexpr double kBinomialSigmas = 3.0;     // Monte-Carlo acceptance band

struct Outcome {
    bool pass = false;
    std::string detail;
};

sasim::ArchConfig make_arch(int rows, int cols, int ports = 8) {
    sasim::ArchConfig a;
    a.pe_rows = rows;
    a.pe_cols = cols;
    a.mem_ports = ports;
    return a;
}

std::string fmt(double v, int prec = 4) {
    std::ostringstream ss;
    ss << std::setprecision(prec) << v;
    return ss.str();
}

// Shared tile fixtures: a 3x4 weight tile with two populated columns, the
// same structure restricted to two populated rows, and a 3x3 tile whose two
// sparse columns have disjoint supports and therefore merge.
const sasim::DenseMatrix kTileCols(3, 4, {2, 0, 0, 3, 4, 0, 0, 5, 0, 0, 0, 7});
const sasim::DenseMatrix kTileRows(3, 4, {2, 0, 0, 3, 0, 0, 0, 0, 4, 0, 0, 5});
const sasim::DenseMatrix kTileMerge(3, 3, {2, 0, 5, 3, 4, 0, 0, 0, 7});
const sasim::DenseMatrix kTileIn42(4, 2, {1, 2, 3, 4, 5, 6, 7, 8});
const sasim::DenseMatrix kTileIn32(3, 2, {1, 2, 3, 4, 5, 6});

// ---------------------------------------------------------------------------
// 1. Functional equivalence across randomized GEMMs, all seven dataflows.
Outcome ac1() {
    const double sparsities[4] = {0.0, 0.5, 0.8, 0.95};
    sasim::Xoshiro256pp rng(0xACCE5501u);
    const sasim::ArchConfig arch = make_arch(4, 4);

    int runs = 0, bad = 0;
    double worst = 0.0;
    for (int c = 0; c < 100; ++c) {
        const int m = 1 + static_cast<int>(rng.next() % 64);
        const int k = 1 + static_cast<int>(rng.next() % 64);
        const int n = 1 + static_cast<int>(rng.next() % 64);
        const double s = sparsities[c % 4];
        const sasim::DenseMatrix w = sasim::random_sparse(m, k, s, 5000 + c);
        const sasim::DenseMatrix x = sasim::random_sparse(k, n, s, 6000 + c);
        const sasim::DenseMatrix ref = sasim::gemm_ref(w, x);

        for (sasim::Dataflow df : sasim::all_dataflows()) {
            sasim::DenseMatrix out;
            sasim::simulate_gemm(arch, df, w, x, &out);
            ++runs;
            bool ok = out.rows() == ref.rows() && out.cols() == ref.cols();
            for (int r = 0; ok && r < ref.rows(); ++r)
                for (int cc = 0; cc < ref.cols(); ++cc) {
                    const double e = std::abs(static_cast<double>(out.at(r, cc)) - ref.at(r, cc)) /
                                     std::max(1.0, std::abs(static_cast<double>(ref.at(r, cc))));
                    worst = std::max(worst, e);
                    if (e > kGemmTol) {
                        ok = false;
                        break;
                    }
                }
            bad += ok ? 0 : 1;
        }
    }
    return {bad == 0, std::to_string(runs - bad) + "/" + std::to_string(runs) +
                          " randomized dataflow runs match the f64 reference (worst normalized "
                          "error " + fmt(worst, 3) + ", tolerance " + fmt(kGemmTol, 3) + ")"};
}

// ---------------------------------------------------------------------------
// 2. Reference tile schedules on the 3-row x 2-col array: 10 controller steps
//    each, and 7 weight words for the two column-skipping dataflows.
Outcome ac2() {
    const sasim::ArchConfig arch = make_arch(3, 2);
    const sasim::SimResult ros =
        sasim::simulate_gemm(arch, sasim::Dataflow::Sos, kTileCols, kTileIn42);
    const sasim::SimResult rws =
        sasim::simulate_gemm(arch, sasim::Dataflow::Sws, kTileCols, kTileIn42);
    const sasim::SimResult ris =
        sasim::simulate_gemm(arch, sasim::Dataflow::Sis, kTileRows, kTileIn42);

    const bool steps_ok =
        ros.controller_steps == 10 && rws.controller_steps == 10 && ris.controller_steps == 10;
    const bool words_ok = ros.weight_words_read == 7 && rws.weight_words_read == 7;
    std::string d = "controller steps sOS/sWS/sIS = " + std::to_string(ros.controller_steps) +
                    "/" + std::to_string(rws.controller_steps) + "/" +
                    std::to_string(ris.controller_steps) + " (want 10 each); weight words "
                    "sOS/sWS = " + std::to_string(ros.weight_words_read) + "/" +
                    std::to_string(rws.weight_words_read) + " (want 7 each)";
    return {steps_ok && words_ok, d};
}

// ---------------------------------------------------------------------------
// 3. Merged-column dataflow loads strictly fewer weight columns than the
//    plain column-skipping one on the mergeable tile, with identical output.
Outcome ac3() {
    const sasim::ArchConfig arch = make_arch(3, 2);
    sasim::DenseMatrix out_cs, out_s;
    const sasim::SimResult rcs =
        sasim::simulate_gemm(arch, sasim::Dataflow::CsOs, kTileMerge, kTileIn32, &out_cs);
    const sasim::SimResult rs =
        sasim::simulate_gemm(arch, sasim::Dataflow::Sos, kTileMerge, kTileIn32, &out_s);
    const sasim::DenseMatrix ref = sasim::gemm_ref(kTileMerge, kTileIn32);

    bool exact = out_cs.rows() == ref.rows() && out_cs.cols() == ref.cols();
    for (int r = 0; exact && r < ref.rows(); ++r)
        for (int c = 0; c < ref.cols(); ++c)
            if (std::abs(out_cs.at(r, c) - static_cast<float>(ref.at(r, c))) >
                1e-5f * std::max(1.0f, std::abs(static_cast<float>(ref.at(r, c))))) {
                exact = false;
                break;
            }

    const bool fewer = rcs.weight_col_loads < rs.weight_col_loads;
    return {fewer && exact,
            "merged-column load phases " + std::to_string(rcs.weight_col_loads) +
                " < column-skipping " + std::to_string(rs.weight_col_loads) +
                (exact ? "; output matches reference" : "; OUTPUT MISMATCH")};
}

// ---------------------------------------------------------------------------
// 4. Skip monotonicity: zeroing one extra column (sOS/sWS) or row (sIS) never
//    increases cycles or weight reads, over 1000 random tiles. All-zero
//    weights execute zero MACs.
Outcome ac4() {
    const sasim::ArchConfig arch = make_arch(4, 4);
    sasim::Xoshiro256pp rng(0xACCE5504u);
    int viol = 0;
    for (int t = 0; t < 1000; ++t) {
        sasim::DenseMatrix w = sasim::random_sparse(8, 12, 0.4, 7000 + t);
        const sasim::DenseMatrix x = sasim::random_sparse(12, 4, 0.0, 8000 + t);

        sasim::DenseMatrix wc = w;
        const int col = static_cast<int>(rng.next() % 12);
        for (int r = 0; r < wc.rows(); ++r) wc.at(r, col) = 0.0f;
        sasim::DenseMatrix wr = w;
        const int row = static_cast<int>(rng.next() % 8);
        for (int c = 0; c < wr.cols(); ++c) wr.at(row, c) = 0.0f;

        for (sasim::Dataflow df : {sasim::Dataflow::Sos, sasim::Dataflow::Sws}) {
            const sasim::SimResult a = sasim::simulate_gemm(arch, df, w, x);
            const sasim::SimResult b = sasim::simulate_gemm(arch, df, wc, x);
            if (b.cycles > a.cycles || b.weight_words_read > a.weight_words_read) ++viol;
        }
        const sasim::SimResult a = sasim::simulate_gemm(arch, sasim::Dataflow::Sis, w, x);
        const sasim::SimResult b = sasim::simulate_gemm(arch, sasim::Dataflow::Sis, wr, x);
        if (b.cycles > a.cycles || b.weight_words_read > a.weight_words_read) ++viol;
    }

    const sasim::DenseMatrix wz(8, 12);
    const sasim::DenseMatrix xz = sasim::random_sparse(12, 6, 0.0, 42);
    uint64_t zero_macs = 0;
    for (sasim::Dataflow df : {sasim::Dataflow::Sos, sasim::Dataflow::Sws, sasim::Dataflow::Sis,
                               sasim::Dataflow::CsOs})
        zero_macs += sasim::simulate_gemm(arch, df, wz, xz).mac_ops;

    return {viol == 0 && zero_macs == 0,
            std::to_string(viol) + " monotonicity violations over 1000 tiles x 3 dataflows; "
            "all-zero tile MACs = " + std::to_string(zero_macs)};
}

// ---------------------------------------------------------------------------
// 5. The all-zero-column probability follows s^n: Monte-Carlo fraction within
//    3 binomial sigmas of the closed form.
Outcome ac5() {
    const std::pair<double, int> cases[3] = {{0.9, 4}, {0.9, 16}, {0.7, 8}};
    const int trials = 100000;
    sasim::Xoshiro256pp rng(0xACCE5505u);
    bool ok = true;
    std::string d;
    for (const auto& [s, n] : cases) {
        int zero_cols = 0;
        for (int t = 0; t < trials; ++t) {
            bool all = true;
            for (int i = 0; i < n; ++i)
                if (rng.next_unit() >= s) all = false;
            zero_cols += all ? 1 : 0;
        }
        const double p = sasim::zero_column_probability(s, n);
        const double sigma = std::sqrt(p * (1.0 - p) / trials);
        const double delta = std::abs(zero_cols / static_cast<double>(trials) - p);
        ok = ok && delta <= kBinomialSigmas * sigma;
        if (!d.empty()) d += ", ";
        d += "(s=" + fmt(s, 2) + ",n=" + std::to_string(n) + "): |" +
             fmt(zero_cols / static_cast<double>(trials), 4) + "-" + fmt(p, 4) + "| = " +
             fmt(delta, 3) + " vs 3sigma " + fmt(kBinomialSigmas * sigma, 3);
    }
    return {ok, d};
}

// ---------------------------------------------------------------------------
// 6. Footprint properties: dense identity, bitmap closed form, lossless
//    round-trips, and the size ordering two-stage-bitmap < bitmap < dense on
//    uniformly sparse 128x512 matrices at sparsity 0.9.
Outcome ac6() {
    bool dense_ok = true, bitmap_ok = true, rt_ok = true, order_ok = true;
    std::string order_d;

    const auto nnz_of = [](const sasim::DenseMatrix& m) {
        uint64_t nnz = 0;
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c) nnz += m.at(r, c) != 0.0f ? 1 : 0;
        return nnz;
    };

    for (int seed = 1; seed <= 3; ++seed) {
        const sasim::DenseMatrix m = sasim::random_sparse(128, 512, 0.9, 1000 + seed);
        const uint64_t nnz = nnz_of(m);
        const uint64_t rc = 128ull * 512ull;

        dense_ok = dense_ok && sasim::footprint_bits(m, sasim::FormatKind::Dense) == rc * 32;
        bitmap_ok = bitmap_ok && sasim::footprint_bits(m, sasim::FormatKind::Bitmap) ==
                                     32 * nnz + 32 * ((rc + 31) / 32);

        for (sasim::FormatKind kind : sasim::all_formats()) {
            sasim::FormatKind back{};
            const sasim::DenseMatrix rt =
                sasim::deserialize_encoding(sasim::serialize_encoding(m, kind), &back);
            rt_ok = rt_ok && rt == m && back == kind;
        }

        const uint64_t tsb = sasim::footprint_bits(m, sasim::FormatKind::TwoStageBitmap);
        const uint64_t bmp = sasim::footprint_bits(m, sasim::FormatKind::Bitmap);
        const uint64_t dns = sasim::footprint_bits(m, sasim::FormatKind::Dense);
        if (!(tsb < bmp && bmp < dns)) order_ok = false;
        if (seed == 1)
            order_d = "two-stage " + std::to_string(tsb) + " vs bitmap " + std::to_string(bmp) +
                      " vs dense " + std::to_string(dns) + " bits";
    }

    // small-matrix identities as well
    for (const auto& [r, c] : {std::pair<int, int>{4, 4}, {7, 9}, {32, 32}}) {
        const sasim::DenseMatrix m = sasim::random_sparse(r, c, 0.5, r * 100 + c);
        dense_ok = dense_ok && sasim::footprint_bits(m, sasim::FormatKind::Dense) ==
                                   static_cast<uint64_t>(r) * c * 32;
        bitmap_ok = bitmap_ok &&
                    sasim::footprint_bits(m, sasim::FormatKind::Bitmap) ==
                        32 * nnz_of(m) + 32 * ((static_cast<uint64_t>(r) * c + 31) / 32);
    }

    const bool pass = dense_ok && bitmap_ok && rt_ok && order_ok;
    std::string d = std::string("dense identity ") + (dense_ok ? "ok" : "BAD") +
                    "; bitmap closed form " + (bitmap_ok ? "ok" : "BAD") + "; round-trips " +
                    (rt_ok ? "ok" : "BAD") + "; ordering " + (order_ok ? "ok" : "VIOLATED") +
                    " (" + order_d + ")";
    if (!order_ok) {
        // show that the formulas themselves order correctly once zero columns
        // actually exist: same shape and density, zeros arranged column-wise
        sasim::DenseMatrix sm = sasim::random_sparse(128, 512, 0.0, 2024);
        for (int r = 0; r < sm.rows(); ++r)
            for (int c = 0; c < sm.cols(); ++c)
                if (c % 10 != 0) sm.at(r, c) = 0.0f;
        const uint64_t tsb2 = sasim::footprint_bits(sm, sasim::FormatKind::TwoStageBitmap);
        const uint64_t bmp2 = sasim::footprint_bits(sm, sasim::FormatKind::Bitmap);
        d += " — under uniform element sparsity 0.9 no column of 128 elements is empty "
             "(probability 0.9^128 ~ 1.4e-6), so the column stage saves nothing and adds "
             "a 512-bit column bitmap on top of the element bitmap; with the same zeros "
             "arranged as whole columns the ordering holds (two-stage " +
             std::to_string(tsb2) + " < bitmap " + std::to_string(bmp2) + " bits)";
    }
    return {pass, d};
}

// ---------------------------------------------------------------------------
// 7. Memory scaling: doubling both array dimensions (4x the PEs) with the
//    port count scaling only linearly yields a speedup inside [1.5, 2.5] on a
//    load-dominated dense workload.
Outcome ac7() {
    const sasim::DenseMatrix w = sasim::random_sparse(64, 64, 0.0, 77);
    const sasim::DenseMatrix x = sasim::random_sparse(64, 64, 0.0, 78);
    const sasim::SimResult small =
        sasim::simulate_gemm(make_arch(4, 4, 8), sasim::Dataflow::Dos, w, x);
    const sasim::SimResult big =
        sasim::simulate_gemm(make_arch(8, 8, 16), sasim::Dataflow::Dos, w, x);
    const double speedup = static_cast<double>(small.cycles) / static_cast<double>(big.cycles);
    return {speedup >= kSpeedupLo && speedup <= kSpeedupHi,
            "64x64x64 dense: 4x4 array " + std::to_string(small.cycles) + " cycles, 8x8 array " +
                std::to_string(big.cycles) + " cycles, speedup " + fmt(speedup, 4) + " in [" +
                fmt(kSpeedupLo, 2) + ", " + fmt(kSpeedupHi, 2) + "]"};
}

// ---------------------------------------------------------------------------
// 8. Pruning schedule against a threshold oracle: walks 0.70 -> 0.83 in 0.01
//    steps (14 accepted), stops when 0.84 is rejected, pruned columns stay
//    zero throughout and vanish from both sparse encodings.
Outcome ac8() {
    const sasim::DenseMatrix base = sasim::random_sparse(8, 100, 0.0, 7);

    std::vector<std::set<int>> snapshots;  // zero-column set of every candidate, in order
    const auto zero_cols_of = [](const sasim::DenseMatrix& m) {
        std::set<int> z;
        for (int c = 0; c < m.cols(); ++c) {
            bool all = true;
            for (int r = 0; r < m.rows(); ++r) all = all && m.at(r, c) == 0.0f;
            if (all) z.insert(c);
        }
        return z;
    };

    sasim::PruneScheduleConfig cfg;
    cfg.orientation = sasim::PruneOrientation::Column;
    cfg.vector_len = 8;
    cfg.start_sparsity = 0.70;
    cfg.step = 0.01;
    cfg.max_sparsity = 1.0;
    cfg.target_accuracy = 1.0;
    cfg.tolerance = 0.0;
    cfg.max_attempts = 1;

    const sasim::AccuracyOracle oracle =
        [&](const std::vector<sasim::DenseMatrix>& group) -> double {
        const std::set<int> z = zero_cols_of(group.front());
        snapshots.push_back(z);
        const double frac = static_cast<double>(z.size()) / group.front().cols();
        return frac <= kOracleAccept + 1e-9 ? 1.0 : 0.0;
    };

    const sasim::PruneScheduleResult res = sasim::prune_schedule({base}, cfg, oracle);

    int accepted = 0;
    for (const sasim::PruneEvaluation& e : res.history) accepted += e.accepted ? 1 : 0;
    const bool walk_ok = std::abs(res.sparsity - 0.83) < 1e-9 && res.history.size() == 15 &&
                         accepted == 14 && res.any_accepted && !res.history.back().accepted;

    bool nested = true;
    for (std::size_t i = 1; i < snapshots.size(); ++i)
        nested = nested && std::includes(snapshots[i].begin(), snapshots[i].end(),
                                         snapshots[i - 1].begin(), snapshots[i - 1].end());

    const sasim::DenseMatrix& fin = res.group.front();
    const std::set<int> pruned = zero_cols_of(fin);
    const bool count_ok = pruned.size() == 83;

    // column stage of the two-stage bitmap: exactly the surviving columns set
    const sasim::TwoStageBitmapTile tsb = sasim::encode_two_stage_bitmap(fin);
    int marked = 0;
    for (int c = 0; c < fin.cols(); ++c)
        marked += (tsb.col_bitmap[c / 32] >> (c % 32)) & 1u ? 1 : 0;
    const bool tsb_ok = marked == fin.cols() - static_cast<int>(pruned.size());

    // merged-column encoding: no entry may reference a pruned column
    const sasim::CsbTile csb = sasim::encode_csb(fin);
    bool csb_ok = csb.merged_col_count <= 17;
    for (const sasim::CsbEntry& e : csb.entries)
        if (e.col_index >= 0 && pruned.count(e.col_index)) csb_ok = false;

    return {walk_ok && nested && count_ok && tsb_ok && csb_ok,
            "final sparsity " + fmt(res.sparsity, 4) + ", " + std::to_string(accepted) +
                " accepted of " + std::to_string(res.history.size()) + " evaluations; " +
                std::to_string(pruned.size()) + " pruned columns, zero sets nested: " +
                (nested ? "yes" : "NO") + "; column bitmap marks " + std::to_string(marked) +
                " live columns; merged encoding references no pruned column: " +
                (csb_ok ? "yes" : "NO")};
}

// ---------------------------------------------------------------------------
// 9. Exploration sweep: exact grid size, brute-force-optimal selection, and a
//    workload whose per-operator dataflow winners differ.
Outcome ac9() {
    // operator 1: weights populated only in every 8th column
    sasim::DenseMatrix w1 = sasim::random_sparse(16, 48, 0.0, 101);
    for (int r = 0; r < w1.rows(); ++r)
        for (int c = 0; c < w1.cols(); ++c)
            if (c % 8 != 0) w1.at(r, c) = 0.0f;
    // operator 2: a tall weight matrix with only three populated rows — the
    // output-stationary family still walks every band and drains every tile,
    // while the input-stationary schedule visits just the populated rows
    sasim::DenseMatrix w2 = sasim::random_sparse(120, 8, 0.0, 103);
    for (int r = 0; r < w2.rows(); ++r)
        for (int c = 0; c < w2.cols(); ++c)
            if (r != 0 && r != 40 && r != 80) w2.at(r, c) = 0.0f;
    // operator 3: fully dense
    const sasim::DenseMatrix w3 = sasim::random_sparse(20, 20, 0.0, 105);

    const auto fc = [](const std::string& name, int out_f, int in_f, int batch) {
        sasim::OperatorSpec op;
        op.kind = sasim::OperatorSpec::Kind::Fc;
        op.name = name;
        op.fc.in_features = in_f;
        op.fc.out_features = out_f;
        op.fc.batch = batch;
        return op;
    };
    std::vector<sasim::DseWorkloadItem> items;
    items.push_back({fc("colsparse", 16, 48, 8), w1, sasim::random_sparse(48, 8, 0.0, 102)});
    items.push_back({fc("rowsparse", 120, 8, 8), w2, sasim::random_sparse(8, 8, 0.0, 104)});
    items.push_back({fc("dense", 20, 20, 20), w3, sasim::random_sparse(20, 20, 0.0, 106)});

    sasim::DseConfig cfg;
    cfg.pe_budget = 72;
    cfg.min_dim = 2;
    cfg.variants = {sasim::PruneVariant::None};
    cfg.jobs = 2;
    const sasim::DseResult res = sasim::run_dse(items, cfg);

    const std::size_t n_shapes = res.shapes.size();
    const std::size_t n_flows = sasim::all_dataflows().size();
    const bool grid_ok = n_shapes == 10 && res.cells.size() == 10 * 1 * items.size() * n_flows;

    bool none_failed = true;
    for (const sasim::DseCell& cell : res.cells) none_failed = none_failed && !cell.failed;

    // brute-force re-selection from the raw cells
    const auto cell_at = [&](std::size_t si, std::size_t oi, std::size_t di)
        -> const sasim::DseCell& { return res.cells[(si * items.size() + oi) * n_flows + di]; };
    uint64_t bf_total = UINT64_MAX;
    std::size_t bf_shape = 0;
    std::vector<sasim::Dataflow> bf_flows;
    for (std::size_t si = 0; si < n_shapes; ++si) {
        uint64_t total = 0;
        std::vector<sasim::Dataflow> flows;
        for (std::size_t oi = 0; oi < items.size(); ++oi) {
            uint64_t best = UINT64_MAX;
            sasim::Dataflow bdf = sasim::Dataflow::Dos;
            for (std::size_t di = 0; di < n_flows; ++di) {
                const sasim::DseCell& cell = cell_at(si, oi, di);
                if (!cell.failed && cell.result.cycles < best) {
                    best = cell.result.cycles;
                    bdf = cell.dataflow;
                }
            }
            total += best;
            flows.push_back(bdf);
        }
        if (total < bf_total) {
            bf_total = total;
            bf_shape = si;
            bf_flows = flows;
        }
    }
    const bool select_ok = static_cast<std::size_t>(res.best.shape_index) == bf_shape &&
                           res.best.total_cycles == bf_total &&
                           res.best.per_op_dataflow == bf_flows;

    // per-operator winners must differ, and the mixed assignment must beat
    // the best single-dataflow assignment at the selected shape
    bool winners_differ = false;
    for (const sasim::Dataflow df : res.best.per_op_dataflow)
        winners_differ = winners_differ || df != res.best.per_op_dataflow.front();
    uint64_t best_uniform = UINT64_MAX;
    sasim::Dataflow uniform_flow = sasim::Dataflow::Dos;
    for (std::size_t di = 0; di < n_flows; ++di) {
        uint64_t total = 0;
        bool usable = true;
        for (std::size_t oi = 0; oi < items.size(); ++oi) {
            const sasim::DseCell& cell = cell_at(res.best.shape_index, oi, di);
            usable = usable && !cell.failed;
            total += cell.failed ? 0 : cell.result.cycles;
        }
        if (usable && total < best_uniform) {
            best_uniform = total;
            uniform_flow = sasim::all_dataflows()[di];
        }
    }
    const bool mixed_wins = res.best.total_cycles < best_uniform;

    std::string winners;
    for (const sasim::Dataflow df : res.best.per_op_dataflow) {
        if (!winners.empty()) winners += "/";
        winners += sasim::dataflow_name(df);
    }
    return {grid_ok && none_failed && select_ok && winners_differ && mixed_wins,
            std::to_string(res.cells.size()) + " cells over " + std::to_string(n_shapes) +
                " shapes; selection matches brute force: " + (select_ok ? "yes" : "NO") +
                "; best shape " + std::to_string(res.best.shape.rows) + "x" +
                std::to_string(res.best.shape.cols) + ", per-operator winners " + winners +
                ", mixed " + std::to_string(res.best.total_cycles) + " cycles < uniform " +
                std::string(sasim::dataflow_name(uniform_flow)) + " " +
                std::to_string(best_uniform)};
}

// ---------------------------------------------------------------------------
// 10. Pruned-over-dense speedup on a synthetic workload at sparsity 0.8,
//     both sides free to pick their best dataflow; measured value reported.
Outcome ac10() {
    const sasim::ArchConfig arch = make_arch(4, 4);
    const sasim::DenseMatrix w = sasim::random_sparse(12, 40, 0.0, 901);
    const sasim::DenseMatrix x = sasim::random_sparse(40, 10, 0.0, 902);

    sasim::OperatorSpec op;
    op.kind = sasim::OperatorSpec::Kind::Fc;
    op.name = "synthetic";
    op.fc.in_features = 40;
    op.fc.out_features = 12;
    op.fc.batch = 10;

    sasim::PruneConfig pcfg;
    pcfg.orientation = sasim::PruneOrientation::Column;
    pcfg.vector_len = 12;
    pcfg.sparsity = 0.8;
    const sasim::DenseMatrix wp = sasim::prune_vectors({w}, pcfg).front();

    const auto dense = sasim::best_dataflow(arch, op, w, x);
    const auto sparse = sasim::best_dataflow(arch, op, wp, x);
    const double speedup =
        static_cast<double>(dense.second.cycles) / static_cast<double>(sparse.second.cycles);
    return {speedup > 1.0,
            "dense best " + std::string(sasim::dataflow_name(dense.first)) + " " +
                std::to_string(dense.second.cycles) + " cycles; pruned best " +
                std::string(sasim::dataflow_name(sparse.first)) + " " +
                std::to_string(sparse.second.cycles) + " cycles; sparse-over-dense speedup " +
                fmt(speedup, 4)};
}

}  // namespace

int main() {
    const std::pair<int, Outcome (*)()> criteria[] = {
        {1, ac1}, {2, ac2}, {3, ac3}, {4, ac4}, {5, ac5},
        {6, ac6}, {7, ac7}, {8, ac8}, {9, ac9}, {10, ac10},
    };
    int failures = 0;
    for (const auto& [id, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::cout << "[AC " << id << "] " << (o.pass ? "PASS" : "FAIL") << " — " << o.detail
                  << "\n";
    }
    std::cout << (failures == 0 ? "all criteria passed"
                                : std::to_string(failures) + " criterion(s) failed")
              << "\n";
    return failures == 0 ? 0 : 1;
}
