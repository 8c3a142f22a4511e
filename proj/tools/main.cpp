// sasim command-line front end.
//
// Exit codes: 0 success (including --help/--version), 1 I/O failure
// (missing, unreadable, or malformed files), 2 command-line parse error,
// 3 validation error (semantically invalid configuration or data).
//
// Every subcommand that produces files also writes a run manifest
// (<first-output>.manifest.json) recording the tool version, the
// parameters, and all inputs and outputs of the run.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sasim/arch.hpp"
#include "sasim/dse.hpp"
#include "sasim/formats.hpp"
#include "sasim/lowering.hpp"
#include "sasim/matrix.hpp"
#include "sasim/matrix_io.hpp"
#include "sasim/pruning.hpp"
#include "sasim/sim.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string lower_ext(const std::string& path) {
    std::string ext = fs::path(path).extension().string();
    for (char& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return ext;
}

sasim::DenseMatrix load_matrix(const std::string& path) {
    const std::string ext = lower_ext(path);
    if (ext == ".fsmx") return sasim::load_fsmx(path);
    if (ext == ".csv") return sasim::load_csv(path);
    throw std::invalid_argument("unsupported matrix extension (want .fsmx or .csv): " + path);
}

void save_matrix(const std::string& path, const sasim::DenseMatrix& m) {
    const std::string ext = lower_ext(path);
    if (ext == ".fsmx") {
        sasim::store_fsmx(m, path);
    } else if (ext == ".csv") {
        sasim::store_csv(m, path);
    } else {
        throw std::invalid_argument("unsupported matrix extension (want .fsmx or .csv): " + path);
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_json_file(const std::string& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

void write_manifest(const std::string& beside, const std::string& subcommand, const json& params,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
    json manifest;
    manifest["tool"] = "sasim";
    manifest["version"] = kVersion;
    manifest["subcommand"] = subcommand;
    manifest["parameters"] = params;
    manifest["inputs"] = inputs;
    manifest["outputs"] = outputs;
    write_json_file(beside + ".manifest.json", manifest);
}

json counters_json(const sasim::SimResult& r) {
    json j;
    j["cycles"] = r.cycles;
    j["controller_steps"] = r.controller_steps;
    j["drain_steps"] = r.drain_steps;
    j["stall_cycles"] = r.stall_cycles;
    j["weight_words_read"] = r.weight_words_read;
    j["input_words_read"] = r.input_words_read;
    j["output_words_written"] = r.output_words_written;
    j["partial_sum_words_read"] = r.partial_sum_words_read;
    j["mac_ops"] = r.mac_ops;
    j["weight_col_loads"] = r.weight_col_loads;
    return j;
}

sasim::OperatorSpec parse_operator(const json& j) {
    sasim::OperatorSpec op;
    const std::string kind = j.at("kind").get<std::string>();
    op.name = j.value("name", std::string{});
    if (kind == "fc") {
        op.kind = sasim::OperatorSpec::Kind::Fc;
        op.fc.in_features = j.at("in_features").get<int>();
        op.fc.out_features = j.at("out_features").get<int>();
        op.fc.batch = j.value("batch", 1);
    } else if (kind == "conv2d") {
        op.kind = sasim::OperatorSpec::Kind::Conv2d;
        op.conv.in_channels = j.at("in_channels").get<int>();
        op.conv.out_channels = j.at("out_channels").get<int>();
        op.conv.kernel_h = j.at("kernel_h").get<int>();
        op.conv.kernel_w = j.at("kernel_w").get<int>();
        op.conv.stride = j.value("stride", 1);
        op.conv.padding = j.value("padding", 0);
        op.conv.input_h = j.at("input_h").get<int>();
        op.conv.input_w = j.at("input_w").get<int>();
    } else {
        throw std::invalid_argument("operator kind must be \"fc\" or \"conv2d\", got: " + kind);
    }
    op.validate();
    return op;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return json::parse(in);
}

// A workload matrix is either a file path or {"random": {...}}.
sasim::DenseMatrix load_matrix_spec(const json& v, std::vector<std::string>* inputs) {
    if (v.is_string()) {
        const std::string path = v.get<std::string>();
        if (inputs) inputs->push_back(path);
        return load_matrix(path);
    }
    if (v.is_object() && v.contains("random")) {
        const json& r = v.at("random");
        return sasim::random_sparse(r.at("rows").get<int>(), r.at("cols").get<int>(),
                                    r.value("sparsity", 0.0), r.at("seed").get<uint64_t>());
    }
    throw std::invalid_argument("matrix spec must be a path or {\"random\": {...}}");
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char ch : s) {
        if (ch == '\'')
            out += "'\\''";
        else
            out += ch;
    }
    out += "'";
    return out;
}

// --- subcommand option bags ---

struct GenOpts {
    int rows = 0, cols = 0;
    double sparsity = 0.0;
    uint64_t seed = 1;
    std::string output;
};

struct FootprintOpts {
    std::string input;
    std::string matrix;  // --matrix alias for the positional
    std::vector<std::string> formats;
    std::string report;
    std::string csv;
};

struct EncodeOpts {
    std::string input;
    std::string format;
    std::string output;
    bool decode = false;
};

struct LowerOpts {
    std::string op_path;
    std::string weights, inputs;
    std::string out_weights, out_inputs;
};

struct SimOpts {
    std::string weights, inputs;
    std::string dataflow = "dOS";
    std::string arch_path;
    int rows = 4, cols = 4, ports = 8, regfile = 9;
    std::string op_path;
    std::string output;
    std::string report;
    std::string trace;
};

struct PruneOpts {
    std::vector<std::string> matrices;
    std::string config_path;
    std::string orientation = "column";
    int vector_len = 4;
    double sparsity = -1.0;
    bool schedule = false;
    double start = 0.0, step = 0.05, max_sparsity = 1.0;
    double target = 0.0, tolerance = 0.0;
    int max_attempts = 1;
    std::string oracle_cmd;
    double oracle_max_zero_fraction = -1.0;
    std::string output_prefix;
    std::string report;
    std::string history;
};

struct DseOpts {
    std::string workload;
    std::string config_path;
    int budget = 72, min_dim = 2, jobs = 1;
    std::vector<std::string> variants = {"none"};
    std::vector<std::string> dataflows;
    double prune_sparsity = 0.5;
    std::string report;
    std::string grid_csv;
    std::string summary_path;
};

int run_gen(const GenOpts& o) {
    sasim::DenseMatrix m = sasim::random_sparse(o.rows, o.cols, o.sparsity, o.seed);
    save_matrix(o.output, m);
    const sasim::Sparsity sp = sasim::measure_sparsity(m);

    json params{{"rows", o.rows},
                {"cols", o.cols},
                {"sparsity", o.sparsity},
                {"seed", o.seed}};
    write_manifest(o.output, "gen", params, {}, {o.output});

    json out;
    out["output"] = o.output;
    out["rows"] = o.rows;
    out["cols"] = o.cols;
    out["requested_sparsity"] = o.sparsity;
    out["actual_zero_fraction"] = sp.fraction();
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_footprint(const FootprintOpts& opt) {
    FootprintOpts o = opt;
    if (o.input.empty()) o.input = o.matrix;
    const sasim::DenseMatrix m = load_matrix(o.input);

    std::vector<sasim::FormatKind> kinds;
    const bool want_all = o.formats.empty() ||
                          std::find(o.formats.begin(), o.formats.end(), "all") != o.formats.end();
    if (want_all) {
        kinds = sasim::all_formats();
    } else {
        for (const std::string& name : o.formats) kinds.push_back(sasim::format_from_name(name));
    }

    const sasim::Sparsity sp = sasim::measure_sparsity(m);
    json report;
    report["matrix"] = {{"path", o.input},
                        {"rows", m.rows()},
                        {"cols", m.cols()},
                        {"nonzeros", sp.total - sp.zero_count},
                        {"zero_fraction", sp.fraction()}};
    json rows = json::array();
    std::ostringstream csv;
    csv << "format,sparsity,bits\n";
    for (sasim::FormatKind kind : kinds) {
        const uint64_t bits = sasim::footprint_bits(m, kind);
        rows.push_back({{"format", sasim::format_name(kind)},
                        {"bits", bits},
                        {"words", (bits + 31) / 32}});
        csv << sasim::format_name(kind) << "," << sp.fraction() << "," << bits << "\n";
    }
    report["footprints"] = rows;

    std::vector<std::string> outputs;
    if (!o.report.empty()) {
        write_json_file(o.report, report);
        outputs.push_back(o.report);
    }
    if (!o.csv.empty()) {
        write_text_file(o.csv, csv.str());
        outputs.push_back(o.csv);
    }
    if (!outputs.empty()) {
        json params{{"input", o.input}};
        write_manifest(outputs.front(), "footprint", params, {o.input}, outputs);
    }
    std::cout << csv.str();
    return 0;
}

int run_encode(const EncodeOpts& o) {
    if (o.decode) {
        std::ifstream in(o.input, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open: " + o.input);
        std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
        sasim::FormatKind kind{};
        const sasim::DenseMatrix m = sasim::deserialize_encoding(bytes, &kind);
        save_matrix(o.output, m);
        write_manifest(o.output, "encode", json{{"decode", true}}, {o.input}, {o.output});

        json out;
        out["format"] = sasim::format_name(kind);
        out["rows"] = m.rows();
        out["cols"] = m.cols();
        out["output"] = o.output;
        std::cout << out.dump(2) << "\n";
        return 0;
    }

    if (o.format.empty()) throw std::invalid_argument("encode: --format is required");
    const sasim::DenseMatrix m = load_matrix(o.input);
    const sasim::FormatKind kind = sasim::format_from_name(o.format);
    const std::vector<uint8_t> bytes = sasim::serialize_encoding(m, kind);

    // round-trip guard: what we wrote must decode to the same matrix
    sasim::FormatKind back{};
    if (sasim::deserialize_encoding(bytes, &back) != m || back != kind) {
        throw std::runtime_error("encode round-trip mismatch (internal error)");
    }

    std::ofstream out_file(o.output, std::ios::binary);
    if (!out_file) throw std::runtime_error("cannot open for writing: " + o.output);
    out_file.write(reinterpret_cast<const char*>(bytes.data()),
                   static_cast<std::streamsize>(bytes.size()));
    if (!out_file) throw std::runtime_error("write failed: " + o.output);

    json params{{"format", o.format}};
    write_manifest(o.output, "encode", params, {o.input}, {o.output});

    json out;
    out["format"] = o.format;
    out["bytes"] = bytes.size();
    out["footprint_bits"] = sasim::footprint_bits(m, kind);
    out["output"] = o.output;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_lower(const LowerOpts& o) {
    const sasim::OperatorSpec op = parse_operator(read_json_file(o.op_path));
    const sasim::DenseMatrix w = load_matrix(o.weights);
    const sasim::DenseMatrix x = load_matrix(o.inputs);
    const sasim::DenseMatrix lw = sasim::lower_weights(op, w);
    const sasim::DenseMatrix lx = sasim::lower_inputs(op, x);
    save_matrix(o.out_weights, lw);
    save_matrix(o.out_inputs, lx);

    json params{{"operator", o.op_path}};
    write_manifest(o.out_weights, "lower", params, {o.op_path, o.weights, o.inputs},
                   {o.out_weights, o.out_inputs});

    json out;
    out["m"] = op.gemm_m();
    out["k"] = op.gemm_k();
    out["n"] = op.gemm_n();
    out["out_weights"] = o.out_weights;
    out["out_inputs"] = o.out_inputs;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_sim(const SimOpts& o) {
    sasim::ArchConfig arch;
    if (!o.arch_path.empty()) {
        const json aj = read_json_file(o.arch_path);
        arch.pe_rows = aj.value("pe_rows", arch.pe_rows);
        arch.pe_cols = aj.value("pe_cols", arch.pe_cols);
        arch.mem_ports = aj.value("mem_ports", arch.mem_ports);
        arch.port_width_bits = aj.value("port_width_bits", arch.port_width_bits);
        arch.regfile_size = aj.value("regfile_size", arch.regfile_size);
        arch.word_bits = aj.value("word_bits", arch.word_bits);
    } else {
        arch.pe_rows = o.rows;
        arch.pe_cols = o.cols;
        arch.mem_ports = o.ports;
        arch.regfile_size = o.regfile;
    }

    sasim::DenseMatrix w = load_matrix(o.weights);
    sasim::DenseMatrix x = load_matrix(o.inputs);
    if (!o.op_path.empty()) {
        const sasim::OperatorSpec op = parse_operator(read_json_file(o.op_path));
        w = sasim::lower_weights(op, w);
        x = sasim::lower_inputs(op, x);
    }

    const sasim::Dataflow df = sasim::dataflow_from_name(o.dataflow);

    std::string trace_text;
    sasim::SimHooks hooks;
    sasim::SimHooks* hooks_ptr = nullptr;
    if (!o.trace.empty()) {
        trace_text = "step,unit,action,address\n";
        hooks.trace = [&trace_text](const sasim::TraceEvent& ev) {
            trace_text += std::to_string(ev.step) + "," + ev.unit + "," + ev.action + "," +
                          std::to_string(ev.address) + "\n";
        };
        hooks_ptr = &hooks;
    }

    sasim::DenseMatrix product;
    const sasim::SimResult r =
        sasim::simulate_gemm(arch, df, w, x, o.output.empty() ? nullptr : &product, hooks_ptr);

    json report;
    report["version"] = kVersion;
    report["arch"] = {{"pe_rows", arch.pe_rows},
                      {"pe_cols", arch.pe_cols},
                      {"mem_ports", arch.mem_ports},
                      {"regfile_size", arch.regfile_size}};
    report["dataflow"] = o.dataflow;
    report["gemm"] = {{"m", w.rows()}, {"k", w.cols()}, {"n", x.cols()}};
    report["counters"] = counters_json(r);
    report["steps_per_tile"] = r.steps_per_tile;

    std::vector<std::string> outputs;
    if (!o.output.empty()) {
        save_matrix(o.output, product);
        outputs.push_back(o.output);
    }
    if (!o.report.empty()) {
        write_json_file(o.report, report);
        outputs.push_back(o.report);
    }
    if (!o.trace.empty()) {
        write_text_file(o.trace, trace_text);
        outputs.push_back(o.trace);
    }
    if (!outputs.empty()) {
        json params{{"dataflow", o.dataflow},
                    {"pe_rows", arch.pe_rows},
                    {"pe_cols", arch.pe_cols},
                    {"mem_ports", arch.mem_ports}};
        std::vector<std::string> inputs{o.weights, o.inputs};
        if (!o.op_path.empty()) inputs.push_back(o.op_path);
        if (!o.arch_path.empty()) inputs.push_back(o.arch_path);
        write_manifest(outputs.front(), "sim", params, inputs, outputs);
    }

    std::cout << report.dump(2) << "\n";
    return 0;
}

// The oracle command receives one argument: the directory holding the
// candidate weights (candidate_0.fsmx, candidate_1.fsmx, ...). It must print
// a numeric accuracy to stdout.
sasim::AccuracyOracle make_command_oracle(const std::string& cmd, const std::string& dir) {
    return [cmd, dir](const std::vector<sasim::DenseMatrix>& group) -> double {
        fs::create_directories(dir);
        for (std::size_t i = 0; i < group.size(); ++i) {
            sasim::store_fsmx(group[i], dir + "/candidate_" + std::to_string(i) + ".fsmx");
        }
        const std::string out_path = dir + "/oracle_stdout.txt";
        const std::string full = cmd + " " + shell_quote(dir) + " > " + shell_quote(out_path);
        const int rc = std::system(full.c_str());
        if (rc != 0) throw std::runtime_error("oracle command failed: " + cmd);
        std::ifstream in(out_path);
        double acc = 0.0;
        if (!(in >> acc)) throw std::runtime_error("oracle produced no numeric accuracy");
        return acc;
    };
}

int run_prune(const PruneOpts& opt) {
    PruneOpts o = opt;
    if (!o.config_path.empty()) {
        // the config file is the sole source of pruning parameters
        const json cj = read_json_file(o.config_path);
        o.orientation = cj.value("orientation", std::string("column"));
        if (o.orientation != "column" && o.orientation != "row")
            throw std::invalid_argument("prune config: orientation must be column or row");
        o.vector_len = cj.value("vector_len", 4);
        if (cj.contains("initial_sparsity") || cj.contains("start_sparsity")) {
            o.schedule = true;
            o.start = cj.contains("initial_sparsity") ? cj.at("initial_sparsity").get<double>()
                                                      : cj.at("start_sparsity").get<double>();
            o.step = cj.contains("delta") ? cj.at("delta").get<double>()
                                          : cj.value("step", 0.05);
            o.tolerance = cj.contains("epsilon") ? cj.at("epsilon").get<double>()
                                                 : cj.value("tolerance", 0.0);
            o.target = cj.value("target_accuracy", 0.0);
            o.max_attempts = cj.value("max_attempts", 1);
            o.max_sparsity = cj.value("max_sparsity", 1.0);
        } else if (cj.contains("sparsity")) {
            o.schedule = false;
            o.sparsity = cj.at("sparsity").get<double>();
        } else {
            throw std::invalid_argument(
                "prune config: need sparsity (one-shot) or initial_sparsity (schedule)");
        }
    }

    std::vector<sasim::DenseMatrix> group;
    for (const std::string& path : o.matrices) group.push_back(load_matrix(path));

    const sasim::PruneOrientation orientation = (o.orientation == "row")
                                                    ? sasim::PruneOrientation::Row
                                                    : sasim::PruneOrientation::Column;

    json report;
    report["version"] = kVersion;
    report["orientation"] = o.orientation;
    report["vector_len"] = o.vector_len;

    std::string history_csv = "step,sparsity,accuracy\n";
    std::vector<sasim::DenseMatrix> result_group;
    if (o.schedule) {
        sasim::PruneScheduleConfig cfg;
        cfg.orientation = orientation;
        cfg.vector_len = o.vector_len;
        cfg.start_sparsity = o.start;
        cfg.step = o.step;
        cfg.max_sparsity = o.max_sparsity;
        cfg.target_accuracy = o.target;
        cfg.tolerance = o.tolerance;
        cfg.max_attempts = o.max_attempts;

        sasim::AccuracyOracle oracle;
        if (!o.oracle_cmd.empty()) {
            std::string dir = o.output_prefix.empty()
                                  ? fs::temp_directory_path().string()
                                  : fs::path(o.output_prefix).parent_path().string();
            if (dir.empty()) dir = ".";
            oracle = make_command_oracle(o.oracle_cmd, dir + "/oracle_candidates");
        } else if (o.oracle_max_zero_fraction >= 0.0) {
            const double limit = o.oracle_max_zero_fraction;
            const int n = o.vector_len;
            oracle = [limit, orientation, n](const std::vector<sasim::DenseMatrix>& g) {
                // analytic stand-in: score 1 while the zero-vector share
                // stays within the limit, 0 beyond it
                std::size_t zeroed = 0, total = 0;
                sasim::PruneStats stats;
                sasim::PruneConfig probe{orientation, n, 0.0};
                (void)sasim::prune_vectors(g, probe, &stats);
                total = stats.vectors_total;
                for (const sasim::DenseMatrix& m : g) {
                    const int lines = (orientation == sasim::PruneOrientation::Column) ? m.cols()
                                                                                       : m.rows();
                    const int len = (orientation == sasim::PruneOrientation::Column) ? m.rows()
                                                                                     : m.cols();
                    const int segs = (len + n - 1) / n;
                    for (int line = 0; line < lines; ++line) {
                        for (int s = 0; s < segs; ++s) {
                            bool all_zero = true;
                            for (int e = s * n; e < std::min(len, (s + 1) * n) && all_zero; ++e) {
                                const float v = (orientation == sasim::PruneOrientation::Column)
                                                    ? m.at(e, line)
                                                    : m.at(line, e);
                                all_zero = v == 0.0f;
                            }
                            if (all_zero) ++zeroed;
                        }
                    }
                }
                const double frac =
                    total == 0 ? 0.0 : static_cast<double>(zeroed) / static_cast<double>(total);
                return frac <= limit + 1e-9 ? 1.0 : 0.0;
            };
        } else {
            throw std::invalid_argument(
                "schedule mode needs --oracle-cmd or --oracle-max-zero-fraction");
        }

        const sasim::PruneScheduleResult sched = sasim::prune_schedule(group, cfg, oracle);
        result_group = sched.group;

        report["mode"] = "schedule";
        report["final_sparsity"] = sched.sparsity;
        report["any_accepted"] = sched.any_accepted;
        json hist = json::array();
        std::size_t step_idx = 0;
        for (const sasim::PruneEvaluation& ev : sched.history) {
            hist.push_back({{"sparsity", ev.sparsity},
                            {"attempt", ev.attempt},
                            {"accuracy", ev.accuracy},
                            {"accepted", ev.accepted}});
            history_csv += std::to_string(step_idx++) + "," + std::to_string(ev.sparsity) + "," +
                           std::to_string(ev.accuracy) + "\n";
        }
        report["history"] = hist;
    } else {
        if (o.sparsity < 0.0)
            throw std::invalid_argument("one-shot mode needs --sparsity (or use --schedule)");
        sasim::PruneStats stats;
        sasim::PruneConfig cfg{orientation, o.vector_len, o.sparsity};
        result_group = sasim::prune_vectors(group, cfg, &stats);

        report["mode"] = "one-shot";
        report["sparsity"] = o.sparsity;
        report["vectors_total"] = stats.vectors_total;
        report["vectors_zeroed"] = stats.vectors_zeroed;
        report["zero_vector_fraction"] = stats.zero_fraction();
    }

    std::vector<std::string> outputs;
    if (!o.output_prefix.empty()) {
        for (std::size_t i = 0; i < result_group.size(); ++i) {
            const std::string path = o.output_prefix + std::to_string(i) + ".fsmx";
            sasim::store_fsmx(result_group[i], path);
            outputs.push_back(path);
        }
    }
    if (!o.report.empty()) {
        write_json_file(o.report, report);
        outputs.push_back(o.report);
    }
    if (!o.history.empty()) {
        if (!o.schedule)
            throw std::invalid_argument("--history requires schedule mode (it logs oracle calls)");
        write_text_file(o.history, history_csv);
        outputs.push_back(o.history);
    }
    if (!outputs.empty()) {
        json params{{"orientation", o.orientation},
                    {"vector_len", o.vector_len},
                    {"schedule", o.schedule}};
        std::vector<std::string> inputs(o.matrices.begin(), o.matrices.end());
        if (!o.config_path.empty()) inputs.push_back(o.config_path);
        write_manifest(outputs.front(), "prune", params, inputs, outputs);
    }

    std::cout << report.dump(2) << "\n";
    return 0;
}

std::vector<sasim::PruneVariant> parse_variants(const std::vector<std::string>& names) {
    std::vector<sasim::PruneVariant> out;
    for (const std::string& v : names) {
        if (v == "none")
            out.push_back(sasim::PruneVariant::None);
        else if (v == "column")
            out.push_back(sasim::PruneVariant::Column);
        else if (v == "row")
            out.push_back(sasim::PruneVariant::Row);
        else
            throw std::invalid_argument("unknown variant: " + v);
    }
    return out;
}

int run_dse(const DseOpts& opt) {
    DseOpts o = opt;
    std::vector<std::string> input_files;
    json operators = json::array();

    if (!o.config_path.empty()) {
        // the config file is the sole source of sweep parameters; operators
        // may be inlined or referenced via a workload file
        const json cj = read_json_file(o.config_path);
        input_files.push_back(o.config_path);
        o.budget = cj.value("pe_budget", 72);
        o.min_dim = cj.value("min_dim", 2);
        o.jobs = cj.value("jobs", o.jobs);
        o.prune_sparsity = cj.value("prune_sparsity", 0.5);
        if (cj.contains("variants"))
            o.variants = cj.at("variants").get<std::vector<std::string>>();
        if (cj.contains("dataflows"))
            o.dataflows = cj.at("dataflows").get<std::vector<std::string>>();
        if (cj.contains("operators")) {
            operators = cj.at("operators");
        } else if (cj.contains("workload")) {
            o.workload = cj.at("workload").get<std::string>();
        }
    }
    if (operators.empty()) {
        if (o.workload.empty())
            throw std::invalid_argument("dse: need --config with operators or --workload");
        const json wl = read_json_file(o.workload);
        input_files.push_back(o.workload);
        operators = wl.at("operators");
    }

    std::vector<sasim::DseWorkloadItem> items;
    for (const json& jop : operators) {
        sasim::DseWorkloadItem item;
        item.op = parse_operator(jop);
        item.weights = load_matrix_spec(jop.at("weights"), &input_files);
        item.inputs = load_matrix_spec(jop.at("inputs"), &input_files);
        items.push_back(std::move(item));
    }

    sasim::DseConfig cfg;
    cfg.pe_budget = o.budget;
    cfg.min_dim = o.min_dim;
    cfg.jobs = o.jobs;
    cfg.prune_sparsity = o.prune_sparsity;
    cfg.variants = parse_variants(o.variants);
    for (const std::string& name : o.dataflows)
        cfg.dataflows.push_back(sasim::dataflow_from_name(name));

    const sasim::DseResult res = sasim::run_dse(items, cfg);

    auto op_label = [&items](std::size_t oi) {
        return items[oi].op.name.empty() ? ("op" + std::to_string(oi)) : items[oi].op.name;
    };
    auto variant_n = [](const sasim::DseCell& cell) {
        if (cell.variant == sasim::PruneVariant::Column) return cell.shape.rows;
        if (cell.variant == sasim::PruneVariant::Row) return cell.shape.cols;
        return 0;
    };

    json report;
    report["version"] = kVersion;
    report["pe_budget"] = o.budget;
    json shapes = json::array();
    for (const sasim::ShapeOption& s : res.shapes) shapes.push_back({s.rows, s.cols});
    report["shapes"] = shapes;

    std::string grid = "shape,dataflow,n,orientation,operator,cycles,reads,writes,macs\n";
    std::size_t failed_cells = 0;
    json cells = json::array();
    for (const sasim::DseCell& cell : res.cells) {
        json jc = {{"shape", {cell.shape.rows, cell.shape.cols}},
                   {"variant", sasim::prune_variant_name(cell.variant)},
                   {"op", op_label(cell.op_index)},
                   {"dataflow", sasim::dataflow_name(cell.dataflow)}};
        if (cell.failed) {
            ++failed_cells;
            jc["failed"] = true;
            jc["error"] = cell.error;
        } else {
            jc["cycles"] = cell.result.cycles;
            jc["mac_ops"] = cell.result.mac_ops;
            jc["weight_words_read"] = cell.result.weight_words_read;
            jc["input_words_read"] = cell.result.input_words_read;
            jc["output_words_written"] = cell.result.output_words_written;
            const uint64_t reads = cell.result.weight_words_read + cell.result.input_words_read +
                                   cell.result.partial_sum_words_read;
            grid += std::to_string(cell.shape.rows) + "x" + std::to_string(cell.shape.cols) + "," +
                    sasim::dataflow_name(cell.dataflow) + "," + std::to_string(variant_n(cell)) +
                    "," + sasim::prune_variant_name(cell.variant) + "," + op_label(cell.op_index) +
                    "," + std::to_string(cell.result.cycles) + "," + std::to_string(reads) + "," +
                    std::to_string(cell.result.output_words_written) + "," +
                    std::to_string(cell.result.mac_ops) + "\n";
        }
        cells.push_back(std::move(jc));
    }
    report["cells"] = cells;

    json best;
    best["shape"] = {res.best.shape.rows, res.best.shape.cols};
    best["variant"] = sasim::prune_variant_name(res.best.variant);
    best["total_cycles"] = res.best.total_cycles;
    json per_op = json::array();
    for (std::size_t oi = 0; oi < res.best.per_op_dataflow.size(); ++oi) {
        per_op.push_back({{"op", op_label(oi)},
                          {"dataflow", sasim::dataflow_name(res.best.per_op_dataflow[oi])}});
    }
    best["per_op_dataflow"] = per_op;
    report["best"] = best;

    json summary;
    summary["version"] = kVersion;
    summary["shapes"] = shapes.size();
    summary["cells"] = cells.size();
    summary["failed_cells"] = failed_cells;
    summary["best"] = best;

    std::vector<std::string> outputs;
    if (!o.report.empty()) {
        write_json_file(o.report, report);
        outputs.push_back(o.report);
    }
    if (!o.grid_csv.empty()) {
        write_text_file(o.grid_csv, grid);
        outputs.push_back(o.grid_csv);
    }
    if (!o.summary_path.empty()) {
        write_json_file(o.summary_path, summary);
        outputs.push_back(o.summary_path);
    }
    if (!outputs.empty()) {
        json params{{"pe_budget", o.budget},
                    {"min_dim", o.min_dim},
                    {"jobs", o.jobs},
                    {"prune_sparsity", o.prune_sparsity}};
        write_manifest(outputs.front(), "dse", params, input_files, outputs);
    }

    std::cout << summary.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cycle-approximate simulator for a sparse systolic GEMM accelerator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    const std::vector<std::string> dataflow_names = {"dOS", "dWS", "dIS", "sOS",
                                                     "sWS", "sIS", "csOS"};
    const std::vector<std::string> format_names = {"dense", "csr", "csc",  "coo",
                                                   "rle4",  "bitmap", "two-stage-bitmap", "csb"};

    GenOpts gen;
    auto* sc_gen = app.add_subcommand("gen", "generate a random sparse matrix");
    sc_gen->add_option("--rows", gen.rows, "matrix rows")->required();
    sc_gen->add_option("--cols", gen.cols, "matrix cols")->required();
    sc_gen->add_option("--sparsity", gen.sparsity, "zero probability per element")
        ->default_val(0.0);
    sc_gen->add_option("--seed", gen.seed, "RNG seed")->default_val(1);
    sc_gen->add_option("--output,-o", gen.output, "output matrix (.fsmx or .csv)")->required();

    std::vector<std::string> format_choices = format_names;
    format_choices.push_back("all");

    FootprintOpts fp;
    auto* sc_fp = app.add_subcommand("footprint", "storage cost of a matrix across formats");
    auto* fp_in = sc_fp->add_option("input", fp.input, "matrix file (.fsmx or .csv)");
    auto* fp_mx = sc_fp->add_option("--matrix", fp.matrix, "matrix file (alias of the positional)");
    fp_in->excludes(fp_mx);
    sc_fp->add_option("--formats", fp.formats, "subset of formats, or all (default: all)")
        ->delimiter(',')
        ->check(CLI::IsMember(format_choices));
    sc_fp->add_option("--report", fp.report, "write the JSON report here too");
    sc_fp->add_option("--csv", fp.csv, "also write the CSV table to this file");

    EncodeOpts enc;
    auto* sc_enc = app.add_subcommand("encode", "encode a matrix into a sparse container");
    sc_enc->add_option("input", enc.input, "input file")->required();
    sc_enc->add_option("--format,-f", enc.format, "target format")
        ->check(CLI::IsMember(format_names));
    sc_enc->add_option("--output,-o", enc.output, "output file")->required();
    sc_enc->add_flag("--decode", enc.decode, "decode an .fsen container back to a matrix");

    LowerOpts low;
    auto* sc_low = app.add_subcommand("lower", "lower an operator to its GEMM form");
    sc_low->add_option("--op", low.op_path, "operator description (JSON)")->required();
    sc_low->add_option("--weights", low.weights, "raw weights")->required();
    sc_low->add_option("--inputs", low.inputs, "raw inputs")->required();
    sc_low->add_option("--out-weights", low.out_weights, "lowered weights")->required();
    sc_low->add_option("--out-inputs", low.out_inputs, "lowered inputs")->required();

    SimOpts sim;
    auto* sc_sim = app.add_subcommand("sim", "simulate one GEMM or operator");
    sc_sim->add_option("--weights", sim.weights, "weight matrix")->required();
    sc_sim->add_option("--inputs", sim.inputs, "input matrix")->required();
    sc_sim->add_option("--dataflow", sim.dataflow, "schedule to run")
        ->required()
        ->check(CLI::IsMember(dataflow_names));
    sc_sim->add_option("--arch", sim.arch_path,
                       "architecture JSON (pe_rows, pe_cols, mem_ports, port_width_bits); "
                       "overrides the individual flags");
    sc_sim->add_option("--rows", sim.rows, "PE rows")->default_val(4);
    sc_sim->add_option("--cols", sim.cols, "PE cols")->default_val(4);
    sc_sim->add_option("--ports", sim.ports, "memory ports")->default_val(8);
    sc_sim->add_option("--regfile", sim.regfile, "registers per PE")->default_val(9);
    sc_sim->add_option("--op", sim.op_path, "operator JSON: lower before simulating");
    sc_sim->add_option("--output,-o", sim.output, "write the computed product");
    sc_sim->add_option("--report", sim.report, "write the JSON report here too");
    sc_sim->add_option("--trace", sim.trace,
                       "write a per-word transaction trace (CSV: step,unit,action,address)");

    PruneOpts pr;
    auto* sc_pr = app.add_subcommand("prune", "vector-prune an operator group");
    sc_pr->add_option("matrices", pr.matrices, "weight matrices of the group")->required();
    sc_pr->add_option("--config", pr.config_path,
                      "pruning parameters as JSON; replaces the individual flags");
    sc_pr->add_option("--orientation", pr.orientation, "column or row")
        ->check(CLI::IsMember({"column", "row"}))
        ->default_val("column");
    sc_pr->add_option("--vector-len", pr.vector_len, "segment length n")->default_val(4);
    sc_pr->add_option("--sparsity", pr.sparsity, "one-shot vector sparsity");
    sc_pr->add_flag("--schedule", pr.schedule, "walk increasing sparsity levels");
    sc_pr->add_option("--start", pr.start, "schedule: first level")->default_val(0.0);
    sc_pr->add_option("--step", pr.step, "schedule: level increment")->default_val(0.05);
    sc_pr->add_option("--max-sparsity", pr.max_sparsity, "schedule: highest level")
        ->default_val(1.0);
    sc_pr->add_option("--target", pr.target, "schedule: accuracy target")->default_val(0.0);
    sc_pr->add_option("--tolerance", pr.tolerance, "schedule: accuracy slack")->default_val(0.0);
    sc_pr->add_option("--max-attempts", pr.max_attempts, "schedule: oracle retries per level")
        ->default_val(1);
    sc_pr->add_option("--oracle-cmd", pr.oracle_cmd,
                      "external oracle: command invoked with the candidate weight directory, "
                      "prints accuracy");
    sc_pr->add_option("--oracle-max-zero-fraction", pr.oracle_max_zero_fraction,
                      "built-in oracle: accept while the zero-vector share stays within this");
    sc_pr->add_option("--output-prefix", pr.output_prefix, "write pruned matrices here");
    sc_pr->add_option("--report", pr.report, "write the JSON report here too");
    sc_pr->add_option("--history", pr.history,
                      "write the oracle call log (CSV: step,sparsity,accuracy)");

    DseOpts dse;
    auto* sc_dse = app.add_subcommand("dse", "explore PE grid shapes, dataflows and variants");
    sc_dse->add_option("--config", dse.config_path,
                       "sweep parameters as JSON; replaces the individual flags");
    sc_dse->add_option("--workload", dse.workload, "workload description (JSON)");
    sc_dse->add_option("--budget", dse.budget, "total PE budget")->default_val(72);
    sc_dse->add_option("--min-dim", dse.min_dim, "minimum grid side")->default_val(2);
    sc_dse->add_option("--jobs,-j", dse.jobs, "worker threads")->default_val(1);
    sc_dse->add_option("--variants", dse.variants, "none,column,row subset")
        ->delimiter(',')
        ->check(CLI::IsMember({"none", "column", "row"}));
    sc_dse->add_option("--dataflows", dse.dataflows, "subset of dataflows (default: all)")
        ->delimiter(',')
        ->check(CLI::IsMember(dataflow_names));
    sc_dse->add_option("--prune-sparsity", dse.prune_sparsity,
                       "vector sparsity used by pruning variants")
        ->default_val(0.5);
    sc_dse->add_option("--report", dse.report, "write the full JSON report here");
    sc_dse->add_option("--grid-csv", dse.grid_csv,
                       "write the evaluated grid "
                       "(CSV: shape,dataflow,n,orientation,operator,cycles,reads,writes,macs)");
    sc_dse->add_option("--summary", dse.summary_path, "write the summary JSON here too");

    int rc = 0;
    sc_gen->callback([&] { rc = run_gen(gen); });
    sc_fp->callback([&] {
        // exactly one input source; thrown inside parse() so it reports as a
        // usage error (exit 2) like any other missing required option
        if (fp.input.empty() && fp.matrix.empty()) throw CLI::RequiredError("input (or --matrix)");
        rc = run_footprint(fp);
    });
    sc_enc->callback([&] { rc = run_encode(enc); });
    sc_low->callback([&] { rc = run_lower(low); });
    sc_sim->callback([&] { rc = run_sim(sim); });
    sc_pr->callback([&] { rc = run_prune(pr); });
    sc_dse->callback([&] { rc = run_dse(dse); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const nlohmann::json::parse_error& e) {
        std::cerr << "error: malformed JSON: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: invalid configuration: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
