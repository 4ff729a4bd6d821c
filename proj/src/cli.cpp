#include "flowec/cli.hpp"

#include "flowec/compile.hpp"
#include "flowec/coupling_map.hpp"
#include "flowec/ec.hpp"
#include "flowec/errors.hpp"
#include "flowec/generate.hpp"
#include "flowec/qasm.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace flowec::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CheckFlags {
    std::string strategy = "flow";
    double tolerance = 1e-9;
    bool up_to_global_phase = false;
    std::string ancilla_mode = "clean";
    int opt_level = 1;
    bool json_output = false;
    double timeout = 3600.0;
    std::size_t watermark = 100000;
};

void add_check_flags(CLI::App& cmd, CheckFlags& f) {
    cmd.add_option("--strategy", f.strategy, "naive, proportional, flow or all")
        ->check(CLI::IsMember({"naive", "proportional", "flow", "all"}))
        ->capture_default_str();
    cmd.add_option("--tolerance", f.tolerance, "final identity tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_flag("--up-to-global-phase", f.up_to_global_phase, "ignore a global phase");
    cmd.add_option("--ancilla-mode", f.ancilla_mode, "ancilla semantics")
        ->check(CLI::IsMember({"clean"}))
        ->capture_default_str();
    cmd.add_option("--opt", f.opt_level, "optimization level assumed without a record")
        ->check(CLI::Range(0, 1))
        ->capture_default_str();
    cmd.add_flag("--json", f.json_output, "machine-readable output");
    cmd.add_option("--timeout", f.timeout, "seconds per check")->check(CLI::PositiveNumber)->capture_default_str();
    cmd.add_option("--watermark", f.watermark, "node count that switches flow to proportional scheduling")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

ec::Options options_of(const CheckFlags& f) {
    ec::Options o;
    o.tolerance = f.tolerance;
    o.up_to_global_phase = f.up_to_global_phase;
    o.assumed_opt_level = f.opt_level;
    o.timeout_seconds = f.timeout;
    o.watermark = f.watermark;
    return o;
}

std::vector<ec::Strategy> strategies_of(const std::string& name) {
    if (name == "all") {
        return {ec::Strategy::Naive, ec::Strategy::Proportional, ec::Strategy::Flow};
    }
    return {*ec::parse_strategy(name)};
}

json result_json(const ec::Result& r, std::size_t gates_g, std::size_t gates_gp) {
    json j{{"verdict", ec::to_string(r.verdict)},
           {"strategy", ec::to_string(r.strategy)},
           {"seconds", r.stats.seconds},
           {"peak_nodes", r.stats.peak_nodes},
           {"gates_g", gates_g},
           {"gates_g_prime", gates_gp},
           {"fallback", r.stats.fallback}};
    if (!r.reason.empty()) {
        j["reason"] = r.reason;
    }
    return j;
}

int exit_code_of(ec::Verdict v) {
    switch (v) {
    case ec::Verdict::Equivalent:
        return kExitEquivalent;
    case ec::Verdict::NotEquivalent:
        return kExitNotEquivalent;
    case ec::Verdict::Unknown:
        break;
    }
    return kExitUnknown;
}

// Worst verdict wins: unknown over not_equivalent over equivalent.
int combine(int a, int b) { return std::max(a, b); }

Circuit read_circuit(const std::string& path, std::ostream& err) {
    std::vector<std::string> warnings;
    Circuit c = read_qasm_file(path, &warnings);
    for (const auto& w : warnings) {
        err << "warning: " << path << ": " << w << '\n';
    }
    return c;
}

std::vector<ec::Result> run_strategies(const std::vector<ec::Strategy>& strategies, const Circuit& g,
                                       const Circuit& gp, const compile::CompileRecord* record,
                                       const ec::Options& options) {
    std::vector<ec::Result> results;
    results.reserve(strategies.size());
    for (const auto s : strategies) {
        results.push_back(ec::check(s, g, gp, record, options));
    }
    return results;
}

bool verdicts_agree(const std::vector<ec::Result>& results) {
    for (const auto& r : results) {
        if (r.verdict == ec::Verdict::Unknown || results.front().verdict == ec::Verdict::Unknown) {
            continue;
        }
        if (r.verdict != results.front().verdict) {
            return false;
        }
    }
    return true;
}

int cmd_verify(const std::string& g_path, const std::string& gp_path, const std::string& record_path,
               const CheckFlags& flags, std::ostream& out, std::ostream& err) {
    const Circuit g = read_circuit(g_path, err);
    const Circuit gp = read_circuit(gp_path, err);
    std::optional<compile::CompileRecord> record;
    if (!record_path.empty()) {
        record = compile::CompileRecord::load(record_path);
    }
    const auto results =
        run_strategies(strategies_of(flags.strategy), g, gp, record ? &*record : nullptr, options_of(flags));
    const bool agree = verdicts_agree(results);
    int code = kExitEquivalent;
    for (const auto& r : results) {
        code = combine(code, exit_code_of(r.verdict));
    }
    if (!agree) {
        err << "error: strategies disagree on the verdict\n";
        code = kExitUnknown;
    }
    if (flags.json_output) {
        json report;
        if (results.size() == 1) {
            report = result_json(results.front(), g.size(), gp.size());
        } else {
            report = {{"results", json::array()}, {"agree", agree}};
            for (const auto& r : results) {
                report["results"].push_back(result_json(r, g.size(), gp.size()));
            }
        }
        report["version"] = kReportVersion;
        out << report.dump(2) << '\n';
        return code;
    }
    for (const auto& r : results) {
        out << ec::to_string(r.strategy) << ": " << ec::to_string(r.verdict) << '\n'
            << "  seconds: " << r.stats.seconds << '\n'
            << "  peak_nodes: " << r.stats.peak_nodes << '\n'
            << "  gates_g: " << g.size() << '\n'
            << "  gates_g_prime: " << gp.size() << '\n';
        if (r.stats.fallback) {
            out << "  fallback: proportional scheduling after the watermark\n";
        }
        if (!r.reason.empty()) {
            out << "  reason: " << r.reason << '\n';
        }
    }
    return code;
}

int cmd_compile(const std::string& in, const std::string& arch_name, int opt_level, const std::string& out_path,
                const std::string& record_path, std::ostream& out, std::ostream& err) {
    const Circuit c = read_circuit(in, err);
    const CouplingMap arch = CouplingMap::resolve(arch_name);
    const auto compiled = compile::compile(c, arch, {opt_level, std::nullopt});
    write_qasm_file(compiled.circuit, out_path);
    if (!record_path.empty()) {
        compiled.record.save(record_path);
    }
    out << "gates_g: " << c.size() << '\n' << "gates_g_prime: " << compiled.circuit.size() << '\n';
    return kExitEquivalent;
}

struct BenchRow {
    std::string name;
    std::size_t n = 0;
    std::size_t gates_g = 0;
    std::size_t gates_gp = 0;
    std::vector<ec::Result> results;
    std::string error;
    bool agree = true;
};

std::vector<std::string> bench_names(const fs::path& dir, std::vector<std::string>& warnings) {
    const std::string compiled_suffix = ".compiled.qasm";
    const std::string record_suffix = ".record.json";
    std::set<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) {
            continue;
        }
        const std::string file = entry.path().filename().string();
        auto strip = [&](const std::string& suffix) -> std::optional<std::string> {
            if (file.size() > suffix.size() && file.compare(file.size() - suffix.size(), suffix.size(), suffix) == 0) {
                return file.substr(0, file.size() - suffix.size());
            }
            return std::nullopt;
        };
        if (auto n = strip(compiled_suffix)) {
            names.insert(*n);
        } else if (auto r = strip(record_suffix)) {
            names.insert(*r);
        } else if (auto q = strip(".qasm")) {
            names.insert(*q);
        }
    }
    std::vector<std::string> complete;
    for (const auto& name : names) {
        std::vector<std::string> missing;
        for (const auto& suffix : {std::string(".qasm"), compiled_suffix, record_suffix}) {
            if (!fs::exists(dir / (name + suffix))) {
                missing.push_back(name + suffix);
            }
        }
        if (missing.empty()) {
            complete.push_back(name);
            continue;
        }
        std::string msg = "skipping '" + name + "': missing";
        for (const auto& m : missing) {
            msg += " " + m;
        }
        warnings.push_back(msg);
    }
    return complete;
}

BenchRow bench_one(const fs::path& dir, const std::string& name, const std::vector<ec::Strategy>& strategies,
                   const ec::Options& options) {
    BenchRow row;
    row.name = name;
    try {
        const Circuit g = read_qasm_file((dir / (name + ".qasm")).string());
        const Circuit gp = read_qasm_file((dir / (name + ".compiled.qasm")).string());
        const auto record = compile::CompileRecord::load((dir / (name + ".record.json")).string());
        row.n = std::max(g.num_qubits, gp.num_qubits);
        row.gates_g = g.size();
        row.gates_gp = gp.size();
        row.results = run_strategies(strategies, g, gp, &record, options);
        row.agree = verdicts_agree(row.results);
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

int cmd_bench(const std::string& dir, const CheckFlags& flags, std::size_t jobs, std::ostream& out,
              std::ostream& err) {
    if (!fs::is_directory(dir)) {
        throw Error("not a directory: " + dir);
    }
    std::vector<std::string> warnings;
    const auto names = bench_names(dir, warnings);
    for (const auto& w : warnings) {
        err << "warning: " << w << '\n';
    }
    const auto strategies = strategies_of(flags.strategy);
    const auto options = options_of(flags);
    std::vector<BenchRow> rows(names.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < names.size(); i = next++) {
            rows[i] = bench_one(dir, names[i], strategies, options);
        }
    };
    std::vector<std::thread> pool;
    const std::size_t threads = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, names.size()));
    for (std::size_t t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }

    int code = kExitEquivalent;
    for (const auto& row : rows) {
        if (!row.error.empty()) {
            err << "error: " << row.name << ": " << row.error << '\n';
            code = kExitUnknown;
            continue;
        }
        if (!row.agree) {
            err << "error: " << row.name << ": strategies disagree on the verdict\n";
            code = kExitUnknown;
        }
        for (const auto& r : row.results) {
            code = combine(code, exit_code_of(r.verdict));
        }
    }

    if (flags.json_output) {
        json report{{"version", kReportVersion}, {"rows", json::array()}, {"warnings", warnings}};
        for (const auto& row : rows) {
            json j{{"name", row.name}, {"n", row.n}, {"gates_g", row.gates_g}, {"gates_g_prime", row.gates_gp}};
            if (!row.error.empty()) {
                j["error"] = row.error;
            } else {
                j["agree"] = row.agree;
                j["results"] = json::array();
                for (const auto& r : row.results) {
                    j["results"].push_back(result_json(r, row.gates_g, row.gates_gp));
                }
            }
            report["rows"].push_back(std::move(j));
        }
        out << report.dump(2) << '\n';
        return code;
    }
    out << std::left << std::setw(24) << "name" << std::setw(5) << "n" << std::setw(8) << "|G|" << std::setw(8)
        << "|G'|";
    for (const auto s : strategies) {
        out << std::setw(26) << (std::string(ec::to_string(s)) + " [s]");
    }
    out << "peak\n";
    for (const auto& row : rows) {
        out << std::setw(24) << row.name << std::setw(5) << row.n << std::setw(8) << row.gates_g << std::setw(8)
            << row.gates_gp;
        if (!row.error.empty()) {
            out << "error\n";
            continue;
        }
        std::size_t peak = 0;
        for (const auto& r : row.results) {
            std::ostringstream cell;
            cell << std::fixed << std::setprecision(4) << r.stats.seconds << ' ' << ec::to_string(r.verdict);
            out << std::setw(26) << cell.str();
            peak = std::max(peak, r.stats.peak_nodes);
        }
        out << peak << '\n';
    }
    return code;
}

int cmd_gen(const std::string& dir, std::size_t count, std::size_t qubits, std::size_t gates,
            const std::string& arch_name, int opt_level, std::size_t mutate_every, std::ostream& out) {
    const CouplingMap arch = CouplingMap::resolve(arch_name);
    std::mt19937_64 rng(gen::seed_from_env(1));
    fs::create_directories(dir);
    gen::RandomCircuitOptions opt;
    opt.num_qubits = qubits;
    opt.num_gates = gates;
    for (std::size_t i = 0; i < count; ++i) {
        const Circuit g = gen::random_circuit(opt, rng);
        auto compiled = compile::compile(g, arch, {opt_level, std::nullopt});
        if (mutate_every > 0 && (i + 1) % mutate_every == 0) {
            compiled.circuit = gen::mutate(compiled.circuit, rng);
        }
        std::ostringstream name;
        name << "pair" << std::setw(3) << std::setfill('0') << i;
        const fs::path base = fs::path(dir) / name.str();
        write_qasm_file(g, base.string() + ".qasm");
        write_qasm_file(compiled.circuit, base.string() + ".compiled.qasm");
        compiled.record.save(base.string() + ".record.json");
    }
    out << "wrote " << count << " pairs to " << dir << '\n';
    return kExitEquivalent;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Equivalence checking of compiled quantum circuits with decision diagrams", "flowec"};
    app.require_subcommand(1);

    CheckFlags verify_flags;
    std::string g_path;
    std::string gp_path;
    std::string record_path;
    auto* verify = app.add_subcommand("verify", "check a circuit against its compiled version");
    verify->add_option("g", g_path, "original circuit (QASM)")->required()->check(CLI::ExistingFile);
    verify->add_option("g_prime", gp_path, "compiled circuit (QASM)")->required()->check(CLI::ExistingFile);
    verify->add_option("--record", record_path, "compile record (JSON)")->check(CLI::ExistingFile);
    add_check_flags(*verify, verify_flags);

    std::string in_path;
    std::string arch_name = "london";
    int compile_opt = 1;
    std::string out_path;
    std::string compile_record;
    auto* compile_cmd = app.add_subcommand("compile", "map a circuit onto a device");
    compile_cmd->add_option("input", in_path, "circuit (QASM)")->required()->check(CLI::ExistingFile);
    compile_cmd->add_option("--arch", arch_name, "preset name or coupling-map JSON")->capture_default_str();
    compile_cmd->add_option("--opt", compile_opt, "optimization level")->check(CLI::Range(0, 1))->capture_default_str();
    compile_cmd->add_option("-o,--output", out_path, "compiled circuit (QASM)")->required();
    compile_cmd->add_option("--record", compile_record, "where to write the compile record (JSON)");

    CheckFlags bench_flags;
    std::string bench_dir;
    std::size_t jobs = 1;
    auto* bench = app.add_subcommand("bench", "check every (name.qasm, name.compiled.qasm, name.record.json) triple");
    bench->add_option("dir", bench_dir, "corpus directory")->required();
    bench->add_option("--jobs", jobs, "pairs checked in parallel")->check(CLI::PositiveNumber)->capture_default_str();
    add_check_flags(*bench, bench_flags);

    std::string gen_dir;
    std::size_t gen_count = 10;
    std::size_t gen_qubits = 4;
    std::size_t gen_gates = 30;
    std::string gen_arch = "london";
    int gen_opt = 1;
    std::size_t mutate_every = 0;
    auto* gen_cmd = app.add_subcommand("gen", "write a random benchmark corpus (seeded by QCEC_SEED)");
    gen_cmd->add_option("dir", gen_dir, "output directory")->required();
    gen_cmd->add_option("--count", gen_count, "number of pairs")->capture_default_str();
    gen_cmd->add_option("--qubits", gen_qubits, "qubits per circuit")->check(CLI::Range(1, 64))->capture_default_str();
    gen_cmd->add_option("--gates", gen_gates, "gates per circuit")->capture_default_str();
    gen_cmd->add_option("--arch", gen_arch, "preset name or coupling-map JSON")->capture_default_str();
    gen_cmd->add_option("--opt", gen_opt, "optimization level")->check(CLI::Range(0, 1))->capture_default_str();
    gen_cmd->add_option("--mutate-every", mutate_every, "inject an error into every k-th compiled circuit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitUnknown;
    }

    try {
        if (*verify) {
            return cmd_verify(g_path, gp_path, record_path, verify_flags, out, err);
        }
        if (*compile_cmd) {
            return cmd_compile(in_path, arch_name, compile_opt, out_path, compile_record, out, err);
        }
        if (*bench) {
            return cmd_bench(bench_dir, bench_flags, jobs, out, err);
        }
        return cmd_gen(gen_dir, gen_count, gen_qubits, gen_gates, gen_arch, gen_opt, mutate_every, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUnknown;
    }
}

} // namespace flowec::cli
