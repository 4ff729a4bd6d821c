#include "flowec/cli.hpp"
#include "flowec/compile.hpp"
#include "flowec/qasm.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;
using namespace flowec;

namespace {

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("flowec_cli_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] std::string file(const std::string& name) const { return (path_ / name).string(); }
    [[nodiscard]] const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "flowec");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    Outcome o;
    o.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream(path) << text;
}

// Writes grover3 and its London compilation into `dir`.
void write_grover_pair(const TempDir& dir, const std::string& name) {
    const auto out = compile::compile(grover3(), *CouplingMap::preset("london"));
    write_qasm_file(grover3(), dir.file(name + ".qasm"));
    write_qasm_file(out.circuit, dir.file(name + ".compiled.qasm"));
    out.record.save(dir.file(name + ".record.json"));
}

} // namespace

TEST(CliVerify, EquivalentPairExitsZero) {
    TempDir dir;
    write_grover_pair(dir, "g");
    const auto with_record = run({"verify", dir.file("g.qasm"), dir.file("g.compiled.qasm"), "--record",
                                  dir.file("g.record.json"), "--strategy", "flow"});
    EXPECT_EQ(with_record.code, cli::kExitEquivalent) << with_record.err;
    EXPECT_NE(with_record.out.find("equivalent"), std::string::npos);
    const auto foreign = run({"verify", dir.file("g.qasm"), dir.file("g.compiled.qasm")});
    EXPECT_EQ(foreign.code, cli::kExitEquivalent) << foreign.err;
}

TEST(CliVerify, NotEquivalentExitsOne) {
    TempDir dir;
    write_text(dir.file("x.qasm"), "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\nx q[0];\n");
    write_text(dir.file("empty.qasm"), "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\n");
    for (const std::string s : {"naive", "proportional", "flow", "all"}) {
        const auto o = run({"verify", dir.file("x.qasm"), dir.file("empty.qasm"), "--strategy", s});
        EXPECT_EQ(o.code, cli::kExitNotEquivalent) << s << o.err;
    }
}

TEST(CliVerify, SyntaxErrorExitsTwo) {
    TempDir dir;
    write_text(dir.file("bad.qasm"), "OPENQASM 2.0;\nqreg q[1];\nh q[0]\nx q[0];\n");
    write_text(dir.file("ok.qasm"), "OPENQASM 2.0;\nqreg q[1];\n");
    const auto o = run({"verify", dir.file("bad.qasm"), dir.file("ok.qasm")});
    EXPECT_EQ(o.code, cli::kExitUnknown);
    EXPECT_NE(o.err.find("line"), std::string::npos) << o.err;
}

TEST(CliVerify, JsonReportSchema) {
    TempDir dir;
    write_grover_pair(dir, "g");
    const auto o = run({"verify", dir.file("g.qasm"), dir.file("g.compiled.qasm"), "--json"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = nlohmann::json::parse(o.out);
    EXPECT_EQ(j.at("verdict"), "equivalent");
    EXPECT_EQ(j.at("strategy"), "flow");
    EXPECT_TRUE(j.at("seconds").is_number());
    EXPECT_GT(j.at("peak_nodes").get<int>(), 0);
    EXPECT_EQ(j.at("gates_g").get<std::size_t>(), grover3().size());
    EXPECT_TRUE(j.at("gates_g_prime").is_number_integer());
    EXPECT_EQ(j.at("fallback"), false);
    EXPECT_EQ(j.at("version"), cli::kReportVersion);
}

TEST(CliVerify, AllStrategiesReportAgreement) {
    TempDir dir;
    write_grover_pair(dir, "g");
    const auto o = run({"verify", dir.file("g.qasm"), dir.file("g.compiled.qasm"), "--strategy", "all", "--json"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = nlohmann::json::parse(o.out);
    EXPECT_EQ(j.at("results").size(), 3U);
    EXPECT_EQ(j.at("agree"), true);
}

TEST(CliVerify, GlobalPhaseFlag) {
    TempDir dir;
    write_text(dir.file("z.qasm"), "OPENQASM 2.0;\nqreg q[1];\nz q[0];\n");
    write_text(dir.file("p.qasm"), "OPENQASM 2.0;\nqreg q[1];\nx q[0];\ny q[0];\n");
    EXPECT_EQ(run({"verify", dir.file("z.qasm"), dir.file("p.qasm")}).code, cli::kExitNotEquivalent);
    EXPECT_EQ(run({"verify", dir.file("z.qasm"), dir.file("p.qasm"), "--up-to-global-phase"}).code,
              cli::kExitEquivalent);
}

TEST(CliVerify, InvalidFlagsRejectedUpFront) {
    TempDir dir;
    write_grover_pair(dir, "g");
    const std::string g = dir.file("g.qasm");
    const std::string gp = dir.file("g.compiled.qasm");
    EXPECT_EQ(run({"verify", g, gp, "--strategy", "fastest"}).code, cli::kExitUnknown);
    EXPECT_EQ(run({"verify", g, gp, "--opt", "3"}).code, cli::kExitUnknown);
    EXPECT_EQ(run({"verify", g, gp, "--ancilla-mode", "dirty"}).code, cli::kExitUnknown);
    EXPECT_EQ(run({"verify", g, gp, "--tolerance", "-1"}).code, cli::kExitUnknown);
    EXPECT_EQ(run({"verify", g, dir.file("missing.qasm")}).code, cli::kExitUnknown);
    EXPECT_EQ(run({}).code, cli::kExitUnknown);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliVerify, MalformedRecordExitsTwo) {
    TempDir dir;
    write_grover_pair(dir, "g");
    write_text(dir.file("bad.json"), "{\"initial_layout\": [0, 0]}");
    const auto o = run({"verify", dir.file("g.qasm"), dir.file("g.compiled.qasm"), "--record", dir.file("bad.json")});
    EXPECT_EQ(o.code, cli::kExitUnknown);
    EXPECT_NE(o.err.find("error"), std::string::npos);
}

TEST(CliCompile, ToffoliCountsAndOptimization) {
    TempDir dir;
    write_text(dir.file("ccx.qasm"), "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\nccx q[0],q[1],q[2];\n");
    const auto o0 = run({"compile", dir.file("ccx.qasm"), "--arch", "london", "--opt", "0", "-o", dir.file("o0.qasm"),
                         "--record", dir.file("o0.json")});
    ASSERT_EQ(o0.code, 0) << o0.err;
    const Circuit c0 = read_qasm_file(dir.file("o0.qasm"));
    EXPECT_GE(c0.size(), 15U);
    std::size_t cnots = 0;
    for (const auto& g : c0.gates) {
        cnots += g.kind == GateKind::CNOT ? 1 : 0;
    }
    EXPECT_GE(cnots, 6U);
    EXPECT_NE(o0.out.find("gates_g_prime: " + std::to_string(c0.size())), std::string::npos);
    EXPECT_NO_THROW((void)compile::CompileRecord::load(dir.file("o0.json")));

    const auto o1 = run({"compile", dir.file("ccx.qasm"), "--arch", "london", "--opt", "1", "-o", dir.file("o1.qasm")});
    ASSERT_EQ(o1.code, 0) << o1.err;
    EXPECT_LE(read_qasm_file(dir.file("o1.qasm")).size(), c0.size());

    const auto verdict = run({"verify", dir.file("ccx.qasm"), dir.file("o0.qasm"), "--record", dir.file("o0.json")});
    EXPECT_EQ(verdict.code, 0) << verdict.err;
}

TEST(CliCompile, UnknownArchitectureExitsTwo) {
    TempDir dir;
    write_text(dir.file("c.qasm"), "OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[1];\n");
    const auto o = run({"compile", dir.file("c.qasm"), "--arch", "nowhere", "-o", dir.file("out.qasm")});
    EXPECT_EQ(o.code, cli::kExitUnknown);
    EXPECT_FALSE(o.err.empty());
}

TEST(CliCompile, TooSmallDeviceExitsTwo) {
    TempDir dir;
    write_text(dir.file("c.qasm"), "OPENQASM 2.0;\nqreg q[6];\ncx q[0],q[5];\n");
    EXPECT_EQ(run({"compile", dir.file("c.qasm"), "--arch", "london", "-o", dir.file("out.qasm")}).code,
              cli::kExitUnknown);
}

TEST(CliBench, EmptyDirectory) {
    TempDir dir;
    const auto o = run({"bench", dir.path().string(), "--json"});
    EXPECT_EQ(o.code, 0) << o.err;
    EXPECT_TRUE(nlohmann::json::parse(o.out).at("rows").empty());
}

TEST(CliBench, GeneratedCorpusAllEquivalent) {
    TempDir dir;
    ASSERT_EQ(run({"gen", dir.path().string(), "--count", "10", "--qubits", "4", "--gates", "25"}).code, 0);
    const auto o = run({"bench", dir.path().string(), "--strategy", "all", "--jobs", "2", "--json"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = nlohmann::json::parse(o.out);
    ASSERT_EQ(j.at("rows").size(), 10U);
    for (const auto& row : j.at("rows")) {
        EXPECT_EQ(row.at("agree"), true);
        for (const auto& r : row.at("results")) {
            EXPECT_EQ(r.at("verdict"), "equivalent") << row.at("name");
        }
    }
}

TEST(CliBench, MutatedPairReported) {
    TempDir dir;
    ASSERT_EQ(run({"gen", dir.path().string(), "--count", "4", "--mutate-every", "4"}).code, 0);
    const auto o = run({"bench", dir.path().string(), "--strategy", "all", "--json"});
    EXPECT_EQ(o.code, cli::kExitNotEquivalent) << o.err;
    const auto j = nlohmann::json::parse(o.out);
    ASSERT_EQ(j.at("rows").size(), 4U);
    EXPECT_EQ(j.at("rows")[3].at("results")[0].at("verdict"), "not_equivalent");
    EXPECT_EQ(j.at("rows")[0].at("results")[0].at("verdict"), "equivalent");
}

TEST(CliBench, IncompleteTripleSkippedWithWarning) {
    TempDir dir;
    write_grover_pair(dir, "full");
    write_grover_pair(dir, "partial");
    fs::remove(dir.file("partial.record.json"));
    const auto o = run({"bench", dir.path().string()});
    EXPECT_EQ(o.code, 0) << o.err;
    EXPECT_NE(o.err.find("partial.record.json"), std::string::npos);
    EXPECT_NE(o.out.find("full"), std::string::npos);
    EXPECT_EQ(o.out.find("partial"), std::string::npos);
}

TEST(CliBinary, ExitCodesReachTheShell) {
    TempDir dir;
    write_text(dir.file("x.qasm"), "OPENQASM 2.0;\nqreg q[1];\nx q[0];\n");
    write_text(dir.file("e.qasm"), "OPENQASM 2.0;\nqreg q[1];\n");
    auto status = [&](const std::string& a, const std::string& b) {
        const std::string cmd = std::string(FLOWEC_BINARY) + " verify " + a + " " + b + " > /dev/null 2>&1";
        const int raw = std::system(cmd.c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    EXPECT_EQ(status(dir.file("x.qasm"), dir.file("x.qasm")), 0);
    EXPECT_EQ(status(dir.file("x.qasm"), dir.file("e.qasm")), 1);
    EXPECT_EQ(status(dir.file("x.qasm"), dir.file("none.qasm")), 2);
}
