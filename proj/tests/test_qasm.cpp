#include "flowec/errors.hpp"
#include "flowec/generate.hpp"
#include "flowec/qasm.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace flowec;

TEST(Qasm, SingleCnot) {
    const Circuit c = parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2]; cx q[0],q[1];");
    EXPECT_EQ(c.num_qubits, 2U);
    ASSERT_EQ(c.size(), 1U);
    EXPECT_EQ(c.gates[0], Gate::cnot(0, 1));
}

TEST(Qasm, CcxIsMcxWithTwoControls) {
    const Circuit c = parse_qasm("qreg q[3]; ccx q[0],q[1],q[2];");
    ASSERT_EQ(c.size(), 1U);
    EXPECT_EQ(c.gates[0].kind, GateKind::MCX);
    EXPECT_EQ(c.gates[0].controls.size(), 2U);
    EXPECT_EQ(c.gates[0].targets[0], 2U);
}

TEST(Qasm, AngleExpressions) {
    const Circuit c = parse_qasm("qreg q[1]; u1(pi/4) q[0]; u2(0,5*pi/4) q[0]; u3(-(pi/2), 2*(1+1), -0.5e1) q[0];");
    ASSERT_EQ(c.size(), 3U);
    EXPECT_EQ(c.gates[0].kind, GateKind::U1);
    EXPECT_NEAR(c.gates[0].params[0], std::numbers::pi / 4, 1e-15);
    EXPECT_NEAR(c.gates[1].params[1], 5 * std::numbers::pi / 4, 1e-15);
    EXPECT_NEAR(c.gates[2].params[0], -std::numbers::pi / 2, 1e-15);
    EXPECT_NEAR(c.gates[2].params[1], 4.0, 1e-15);
    EXPECT_NEAR(c.gates[2].params[2], -5.0, 1e-15);
}

TEST(Qasm, RegistersAndBroadcast) {
    const Circuit c = parse_qasm("qreg a[2]; qreg b[1]; creg c[3]; h a; cx a[1], b[0]; barrier a, b;");
    EXPECT_EQ(c.num_qubits, 3U);
    ASSERT_EQ(c.size(), 3U);
    EXPECT_EQ(c.gates[0], Gate::single(GateKind::H, 0));
    EXPECT_EQ(c.gates[1], Gate::single(GateKind::H, 1));
    EXPECT_EQ(c.gates[2], Gate::cnot(1, 2));
}

TEST(Qasm, TrailingMeasureStripped) {
    std::vector<std::string> warnings;
    const Circuit c = parse_qasm("qreg q[2]; creg c[2]; h q[0]; measure q -> c;", &warnings);
    EXPECT_EQ(c.size(), 1U);
    EXPECT_FALSE(warnings.empty());
}

TEST(Qasm, MeasureThenGateRejected) {
    EXPECT_THROW((void)parse_qasm("qreg q[1]; creg c[1]; measure q[0] -> c[0]; h q[0];"), UnsupportedStatementError);
}

TEST(Qasm, UnsupportedStatements) {
    EXPECT_THROW((void)parse_qasm("qreg q[1]; reset q[0];"), UnsupportedStatementError);
    EXPECT_THROW((void)parse_qasm("qreg q[1]; gate foo a { h a; }"), UnsupportedStatementError);
    EXPECT_THROW((void)parse_qasm("qreg q[1]; rx(0.1) q[0];"), UnsupportedStatementError);
}

TEST(Qasm, SyntaxErrorCarriesPosition) {
    try {
        (void)parse_qasm("qreg q[2];\ncx q[0] q[1];");
        FAIL() << "expected a syntax error";
    } catch (const QasmSyntaxError& e) {
        EXPECT_EQ(e.line(), 2U);
        EXPECT_GT(e.column(), 1U);
    }
    EXPECT_THROW((void)parse_qasm("qreg q[2]; cx q[0],q[5];"), Error);
}

TEST(Qasm, MetadataComments) {
    const Circuit c = parse_qasm("// i 0 2 1\n// o 2 0 1\n// ancilla 2\n// global_phase 0.25\nqreg q[3];\nx q[0];\n");
    ASSERT_TRUE(c.initial_layout.has_value());
    EXPECT_EQ(*c.initial_layout, (std::vector<std::size_t>{0, 2, 1}));
    EXPECT_EQ(*c.output_layout, (std::vector<std::size_t>{2, 0, 1}));
    EXPECT_TRUE(c.ancilla[2]);
    EXPECT_DOUBLE_EQ(c.global_phase, 0.25);
}

TEST(Qasm, RoundTripHandWritten) {
    Circuit a(3);
    a.add(Gate::u3(0.1, 0.2, 0.3, 0)).add(Gate::u2(0, std::numbers::pi, 1)).add(Gate::u1(1.5, 2));
    Circuit b(4);
    b.add(Gate::single(GateKind::Sdg, 0)).add(Gate::single(GateKind::Tdg, 1)).add(Gate::cz(2, 3)).add(Gate::swap(0, 3));
    Circuit c(5);
    c.add(Gate::mcx({0, 1}, 2)).add(Gate::mcx({0, 1, 3}, 4)).add(Gate::mcx({4}, 0)).add(Gate::single(GateKind::Y, 3));
    c.ancilla = {false, false, false, false, true};
    c.initial_layout = std::vector<std::size_t>{4, 3, 2, 1, 0};
    for (const auto* circ : {&a, &b, &c}) {
        const Circuit back = parse_qasm(emit_qasm(*circ));
        EXPECT_TRUE(back.structurally_equal(*circ)) << emit_qasm(*circ);
    }
    EXPECT_EQ(parse_qasm(emit_qasm(c)).initial_layout, c.initial_layout);
}

TEST(QasmProperty, RandomRoundTrip) {
    std::mt19937_64 rng(99);
    gen::RandomCircuitOptions opt;
    opt.max_mcx_controls = 4;
    for (int k = 0; k < 200; ++k) {
        opt.num_qubits = 1 + k % 7;
        opt.num_gates = k % 40;
        const Circuit c = gen::random_circuit(opt, rng);
        const Circuit back = parse_qasm(emit_qasm(c));
        EXPECT_TRUE(back.structurally_equal(c));
    }
}
