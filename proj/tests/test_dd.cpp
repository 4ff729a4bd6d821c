#include "flowec/dd.hpp"
#include "flowec/dense.hpp"
#include "flowec/errors.hpp"
#include "flowec/generate.hpp"
#include "toffoli_network.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace flowec;
using dd::Package;
using dd::UnitaryDD;

namespace {

UnitaryDD build_sequential(Package& p, const Circuit& c) {
    UnitaryDD u = p.make_identity(c.num_qubits);
    for (const auto& g : c.gates) {
        u = p.apply_left(u, g);
    }
    return u;
}

// Product of the gate DDs combined as a balanced tree.
UnitaryDD build_balanced(Package& p, const Circuit& c, std::size_t lo, std::size_t hi) {
    if (hi == lo) {
        return p.make_identity(c.num_qubits);
    }
    if (hi - lo == 1) {
        return p.gate_dd(c.gates[lo], c.num_qubits);
    }
    const std::size_t mid = (lo + hi) / 2;
    return p.multiply(build_balanced(p, c, mid, hi), build_balanced(p, c, lo, mid));
}

Circuit random(std::size_t n, std::size_t m, std::mt19937_64& rng) {
    gen::RandomCircuitOptions opt;
    opt.num_qubits = n;
    opt.num_gates = m;
    opt.max_mcx_controls = n > 3 ? 3 : 2;
    return gen::random_circuit(opt, rng);
}

} // namespace

TEST(Identity, SmallCases) {
    Package p;
    EXPECT_LT(max_abs_diff(p.to_dense(p.make_identity(1)), DenseMatrix::identity(2)), 1e-15);
    EXPECT_LT(max_abs_diff(p.to_dense(p.make_identity(2)), DenseMatrix::identity(4)), 1e-15);
    EXPECT_EQ(p.node_count(p.make_identity(3)), 3U);
    EXPECT_EQ(p.node_count(p.make_identity(5)), 5U);
    EXPECT_THROW((void)p.make_identity(0), DimensionMismatchError);
}

TEST(IdentityProperty, NodeCountAndExactness) {
    Package p;
    for (std::size_t n = 1; n <= 20; ++n) {
        const auto id = p.make_identity(n);
        EXPECT_EQ(p.node_count(id), n);
        EXPECT_TRUE(p.is_identity(id, false, 0.0));
    }
}

TEST(GateDD, Examples) {
    Package p;
    const auto x = p.to_dense(p.gate_dd(Gate::single(GateKind::X, 0), 1));
    EXPECT_EQ(x(0, 1), 1.0);
    EXPECT_EQ(x(1, 0), 1.0);
    EXPECT_EQ(x(0, 0), 0.0);

    const auto u1 = p.to_dense(p.gate_dd(Gate::u1(0.8, 0), 1));
    EXPECT_LT(std::abs(u1(0, 0) - 1.0), 1e-12);
    EXPECT_LT(std::abs(u1(1, 1) - std::polar(1.0, 0.8)), 1e-12);
    EXPECT_LT(std::abs(u1(0, 1)), 1e-15);

    const auto cx = p.to_dense(p.gate_dd(Gate::cnot(1, 0), 2));
    EXPECT_EQ(cx(3, 2), 1.0);
    EXPECT_EQ(cx(2, 3), 1.0);
    EXPECT_EQ(cx(0, 0), 1.0);
    EXPECT_EQ(cx(1, 1), 1.0);

    const auto h = p.to_dense(p.gate_dd(Gate::single(GateKind::H, 0), 1));
    const double r = 1 / std::sqrt(2.0);
    EXPECT_NEAR(h(1, 1).real(), -r, 1e-12);
    EXPECT_NEAR(h(0, 1).real(), r, 1e-12);
}

TEST(GateDD, EveryGateMatchesDense) {
    Package p;
    std::mt19937_64 rng(1);
    for (int k = 0; k < 300; ++k) {
        const Circuit c = random(4, 1, rng);
        const auto& g = c.gates[0];
        EXPECT_LT(max_abs_diff(p.to_dense(p.gate_dd(g, 4)), oracle::dense_of_gate(g, 4)), 1e-12) << kind_name(g.kind);
        EXPECT_LT(max_abs_diff(p.to_dense(p.gate_dd_adjoint(g, 4)), dagger(oracle::dense_of_gate(g, 4))), 1e-12);
    }
}

TEST(GateDD, Relabel) {
    Package p;
    const std::vector<std::size_t> relabel{2, 0, 1};
    const auto u = p.gate_dd(Gate::cnot(0, 1), 3, relabel);
    EXPECT_EQ(u, p.gate_dd(Gate::cnot(2, 0), 3));
}

TEST(Multiply, SelfInverseGates) {
    Package p;
    const auto h = p.gate_dd(Gate::single(GateKind::H, 0), 1);
    const auto hh = p.multiply(h, h);
    EXPECT_EQ(hh.root.node, p.make_identity(1).root.node);
    EXPECT_TRUE(p.is_identity(hh, false, 1e-12));
    const auto cx = p.gate_dd(Gate::cnot(0, 1), 2);
    EXPECT_EQ(p.multiply(cx, cx), p.make_identity(2));
}

TEST(Multiply, DimensionMismatch) {
    Package p;
    EXPECT_THROW((void)p.multiply(p.make_identity(2), p.make_identity(3)), DimensionMismatchError);
}

TEST(MultiplyProperty, MatchesDenseProduct) {
    Package p;
    std::mt19937_64 rng(2);
    for (int k = 0; k < 200; ++k) {
        const std::size_t n = 1 + static_cast<std::size_t>(k) % 6;
        const Circuit a = random(n, 8, rng);
        const Circuit b = random(n, 8, rng);
        const auto ua = build_sequential(p, a);
        const auto ub = build_sequential(p, b);
        const auto prod = p.to_dense(p.multiply(ua, ub));
        const auto expect = oracle::dense_of_circuit(a) * oracle::dense_of_circuit(b);
        EXPECT_LT(max_abs_diff(prod, expect), 1e-10);
        const auto d = p.to_dense(ua);
        EXPECT_LT(max_abs_diff(d * dagger(d), DenseMatrix::identity(d.dim)), 1e-10);
    }
}

TEST(ApplyInverse, TPair) {
    Package p;
    const auto id = p.make_identity(1);
    const auto t = p.apply_left(id, Gate::single(GateKind::T, 0));
    EXPECT_EQ(p.apply_right_inverse(t, Gate::single(GateKind::T, 0)), id);
    const auto x = p.apply_left(id, Gate::single(GateKind::X, 0));
    EXPECT_EQ(x, p.gate_dd(Gate::single(GateKind::X, 0), 1));
}

TEST(ApplyInverse, ToffoliNetworkRoundTrip) {
    Package p;
    const Circuit net = toffoli_network(3, 0, 1, 2);
    UnitaryDD u = p.make_identity(3);
    for (const auto& g : net.gates) {
        u = p.apply_left(u, g);
    }
    EXPECT_LT(max_abs_diff(p.to_dense(u), oracle::dense_of_circuit(net)), 1e-10);
    for (const auto& g : net.gates) {
        u = p.apply_right_inverse(u, g);
    }
    EXPECT_TRUE(p.is_identity(u, false, 1e-12));
}

TEST(ApplyInverseProperty, RoundTripKeepsRoot) {
    Package p;
    std::mt19937_64 rng(4);
    for (int k = 0; k < 300; ++k) {
        const Circuit c = random(4, 10, rng);
        const Gate g = random(4, 1, rng).gates[0];
        const auto u = build_sequential(p, c);
        // u * g * g^-1
        const auto right = p.apply_right_inverse(p.multiply(u, p.gate_dd(g, 4)), g);
        EXPECT_EQ(right.root.node, u.root.node);
        EXPECT_TRUE(numerics::approx_equal(right.root.w, u.root.w, 1e-12));
        // g^-1 * g * u
        const auto left = p.apply_left(p.apply_left(u, g), invert(g));
        EXPECT_EQ(left.root.node, u.root.node);
        EXPECT_TRUE(numerics::approx_equal(left.root.w, u.root.w, 1e-12));
        // g * u * g^-1 from the identity collapses back to it
        const auto id = p.make_identity(4);
        EXPECT_EQ(p.apply_right_inverse(p.apply_left(id, g), g), id);
        // conjugation in general
        const auto conj = p.apply_right_inverse(p.apply_left(u, g), g);
        const auto dg = oracle::dense_of_gate(g, 4);
        EXPECT_LT(max_abs_diff(p.to_dense(conj), dg * oracle::dense_of_circuit(c) * dagger(dg)), 1e-10);
    }
}

TEST(IsIdentity, Examples) {
    Package p;
    EXPECT_TRUE(p.is_identity(p.make_identity(4), false, 0.0));
    const auto z = p.gate_dd(Gate::single(GateKind::Z, 0), 1);
    EXPECT_FALSE(p.is_identity(z, false, 1e-9));
    EXPECT_FALSE(p.is_identity(z, true, 1e-9));
    const auto phased = p.scale(p.make_identity(2), numerics::Complex{std::cos(std::numbers::pi / 4), std::sin(std::numbers::pi / 4)});
    EXPECT_FALSE(p.is_identity(phased, false, 1e-9));
    EXPECT_TRUE(p.is_identity(phased, true, 1e-9));
}

TEST(IsIdentity, TolerantStructure) {
    Package p;
    Circuit c(2);
    c.add(Gate::u1(1e-11, 1));
    const auto u = build_sequential(p, c);
    EXPECT_NE(u.root.node, p.make_identity(2).root.node);
    EXPECT_TRUE(p.is_identity(u, false, 1e-9));
    EXPECT_FALSE(p.is_identity(u, false, 1e-13));
}

TEST(Modify, IdentityWithTopAncilla) {
    Package p;
    const std::size_t n = 3;
    const auto m = p.to_dense(p.modify_ancillaries(p.make_identity(n), {false, false, true}));
    for (std::size_t r = 0; r < 8; ++r) {
        for (std::size_t c = 0; c < 8; ++c) {
            const double expect = (r == c && c < 4) ? 1.0 : 0.0;
            EXPECT_EQ(m(r, c), expect);
        }
    }
}

TEST(Modify, Idempotent) {
    Package p;
    std::mt19937_64 rng(8);
    const std::vector<bool> anc{false, true, false};
    for (int k = 0; k < 50; ++k) {
        const auto u = build_sequential(p, random(3, 12, rng));
        const auto once = p.modify_ancillaries(u, anc);
        EXPECT_EQ(p.modify_ancillaries(once, anc), once);
    }
}

TEST(ModifyProperty, MatchesColumnZeroing) {
    Package p;
    std::mt19937_64 rng(9);
    for (int k = 0; k < 300; ++k) {
        const std::size_t n = 1 + static_cast<std::size_t>(k) % 6;
        const Circuit c = random(n, 15, rng);
        std::vector<bool> anc(n);
        for (std::size_t q = 0; q < n; ++q) {
            anc[q] = (rng() & 1U) != 0;
        }
        const auto u = build_sequential(p, c);
        const auto expect = oracle::zero_ancilla_columns(oracle::dense_of_circuit(c), anc);
        EXPECT_LT(max_abs_diff(p.to_dense(p.modify_ancillaries(u, anc)), expect), 1e-10);
    }
}

TEST(ModifyProperty, DisjointSetsCommute) {
    Package p;
    std::mt19937_64 rng(10);
    const std::vector<bool> a{true, false, false, false};
    const std::vector<bool> b{false, false, true, false};
    const std::vector<bool> both{true, false, true, false};
    for (int k = 0; k < 100; ++k) {
        const auto u = build_sequential(p, random(4, 15, rng));
        const auto ab = p.modify_ancillaries(p.modify_ancillaries(u, a), b);
        const auto ba = p.modify_ancillaries(p.modify_ancillaries(u, b), a);
        EXPECT_EQ(ab, ba);
        EXPECT_EQ(ab, p.modify_ancillaries(u, both));
    }
}

TEST(IsIdentityModified, Examples) {
    Package p;
    const std::vector<bool> anc{false, true};
    EXPECT_TRUE(p.is_identity_modified(p.make_identity(2), anc, 1e-9, false));
    // Acts only when the ancilla is |1>, so the |0> block is untouched.
    EXPECT_TRUE(p.is_identity_modified(p.gate_dd(Gate::cnot(1, 0), 2), anc, 1e-9, false));
    EXPECT_FALSE(p.is_identity_modified(p.gate_dd(Gate::single(GateKind::X, 1), 2), anc, 1e-9, false));
    EXPECT_FALSE(p.is_identity_modified(p.gate_dd(Gate::single(GateKind::X, 0), 2), anc, 1e-9, false));
    const auto z = p.gate_dd(Gate::single(GateKind::Z, 1), 2);
    EXPECT_TRUE(p.is_identity_modified(z, anc, 1e-9, false));
}

TEST(IsIdentityModified, AgreesWithDense) {
    Package p;
    // CNOT controlled by the ancilla: the dense check sees an unchanged |0> block.
    Circuit c(2);
    c.add(Gate::cnot(1, 0));
    const auto m = oracle::zero_ancilla_columns(oracle::dense_of_circuit(c), {false, true});
    const auto id = oracle::zero_ancilla_columns(DenseMatrix::identity(4), {false, true});
    EXPECT_LT(max_abs_diff(m, id), 1e-15);
}

TEST(ToDense, TooLarge) {
    Package p;
    EXPECT_THROW((void)p.to_dense(p.make_identity(11)), TooLargeError);
}

TEST(CanonicityProperty, AssociationOrderIndependent) {
    Package p;
    std::mt19937_64 rng(12);
    for (int k = 0; k < 1000; ++k) {
        const Circuit c = random(4, 12, rng);
        const auto a = build_sequential(p, c);
        const auto b = build_balanced(p, c, 0, c.size());
        EXPECT_EQ(a.root.node, b.root.node);
        EXPECT_TRUE(numerics::approx_equal(a.root.w, b.root.w, 1e-12));
    }
}

TEST(Permutation, MatchesDense) {
    Package p;
    const std::vector<std::size_t> perm{2, 0, 3, 1};
    const auto d = p.to_dense(p.permutation_dd(perm));
    for (std::size_t x = 0; x < 16; ++x) {
        std::size_t y = 0;
        for (std::size_t j = 0; j < 4; ++j) {
            if ((x >> j) & 1U) {
                y |= std::size_t{1} << perm[j];
            }
        }
        EXPECT_EQ(d(y, x), 1.0);
    }
}

TEST(GarbageCollection, SurvivorsStayValid) {
    dd::PackageConfig cfg;
    cfg.gc_watermark = 64;
    Package p(cfg);
    std::mt19937_64 rng(13);
    const Circuit keep = random(5, 30, rng);
    const auto kept = build_sequential(p, keep);
    p.inc_ref(kept);
    const auto before = p.to_dense(kept);
    for (int k = 0; k < 20; ++k) {
        (void)build_sequential(p, random(5, 30, rng));
        p.garbage_collect();
    }
    EXPECT_GT(p.stats().gc_runs, 0U);
    EXPECT_LT(max_abs_diff(p.to_dense(kept), before), 1e-15);
    EXPECT_EQ(build_sequential(p, keep).root.node, kept.root.node);
    p.dec_ref(kept);
    p.garbage_collect(true);
    EXPECT_LE(p.stats().live_nodes, 5U);
    EXPECT_TRUE(p.is_identity(p.make_identity(5), false, 0.0));
}
