#pragma once

#include "flowec/circuit.hpp"

// Three-qubit Grover iteration used throughout the tests.
inline flowec::Circuit grover3() {
    using flowec::Gate;
    using flowec::GateKind;
    flowec::Circuit c(3);
    c.add(Gate::single(GateKind::X, 2))
        .add(Gate::single(GateKind::H, 2))
        .add(Gate::single(GateKind::H, 1))
        .add(Gate::single(GateKind::H, 0))
        .add(Gate::mcx({1, 0}, 2))
        .add(Gate::single(GateKind::H, 1))
        .add(Gate::single(GateKind::H, 0))
        .add(Gate::single(GateKind::X, 1))
        .add(Gate::single(GateKind::X, 0))
        .add(Gate::single(GateKind::H, 1))
        .add(Gate::cnot(0, 1))
        .add(Gate::single(GateKind::H, 1))
        .add(Gate::single(GateKind::X, 1))
        .add(Gate::single(GateKind::X, 0))
        .add(Gate::single(GateKind::H, 1))
        .add(Gate::single(GateKind::H, 0));
    return c;
}
