#pragma once

#include "flowec/circuit.hpp"

// Fifteen-gate Clifford+T Toffoli network, controls a and b, target t.
inline flowec::Circuit toffoli_network(std::size_t n, flowec::Qubit a, flowec::Qubit b, flowec::Qubit t) {
    using flowec::Gate;
    using flowec::GateKind;
    flowec::Circuit c(n);
    c.add(Gate::single(GateKind::H, t))
        .add(Gate::cnot(b, t))
        .add(Gate::single(GateKind::Tdg, t))
        .add(Gate::cnot(a, t))
        .add(Gate::single(GateKind::T, t))
        .add(Gate::cnot(b, t))
        .add(Gate::single(GateKind::Tdg, t))
        .add(Gate::cnot(a, t))
        .add(Gate::single(GateKind::T, b))
        .add(Gate::single(GateKind::T, t))
        .add(Gate::single(GateKind::H, t))
        .add(Gate::cnot(a, b))
        .add(Gate::single(GateKind::T, a))
        .add(Gate::single(GateKind::Tdg, b))
        .add(Gate::cnot(a, b));
    return c;
}
