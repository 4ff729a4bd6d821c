#pragma once

#include "flowec/circuit.hpp"
#include "flowec/coupling_map.hpp"

#include <optional>
#include <string>
#include <vector>

namespace flowec::compile {

/// Slice of the compiled circuit that stems from one original gate.
struct Range {
    std::size_t start = 0;
    std::size_t count = 0;
    bool cross_boundary = false; // an optimization merged gates across original gates

    [[nodiscard]] bool operator==(const Range&) const = default;
};

struct SwapEvent {
    std::size_t position = 0; // index in the compiled circuit where the swap's CNOTs begin
    Qubit a = 0;              // physical qubits
    Qubit b = 0;

    [[nodiscard]] bool operator==(const SwapEvent&) const = default;
};

struct CompileRecord {
    std::vector<std::size_t> initial_layout; // physical p holds logical initial_layout[p]
    std::vector<Range> ranges;               // one per original gate, partitioning the output
    std::vector<SwapEvent> swap_events;
    int opt_level = 0;

    /// Initial layout with every swap event applied.
    [[nodiscard]] std::vector<std::size_t> final_layout() const;

    [[nodiscard]] std::string to_json() const;
    /// Throws Error on malformed input.
    [[nodiscard]] static CompileRecord from_json(const std::string& text);
    [[nodiscard]] static CompileRecord load(const std::string& path);
    void save(const std::string& path) const;

    [[nodiscard]] bool operator==(const CompileRecord&) const = default;
};

/// A circuit whose gates remember the original gate they come from.
struct TrackedCircuit {
    Circuit circuit;
    std::vector<std::size_t> origins; // origins[i] for circuit.gates[i]
};

/// Rewrites every gate over {U family, named single-qubit gates, CNOT} with
/// SWAP kept for the mapper. CZ becomes H CX H, the Toffoli the 15-gate
/// Clifford+T network and MCX with k >= 3 controls a v-chain of 2k - 3
/// Toffolis over k - 2 ancillas appended after the data qubits.
[[nodiscard]] TrackedCircuit synthesize(const Circuit& c);

/// Ancillas needed by synthesize(c).
[[nodiscard]] std::size_t ancillas_needed(const Circuit& c);

struct Mapped {
    TrackedCircuit tracked;
    std::vector<std::size_t> initial_layout;
    std::vector<SwapEvent> swap_events;
};

/// Places the circuit on `arch` and routes every CNOT onto an edge by moving
/// its control along a shortest path, one SWAP (three CNOTs) per hop.
/// Throws MappingInfeasibleError if the device is too small or disconnected.
[[nodiscard]] Mapped map(const TrackedCircuit& c, const CouplingMap& arch,
                         const std::optional<std::vector<std::size_t>>& layout = std::nullopt);

struct Optimized {
    TrackedCircuit tracked;
    std::vector<std::size_t> cross_boundary_origins;
    std::vector<std::size_t> kept; // kept[i]: index before optimization of output gate i
};

/// Fixpoint of single-qubit fusion and cancellation of adjacent equal
/// CNOT, CZ and SWAP pairs. Fused phases go to the circuit's global phase.
[[nodiscard]] Optimized optimize_o1(const TrackedCircuit& c);

struct CompileOptions {
    int opt_level = 1;
    std::optional<std::vector<std::size_t>> initial_layout;
};

struct Compiled {
    Circuit circuit; // carries initial/output layout and ancilla flags
    CompileRecord record;
};

/// synthesize, map, then optimize_o1 at opt level 1.
[[nodiscard]] Compiled compile(const Circuit& c, const CouplingMap& arch, const CompileOptions& options = {});

/// The fifteen-gate network realising a Toffoli with controls a, b and target t.
[[nodiscard]] std::vector<Gate> toffoli_gates(Qubit a, Qubit b, Qubit t);

} // namespace flowec::compile
