#pragma once

#include "flowec/circuit.hpp"
#include "flowec/matrix.hpp"

#include <optional>
#include <vector>

// Brute-force reference semantics. Shares no code with the decision-diagram
// engine; gate matrices are spelled out here again on purpose.
namespace flowec::oracle {

inline constexpr std::size_t kMaxDenseQubits = 10;

/// Unitary of `c` including its global phase. Throws TooLargeError above 10 qubits.
[[nodiscard]] DenseMatrix dense_of_circuit(const Circuit& c);

/// Unitary of a single gate on `n` qubits.
[[nodiscard]] DenseMatrix dense_of_gate(const Gate& g, std::size_t n);

struct DenseCheck {
    // physical p holds logical layout[p]; absent means identity
    std::optional<std::vector<std::size_t>> initial_layout;
    std::optional<std::vector<std::size_t>> output_layout;
    std::vector<bool> ancillas; // logical qubits that start in |0> and must end there
    bool up_to_global_phase = false;
    double tolerance = 1e-9;
};

/// Compares `original` (logical qubits) with `compiled` (physical qubits):
/// every column whose ancilla inputs are |0> must agree once the compiled
/// unitary is read through the initial and output layouts. The narrower
/// circuit is padded with idle qubits.
[[nodiscard]] bool dense_equivalent(const Circuit& original, const Circuit& compiled, const DenseCheck& check = {});

/// Zeroes the columns whose input bit is 1 on some ancilla.
[[nodiscard]] DenseMatrix zero_ancilla_columns(const DenseMatrix& m, const std::vector<bool>& ancillas);

} // namespace flowec::oracle
