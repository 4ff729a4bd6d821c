#pragma once

#include "flowec/circuit.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace flowec {

/// Reads the supported OpenQASM 2.0 subset: qreg/creg declarations, the gate
/// kinds of GateKind (qelib1 names plus `u`, `p`, `ccx`, `c3x`, `c4x`, `mcx`),
/// `barrier` (ignored) and trailing `measure` (stripped, reported in
/// `warnings`). Angle arguments accept arithmetic over numbers and `pi`.
///
/// Metadata comments understood on input and written on output:
///   // i <l_0> ... <l_{n-1}>   initial layout, logical qubit per physical qubit
///   // o <l_0> ... <l_{n-1}>   output layout
///   // ancilla <q> ...         qubits flagged as clean ancillas
///   // global_phase <radians>
///
/// Throws QasmSyntaxError (with line/column) or UnsupportedStatementError.
[[nodiscard]] Circuit parse_qasm(std::string_view text, std::vector<std::string>* warnings = nullptr);

[[nodiscard]] Circuit read_qasm_file(const std::string& path, std::vector<std::string>* warnings = nullptr);

[[nodiscard]] std::string emit_qasm(const Circuit& c);

void write_qasm_file(const Circuit& c, const std::string& path);

} // namespace flowec
