#pragma once

#include "flowec/circuit.hpp"

#include <cstdint>
#include <random>

namespace flowec::gen {

struct RandomCircuitOptions {
    std::size_t num_qubits = 3;
    std::size_t num_gates = 20;
    bool allow_swap = true;
    bool allow_cz = true;
    bool allow_toffoli = true;
    std::size_t max_mcx_controls = 2; // above 2 emits MCX gates needing ancillas
    bool elementary_only = false;     // only U-family, named single-qubit gates and CNOT
};

[[nodiscard]] Circuit random_circuit(const RandomCircuitOptions& options, std::mt19937_64& rng);

/// Copy of `c` with one gate inserted, replaced or removed so that the
/// unitary changes (checked against a short list of kinds that are never
/// the identity).
[[nodiscard]] Circuit mutate(const Circuit& c, std::mt19937_64& rng);

/// Seed from QCEC_SEED if set, else `fallback`.
[[nodiscard]] std::uint64_t seed_from_env(std::uint64_t fallback);

} // namespace flowec::gen
