#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace flowec {

using Qubit = std::size_t;
using Mat2 = std::array<std::complex<double>, 4>; // row-major: {m00, m01, m10, m11}

enum class GateKind { U3, U2, U1, X, Y, Z, H, S, Sdg, T, Tdg, CNOT, CZ, SWAP, MCX };

[[nodiscard]] std::string_view kind_name(GateKind kind) noexcept;

/// One gate of a circuit. Single-target kinds keep their target in
/// `targets[0]`; SWAP has two targets; CNOT, CZ and MCX list their controls.
struct Gate {
    GateKind kind = GateKind::X;
    std::vector<Qubit> controls;
    std::vector<Qubit> targets;
    std::vector<double> params; // radians: U3 (theta, phi, lambda), U2 (phi, lambda), U1 (lambda)

    [[nodiscard]] bool operator==(const Gate& other) const = default;

    static Gate u3(double theta, double phi, double lambda, Qubit q);
    static Gate u2(double phi, double lambda, Qubit q);
    static Gate u1(double lambda, Qubit q);
    static Gate single(GateKind kind, Qubit q);
    static Gate cnot(Qubit control, Qubit target);
    static Gate cz(Qubit control, Qubit target);
    static Gate swap(Qubit a, Qubit b);
    static Gate mcx(std::vector<Qubit> controls, Qubit target);

    [[nodiscard]] bool is_single_qubit() const noexcept;
    /// Every qubit the gate touches, controls first.
    [[nodiscard]] std::vector<Qubit> qubits() const;
    [[nodiscard]] bool acts_on(Qubit q) const noexcept;
    /// Member of the device gate set {U1, U2, U3 and named single-qubit gates, CNOT}.
    [[nodiscard]] bool is_elementary() const noexcept;
};

/// QASM-like rendering, e.g. "cx q0,q1" or "u3(0.1,0.2,0.3) q2".
std::ostream& operator<<(std::ostream& os, const Gate& g);

/// 2x2 matrix of the operation applied to the target (X for CNOT/MCX, Z for CZ).
/// Throws UnsupportedGateError for SWAP.
[[nodiscard]] Mat2 target_matrix(const Gate& g);

[[nodiscard]] Mat2 u3_matrix(double theta, double phi, double lambda);
[[nodiscard]] Mat2 matmul(const Mat2& a, const Mat2& b);
[[nodiscard]] Mat2 adjoint(const Mat2& a);

/// Adjoint gate: self-inverse kinds map to themselves, S<->Sdg, T<->Tdg and
/// the U family is inverted analytically without introducing a global phase.
[[nodiscard]] Gate invert(const Gate& g);

/// Throws DimensionMismatchError if an index is out of range or repeated.
void validate(const Gate& g, std::size_t width);

/// Maps an angle into [0, 2pi).
[[nodiscard]] double wrap_angle(double a) noexcept;

struct Circuit {
    std::size_t num_qubits = 0;
    std::vector<Gate> gates;
    std::vector<std::string> qubit_names;
    std::vector<bool> ancilla; // qubit starts in |0> and must be returned there
    double global_phase = 0.0; // accumulated by passes that drop a per-run phase
    // Layout metadata for circuits over physical qubits: entry p is the logical
    // qubit held by physical qubit p at the start (initial) or end (output).
    std::optional<std::vector<std::size_t>> initial_layout;
    std::optional<std::vector<std::size_t>> output_layout;

    Circuit() = default;
    explicit Circuit(std::size_t n);

    Circuit& add(Gate g);
    [[nodiscard]] std::size_t size() const noexcept { return gates.size(); }
    [[nodiscard]] bool structurally_equal(const Circuit& other) const;
    /// Appends `extra` idle ancilla qubits.
    void augment(std::size_t extra, bool as_ancilla = true);
};

/// A gate tagged with the index of the gate it stems from.
struct TrackedGate {
    Gate gate;
    std::size_t origin = 0;
    std::size_t tag = 0; // free for the caller, moved along with the gate
};

struct FusionOutcome {
    double global_phase = 0.0;
    std::vector<std::size_t> merged_origins; // origins of runs mixing several origins
    bool changed = false;
};

/// Replaces every maximal run of single-qubit gates on a qubit by one gate
/// (placed at the run's last position, inheriting that gate's origin), or
/// drops it when the run is the identity up to phase. Multi-qubit gates are
/// never reordered.
FusionOutcome fuse_single_qubit_runs(std::vector<TrackedGate>& gates);

[[nodiscard]] Circuit fuse_single_qubit_runs(const Circuit& c);

/// Single gate realising `m` up to a global phase, written to `phase`.
/// Returns nullopt if `m` is the identity up to phase.
[[nodiscard]] std::optional<Gate> gate_from_matrix(const Mat2& m, Qubit q, double& phase);

} // namespace flowec
