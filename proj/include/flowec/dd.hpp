#pragma once

#include "flowec/circuit.hpp"
#include "flowec/matrix.hpp"
#include "flowec/numerics.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <unordered_map>
#include <vector>

namespace flowec::dd {

using numerics::Complex;

struct Node;

/// Weighted pointer into the diagram. A null node is the terminal; the zero
/// edge is always {nullptr, 0}.
struct Edge {
    Node* node = nullptr;
    Complex w = numerics::kZero;

    [[nodiscard]] bool operator==(const Edge& other) const noexcept = default;
    [[nodiscard]] bool is_terminal() const noexcept { return node == nullptr; }
    [[nodiscard]] bool is_zero() const noexcept { return node == nullptr && w.exactly_zero(); }
};

inline constexpr Edge kZeroEdge{nullptr, numerics::kZero};
inline constexpr Edge kOneEdge{nullptr, numerics::kOne};

/// Decision node for qubit `level`. Children are indexed 2 * row_bit + col_bit:
/// (to|0> from|0>, to|0> from|1>, to|1> from|0>, to|1> from|1>).
struct Node {
    std::array<Edge, 4> e{};
    Node* next = nullptr; // unique-table chain
    std::uint32_t ref = 0;
    std::uint32_t mark = 0;
    std::int32_t level = 0;
};

/// A 2^n x 2^n unitary as a root edge of a quasi-reduced diagram: every
/// non-zero path visits the levels n-1, ..., 0 in order.
struct UnitaryDD {
    Edge root = kZeroEdge;
    std::size_t num_qubits = 0;

    [[nodiscard]] bool operator==(const UnitaryDD& other) const noexcept = default;
};

struct PackageConfig {
    double tolerance = numerics::kDefaultTolerance;
    std::size_t gc_watermark = 1U << 17U; // live nodes before a sweep is attempted
    std::size_t compute_table_bits = 16;
};

struct PackageStats {
    std::size_t live_nodes = 0;
    std::size_t complex_entries = 0;
    std::size_t gc_runs = 0;
    std::size_t mult_hits = 0;
    std::size_t mult_lookups = 0;
};

/// Unique table, compute tables and complex table for one checker. Not
/// thread-safe; separate packages are fully independent.
class Package {
public:
    explicit Package(PackageConfig config = {});
    ~Package() = default;
    Package(const Package&) = delete;
    Package& operator=(const Package&) = delete;

    [[nodiscard]] UnitaryDD make_identity(std::size_t n);

    /// The gate's unitary on `n` qubits, identity on untouched qubits. When
    /// `relabel` is non-empty, gate qubit q is placed on level relabel[q].
    [[nodiscard]] UnitaryDD gate_dd(const Gate& g, std::size_t n, std::span<const std::size_t> relabel = {});
    /// Conjugate transpose of gate_dd, built from the adjoint 2x2 matrix.
    [[nodiscard]] UnitaryDD gate_dd_adjoint(const Gate& g, std::size_t n, std::span<const std::size_t> relabel = {});

    /// Matrix product a * b. Throws DimensionMismatchError if widths differ.
    [[nodiscard]] UnitaryDD multiply(const UnitaryDD& a, const UnitaryDD& b);
    [[nodiscard]] UnitaryDD apply_left(const UnitaryDD& u, const Gate& g, std::span<const std::size_t> relabel = {});
    [[nodiscard]] UnitaryDD apply_right_inverse(const UnitaryDD& u, const Gate& g,
                                                std::span<const std::size_t> relabel = {});

    /// Permutation matrix moving the state of qubit j to qubit perm[j].
    [[nodiscard]] UnitaryDD permutation_dd(std::span<const std::size_t> perm);

    [[nodiscard]] UnitaryDD scale(const UnitaryDD& u, Complex factor);

    [[nodiscard]] bool is_identity(const UnitaryDD& u, bool up_to_global_phase, double tolerance);

    /// Zeroes every column whose input bit is |1> on an ancilla qubit.
    [[nodiscard]] UnitaryDD modify_ancillaries(const UnitaryDD& u, const std::vector<bool>& ancillas);
    [[nodiscard]] bool is_identity_modified(const UnitaryDD& u, const std::vector<bool>& ancillas, double tolerance,
                                            bool up_to_global_phase);

    /// Equality up to `tolerance` on every weight (canonical roots compare equal
    /// immediately). With `up_to_global_phase` only root magnitudes must match.
    [[nodiscard]] bool approx_equal(const UnitaryDD& a, const UnitaryDD& b, double tolerance, bool up_to_global_phase);

    [[nodiscard]] std::size_t node_count(const UnitaryDD& u);
    /// Throws TooLargeError for more than 10 qubits.
    [[nodiscard]] DenseMatrix to_dense(const UnitaryDD& u) const;

    void inc_ref(const UnitaryDD& u);
    void dec_ref(const UnitaryDD& u);
    /// Sweeps nodes unreachable from referenced roots once the live count
    /// passes the watermark (or always when `force`). Unreferenced diagrams
    /// must not be used afterwards. Returns true if a sweep ran.
    bool garbage_collect(bool force = false);
    void clear_compute_tables();

    [[nodiscard]] numerics::ComplexTable& complex_table() noexcept { return ctable_; }
    [[nodiscard]] PackageStats stats() const;

private:
    Edge make_node(std::int32_t level, const std::array<Edge, 4>& children);
    void rehash(std::size_t buckets);
    Node* allocate();
    Edge identity_edge(std::int32_t level);

    Edge build_gate(const Mat2& m, std::span<const std::size_t> controls, std::size_t target, std::size_t n);
    UnitaryDD build(const Gate& g, std::size_t n, std::span<const std::size_t> relabel, bool adjoint);

    Edge mul(const Edge& x, const Edge& y, std::int32_t level);
    Edge add(const Edge& x, const Edge& y, std::int32_t level);
    Edge weighted(const Edge& e, Complex factor);

    Edge modify(Node* n, const std::vector<bool>& ancillas, std::unordered_map<Node*, Edge>& memo);
    bool near_identity(Node* n, double tolerance);
    bool nodes_close(Node* a, Node* b, double tolerance);
    void mark_from(Node* n, std::uint32_t epoch);

    PackageConfig config_;
    numerics::ComplexTable ctable_;

    std::deque<Node> pool_;
    std::vector<Node*> free_;
    std::vector<Node*> buckets_;
    std::size_t live_ = 0;
    std::uint32_t epoch_ = 0;
    std::size_t gc_runs_ = 0;
    std::size_t watermark_;

    std::vector<Edge> identities_; // identities_[v]: identity on levels 0..v

    struct MulEntry {
        Node* a = nullptr;
        Node* b = nullptr;
        Edge result;
    };
    struct AddEntry {
        Edge a;
        Edge b;
        Edge result;
        bool valid = false;
    };
    std::vector<MulEntry> mul_table_;
    std::vector<AddEntry> add_table_;
    std::size_t mul_hits_ = 0;
    std::size_t mul_lookups_ = 0;

    std::unordered_map<Complex, std::size_t, numerics::ComplexHash> root_weights_;
};

} // namespace flowec::dd
