#pragma once

#include "flowec/circuit.hpp"
#include "flowec/compile.hpp"
#include "flowec/dd.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flowec::ec {

enum class Verdict { Equivalent, NotEquivalent, Unknown };
enum class Strategy { Naive, Proportional, Flow };

[[nodiscard]] std::string_view to_string(Verdict v) noexcept;
[[nodiscard]] std::string_view to_string(Strategy s) noexcept;
[[nodiscard]] std::optional<Strategy> parse_strategy(std::string_view name) noexcept;

/// Bijection physical -> logical, updated in place on every SWAP.
class QubitMap {
public:
    QubitMap() = default;
    /// Throws DimensionMismatchError unless `forward` is a permutation.
    explicit QubitMap(std::vector<std::size_t> forward);
    [[nodiscard]] static QubitMap identity(std::size_t n);

    [[nodiscard]] std::size_t logical(std::size_t physical) const { return forward_.at(physical); }
    [[nodiscard]] std::size_t physical(std::size_t logical) const { return inverse_.at(logical); }
    [[nodiscard]] const std::vector<std::size_t>& forward() const noexcept { return forward_; }
    [[nodiscard]] std::size_t size() const noexcept { return forward_.size(); }

    void swap_update(std::size_t a, std::size_t b);

    [[nodiscard]] bool operator==(const QubitMap& other) const = default;

private:
    std::vector<std::size_t> forward_;
    std::vector<std::size_t> inverse_;
};

struct OracleTable {
    enum class Source { Record, Static, Custom };
    Source source = Source::Static;
    std::vector<std::size_t> counts;      // compiled gates to apply after each gate of G
    std::vector<bool> approximate;        // entry touched by a cross-boundary optimization
};

/// One entry of the compiled stream after preprocessing.
struct StreamItem {
    Gate gate;
    bool swap_marker = false; // updates the qubit map instead of being multiplied
    std::size_t position = 0; // index of the (first) compiled gate it stands for
};

struct Preprocessed {
    std::vector<TrackedGate> g;   // origin: index in the original G (last of a fused run)
    std::vector<StreamItem> g_prime;
    double fused_phase = 0.0;     // phase dropped while fusing G
};

/// Fuses single-qubit runs of G when `fuse_g` is set and turns alternating
/// CNOT triples of G' (and literal SWAPs) into swap markers. A pair
/// CX(a,b) CX(b,a) not completed to three becomes a marker followed by
/// CX(a,b). With `ranges`, patterns never straddle two ranges.
[[nodiscard]] Preprocessed preprocess(const Circuit& g, const Circuit& g_prime, bool fuse_g,
                                      const std::vector<compile::Range>* ranges = nullptr);

struct BlockObservation {
    std::size_t block = 0; // index into the preprocessed G
    const dd::UnitaryDD& d;
    const QubitMap& map;
    const std::vector<std::size_t>& expected_layout; // initial layout with the recorded swaps so far
    dd::Package& package;
};

struct Options {
    double tolerance = 1e-9;         // final identity test
    double numeric_tolerance = 1e-13; // interning
    bool up_to_global_phase = false;
    std::size_t watermark = 100000;  // node count that switches flow to proportional scheduling
    double timeout_seconds = 3600.0;
    int assumed_opt_level = 1;       // static oracle when no record is given
    bool strip_idle_qubits = true;
    std::function<void(const BlockObservation&)> observer; // flow only, after each block
};

struct Stats {
    double seconds = 0.0;
    std::size_t peak_nodes = 0;
    std::size_t gates_left = 0;  // multiplications with gates of G
    std::size_t gates_right = 0; // multiplications with gates of G'
    bool fallback = false;
    std::size_t width = 0;       // qubits in the diagram after reconciliation
};

struct Result {
    Verdict verdict = Verdict::Unknown;
    Strategy strategy = Strategy::Flow;
    Stats stats;
    std::string reason; // set for unknown verdicts
};

/// Expected number of compiled gates per gate of the preprocessed G.
[[nodiscard]] OracleTable build_oracle(const Circuit& g, const Circuit& g_prime, const compile::CompileRecord* record,
                                       const Options& options = {});

[[nodiscard]] Result check_naive(const Circuit& g, const Circuit& g_prime, const compile::CompileRecord* record,
                                 const Options& options = {});
[[nodiscard]] Result check_proportional(const Circuit& g, const Circuit& g_prime,
                                        const compile::CompileRecord* record, const Options& options = {});
/// `oracle` overrides the table build_oracle would produce.
[[nodiscard]] Result check_flow(const Circuit& g, const Circuit& g_prime, const compile::CompileRecord* record,
                                const Options& options = {}, const OracleTable* oracle = nullptr);

[[nodiscard]] Result check(Strategy strategy, const Circuit& g, const Circuit& g_prime,
                           const compile::CompileRecord* record, const Options& options = {});

/// d * P^-1 where P moves logical j to expected(map^-1(j)).
[[nodiscard]] dd::UnitaryDD undo_map(dd::Package& package, const dd::UnitaryDD& d, const QubitMap& map,
                                     const std::vector<std::size_t>& expected);

} // namespace flowec::ec
