#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace flowec {

/// Undirected device connectivity over physical qubits.
class CouplingMap {
public:
    CouplingMap() = default;
    /// Throws Error if an edge is out of range or a self-loop.
    CouplingMap(std::string name, std::size_t num_qubits, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] const std::set<std::pair<std::size_t, std::size_t>>& edges() const noexcept { return edges_; }
    [[nodiscard]] const std::vector<std::size_t>& neighbours(std::size_t q) const { return adjacency_.at(q); }
    [[nodiscard]] bool adjacent(std::size_t a, std::size_t b) const;
    [[nodiscard]] bool connected() const;

    /// BFS shortest path from `from` to `to` (inclusive); neighbours are
    /// expanded in ascending order so ties resolve to the lowest index.
    /// Returns nullopt when `to` is unreachable.
    [[nodiscard]] std::optional<std::vector<std::size_t>> shortest_path(std::size_t from, std::size_t to) const;

    /// JSON object {"name", "num_qubits", "edges": [[a, b], ...]}.
    [[nodiscard]] static CouplingMap from_json(const std::string& text);
    [[nodiscard]] std::string to_json() const;

    /// Built-in presets: "london", "boeblingen", "rochester".
    [[nodiscard]] static std::optional<CouplingMap> preset(const std::string& name);
    [[nodiscard]] static std::vector<std::string> preset_names();
    /// A preset name, or else a path to a JSON file.
    [[nodiscard]] static CouplingMap resolve(const std::string& name_or_path);

private:
    std::string name_;
    std::size_t num_qubits_ = 0;
    std::set<std::pair<std::size_t, std::size_t>> edges_; // stored with first < second
    std::vector<std::vector<std::size_t>> adjacency_;
};

} // namespace flowec
