#include "flowec/coupling_map.hpp"

#include "flowec/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

namespace flowec {

namespace {

using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;

// IBM Q London, 5 qubits.
const EdgeList kLondon = {{0, 1}, {1, 2}, {1, 3}, {3, 4}};

// IBM Q Boeblingen, 20 qubits. Externally sourced: coupling map of Qiskit's
// FakeBoeblingen backend configuration (directed pairs folded to undirected).
const EdgeList kBoeblingen = {{0, 1},   {1, 2},   {1, 6},   {2, 3},   {3, 4},   {3, 8},   {5, 6},   {5, 10},
                              {6, 7},   {7, 8},   {7, 12},  {8, 9},   {9, 14},  {10, 11}, {11, 12}, {11, 16},
                              {12, 13}, {13, 14}, {13, 18}, {15, 16}, {16, 17}, {17, 18}, {18, 19}};

// IBM Q Rochester, 53 qubits. Externally sourced: coupling map of Qiskit's
// FakeRochester backend configuration (directed pairs folded to undirected).
const EdgeList kRochester = {{0, 1},   {0, 5},   {1, 2},   {2, 3},   {3, 4},   {4, 6},   {5, 9},   {6, 13},
                             {7, 8},   {7, 16},  {8, 9},   {9, 10},  {10, 11}, {11, 12}, {11, 17}, {12, 13},
                             {13, 14}, {14, 15}, {15, 18}, {16, 19}, {17, 23}, {18, 27}, {19, 20}, {20, 21},
                             {21, 22}, {21, 28}, {22, 23}, {23, 24}, {24, 25}, {25, 26}, {25, 29}, {26, 27},
                             {28, 32}, {29, 36}, {30, 31}, {30, 39}, {31, 32}, {32, 33}, {33, 34}, {34, 35},
                             {34, 40}, {35, 36}, {36, 37}, {37, 38}, {38, 41}, {39, 42}, {40, 46}, {41, 50},
                             {42, 43}, {43, 44}, {44, 45}, {44, 51}, {45, 46}, {46, 47}, {47, 48}, {48, 49},
                             {48, 52}, {49, 50}};

} // namespace

CouplingMap::CouplingMap(std::string name, std::size_t num_qubits, const EdgeList& edges)
    : name_(std::move(name)), num_qubits_(num_qubits), adjacency_(num_qubits) {
    for (auto [a, b] : edges) {
        if (a >= num_qubits || b >= num_qubits) {
            throw Error("coupling map '" + name_ + "': edge (" + std::to_string(a) + "," + std::to_string(b) +
                        ") out of range");
        }
        if (a == b) {
            throw Error("coupling map '" + name_ + "': self-loop on qubit " + std::to_string(a));
        }
        if (a > b) {
            std::swap(a, b);
        }
        if (edges_.emplace(a, b).second) {
            adjacency_[a].push_back(b);
            adjacency_[b].push_back(a);
        }
    }
    for (auto& adj : adjacency_) {
        std::sort(adj.begin(), adj.end());
    }
}

bool CouplingMap::adjacent(std::size_t a, std::size_t b) const {
    return edges_.count({std::min(a, b), std::max(a, b)}) != 0;
}

bool CouplingMap::connected() const {
    if (num_qubits_ == 0) {
        return true;
    }
    std::vector<bool> seen(num_qubits_, false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!queue.empty()) {
        const auto q = queue.front();
        queue.pop_front();
        for (const auto n : adjacency_[q]) {
            if (!seen[n]) {
                seen[n] = true;
                ++count;
                queue.push_back(n);
            }
        }
    }
    return count == num_qubits_;
}

std::optional<std::vector<std::size_t>> CouplingMap::shortest_path(std::size_t from, std::size_t to) const {
    if (from >= num_qubits_ || to >= num_qubits_) {
        return std::nullopt;
    }
    constexpr auto kNone = static_cast<std::size_t>(-1);
    std::vector<std::size_t> parent(num_qubits_, kNone);
    parent[from] = from;
    std::deque<std::size_t> queue{from};
    while (!queue.empty() && parent[to] == kNone) {
        const auto q = queue.front();
        queue.pop_front();
        for (const auto n : adjacency_[q]) {
            if (parent[n] == kNone) {
                parent[n] = q;
                queue.push_back(n);
            }
        }
    }
    if (parent[to] == kNone) {
        return std::nullopt;
    }
    std::vector<std::size_t> path{to};
    while (path.back() != from) {
        path.push_back(parent[path.back()]);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

CouplingMap CouplingMap::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        EdgeList edges;
        for (const auto& e : j.at("edges")) {
            if (e.size() != 2) {
                throw Error("coupling map edge must have two endpoints");
            }
            edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
        }
        return CouplingMap(j.value("name", std::string("custom")), j.at("num_qubits").get<std::size_t>(), edges);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed coupling map JSON: ") + e.what());
    }
}

std::string CouplingMap::to_json() const {
    nlohmann::json j;
    j["name"] = name_;
    j["num_qubits"] = num_qubits_;
    j["edges"] = nlohmann::json::array();
    for (const auto& [a, b] : edges_) {
        j["edges"].push_back({a, b});
    }
    return j.dump();
}

std::optional<CouplingMap> CouplingMap::preset(const std::string& name) {
    if (name == "london") {
        return CouplingMap("london", 5, kLondon);
    }
    if (name == "boeblingen") {
        return CouplingMap("boeblingen", 20, kBoeblingen);
    }
    if (name == "rochester") {
        return CouplingMap("rochester", 53, kRochester);
    }
    return std::nullopt;
}

std::vector<std::string> CouplingMap::preset_names() {
    return {"london", "boeblingen", "rochester"};
}

CouplingMap CouplingMap::resolve(const std::string& name_or_path) {
    if (auto p = preset(name_or_path)) {
        return *p;
    }
    std::ifstream in(name_or_path);
    if (!in) {
        throw Error("unknown architecture '" + name_or_path + "' (not a preset and not a readable file)");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json(buffer.str());
}

} // namespace flowec
