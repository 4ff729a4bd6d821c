#include "flowec/compile.hpp"

#include "flowec/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace flowec::compile {

using nlohmann::json;

std::vector<std::size_t> CompileRecord::final_layout() const {
    auto layout = initial_layout;
    for (const auto& ev : swap_events) {
        std::swap(layout.at(ev.a), layout.at(ev.b));
    }
    return layout;
}

std::string CompileRecord::to_json() const {
    json j;
    j["initial_layout"] = initial_layout;
    j["ranges"] = json::array();
    for (const auto& r : ranges) {
        j["ranges"].push_back(json::array({r.start, r.count, r.cross_boundary}));
    }
    j["swap_events"] = json::array();
    for (const auto& ev : swap_events) {
        j["swap_events"].push_back(json::array({ev.position, json::array({ev.a, ev.b})}));
    }
    j["opt_level"] = opt_level;
    return j.dump();
}

CompileRecord CompileRecord::from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        CompileRecord r;
        r.initial_layout = j.at("initial_layout").get<std::vector<std::size_t>>();
        for (const auto& e : j.at("ranges")) {
            r.ranges.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(), e.at(2).get<bool>()});
        }
        for (const auto& e : j.at("swap_events")) {
            const auto& pair = e.at(1);
            r.swap_events.push_back({e.at(0).get<std::size_t>(), pair.at(0).get<Qubit>(), pair.at(1).get<Qubit>()});
        }
        r.opt_level = j.value("opt_level", 0);
        const std::size_t n = r.initial_layout.size();
        for (const auto& ev : r.swap_events) {
            if (ev.a >= n || ev.b >= n) {
                throw Error("swap event on a qubit outside the initial layout");
            }
        }
        std::vector<std::size_t> sorted = r.initial_layout;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < n; ++i) {
            if (sorted[i] != i) {
                throw Error("initial layout is not a permutation");
            }
        }
        return r;
    } catch (const json::exception& e) {
        throw Error(std::string("malformed compile record: ") + e.what());
    }
}

CompileRecord CompileRecord::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open record file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

void CompileRecord::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write record file '" + path + "'");
    }
    out << to_json() << '\n';
}

std::vector<Gate> toffoli_gates(Qubit a, Qubit b, Qubit t) {
    return {Gate::single(GateKind::H, t),   Gate::cnot(b, t), Gate::single(GateKind::Tdg, t),
            Gate::cnot(a, t),               Gate::single(GateKind::T, t), Gate::cnot(b, t),
            Gate::single(GateKind::Tdg, t), Gate::cnot(a, t), Gate::single(GateKind::T, b),
            Gate::single(GateKind::T, t),   Gate::single(GateKind::H, t), Gate::cnot(a, b),
            Gate::single(GateKind::T, a),   Gate::single(GateKind::Tdg, b), Gate::cnot(a, b)};
}

std::size_t ancillas_needed(const Circuit& c) {
    std::size_t most = 0;
    for (const auto& g : c.gates) {
        if (g.kind == GateKind::MCX && g.controls.size() >= 3) {
            most = std::max(most, g.controls.size() - 2);
        }
    }
    return most;
}

namespace {

void emit_mcx(const Gate& g, std::size_t first_ancilla, std::vector<Gate>& out) {
    const auto& c = g.controls;
    const Qubit t = g.targets[0];
    const std::size_t k = c.size();
    auto toffoli = [&out](Qubit a, Qubit b, Qubit target) {
        const auto net = toffoli_gates(a, b, target);
        out.insert(out.end(), net.begin(), net.end());
    };
    if (k == 0) {
        out.push_back(Gate::single(GateKind::X, t));
        return;
    }
    if (k == 1) {
        out.push_back(Gate::cnot(c[0], t));
        return;
    }
    if (k == 2) {
        toffoli(c[0], c[1], t);
        return;
    }
    std::vector<std::array<Qubit, 3>> chain;
    chain.push_back({c[0], c[1], first_ancilla});
    for (std::size_t i = 1; i + 2 < k; ++i) {
        chain.push_back({c[i + 1], first_ancilla + i - 1, first_ancilla + i});
    }
    for (const auto& s : chain) {
        toffoli(s[0], s[1], s[2]);
    }
    toffoli(c[k - 1], first_ancilla + k - 3, t);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        toffoli((*it)[0], (*it)[1], (*it)[2]);
    }
}

std::vector<std::size_t> full_layout(const std::optional<std::vector<std::size_t>>& given, std::size_t n) {
    std::vector<std::size_t> layout;
    if (given) {
        layout = *given;
    }
    if (layout.size() > n) {
        throw MappingInfeasibleError("initial layout names " + std::to_string(layout.size()) +
                                     " physical qubits but the device has " + std::to_string(n));
    }
    std::vector<bool> used(n, false);
    for (const auto l : layout) {
        if (l >= n || used[l]) {
            throw MappingInfeasibleError("initial layout is not a bijection");
        }
        used[l] = true;
    }
    for (std::size_t l = 0; layout.size() < n; ++l) {
        if (!used[l]) {
            layout.push_back(l);
        }
    }
    return layout;
}

bool cancels(const Gate& a, const Gate& b) {
    if (a.kind != b.kind) {
        return false;
    }
    switch (a.kind) {
    case GateKind::CNOT:
        return a.controls == b.controls && a.targets == b.targets;
    case GateKind::CZ: {
        const std::set<Qubit> qa{a.controls[0], a.targets[0]};
        const std::set<Qubit> qb{b.controls[0], b.targets[0]};
        return qa == qb;
    }
    case GateKind::SWAP: {
        const std::set<Qubit> qa(a.targets.begin(), a.targets.end());
        const std::set<Qubit> qb(b.targets.begin(), b.targets.end());
        return qa == qb;
    }
    default:
        return false;
    }
}

// One sweep removing adjacent equal pairs of two-qubit gates.
bool cancel_pairs(std::vector<TrackedGate>& gates, std::size_t width, std::set<std::size_t>& cross) {
    std::vector<bool> dead(gates.size(), false);
    std::vector<std::vector<std::size_t>> last(width);
    bool changed = false;
    for (std::size_t i = 0; i < gates.size(); ++i) {
        const auto qs = gates[i].gate.qubits();
        bool removed = false;
        if (qs.size() == 2 && !last[qs[0]].empty() && !last[qs[1]].empty()) {
            const std::size_t j = last[qs[0]].back();
            if (j == last[qs[1]].back() && cancels(gates[j].gate, gates[i].gate)) {
                dead[i] = true;
                dead[j] = true;
                last[qs[0]].pop_back();
                last[qs[1]].pop_back();
                if (gates[i].origin != gates[j].origin) {
                    cross.insert(gates[i].origin);
                    cross.insert(gates[j].origin);
                }
                removed = true;
                changed = true;
            }
        }
        if (!removed) {
            for (const auto q : qs) {
                last[q].push_back(i);
            }
        }
    }
    std::size_t out = 0;
    for (std::size_t i = 0; i < gates.size(); ++i) {
        if (!dead[i]) {
            if (out != i) {
                gates[out] = std::move(gates[i]);
            }
            ++out;
        }
    }
    gates.resize(out);
    return changed;
}

} // namespace

TrackedCircuit synthesize(const Circuit& c) {
    const std::size_t extra = ancillas_needed(c);
    TrackedCircuit out{Circuit(c.num_qubits), {}};
    out.circuit.qubit_names = c.qubit_names;
    out.circuit.ancilla = c.ancilla;
    out.circuit.ancilla.resize(c.num_qubits, false);
    out.circuit.global_phase = c.global_phase;
    if (extra > 0) {
        out.circuit.augment(extra, true);
    }
    std::vector<Gate> emitted;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        emitted.clear();
        switch (g.kind) {
        case GateKind::CZ:
            emitted = {Gate::single(GateKind::H, g.targets[0]), Gate::cnot(g.controls[0], g.targets[0]),
                       Gate::single(GateKind::H, g.targets[0])};
            break;
        case GateKind::MCX:
            emit_mcx(g, c.num_qubits, emitted);
            break;
        default:
            emitted.push_back(g);
            break;
        }
        for (auto& e : emitted) {
            out.circuit.add(std::move(e));
            out.origins.push_back(i);
        }
    }
    return out;
}

Mapped map(const TrackedCircuit& c, const CouplingMap& arch, const std::optional<std::vector<std::size_t>>& layout) {
    const std::size_t n_phys = arch.num_qubits();
    if (c.circuit.num_qubits > n_phys) {
        throw MappingInfeasibleError("circuit needs " + std::to_string(c.circuit.num_qubits) + " qubits but '" +
                                     arch.name() + "' has " + std::to_string(n_phys));
    }
    Mapped out;
    out.initial_layout = full_layout(layout, n_phys);
    std::vector<std::size_t> log_of = out.initial_layout; // physical -> logical
    std::vector<std::size_t> phys_of(n_phys);             // logical -> physical
    for (std::size_t p = 0; p < n_phys; ++p) {
        phys_of[log_of[p]] = p;
    }

    Circuit& res = out.tracked.circuit;
    res = Circuit(n_phys);
    res.global_phase = c.circuit.global_phase;
    for (std::size_t p = 0; p < n_phys; ++p) {
        const std::size_t l = log_of[p];
        res.ancilla[p] = l >= c.circuit.num_qubits || (l < c.circuit.ancilla.size() && c.circuit.ancilla[l]);
    }
    auto emit = [&](Gate g, std::size_t origin) {
        res.add(std::move(g));
        out.tracked.origins.push_back(origin);
    };
    auto swap_phys = [&](Qubit a, Qubit b, std::size_t origin) {
        out.swap_events.push_back({res.size(), a, b});
        emit(Gate::cnot(a, b), origin);
        emit(Gate::cnot(b, a), origin);
        emit(Gate::cnot(a, b), origin);
        std::swap(log_of[a], log_of[b]);
        phys_of[log_of[a]] = a;
        phys_of[log_of[b]] = b;
    };
    // Moves the logical qubit on `from` next to physical `to`.
    auto bring_adjacent = [&](Qubit from, Qubit to, std::size_t origin) {
        const auto path = arch.shortest_path(from, to);
        if (!path) {
            throw MappingInfeasibleError("physical qubits " + std::to_string(from) + " and " + std::to_string(to) +
                                         " are disconnected on '" + arch.name() + "'");
        }
        for (std::size_t j = 0; j + 2 < path->size(); ++j) {
            swap_phys((*path)[j], (*path)[j + 1], origin);
        }
    };

    for (std::size_t i = 0; i < c.circuit.gates.size(); ++i) {
        const Gate& g = c.circuit.gates[i];
        const std::size_t origin = c.origins.at(i);
        if (g.is_single_qubit()) {
            Gate placed = g;
            placed.targets[0] = phys_of[g.targets[0]];
            emit(std::move(placed), origin);
            continue;
        }
        if (g.kind == GateKind::CNOT) {
            bring_adjacent(phys_of[g.controls[0]], phys_of[g.targets[0]], origin);
            emit(Gate::cnot(phys_of[g.controls[0]], phys_of[g.targets[0]]), origin);
            continue;
        }
        if (g.kind == GateKind::SWAP) {
            bring_adjacent(phys_of[g.targets[0]], phys_of[g.targets[1]], origin);
            const Qubit a = phys_of[g.targets[0]];
            const Qubit b = phys_of[g.targets[1]];
            emit(Gate::cnot(a, b), origin);
            emit(Gate::cnot(b, a), origin);
            emit(Gate::cnot(a, b), origin);
            continue;
        }
        throw UnsupportedGateError("mapping expects synthesized gates, found '" + std::string(kind_name(g.kind)) +
                                   "'");
    }
    return out;
}

Optimized optimize_o1(const TrackedCircuit& c) {
    std::vector<TrackedGate> gates;
    gates.reserve(c.circuit.size());
    for (std::size_t i = 0; i < c.circuit.size(); ++i) {
        gates.push_back({c.circuit.gates[i], c.origins.at(i), i});
    }
    std::set<std::size_t> cross;
    double phase = 0;
    bool changed = true;
    while (changed) {
        const FusionOutcome fused = fuse_single_qubit_runs(gates);
        phase += fused.global_phase;
        cross.insert(fused.merged_origins.begin(), fused.merged_origins.end());
        changed = cancel_pairs(gates, c.circuit.num_qubits, cross);
    }
    Optimized out;
    Circuit& res = out.tracked.circuit;
    res = Circuit(c.circuit.num_qubits);
    res.qubit_names = c.circuit.qubit_names;
    res.ancilla = c.circuit.ancilla;
    res.global_phase = c.circuit.global_phase + phase;
    res.initial_layout = c.circuit.initial_layout;
    res.output_layout = c.circuit.output_layout;
    for (auto& t : gates) {
        res.gates.push_back(std::move(t.gate));
        out.tracked.origins.push_back(t.origin);
        out.kept.push_back(t.tag);
    }
    out.cross_boundary_origins.assign(cross.begin(), cross.end());
    return out;
}

Compiled compile(const Circuit& c, const CouplingMap& arch, const CompileOptions& options) {
    if (options.opt_level != 0 && options.opt_level != 1) {
        throw Error("unsupported optimization level " + std::to_string(options.opt_level));
    }
    const TrackedCircuit synthesized = synthesize(c);
    Mapped mapped = map(synthesized, arch, options.initial_layout);

    TrackedCircuit result = std::move(mapped.tracked);
    std::vector<SwapEvent> events = mapped.swap_events;
    std::vector<bool> cross(c.size(), false);
    if (options.opt_level == 1) {
        Optimized opt = optimize_o1(result);
        // survivors before each event's original position
        for (auto& ev : events) {
            ev.position = static_cast<std::size_t>(
                std::lower_bound(opt.kept.begin(), opt.kept.end(), ev.position) - opt.kept.begin());
        }
        for (const auto o : opt.cross_boundary_origins) {
            cross[o] = true;
        }
        result = std::move(opt.tracked);
    }

    Compiled out;
    out.record.initial_layout = mapped.initial_layout;
    out.record.swap_events = events;
    out.record.opt_level = options.opt_level;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto lo = std::lower_bound(result.origins.begin(), result.origins.end(), i);
        const auto hi = std::upper_bound(lo, result.origins.end(), i);
        out.record.ranges.push_back({static_cast<std::size_t>(lo - result.origins.begin()),
                                     static_cast<std::size_t>(hi - lo), cross[i]});
    }
    out.circuit = std::move(result.circuit);
    out.circuit.initial_layout = out.record.initial_layout;
    out.circuit.output_layout = out.record.final_layout();
    return out;
}

} // namespace flowec::compile
