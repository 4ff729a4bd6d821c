#include "flowec/generate.hpp"

#include <algorithm>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <string>

namespace flowec::gen {

namespace {

std::vector<Qubit> distinct(std::size_t count, std::size_t n, std::mt19937_64& rng) {
    std::vector<Qubit> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(count);
    return all;
}

double angle(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(0.0, 2 * std::numbers::pi);
    return d(rng);
}

Gate random_single(Qubit q, std::mt19937_64& rng) {
    static constexpr GateKind kinds[] = {GateKind::X,  GateKind::Y, GateKind::Z,   GateKind::H,
                                         GateKind::S,  GateKind::Sdg, GateKind::T, GateKind::Tdg,
                                         GateKind::U1, GateKind::U2, GateKind::U3};
    std::uniform_int_distribution<std::size_t> pick(0, std::size(kinds) - 1);
    switch (const GateKind k = kinds[pick(rng)]) {
    case GateKind::U1:
        return Gate::u1(angle(rng), q);
    case GateKind::U2:
        return Gate::u2(angle(rng), angle(rng), q);
    case GateKind::U3: {
        std::uniform_real_distribution<double> theta(0.0, std::numbers::pi);
        return Gate::u3(theta(rng), angle(rng), angle(rng), q);
    }
    default:
        return Gate::single(k, q);
    }
}

} // namespace

Circuit random_circuit(const RandomCircuitOptions& options, std::mt19937_64& rng) {
    const std::size_t n = options.num_qubits;
    Circuit c(n);
    std::vector<int> menu{0, 0, 0, 1, 1}; // 0 single, 1 cnot, 2 cz, 3 swap, 4 mcx
    if (!options.elementary_only) {
        if (options.allow_cz) {
            menu.push_back(2);
        }
        if (options.allow_swap) {
            menu.push_back(3);
        }
        if (options.allow_toffoli && n >= 3) {
            menu.push_back(4);
        }
    }
    std::uniform_int_distribution<std::size_t> pick(0, menu.size() - 1);
    std::uniform_int_distribution<std::size_t> qubit(0, n - 1);
    while (c.size() < options.num_gates) {
        const int choice = n >= 2 ? menu[pick(rng)] : 0;
        switch (choice) {
        case 0:
            c.add(random_single(qubit(rng), rng));
            break;
        case 1: {
            const auto q = distinct(2, n, rng);
            c.add(Gate::cnot(q[0], q[1]));
            break;
        }
        case 2: {
            const auto q = distinct(2, n, rng);
            c.add(Gate::cz(q[0], q[1]));
            break;
        }
        case 3: {
            const auto q = distinct(2, n, rng);
            c.add(Gate::swap(q[0], q[1]));
            break;
        }
        default: {
            const std::size_t most = std::min(options.max_mcx_controls, n - 1);
            std::uniform_int_distribution<std::size_t> k(2, std::max<std::size_t>(2, most));
            auto q = distinct(k(rng) + 1, n, rng);
            const Qubit t = q.back();
            q.pop_back();
            c.add(Gate::mcx(q, t));
            break;
        }
        }
    }
    return c;
}

Circuit mutate(const Circuit& c, std::mt19937_64& rng) {
    Circuit out = c;
    std::uniform_int_distribution<std::size_t> qubit(0, c.num_qubits - 1);
    std::uniform_int_distribution<std::size_t> pos(0, c.size());
    static constexpr GateKind never_identity[] = {GateKind::X, GateKind::Y, GateKind::Z, GateKind::H,
                                                  GateKind::S, GateKind::T};
    std::uniform_int_distribution<std::size_t> kind(0, std::size(never_identity) - 1);
    // Changes the full unitary; may be neutral under clean-ancilla semantics.
    const auto at = static_cast<std::ptrdiff_t>(pos(rng));
    Gate g = Gate::single(never_identity[kind(rng)], qubit(rng));
    if (c.num_qubits >= 2 && std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
        const auto q = distinct(2, c.num_qubits, rng);
        g = Gate::cnot(q[0], q[1]);
    }
    out.gates.insert(out.gates.begin() + at, g);
    return out;
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
    if (const char* s = std::getenv("QCEC_SEED"); s != nullptr && *s != '\0') {
        return std::stoull(s);
    }
    return fallback;
}

} // namespace flowec::gen
