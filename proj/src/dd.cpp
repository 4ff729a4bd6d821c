#include "flowec/dd.hpp"

#include "flowec/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <functional>
#include <unordered_set>

namespace flowec::dd {

namespace {

inline std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6U) + (h >> 2U);
    return h;
}

inline std::uint64_t bits(double d) {
    return std::bit_cast<std::uint64_t>(d);
}

std::uint64_t hash_children(std::int32_t level, const std::array<Edge, 4>& e) {
    std::uint64_t h = static_cast<std::uint64_t>(level) * 0x100000001b3ULL;
    for (const auto& c : e) {
        h = mix(h, reinterpret_cast<std::uintptr_t>(c.node));
        h = mix(h, bits(c.w.re));
        h = mix(h, bits(c.w.im));
    }
    return h;
}

} // namespace

Package::Package(PackageConfig config)
    : config_(config), ctable_(config.tolerance), watermark_(config.gc_watermark) {
    buckets_.assign(1U << 14U, nullptr);
    mul_table_.resize(std::size_t{1} << config_.compute_table_bits);
    add_table_.resize(std::size_t{1} << config_.compute_table_bits);
}

Node* Package::allocate() {
    if (!free_.empty()) {
        Node* n = free_.back();
        free_.pop_back();
        *n = Node{};
        return n;
    }
    return &pool_.emplace_back();
}

void Package::rehash(std::size_t count) {
    std::vector<Node*> fresh(count, nullptr);
    const std::size_t mask = count - 1;
    for (Node* head : buckets_) {
        while (head != nullptr) {
            Node* nxt = head->next;
            const auto idx = hash_children(head->level, head->e) & mask;
            head->next = fresh[idx];
            fresh[idx] = head;
            head = nxt;
        }
    }
    buckets_ = std::move(fresh);
}

Edge Package::make_node(std::int32_t level, const std::array<Edge, 4>& children) {
    double max_mag = 0.0;
    for (const auto& c : children) {
        max_mag = std::max(max_mag, c.w.mag2());
    }
    if (max_mag == 0.0) {
        return kZeroEdge;
    }
    // Lowest index whose magnitude ties the maximum within tolerance.
    std::size_t pivot = 0;
    const double tie = ctable_.tolerance();
    for (std::size_t i = 0; i < 4; ++i) {
        if (!children[i].w.exactly_zero() && std::sqrt(children[i].w.mag2()) >= std::sqrt(max_mag) - tie) {
            pivot = i;
            break;
        }
    }
    const Complex divisor = children[pivot].w;
    std::array<Edge, 4> normalized{};
    for (std::size_t i = 0; i < 4; ++i) {
        if (children[i].w.exactly_zero()) {
            normalized[i] = kZeroEdge;
        } else {
            const Complex w = i == pivot ? numerics::kOne : ctable_.div(children[i].w, divisor);
            normalized[i] = w.exactly_zero() ? kZeroEdge : Edge{children[i].node, w};
        }
    }

    const auto h = hash_children(level, normalized);
    auto& bucket = buckets_[h & (buckets_.size() - 1)];
    for (Node* n = bucket; n != nullptr; n = n->next) {
        if (n->level == level && n->e == normalized) {
            return {n, divisor};
        }
    }
    Node* n = allocate();
    n->level = level;
    n->e = normalized;
    n->next = bucket;
    bucket = n;
    ++live_;
    if (live_ > buckets_.size() * 2) {
        rehash(buckets_.size() * 4);
    }
    return {n, divisor};
}

Edge Package::identity_edge(std::int32_t level) {
    if (level < 0) {
        return kOneEdge;
    }
    while (static_cast<std::int32_t>(identities_.size()) <= level) {
        const auto v = static_cast<std::int32_t>(identities_.size());
        const Edge below = v == 0 ? kOneEdge : identities_.back();
        Edge e = make_node(v, {below, kZeroEdge, kZeroEdge, below});
        ++e.node->ref; // identities stay alive for the package's lifetime
        identities_.push_back(e);
    }
    return identities_[static_cast<std::size_t>(level)];
}

UnitaryDD Package::make_identity(std::size_t n) {
    if (n == 0) {
        throw DimensionMismatchError("identity needs at least one qubit");
    }
    return {identity_edge(static_cast<std::int32_t>(n) - 1), n};
}

Edge Package::weighted(const Edge& e, Complex factor) {
    if (e.w.exactly_zero() || factor.exactly_zero()) {
        return kZeroEdge;
    }
    const Complex w = ctable_.mul(e.w, factor);
    if (w.exactly_zero()) {
        return kZeroEdge;
    }
    return {e.node, w};
}

Edge Package::build_gate(const Mat2& m, std::span<const std::size_t> controls, std::size_t target, std::size_t n) {
    std::array<Edge, 4> em{};
    for (std::size_t i = 0; i < 4; ++i) {
        const Complex w = ctable_.intern(m[i].real(), m[i].imag());
        em[i] = w.exactly_zero() ? kZeroEdge : Edge{nullptr, w};
    }
    std::vector<bool> is_control(n, false);
    for (const auto c : controls) {
        is_control[c] = true;
    }
    const auto t = static_cast<std::int32_t>(target);
    for (std::int32_t z = 0; z < t; ++z) {
        for (std::size_t i1 = 0; i1 < 2; ++i1) {
            for (std::size_t i2 = 0; i2 < 2; ++i2) {
                const std::size_t i = i1 * 2 + i2;
                if (is_control[static_cast<std::size_t>(z)]) {
                    // control |0>: identity on the diagonal blocks, zero off-diagonal
                    const Edge idle = i1 == i2 ? identity_edge(z - 1) : kZeroEdge;
                    em[i] = make_node(z, {idle, kZeroEdge, kZeroEdge, em[i]});
                } else {
                    em[i] = make_node(z, {em[i], kZeroEdge, kZeroEdge, em[i]});
                }
            }
        }
    }
    Edge e = make_node(t, em);
    for (auto q = static_cast<std::size_t>(t) + 1; q < n; ++q) {
        const auto z = static_cast<std::int32_t>(q);
        if (is_control[q]) {
            e = make_node(z, {identity_edge(z - 1), kZeroEdge, kZeroEdge, e});
        } else {
            e = make_node(z, {e, kZeroEdge, kZeroEdge, e});
        }
    }
    return e;
}

UnitaryDD Package::build(const Gate& g, std::size_t n, std::span<const std::size_t> relabel, bool adjoint_gate) {
    Gate placed = g;
    if (!relabel.empty()) {
        for (auto& q : placed.controls) {
            q = relabel[q];
        }
        for (auto& q : placed.targets) {
            q = relabel[q];
        }
    }
    validate(placed, n);
    if (placed.kind == GateKind::SWAP) {
        const auto a = placed.targets[0];
        const auto b = placed.targets[1];
        const auto ab = gate_dd(Gate::cnot(a, b), n);
        const auto ba = gate_dd(Gate::cnot(b, a), n);
        return multiply(ab, multiply(ba, ab));
    }
    const Mat2 m = adjoint_gate ? adjoint(target_matrix(placed)) : target_matrix(placed);
    return {build_gate(m, placed.controls, placed.targets[0], n), n};
}

UnitaryDD Package::gate_dd(const Gate& g, std::size_t n, std::span<const std::size_t> relabel) {
    return build(g, n, relabel, false);
}

UnitaryDD Package::gate_dd_adjoint(const Gate& g, std::size_t n, std::span<const std::size_t> relabel) {
    return build(g, n, relabel, true);
}

Edge Package::add(const Edge& x, const Edge& y, std::int32_t level) {
    if (x.w.exactly_zero()) {
        return y;
    }
    if (y.w.exactly_zero()) {
        return x;
    }
    if (x.node == y.node) {
        const Complex w = ctable_.add(x.w, y.w);
        return w.exactly_zero() ? kZeroEdge : Edge{x.node, w};
    }
    const std::size_t mask = add_table_.size() - 1;
    const auto idx = (hash_children(level, {x, y, kZeroEdge, kZeroEdge})) & mask;
    auto& entry = add_table_[idx];
    if (entry.valid && entry.a == x && entry.b == y) {
        return entry.result;
    }
    std::array<Edge, 4> r{};
    for (std::size_t i = 0; i < 4; ++i) {
        r[i] = add(weighted(x.node->e[i], x.w), weighted(y.node->e[i], y.w), level - 1);
    }
    const Edge result = make_node(level, r);
    add_table_[idx] = {x, y, result, true};
    return result;
}

Edge Package::mul(const Edge& x, const Edge& y, std::int32_t level) {
    if (x.w.exactly_zero() || y.w.exactly_zero()) {
        return kZeroEdge;
    }
    const Complex w = ctable_.mul(x.w, y.w);
    if (w.exactly_zero()) {
        return kZeroEdge;
    }
    if (level < 0) {
        return {nullptr, w};
    }
    const Edge& ident = identity_edge(level);
    if (x.node == ident.node) {
        return {y.node, w};
    }
    if (y.node == ident.node) {
        return {x.node, w};
    }
    const std::size_t mask = mul_table_.size() - 1;
    const auto idx = mix(reinterpret_cast<std::uintptr_t>(x.node) >> 4U, reinterpret_cast<std::uintptr_t>(y.node)) & mask;
    auto& entry = mul_table_[idx];
    ++mul_lookups_;
    if (entry.a == x.node && entry.b == y.node) {
        ++mul_hits_;
        return weighted(entry.result, w);
    }
    std::array<Edge, 4> r{};
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            const Edge p0 = mul(x.node->e[2 * i], y.node->e[j], level - 1);
            const Edge p1 = mul(x.node->e[2 * i + 1], y.node->e[2 + j], level - 1);
            r[2 * i + j] = add(p0, p1, level - 1);
        }
    }
    const Edge result = make_node(level, r);
    mul_table_[idx] = {x.node, y.node, result};
    return weighted(result, w);
}

UnitaryDD Package::multiply(const UnitaryDD& a, const UnitaryDD& b) {
    if (a.num_qubits != b.num_qubits) {
        throw DimensionMismatchError("cannot multiply a " + std::to_string(a.num_qubits) + "-qubit and a " +
                                     std::to_string(b.num_qubits) + "-qubit diagram");
    }
    return {mul(a.root, b.root, static_cast<std::int32_t>(a.num_qubits) - 1), a.num_qubits};
}

UnitaryDD Package::apply_left(const UnitaryDD& u, const Gate& g, std::span<const std::size_t> relabel) {
    return multiply(gate_dd(g, u.num_qubits, relabel), u);
}

UnitaryDD Package::apply_right_inverse(const UnitaryDD& u, const Gate& g, std::span<const std::size_t> relabel) {
    return multiply(u, gate_dd_adjoint(g, u.num_qubits, relabel));
}

UnitaryDD Package::permutation_dd(std::span<const std::size_t> perm) {
    const std::size_t n = perm.size();
    UnitaryDD result = make_identity(n);
    // arrangement[p]: which original qubit's state currently sits on qubit p
    std::vector<std::size_t> arrangement(n);
    std::vector<std::size_t> where(n);
    for (std::size_t j = 0; j < n; ++j) {
        arrangement[j] = j;
        where[j] = j;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t dest = perm[j];
        const std::size_t cur = where[j];
        if (cur == dest) {
            continue;
        }
        result = apply_left(result, Gate::swap(cur, dest));
        const std::size_t other = arrangement[dest];
        std::swap(arrangement[cur], arrangement[dest]);
        where[j] = dest;
        where[other] = cur;
    }
    return result;
}

UnitaryDD Package::scale(const UnitaryDD& u, Complex factor) {
    const Complex f = ctable_.intern(factor.re, factor.im);
    return {weighted(u.root, f), u.num_qubits};
}

bool Package::near_identity(Node* n, double tolerance) {
    std::unordered_set<Node*> good;
    std::function<bool(Node*)> check = [&](Node* node) -> bool {
        if (node == nullptr) {
            return true;
        }
        if (good.count(node) != 0) {
            return true;
        }
        if (node->level > 0 && (node->e[0].node == nullptr || node->e[3].node == nullptr)) {
            return false;
        }
        if (node->e[1].w.mag() > tolerance || node->e[2].w.mag() > tolerance) {
            return false;
        }
        if (!numerics::approx_equal(node->e[0].w, numerics::kOne, tolerance) ||
            !numerics::approx_equal(node->e[3].w, numerics::kOne, tolerance)) {
            return false;
        }
        if (node->level > 0) {
            if (node->e[0].node->level != node->level - 1 || node->e[3].node->level != node->level - 1) {
                return false;
            }
            if (!check(node->e[0].node) || !check(node->e[3].node)) {
                return false;
            }
        }
        good.insert(node);
        return true;
    };
    return check(n);
}

bool Package::is_identity(const UnitaryDD& u, bool up_to_global_phase, double tolerance) {
    if (u.root.w.exactly_zero() || u.num_qubits == 0) {
        return false;
    }
    const Edge ident = identity_edge(static_cast<std::int32_t>(u.num_qubits) - 1);
    if (u.root.node != ident.node && !near_identity(u.root.node, tolerance)) {
        return false;
    }
    if (up_to_global_phase) {
        return std::abs(u.root.w.mag() - 1.0) <= tolerance;
    }
    return std::abs(u.root.w.re - 1.0) <= tolerance && std::abs(u.root.w.im) <= tolerance;
}

Edge Package::modify(Node* n, const std::vector<bool>& ancillas, std::unordered_map<Node*, Edge>& memo) {
    if (n == nullptr) {
        return kOneEdge;
    }
    if (const auto it = memo.find(n); it != memo.end()) {
        return it->second;
    }
    const auto level = static_cast<std::size_t>(n->level);
    const bool ancilla = level < ancillas.size() && ancillas[level];
    std::array<Edge, 4> r{};
    for (std::size_t i = 0; i < 4; ++i) {
        if ((ancilla && (i & 1U) != 0) || n->e[i].w.exactly_zero()) {
            r[i] = kZeroEdge;
            continue;
        }
        const Edge below = modify(n->e[i].node, ancillas, memo);
        r[i] = weighted(below, n->e[i].w);
    }
    const Edge result = make_node(n->level, r);
    memo.emplace(n, result);
    return result;
}

UnitaryDD Package::modify_ancillaries(const UnitaryDD& u, const std::vector<bool>& ancillas) {
    if (u.root.w.exactly_zero()) {
        return u;
    }
    std::unordered_map<Node*, Edge> memo;
    const Edge e = modify(u.root.node, ancillas, memo);
    return {weighted(e, u.root.w), u.num_qubits};
}

bool Package::is_identity_modified(const UnitaryDD& u, const std::vector<bool>& ancillas, double tolerance,
                                   bool up_to_global_phase) {
    const bool any = std::find(ancillas.begin(), ancillas.end(), true) != ancillas.end();
    if (!any) {
        return is_identity(u, up_to_global_phase, tolerance);
    }
    const auto goal = modify_ancillaries(make_identity(u.num_qubits), ancillas);
    return approx_equal(modify_ancillaries(u, ancillas), goal, tolerance, up_to_global_phase);
}

bool Package::nodes_close(Node* a, Node* b, double tolerance) {
    if (a == b) {
        return true;
    }
    if (a == nullptr || b == nullptr || a->level != b->level) {
        return false;
    }
    for (std::size_t i = 0; i < 4; ++i) {
        const Edge& x = a->e[i];
        const Edge& y = b->e[i];
        const bool x_zero = x.w.mag() <= tolerance;
        const bool y_zero = y.w.mag() <= tolerance;
        if (x_zero && y_zero) {
            continue;
        }
        if (x_zero != y_zero || !numerics::approx_equal(x.w, y.w, tolerance)) {
            return false;
        }
        if (!nodes_close(x.node, y.node, tolerance)) {
            return false;
        }
    }
    return true;
}

bool Package::approx_equal(const UnitaryDD& a, const UnitaryDD& b, double tolerance, bool up_to_global_phase) {
    if (a.num_qubits != b.num_qubits) {
        return false;
    }
    const bool a_zero = a.root.w.mag() <= tolerance;
    const bool b_zero = b.root.w.mag() <= tolerance;
    if (a_zero || b_zero) {
        return a_zero && b_zero;
    }
    if (up_to_global_phase) {
        if (std::abs(a.root.w.mag() - b.root.w.mag()) > tolerance) {
            return false;
        }
    } else if (!numerics::approx_equal(a.root.w, b.root.w, tolerance)) {
        return false;
    }
    return nodes_close(a.root.node, b.root.node, tolerance);
}

std::size_t Package::node_count(const UnitaryDD& u) {
    if (u.root.node == nullptr) {
        return 0;
    }
    const std::uint32_t epoch = ++epoch_;
    std::size_t count = 0;
    std::vector<Node*> stack{u.root.node};
    u.root.node->mark = epoch;
    while (!stack.empty()) {
        Node* n = stack.back();
        stack.pop_back();
        ++count;
        for (const auto& c : n->e) {
            if (c.node != nullptr && c.node->mark != epoch) {
                c.node->mark = epoch;
                stack.push_back(c.node);
            }
        }
    }
    return count;
}

DenseMatrix Package::to_dense(const UnitaryDD& u) const {
    if (u.num_qubits > 10) {
        throw TooLargeError("dense expansion is limited to 10 qubits, diagram has " + std::to_string(u.num_qubits));
    }
    const std::size_t dim = std::size_t{1} << u.num_qubits;
    DenseMatrix m(dim);
    std::function<void(const Edge&, std::complex<double>, std::size_t, std::size_t, std::int32_t)> fill =
        [&](const Edge& e, std::complex<double> acc, std::size_t row, std::size_t col, std::int32_t level) {
            if (e.w.exactly_zero()) {
                return;
            }
            acc *= std::complex<double>(e.w.re, e.w.im);
            if (level < 0) {
                m(row, col) = acc;
                return;
            }
            for (std::size_t i = 0; i < 4; ++i) {
                fill(e.node->e[i], acc, row | ((i >> 1U) << static_cast<std::size_t>(level)),
                     col | ((i & 1U) << static_cast<std::size_t>(level)), level - 1);
            }
        };
    fill(u.root, 1.0, 0, 0, static_cast<std::int32_t>(u.num_qubits) - 1);
    return m;
}

void Package::inc_ref(const UnitaryDD& u) {
    if (u.root.node != nullptr) {
        ++u.root.node->ref;
    }
    ++root_weights_[u.root.w];
}

void Package::dec_ref(const UnitaryDD& u) {
    if (u.root.node != nullptr && u.root.node->ref > 0) {
        --u.root.node->ref;
    }
    if (auto it = root_weights_.find(u.root.w); it != root_weights_.end() && --it->second == 0) {
        root_weights_.erase(it);
    }
}

void Package::mark_from(Node* n, std::uint32_t epoch) {
    std::vector<Node*> stack{n};
    n->mark = epoch;
    while (!stack.empty()) {
        Node* cur = stack.back();
        stack.pop_back();
        for (const auto& c : cur->e) {
            if (c.node != nullptr && c.node->mark != epoch) {
                c.node->mark = epoch;
                stack.push_back(c.node);
            }
        }
    }
}

void Package::clear_compute_tables() {
    std::fill(mul_table_.begin(), mul_table_.end(), MulEntry{});
    std::fill(add_table_.begin(), add_table_.end(), AddEntry{});
}

bool Package::garbage_collect(bool force) {
    if (!force && live_ < watermark_) {
        return false;
    }
    const std::uint32_t epoch = ++epoch_;
    for (Node* head : buckets_) {
        for (Node* n = head; n != nullptr; n = n->next) {
            if (n->ref > 0 && n->mark != epoch) {
                mark_from(n, epoch);
            }
        }
    }
    ctable_.clear();
    for (const auto& [w, count] : root_weights_) {
        ctable_.keep(w);
    }
    for (auto& head : buckets_) {
        Node** link = &head;
        while (*link != nullptr) {
            Node* n = *link;
            if (n->mark != epoch) {
                *link = n->next;
                free_.push_back(n);
                --live_;
            } else {
                for (const auto& c : n->e) {
                    ctable_.keep(c.w);
                }
                link = &n->next;
            }
        }
    }
    clear_compute_tables();
    ++gc_runs_;
    // keep sweeps amortised when most nodes survive
    if (live_ > watermark_ / 2) {
        watermark_ *= 2;
    }
    return true;
}

PackageStats Package::stats() const {
    return {live_, ctable_.size(), gc_runs_, mul_hits_, mul_lookups_};
}

} // namespace flowec::dd
