#include "flowec/ec.hpp"

#include "flowec/errors.hpp"

#include <algorithm>
#include <array>
#include <memory>
#include <chrono>
#include <cmath>
#include <limits>
#include <new>
#include <numbers>
#include <numeric>
#include <span>

namespace flowec::ec {

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
    case Verdict::Equivalent:
        return "equivalent";
    case Verdict::NotEquivalent:
        return "not_equivalent";
    case Verdict::Unknown:
        break;
    }
    return "unknown";
}

std::string_view to_string(Strategy s) noexcept {
    switch (s) {
    case Strategy::Naive:
        return "naive";
    case Strategy::Proportional:
        return "proportional";
    case Strategy::Flow:
        break;
    }
    return "flow";
}

std::optional<Strategy> parse_strategy(std::string_view name) noexcept {
    for (const auto s : {Strategy::Naive, Strategy::Proportional, Strategy::Flow}) {
        if (to_string(s) == name) {
            return s;
        }
    }
    return std::nullopt;
}

QubitMap::QubitMap(std::vector<std::size_t> forward) : forward_(std::move(forward)) {
    inverse_.assign(forward_.size(), std::numeric_limits<std::size_t>::max());
    for (std::size_t p = 0; p < forward_.size(); ++p) {
        const std::size_t l = forward_[p];
        if (l >= forward_.size() || inverse_[l] != std::numeric_limits<std::size_t>::max()) {
            throw DimensionMismatchError("qubit map is not a permutation");
        }
        inverse_[l] = p;
    }
}

QubitMap QubitMap::identity(std::size_t n) {
    std::vector<std::size_t> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        f[i] = i;
    }
    return QubitMap(std::move(f));
}

void QubitMap::swap_update(std::size_t a, std::size_t b) {
    std::swap(forward_.at(a), forward_.at(b));
    inverse_[forward_[a]] = a;
    inverse_[forward_[b]] = b;
}

dd::UnitaryDD undo_map(dd::Package& package, const dd::UnitaryDD& d, const QubitMap& map,
                       const std::vector<std::size_t>& expected) {
    const std::size_t n = map.size();
    // inverse of j -> expected(map^-1(j))
    std::vector<std::size_t> inv(n);
    bool trivial = true;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t to = expected.at(map.physical(j));
        inv[to] = j;
        trivial = trivial && to == j;
    }
    if (trivial) {
        return d;
    }
    return package.multiply(d, package.permutation_dd(inv));
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

bool is_cnot(const Gate& g, Qubit c, Qubit t) {
    return g.kind == GateKind::CNOT && g.controls[0] == c && g.targets[0] == t;
}

std::vector<std::size_t> position_origins(const std::vector<compile::Range>& ranges, std::size_t size) {
    std::vector<std::size_t> origin(size, kNone);
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        for (std::size_t p = ranges[i].start; p < ranges[i].start + ranges[i].count && p < size; ++p) {
            origin[p] = i;
        }
    }
    return origin;
}

std::vector<StreamItem> collapse_swaps(const Circuit& gp, const std::vector<compile::Range>* ranges) {
    const auto& gates = gp.gates;
    const std::size_t m = gates.size();
    // next[i][k]: next gate touching the k-th qubit of gate i
    std::vector<std::size_t> last(gp.num_qubits, kNone);
    std::vector<std::array<std::size_t, 2>> next(m, {kNone, kNone});
    for (std::size_t i = m; i-- > 0;) {
        const auto qs = gates[i].qubits();
        for (std::size_t k = 0; k < qs.size() && k < 2; ++k) {
            next[i][k] = last[qs[k]];
        }
        for (const auto q : qs) {
            last[q] = i;
        }
    }
    std::vector<std::size_t> origin;
    if (ranges != nullptr) {
        origin = position_origins(*ranges, m);
    }
    auto same_range = [&](std::size_t a, std::size_t b) { return ranges == nullptr || origin[a] == origin[b]; };
    // next gate after i touching both of its qubits, or kNone
    auto next_on_pair = [&](std::size_t i) { return next[i][0] == next[i][1] ? next[i][0] : kNone; };

    std::vector<bool> consumed(m, false);
    std::vector<StreamItem> items;
    items.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (consumed[i]) {
            continue;
        }
        const Gate& g = gates[i];
        if (g.kind == GateKind::SWAP) {
            items.push_back({g, true, i});
            continue;
        }
        if (g.kind != GateKind::CNOT) {
            items.push_back({g, false, i});
            continue;
        }
        const Qubit a = g.controls[0];
        const Qubit b = g.targets[0];
        const std::size_t j = next_on_pair(i);
        if (j == kNone || consumed[j] || !is_cnot(gates[j], b, a) || !same_range(i, j)) {
            items.push_back({g, false, i});
            continue;
        }
        // next_on_pair of j is indexed by j's own qubit order (b, a); both slots agree when valid
        const std::size_t k = next_on_pair(j);
        consumed[j] = true;
        items.push_back({Gate::swap(a, b), true, i});
        if (k != kNone && !consumed[k] && is_cnot(gates[k], a, b) && same_range(i, k)) {
            consumed[k] = true;
        } else {
            items.push_back({Gate::cnot(a, b), false, j});
        }
    }
    return items;
}

// Widths reconciled, layouts fixed, idle qubits stripped.
struct Problem {
    std::size_t width = 0;
    std::vector<TrackedGate> g;
    std::vector<StreamItem> gp;
    std::vector<std::size_t> layout_in;  // physical -> logical
    std::vector<std::size_t> layout_out;
    std::vector<bool> ancillas;          // logical
    double phase = 0.0;                  // D is scaled by e^{i phase} before the final test
    std::vector<std::size_t> range_end;  // per original gate of G (record only)
    std::vector<compile::SwapEvent> events;
    bool has_record = false;
    int opt_level = 1;
};

std::vector<std::size_t> padded_layout(std::vector<std::size_t> layout, std::size_t n) {
    if (layout.size() > n) {
        throw DimensionMismatchError("layout covers more qubits than the circuits");
    }
    std::vector<bool> used(n, false);
    for (const auto l : layout) {
        if (l >= n || used[l]) {
            throw DimensionMismatchError("layout is not a permutation");
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

Problem prepare(const Circuit& g_in, const Circuit& gp_in, const compile::CompileRecord* record, const Options& options,
                bool flow_preprocessing) {
    Problem pb;
    pb.has_record = record != nullptr;
    pb.opt_level = record != nullptr ? record->opt_level : options.assumed_opt_level;
    if (record != nullptr && record->ranges.size() != g_in.size()) {
        throw Error("compile record lists " + std::to_string(record->ranges.size()) + " gates but G has " +
                    std::to_string(g_in.size()));
    }

    std::size_t n = std::max(g_in.num_qubits, gp_in.num_qubits);
    if (record != nullptr) {
        n = std::max(n, record->initial_layout.size());
    }
    Circuit g = g_in;
    Circuit gp = gp_in;
    g.augment(n - g.num_qubits, true);
    gp.augment(n - gp.num_qubits, true);

    std::vector<std::size_t> in;
    std::vector<std::size_t> out;
    if (record != nullptr) {
        in = padded_layout(record->initial_layout, n);
        out = padded_layout(record->final_layout(), n);
    } else {
        in = padded_layout(gp_in.initial_layout.value_or(std::vector<std::size_t>{}), n);
        out = gp_in.output_layout ? padded_layout(*gp_in.output_layout, n) : in;
    }
    std::vector<bool> ancillas(n, false);
    for (std::size_t l = 0; l < n; ++l) {
        ancillas[l] = l >= g_in.num_qubits || (l < g_in.ancilla.size() && g_in.ancilla[l]);
    }

    const bool fuse_g = flow_preprocessing && pb.opt_level >= 1;
    Preprocessed pre;
    if (flow_preprocessing) {
        pre = preprocess(g, gp, fuse_g, record != nullptr ? &record->ranges : nullptr);
    } else {
        for (std::size_t i = 0; i < g.size(); ++i) {
            pre.g.push_back({g.gates[i], i, 0});
        }
        for (std::size_t i = 0; i < gp.size(); ++i) {
            pre.g_prime.push_back({gp.gates[i], false, i});
        }
    }
    pb.phase = g.global_phase + pre.fused_phase - gp.global_phase;

    // Physical qubits idle in both circuits whose logical qubit never moves drop out.
    std::vector<bool> keep_phys(n, true);
    if (options.strip_idle_qubits) {
        std::vector<bool> used_log(n, false);
        std::vector<bool> used_phys(n, false);
        for (const auto& t : pre.g) {
            for (const auto q : t.gate.qubits()) {
                used_log[q] = true;
            }
        }
        for (const auto& it : pre.g_prime) {
            for (const auto q : it.gate.qubits()) {
                used_phys[q] = true;
            }
        }
        for (std::size_t p = 0; p < n; ++p) {
            keep_phys[p] = used_phys[p] || used_log[in[p]] || used_log[out[p]] || in[p] != out[p];
        }
    }
    std::vector<std::size_t> phys_index(n, kNone);
    std::vector<std::size_t> log_index(n, kNone);
    std::vector<bool> keep_log(n, false);
    std::size_t k = 0;
    for (std::size_t p = 0; p < n; ++p) {
        if (keep_phys[p]) {
            phys_index[p] = k++;
            keep_log[in[p]] = true;
        }
    }
    for (std::size_t l = 0, next = 0; l < n; ++l) {
        if (keep_log[l]) {
            log_index[l] = next++;
            pb.ancillas.push_back(ancillas[l]);
        }
    }
    pb.width = k;
    for (std::size_t p = 0; p < n; ++p) {
        if (keep_phys[p]) {
            pb.layout_in.push_back(log_index[in[p]]);
            pb.layout_out.push_back(log_index[out[p]]);
        }
    }
    auto relabel = [](Gate gate, const std::vector<std::size_t>& index) {
        for (auto& q : gate.controls) {
            q = index[q];
        }
        for (auto& q : gate.targets) {
            q = index[q];
        }
        return gate;
    };
    for (auto& t : pre.g) {
        pb.g.push_back({relabel(std::move(t.gate), log_index), t.origin, 0});
    }
    for (auto& it : pre.g_prime) {
        pb.gp.push_back({relabel(std::move(it.gate), phys_index), it.swap_marker, it.position});
    }
    if (record != nullptr) {
        for (const auto& r : record->ranges) {
            pb.range_end.push_back(r.start + r.count);
        }
        for (const auto& ev : record->swap_events) {
            if (phys_index[ev.a] != kNone && phys_index[ev.b] != kNone) {
                pb.events.push_back({ev.position, phys_index[ev.a], phys_index[ev.b]});
            }
        }
    }
    return pb;
}

std::size_t static_weight(const Gate& g, int opt_level) {
    const std::size_t per_toffoli = opt_level >= 1 ? 14 : 15;
    switch (g.kind) {
    case GateKind::CZ:
        return 3;
    case GateKind::SWAP:
        return 0;
    case GateKind::MCX: {
        const std::size_t k = g.controls.size();
        if (k <= 1) {
            return 1;
        }
        if (k == 2) {
            return per_toffoli;
        }
        return per_toffoli * (2 * k - 3);
    }
    default:
        return 1;
    }
}

OracleTable oracle_for(const Problem& pb) {
    OracleTable table;
    const std::size_t m = pb.g.size();
    table.counts.assign(m, 0);
    table.approximate.assign(m, false);
    if (pb.has_record) {
        table.source = OracleTable::Source::Record;
        std::size_t next = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t end = pb.range_end.at(pb.g[i].origin);
            while (next < pb.gp.size() && pb.gp[next].position < end) {
                if (!pb.gp[next].swap_marker) {
                    ++table.counts[i];
                }
                ++next;
            }
        }
        return table;
    }
    table.source = OracleTable::Source::Static;
    for (std::size_t i = 0; i < m; ++i) {
        table.counts[i] = static_weight(pb.g[i].gate, pb.opt_level);
    }
    if (pb.opt_level >= 1) {
        // Fusion across a boundary moves a single-qubit gate of the compiled
        // Toffoli or CZ into the neighbouring run.
        std::vector<std::size_t> next_on(pb.width, kNone);
        for (std::size_t i = m; i-- > 0;) {
            const Gate& g = pb.g[i].gate;
            const bool toffoli = g.kind == GateKind::MCX && g.controls.size() >= 2;
            const bool cz = g.kind == GateKind::CZ;
            if (toffoli || cz) {
                const Qubit t = g.targets[0];
                const std::size_t after = next_on[t];
                if (after != kNone && pb.g[after].gate.is_single_qubit() && table.counts[i] > 0) {
                    --table.counts[i];
                    table.approximate[i] = true;
                }
            }
            if (g.is_single_qubit()) {
                const std::size_t after = next_on[g.targets[0]];
                if (after != kNone) {
                    const Gate& h = pb.g[after].gate;
                    const bool absorbs = (h.kind == GateKind::MCX && h.controls.size() >= 2) || h.kind == GateKind::CZ;
                    if (absorbs && h.targets[0] == g.targets[0]) {
                        table.counts[i] = 0;
                        table.approximate[i] = true;
                    }
                }
            }
            for (const auto q : g.qubits()) {
                next_on[q] = i;
            }
        }
    }
    return table;
}

class Runner {
public:
    Runner(const Problem& pb, const Options& options, Strategy strategy)
        : pb_(pb), options_(options), start_(std::chrono::steady_clock::now()) {
        dd::PackageConfig cfg;
        cfg.tolerance = options.numeric_tolerance;
        package_ = std::make_unique<dd::Package>(cfg);
        result_.strategy = strategy;
        result_.stats.width = pb.width;
    }

    Result run_alternating(const OracleTable& table, bool markers, std::size_t fixed_rate) {
        if (pb_.width == 0) {
            return finish_trivial();
        }
        dd::UnitaryDD d = package_->make_identity(pb_.width);
        hold(d);
        sample(d);
        QubitMap map(pb_.layout_in);
        std::size_t next = 0;
        std::size_t rate = fixed_rate;
        bool fallback = false;
        std::size_t event = 0;
        std::vector<std::size_t> layout = pb_.layout_in;
        std::vector<std::size_t> expected(pb_.width);
        // With markers, SWAPs of G relabel the later gates of G instead of
        // being multiplied; rel[q] is the current position of G's qubit q.
        std::vector<std::size_t> rel(pb_.width);
        std::iota(rel.begin(), rel.end(), 0);

        auto right = [&](const StreamItem& it) {
            if (it.swap_marker && markers) {
                map.swap_update(it.gate.targets[0], it.gate.targets[1]);
                return;
            }
            d = replace(d, package_->apply_right_inverse(d, it.gate, map.forward()));
            ++result_.stats.gates_right;
        };
        // Markers up to `limit` (the end of the block's range in record mode).
        auto drain_markers = [&](std::size_t limit) {
            while (markers && next < pb_.gp.size() && pb_.gp[next].swap_marker && pb_.gp[next].position < limit) {
                right(pb_.gp[next++]);
            }
        };

        for (std::size_t i = 0; i < pb_.g.size(); ++i) {
            if (timed_out()) {
                return unknown("timeout after " + std::to_string(options_.timeout_seconds) + " s");
            }
            const Gate& gate = pb_.g[i].gate;
            if (markers && gate.kind == GateKind::SWAP) {
                std::swap(rel[gate.targets[0]], rel[gate.targets[1]]);
            } else {
                const bool relabel = markers && !std::is_sorted(rel.begin(), rel.end());
                d = replace(d, package_->apply_left(d, gate, relabel ? std::span<const std::size_t>(rel)
                                                                     : std::span<const std::size_t>()));
                ++result_.stats.gates_left;
            }
            const std::size_t limit = pb_.has_record && fixed_rate == 0 ? pb_.range_end[pb_.g[i].origin]
                                                                        : std::numeric_limits<std::size_t>::max();
            drain_markers(limit);
            std::size_t want = fallback || fixed_rate > 0 ? rate : (i < table.counts.size() ? table.counts[i] : 1);
            while (want > 0 && next < pb_.gp.size()) {
                const StreamItem& it = pb_.gp[next++];
                right(it);
                if (!(it.swap_marker && markers)) {
                    --want;
                }
            }
            drain_markers(limit);
            if (options_.observer) {
                const std::size_t consumed_end = next < pb_.gp.size() ? pb_.gp[next].position
                                                                      : std::numeric_limits<std::size_t>::max();
                while (event < pb_.events.size() && pb_.events[event].position < consumed_end) {
                    std::swap(layout[pb_.events[event].a], layout[pb_.events[event].b]);
                    ++event;
                }
                for (std::size_t p = 0; p < pb_.width; ++p) {
                    expected[p] = rel[layout[p]];
                }
                options_.observer(BlockObservation{i, d, map, expected, *package_});
            }
            if (!fallback && fixed_rate == 0 && last_nodes_ > options_.watermark) {
                fallback = true;
                result_.stats.fallback = true;
                const std::size_t left = pb_.g.size() - i - 1;
                const std::size_t remaining = pb_.gp.size() - next;
                rate = left == 0 ? remaining : (remaining + left - 1) / left;
            }
        }
        while (next < pb_.gp.size()) {
            if (timed_out()) {
                return unknown("timeout after " + std::to_string(options_.timeout_seconds) + " s");
            }
            right(pb_.gp[next++]);
        }
        if (std::is_sorted(rel.begin(), rel.end())) {
            d = replace(d, undo_map(*package_, d, map, pb_.layout_out));
            return decide(d, pb_.ancillas);
        }
        // The swaps of G form P with G = P * G~. P * D * Q is the identity iff
        // D * Q * P is, once the ancilla flags are moved along with P.
        std::vector<std::size_t> moved(pb_.width);
        for (std::size_t q = 0; q < pb_.width; ++q) {
            moved[rel[q]] = q;
        }
        std::vector<std::size_t> residual_inv(pb_.width);
        for (std::size_t j = 0; j < pb_.width; ++j) {
            residual_inv[pb_.layout_out[map.physical(j)]] = j;
        }
        std::vector<std::size_t> combined(pb_.width);
        std::vector<bool> ancillas(pb_.width);
        bool trivial = true;
        for (std::size_t j = 0; j < pb_.width; ++j) {
            combined[j] = residual_inv[moved[j]];
            trivial = trivial && combined[j] == j;
            ancillas[j] = pb_.ancillas[moved[j]];
        }
        if (!trivial) {
            d = replace(d, package_->multiply(d, package_->permutation_dd(combined)));
        }
        return decide(d, ancillas);
    }

    Result run_naive() {
        if (pb_.width == 0) {
            return finish_trivial();
        }
        dd::UnitaryDD u = package_->make_identity(pb_.width);
        hold(u);
        sample(u);
        for (const auto& t : pb_.g) {
            if (timed_out()) {
                return unknown("timeout after " + std::to_string(options_.timeout_seconds) + " s");
            }
            u = replace(u, package_->apply_left(u, t.gate));
            ++result_.stats.gates_left;
        }
        dd::UnitaryDD v = package_->make_identity(pb_.width);
        hold(v);
        for (const auto& it : pb_.gp) {
            if (timed_out()) {
                return unknown("timeout after " + std::to_string(options_.timeout_seconds) + " s");
            }
            v = replace(v, package_->apply_left(v, it.gate, pb_.layout_in));
            ++result_.stats.gates_right;
        }
        // R moves logical j to layout_out(layout_in^-1(j))
        const QubitMap in(pb_.layout_in);
        std::vector<std::size_t> perm(pb_.width);
        for (std::size_t j = 0; j < pb_.width; ++j) {
            perm[j] = pb_.layout_out[in.physical(j)];
        }
        v = replace(v, package_->multiply(package_->permutation_dd(perm), v));
        u = replace(u, package_->scale(u, phase_factor()));

        const auto mu = package_->modify_ancillaries(u, pb_.ancillas);
        const auto mv = package_->modify_ancillaries(v, pb_.ancillas);
        bool equal = (mu.root.node == mv.root.node &&
                      numerics::approx_equal(mu.root.w, mv.root.w, options_.tolerance)) ||
                     package_->approx_equal(mu, mv, options_.tolerance, options_.up_to_global_phase);
        if (!equal) {
            // Near-ties in normalization can split equal matrices into different
            // node structures; the product with the adjoint settles it.
            dd::UnitaryDD w = u;
            hold(w);
            for (const auto& it : pb_.gp) {
                w = replace(w, package_->apply_right_inverse(w, it.gate, pb_.layout_in));
            }
            w = replace(w, undo_map(*package_, w, QubitMap(pb_.layout_in), pb_.layout_out));
            equal = package_->is_identity_modified(w, pb_.ancillas, options_.tolerance, options_.up_to_global_phase);
        }
        result_.verdict = equal ? Verdict::Equivalent : Verdict::NotEquivalent;
        return done();
    }

    Result unknown(std::string reason) {
        result_.verdict = Verdict::Unknown;
        result_.reason = std::move(reason);
        return done();
    }

private:
    numerics::Complex phase_factor() const {
        return {std::cos(pb_.phase), std::sin(pb_.phase)};
    }

    Result decide(dd::UnitaryDD d, const std::vector<bool>& ancillas) {
        d = replace(d, package_->scale(d, phase_factor()));
        const bool ok = package_->is_identity_modified(d, ancillas, options_.tolerance, options_.up_to_global_phase);
        result_.verdict = ok ? Verdict::Equivalent : Verdict::NotEquivalent;
        return done();
    }

    Result finish_trivial() {
        const bool ok = options_.up_to_global_phase || std::abs(std::remainder(pb_.phase, 2 * std::numbers::pi)) <= options_.tolerance;
        result_.verdict = ok ? Verdict::Equivalent : Verdict::NotEquivalent;
        return done();
    }

    Result done() {
        result_.stats.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        return result_;
    }

    bool timed_out() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count() >
               options_.timeout_seconds;
    }

    void hold(const dd::UnitaryDD& u) { package_->inc_ref(u); }

    dd::UnitaryDD replace(const dd::UnitaryDD& old, const dd::UnitaryDD& fresh) {
        package_->inc_ref(fresh);
        package_->dec_ref(old);
        package_->garbage_collect();
        sample(fresh);
        return fresh;
    }

    void sample(const dd::UnitaryDD& u) {
        last_nodes_ = package_->node_count(u);
        result_.stats.peak_nodes = std::max(result_.stats.peak_nodes, last_nodes_);
    }

    const Problem& pb_;
    const Options& options_;
    std::chrono::steady_clock::time_point start_;
    std::unique_ptr<dd::Package> package_;
    Result result_;
    std::size_t last_nodes_ = 0;
};

template <typename F>
Result guarded(Strategy strategy, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    try {
        return body();
    } catch (const std::bad_alloc&) {
        Result r;
        r.strategy = strategy;
        r.reason = "out of memory";
        r.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return r;
    }
}

} // namespace

Preprocessed preprocess(const Circuit& g, const Circuit& g_prime, bool fuse_g,
                        const std::vector<compile::Range>* ranges) {
    Preprocessed out;
    out.g.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        out.g.push_back({g.gates[i], i, 0});
    }
    if (fuse_g) {
        out.fused_phase = fuse_single_qubit_runs(out.g).global_phase;
    }
    out.g_prime = collapse_swaps(g_prime, ranges);
    return out;
}

OracleTable build_oracle(const Circuit& g, const Circuit& g_prime, const compile::CompileRecord* record,
                         const Options& options) {
    return oracle_for(prepare(g, g_prime, record, options, true));
}

Result check_naive(const Circuit& g, const Circuit& g_prime, const compile::CompileRecord* record,
                   const Options& options) {
    return guarded(Strategy::Naive, [&] {
        const Problem pb = prepare(g, g_prime, record, options, false);
        Runner runner(pb, options, Strategy::Naive);
        return runner.run_naive();
    });
}

Result check_proportional(const Circuit& g, const Circuit& g_prime, const compile::CompileRecord* record,
                          const Options& options) {
    return guarded(Strategy::Proportional, [&] {
        const Problem pb = prepare(g, g_prime, record, options, false);
        Runner runner(pb, options, Strategy::Proportional);
        const std::size_t rate = pb.g.empty() ? 1 : std::max<std::size_t>(1, (pb.gp.size() + pb.g.size() - 1) / pb.g.size());
        return runner.run_alternating(OracleTable{}, false, rate);
    });
}

Result check_flow(const Circuit& g, const Circuit& g_prime, const compile::CompileRecord* record,
                  const Options& options, const OracleTable* oracle) {
    return guarded(Strategy::Flow, [&] {
        const Problem pb = prepare(g, g_prime, record, options, true);
        Runner runner(pb, options, Strategy::Flow);
        if (oracle != nullptr) {
            return runner.run_alternating(*oracle, true, 0);
        }
        return runner.run_alternating(oracle_for(pb), true, 0);
    });
}

Result check(Strategy strategy, const Circuit& g, const Circuit& g_prime, const compile::CompileRecord* record,
             const Options& options) {
    switch (strategy) {
    case Strategy::Naive:
        return check_naive(g, g_prime, record, options);
    case Strategy::Proportional:
        return check_proportional(g, g_prime, record, options);
    case Strategy::Flow:
        break;
    }
    return check_flow(g, g_prime, record, options);
}

} // namespace flowec::ec
