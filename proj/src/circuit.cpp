#include "flowec/circuit.hpp"

#include "flowec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace flowec {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kAngleEps = 1e-12;

bool near_angle(double a, double b) {
    const double d = wrap_angle(a - b);
    return d < kAngleEps || 2 * kPi - d < kAngleEps;
}

} // namespace

std::string_view kind_name(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::U3: return "u3";
    case GateKind::U2: return "u2";
    case GateKind::U1: return "u1";
    case GateKind::X: return "x";
    case GateKind::Y: return "y";
    case GateKind::Z: return "z";
    case GateKind::H: return "h";
    case GateKind::S: return "s";
    case GateKind::Sdg: return "sdg";
    case GateKind::T: return "t";
    case GateKind::Tdg: return "tdg";
    case GateKind::CNOT: return "cx";
    case GateKind::CZ: return "cz";
    case GateKind::SWAP: return "swap";
    case GateKind::MCX: return "mcx";
    }
    return "?";
}

double wrap_angle(double a) noexcept {
    double r = std::fmod(a, 2 * kPi);
    if (r < 0) {
        r += 2 * kPi;
    }
    if (r >= 2 * kPi) {
        r = 0.0;
    }
    return r;
}

Gate Gate::u3(double theta, double phi, double lambda, Qubit q) {
    return Gate{GateKind::U3, {}, {q}, {theta, phi, lambda}};
}
Gate Gate::u2(double phi, double lambda, Qubit q) { return Gate{GateKind::U2, {}, {q}, {phi, lambda}}; }
Gate Gate::u1(double lambda, Qubit q) { return Gate{GateKind::U1, {}, {q}, {lambda}}; }
Gate Gate::single(GateKind kind, Qubit q) { return Gate{kind, {}, {q}, {}}; }
Gate Gate::cnot(Qubit control, Qubit target) { return Gate{GateKind::CNOT, {control}, {target}, {}}; }
Gate Gate::cz(Qubit control, Qubit target) { return Gate{GateKind::CZ, {control}, {target}, {}}; }
Gate Gate::swap(Qubit a, Qubit b) { return Gate{GateKind::SWAP, {}, {a, b}, {}}; }
Gate Gate::mcx(std::vector<Qubit> controls, Qubit target) {
    return Gate{GateKind::MCX, std::move(controls), {target}, {}};
}

bool Gate::is_single_qubit() const noexcept {
    return controls.empty() && targets.size() == 1 && kind != GateKind::MCX;
}

std::vector<Qubit> Gate::qubits() const {
    std::vector<Qubit> qs = controls;
    qs.insert(qs.end(), targets.begin(), targets.end());
    return qs;
}

bool Gate::acts_on(Qubit q) const noexcept {
    return std::find(controls.begin(), controls.end(), q) != controls.end() ||
           std::find(targets.begin(), targets.end(), q) != targets.end();
}

bool Gate::is_elementary() const noexcept {
    switch (kind) {
    case GateKind::CNOT: return true;
    case GateKind::CZ:
    case GateKind::SWAP:
    case GateKind::MCX: return false;
    default: return true;
    }
}

Mat2 u3_matrix(double theta, double phi, double lambda) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    return {cplx(c, 0.0), -std::polar(1.0, lambda) * s, std::polar(1.0, phi) * s, std::polar(1.0, phi + lambda) * c};
}

Mat2 matmul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

Mat2 adjoint(const Mat2& a) {
    return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])};
}

Mat2 target_matrix(const Gate& g) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (g.kind) {
    case GateKind::U3: return u3_matrix(g.params.at(0), g.params.at(1), g.params.at(2));
    case GateKind::U2: return u3_matrix(kPi / 2, g.params.at(0), g.params.at(1));
    case GateKind::U1: return {cplx(1, 0), cplx(0, 0), cplx(0, 0), std::polar(1.0, g.params.at(0))};
    case GateKind::X:
    case GateKind::CNOT:
    case GateKind::MCX: return {cplx(0, 0), cplx(1, 0), cplx(1, 0), cplx(0, 0)};
    case GateKind::Y: return {cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0)};
    case GateKind::Z:
    case GateKind::CZ: return {cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(-1, 0)};
    case GateKind::H: return {cplx(r, 0), cplx(r, 0), cplx(r, 0), cplx(-r, 0)};
    case GateKind::S: return {cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(0, 1)};
    case GateKind::Sdg: return {cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(0, -1)};
    case GateKind::T: return {cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(r, r)};
    case GateKind::Tdg: return {cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(r, -r)};
    case GateKind::SWAP: break;
    }
    throw UnsupportedGateError("gate '" + std::string(kind_name(g.kind)) + "' has no single-target matrix");
}

std::ostream& operator<<(std::ostream& os, const Gate& g) {
    os << kind_name(g.kind);
    if (!g.params.empty()) {
        os << '(';
        for (std::size_t i = 0; i < g.params.size(); ++i) {
            os << (i == 0 ? "" : ",") << g.params[i];
        }
        os << ')';
    }
    const auto qs = g.qubits();
    for (std::size_t i = 0; i < qs.size(); ++i) {
        os << (i == 0 ? " q" : ",q") << qs[i];
    }
    return os;
}

Gate invert(const Gate& g) {
    Gate inv = g;
    switch (g.kind) {
    case GateKind::S: inv.kind = GateKind::Sdg; break;
    case GateKind::Sdg: inv.kind = GateKind::S; break;
    case GateKind::T: inv.kind = GateKind::Tdg; break;
    case GateKind::Tdg: inv.kind = GateKind::T; break;
    case GateKind::U1: inv.params = {wrap_angle(-g.params.at(0))}; break;
    case GateKind::U2:
        // U3(-t, p, l) == U3(t, p + pi, l - pi), so U2(p, l)^-1 = U2(pi - l, -p - pi)
        inv.params = {wrap_angle(kPi - g.params.at(1)), wrap_angle(-g.params.at(0) - kPi)};
        break;
    case GateKind::U3: {
        // U3(t, p, l)^-1 == U3(-t, -l, -p); the period of t is 4pi
        double theta = std::fmod(-g.params.at(0), 4 * kPi);
        double phi = -g.params.at(2);
        double lambda = -g.params.at(1);
        if (theta > 2 * kPi) {
            theta -= 4 * kPi;
        } else if (theta <= -2 * kPi) {
            theta += 4 * kPi;
        }
        if (theta < 0) {
            theta = -theta;
            phi += kPi;
            lambda -= kPi;
        }
        inv.params = {theta, wrap_angle(phi), wrap_angle(lambda)};
        break;
    }
    default: break; // X, Y, Z, H, CNOT, CZ, SWAP, MCX are self-inverse
    }
    return inv;
}

void validate(const Gate& g, std::size_t width) {
    const auto qs = g.qubits();
    for (std::size_t i = 0; i < qs.size(); ++i) {
        if (qs[i] >= width) {
            throw DimensionMismatchError("gate '" + std::string(kind_name(g.kind)) + "' uses qubit " +
                                         std::to_string(qs[i]) + " outside a " + std::to_string(width) +
                                         "-qubit circuit");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (qs[i] == qs[j]) {
                throw DimensionMismatchError("gate '" + std::string(kind_name(g.kind)) + "' repeats qubit " +
                                             std::to_string(qs[i]));
            }
        }
    }
    const std::size_t expected_targets = g.kind == GateKind::SWAP ? 2 : 1;
    if (g.targets.size() != expected_targets) {
        throw DimensionMismatchError("gate '" + std::string(kind_name(g.kind)) + "' has a wrong target count");
    }
    const bool one_control = g.kind == GateKind::CNOT || g.kind == GateKind::CZ;
    if ((one_control && g.controls.size() != 1) ||
        (!one_control && g.kind != GateKind::MCX && !g.controls.empty())) {
        throw DimensionMismatchError("gate '" + std::string(kind_name(g.kind)) + "' has a wrong control count");
    }
}

Circuit::Circuit(std::size_t n) : num_qubits(n), ancilla(n, false) {
    qubit_names.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        qubit_names.push_back("q[" + std::to_string(i) + "]");
    }
}

Circuit& Circuit::add(Gate g) {
    validate(g, num_qubits);
    gates.push_back(std::move(g));
    return *this;
}

bool Circuit::structurally_equal(const Circuit& other) const {
    if (num_qubits != other.num_qubits || gates.size() != other.gates.size() || ancilla != other.ancilla) {
        return false;
    }
    for (std::size_t i = 0; i < gates.size(); ++i) {
        const Gate& a = gates[i];
        const Gate& b = other.gates[i];
        if (a.kind != b.kind || a.controls != b.controls || a.targets != b.targets ||
            a.params.size() != b.params.size()) {
            return false;
        }
        for (std::size_t k = 0; k < a.params.size(); ++k) {
            if (std::abs(a.params[k] - b.params[k]) > 1e-12) {
                return false;
            }
        }
    }
    return true;
}

void Circuit::augment(std::size_t extra, bool as_ancilla) {
    for (std::size_t i = 0; i < extra; ++i) {
        qubit_names.push_back("anc[" + std::to_string(i) + "]");
        ancilla.push_back(as_ancilla);
    }
    num_qubits += extra;
    for (auto* layout : {&initial_layout, &output_layout}) {
        if (layout->has_value()) {
            for (std::size_t i = 0; i < extra; ++i) {
                (*layout)->push_back((*layout)->size());
            }
        }
    }
}

std::optional<Gate> gate_from_matrix(const Mat2& m, Qubit q, double& phase) {
    // m = e^{i gamma} U3(theta, phi, lambda)
    const double a = std::abs(m[0]);
    const double b = std::abs(m[2]);
    const double theta = 2 * std::atan2(b, a);
    double gamma = 0;
    double phi = 0;
    double lambda = 0;
    if (a > 1e-12) {
        gamma = std::arg(m[0]);
        if (b > 1e-12) {
            phi = std::arg(m[2]) - gamma;
            lambda = std::arg(-m[1]) - gamma;
        } else {
            lambda = std::arg(m[3]) - gamma;
        }
    } else {
        gamma = std::arg(m[2]);
        lambda = std::arg(-m[1]) - gamma;
    }
    phi = wrap_angle(phi);
    lambda = wrap_angle(lambda);
    phase = gamma;

    if (theta < kAngleEps) {
        const double l = wrap_angle(phi + lambda);
        if (near_angle(l, 0)) {
            return std::nullopt;
        }
        if (near_angle(l, kPi)) {
            return Gate::single(GateKind::Z, q);
        }
        if (near_angle(l, kPi / 2)) {
            return Gate::single(GateKind::S, q);
        }
        if (near_angle(l, 3 * kPi / 2)) {
            return Gate::single(GateKind::Sdg, q);
        }
        if (near_angle(l, kPi / 4)) {
            return Gate::single(GateKind::T, q);
        }
        if (near_angle(l, 7 * kPi / 4)) {
            return Gate::single(GateKind::Tdg, q);
        }
        return Gate::u1(l, q);
    }
    if (std::abs(theta - kPi / 2) < kAngleEps) {
        if (near_angle(phi, 0) && near_angle(lambda, kPi)) {
            return Gate::single(GateKind::H, q);
        }
        return Gate::u2(phi, lambda, q);
    }
    if (std::abs(theta - kPi) < kAngleEps) {
        if (near_angle(phi, 0) && near_angle(lambda, kPi)) {
            return Gate::single(GateKind::X, q);
        }
        if (near_angle(phi, kPi / 2) && near_angle(lambda, kPi / 2)) {
            return Gate::single(GateKind::Y, q);
        }
    }
    return Gate::u3(theta, phi, lambda, q);
}

FusionOutcome fuse_single_qubit_runs(std::vector<TrackedGate>& gates) {
    FusionOutcome outcome;
    std::vector<bool> dead(gates.size(), false);
    std::vector<std::vector<std::size_t>> runs;

    auto flush = [&](std::size_t q) {
        if (q >= runs.size()) {
            return;
        }
        auto& run = runs[q];
        if (run.size() >= 2) {
            Mat2 product = target_matrix(gates[run.front()].gate);
            bool mixed = false;
            for (std::size_t k = 1; k < run.size(); ++k) {
                product = matmul(target_matrix(gates[run[k]].gate), product);
                mixed = mixed || gates[run[k]].origin != gates[run.front()].origin;
            }
            if (mixed) {
                for (const auto idx : run) {
                    outcome.merged_origins.push_back(gates[idx].origin);
                }
            }
            double phase = 0;
            auto fused = gate_from_matrix(product, q, phase);
            outcome.global_phase += phase;
            for (std::size_t k = 0; k + 1 < run.size(); ++k) {
                dead[run[k]] = true;
            }
            if (fused) {
                gates[run.back()].gate = std::move(*fused);
            } else {
                dead[run.back()] = true;
            }
            outcome.changed = true;
        }
        run.clear();
    };

    for (std::size_t i = 0; i < gates.size(); ++i) {
        const Gate& g = gates[i].gate;
        if (g.is_single_qubit()) {
            const Qubit q = g.targets[0];
            if (q >= runs.size()) {
                runs.resize(q + 1);
            }
            runs[q].push_back(i);
        } else {
            for (const Qubit q : g.qubits()) {
                flush(q);
            }
        }
    }
    for (std::size_t q = 0; q < runs.size(); ++q) {
        flush(q);
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
    std::sort(outcome.merged_origins.begin(), outcome.merged_origins.end());
    outcome.merged_origins.erase(std::unique(outcome.merged_origins.begin(), outcome.merged_origins.end()),
                                 outcome.merged_origins.end());
    return outcome;
}

Circuit fuse_single_qubit_runs(const Circuit& c) {
    std::vector<TrackedGate> tracked;
    tracked.reserve(c.gates.size());
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        tracked.push_back({c.gates[i], i});
    }
    const auto outcome = fuse_single_qubit_runs(tracked);
    Circuit out = c;
    out.gates.clear();
    for (auto& t : tracked) {
        out.gates.push_back(std::move(t.gate));
    }
    out.global_phase += outcome.global_phase;
    return out;
}

} // namespace flowec
