#include "flowec/dense.hpp"

#include "flowec/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace flowec::oracle {

namespace {

using cd = std::complex<double>;
using Local = std::array<cd, 4>;

Local u3_local(double theta, double phi, double lambda) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    return {cd(c, 0), -std::polar(s, lambda), std::polar(s, phi), std::polar(c, phi + lambda)};
}

Local diag_local(double angle) {
    return {cd(1, 0), cd(0, 0), cd(0, 0), std::polar(1.0, angle)};
}

Local local_matrix(const Gate& g) {
    constexpr double pi = std::numbers::pi;
    const double r = 1 / std::numbers::sqrt2;
    switch (g.kind) {
    case GateKind::U3:
        return u3_local(g.params.at(0), g.params.at(1), g.params.at(2));
    case GateKind::U2:
        return u3_local(pi / 2, g.params.at(0), g.params.at(1));
    case GateKind::U1:
        return diag_local(g.params.at(0));
    case GateKind::X:
    case GateKind::CNOT:
    case GateKind::MCX:
        return {cd(0, 0), cd(1, 0), cd(1, 0), cd(0, 0)};
    case GateKind::Y:
        return {cd(0, 0), cd(0, -1), cd(0, 1), cd(0, 0)};
    case GateKind::Z:
    case GateKind::CZ:
        return {cd(1, 0), cd(0, 0), cd(0, 0), cd(-1, 0)};
    case GateKind::H:
        return {cd(r, 0), cd(r, 0), cd(r, 0), cd(-r, 0)};
    case GateKind::S:
        return {cd(1, 0), cd(0, 0), cd(0, 0), cd(0, 1)};
    case GateKind::Sdg:
        return {cd(1, 0), cd(0, 0), cd(0, 0), cd(0, -1)};
    case GateKind::T:
        return diag_local(pi / 4);
    case GateKind::Tdg:
        return diag_local(-pi / 4);
    case GateKind::SWAP:
        break;
    }
    throw UnsupportedGateError("no local matrix for gate kind " + std::string(kind_name(g.kind)));
}

// m <- gate * m, touching only the row pairs the gate mixes.
void apply_rows(DenseMatrix& m, const Gate& g) {
    const std::size_t dim = m.dim;
    if (g.kind == GateKind::SWAP) {
        const std::size_t a = std::size_t{1} << g.targets[0];
        const std::size_t b = std::size_t{1} << g.targets[1];
        for (std::size_t i = 0; i < dim; ++i) {
            if ((i & a) != 0 && (i & b) == 0) {
                const std::size_t j = (i & ~a) | b;
                for (std::size_t col = 0; col < dim; ++col) {
                    std::swap(m(i, col), m(j, col));
                }
            }
        }
        return;
    }
    std::size_t control_mask = 0;
    for (const auto c : g.controls) {
        control_mask |= std::size_t{1} << c;
    }
    const std::size_t t = std::size_t{1} << g.targets[0];
    const Local u = local_matrix(g);
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & t) != 0 || (i & control_mask) != control_mask) {
            continue;
        }
        const std::size_t j = i | t;
        for (std::size_t col = 0; col < dim; ++col) {
            const cd a = m(i, col);
            const cd b = m(j, col);
            m(i, col) = u[0] * a + u[1] * b;
            m(j, col) = u[2] * a + u[3] * b;
        }
    }
}

void check_width(std::size_t n) {
    if (n > kMaxDenseQubits) {
        throw TooLargeError("dense reference supports at most 10 qubits, got " + std::to_string(n));
    }
}

std::vector<std::size_t> identity_layout(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = i;
    }
    return v;
}

std::vector<std::size_t> padded(std::vector<std::size_t> layout, std::size_t n) {
    while (layout.size() < n) {
        layout.push_back(layout.size());
    }
    return layout;
}

std::vector<bool> touched(const Circuit& c, std::size_t n) {
    std::vector<bool> used(n, false);
    for (const auto& g : c.gates) {
        for (const auto q : g.qubits()) {
            used[q] = true;
        }
    }
    return used;
}

// Relabels gates through `index` onto a circuit of width `n`.
Circuit relabelled(const Circuit& c, const std::vector<std::size_t>& index, std::size_t n) {
    Circuit out(n);
    out.global_phase = c.global_phase;
    for (auto g : c.gates) {
        for (auto& q : g.controls) {
            q = index[q];
        }
        for (auto& q : g.targets) {
            q = index[q];
        }
        out.gates.push_back(std::move(g));
    }
    return out;
}

bool compare(const DenseMatrix& ua, const DenseMatrix& ub, std::size_t n, const std::vector<std::size_t>& layout_in,
             const std::vector<std::size_t>& layout_out, const std::vector<bool>& ancillas, const DenseCheck& check) {
    const std::size_t dim = std::size_t{1} << n;
    std::size_t ancilla_mask = 0;
    for (std::size_t q = 0; q < n; ++q) {
        if (q < ancillas.size() && ancillas[q]) {
            ancilla_mask |= std::size_t{1} << q;
        }
    }
    auto logical_to_physical = [&](std::size_t x) {
        std::size_t y = 0;
        for (std::size_t p = 0; p < n; ++p) {
            if ((x >> layout_in[p]) & 1U) {
                y |= std::size_t{1} << p;
            }
        }
        return y;
    };
    auto physical_to_logical = [&](std::size_t z) {
        std::size_t w = 0;
        for (std::size_t p = 0; p < n; ++p) {
            if ((z >> p) & 1U) {
                w |= std::size_t{1} << layout_out[p];
            }
        }
        return w;
    };

    std::optional<cd> phase;
    if (!check.up_to_global_phase) {
        phase = cd(1, 0);
    }
    for (std::size_t x = 0; x < dim; ++x) {
        if ((x & ancilla_mask) != 0) {
            continue;
        }
        const std::size_t y = logical_to_physical(x);
        if (!phase) {
            // fix the phase on the largest entry of the first admissible column
            std::size_t best = 0;
            for (std::size_t w = 0; w < dim; ++w) {
                if (std::abs(ua(w, x)) > std::abs(ua(best, x))) {
                    best = w;
                }
            }
            cd vb;
            for (std::size_t z = 0; z < dim; ++z) {
                if (physical_to_logical(z) == best) {
                    vb = ub(z, y);
                }
            }
            if (std::abs(vb) < 1e-6) {
                return false;
            }
            phase = ua(best, x) / vb;
            *phase /= std::abs(*phase);
        }
        for (std::size_t z = 0; z < dim; ++z) {
            const std::size_t w = physical_to_logical(z);
            if (std::abs(*phase * ub(z, y) - ua(w, x)) > check.tolerance) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

DenseMatrix dense_of_gate(const Gate& g, std::size_t n) {
    check_width(n);
    validate(g, n);
    DenseMatrix m = DenseMatrix::identity(std::size_t{1} << n);
    apply_rows(m, g);
    return m;
}

DenseMatrix dense_of_circuit(const Circuit& c) {
    check_width(c.num_qubits);
    DenseMatrix m = DenseMatrix::identity(std::size_t{1} << c.num_qubits);
    for (const auto& g : c.gates) {
        apply_rows(m, g);
    }
    if (c.global_phase != 0.0) {
        const cd f = std::polar(1.0, c.global_phase);
        for (auto& v : m.data) {
            v *= f;
        }
    }
    return m;
}

DenseMatrix zero_ancilla_columns(const DenseMatrix& m, const std::vector<bool>& ancillas) {
    std::size_t mask = 0;
    for (std::size_t q = 0; q < ancillas.size(); ++q) {
        if (ancillas[q]) {
            mask |= std::size_t{1} << q;
        }
    }
    DenseMatrix out = m;
    for (std::size_t r = 0; r < m.dim; ++r) {
        for (std::size_t col = 0; col < m.dim; ++col) {
            if ((col & mask) != 0) {
                out(r, col) = 0.0;
            }
        }
    }
    return out;
}

bool dense_equivalent(const Circuit& original, const Circuit& compiled, const DenseCheck& check) {
    const std::size_t n = std::max(original.num_qubits, compiled.num_qubits);
    const auto layout_in = padded(check.initial_layout.value_or(identity_layout(n)), n);
    const auto layout_out = padded(check.output_layout.value_or(layout_in), n);
    if (layout_in.size() != n || layout_out.size() != n) {
        throw DimensionMismatchError("layout width does not match the circuits");
    }
    std::vector<bool> ancillas = check.ancillas;
    ancillas.resize(n, false);
    for (std::size_t q = 0; q < n; ++q) {
        if (q >= original.num_qubits || (q < original.ancilla.size() && original.ancilla[q])) {
            ancillas[q] = true;
        }
    }

    // Drop physical qubits idle in both circuits whose logical qubit stays put.
    const auto used_phys = touched(compiled, n);
    const auto used_log = touched(original, n);
    std::vector<std::size_t> keep_phys;
    std::vector<bool> keep_log(n, false);
    for (std::size_t p = 0; p < n; ++p) {
        if (used_phys[p] || used_log[layout_in[p]] || used_log[layout_out[p]] || layout_in[p] != layout_out[p]) {
            keep_phys.push_back(p);
            keep_log[layout_in[p]] = true;
        }
    }
    const std::size_t k = keep_phys.size();
    if (k == 0) {
        const cd a = std::polar(1.0, original.global_phase);
        const cd b = std::polar(1.0, compiled.global_phase);
        return check.up_to_global_phase || std::abs(a - b) <= check.tolerance;
    }
    check_width(k);
    std::vector<std::size_t> phys_index(n, 0);
    std::vector<std::size_t> log_index(n, 0);
    for (std::size_t i = 0; i < k; ++i) {
        phys_index[keep_phys[i]] = i;
    }
    std::vector<bool> small_ancillas;
    for (std::size_t q = 0, next = 0; q < n; ++q) {
        if (keep_log[q]) {
            log_index[q] = next++;
            small_ancillas.push_back(ancillas[q]);
        }
    }
    std::vector<std::size_t> small_in(k);
    std::vector<std::size_t> small_out(k);
    for (std::size_t i = 0; i < k; ++i) {
        small_in[i] = log_index[layout_in[keep_phys[i]]];
        small_out[i] = log_index[layout_out[keep_phys[i]]];
    }
    const auto ua = dense_of_circuit(relabelled(original, log_index, k));
    const auto ub = dense_of_circuit(relabelled(compiled, phys_index, k));
    return compare(ua, ub, k, small_in, small_out, small_ancillas, check);
}

} // namespace flowec::oracle
