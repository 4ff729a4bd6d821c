#include "flowec/qasm.hpp"

#include "flowec/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

namespace flowec {

namespace {

enum class Tok { Ident, Number, String, Symbol, Arrow, End };

struct Token {
    Tok type = Tok::End;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

class Lexer {
public:
    Lexer(std::string_view src, std::vector<std::string>& meta_lines) : src_(src), meta_lines_(meta_lines) {}

    Token next() {
        skip_space_and_comments();
        Token t;
        t.line = line_;
        t.column = col_;
        if (pos_ >= src_.size()) {
            return t;
        }
        const char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            t.type = Tok::Ident;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                t.text.push_back(advance());
            }
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && pos_ + 1 < src_.size() &&
                                                             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            t.type = Tok::Number;
            while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
                t.text.push_back(advance());
            }
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                t.text.push_back(advance());
                if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
                    t.text.push_back(advance());
                }
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    t.text.push_back(advance());
                }
            }
            return t;
        }
        if (c == '"') {
            t.type = Tok::String;
            advance();
            while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') {
                t.text.push_back(advance());
            }
            if (pos_ >= src_.size() || src_[pos_] != '"') {
                throw QasmSyntaxError(t.line, t.column, "unterminated string literal");
            }
            advance();
            return t;
        }
        if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
            t.type = Tok::Arrow;
            t.text = "->";
            advance();
            advance();
            return t;
        }
        t.type = Tok::Symbol;
        t.text.push_back(advance());
        return t;
    }

private:
    char advance() {
        const char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                const auto end = src_.find('\n', pos_);
                const auto stop = end == std::string_view::npos ? src_.size() : end;
                meta_lines_.emplace_back(src_.substr(pos_ + 2, stop - pos_ - 2));
                while (pos_ < stop) {
                    advance();
                }
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::vector<std::string>& meta_lines_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

struct Register {
    std::size_t offset = 0;
    std::size_t size = 0;
};

struct GateSpec {
    GateKind kind;
    std::size_t params;
    std::size_t operands; // 0 = variadic (mcx)
};

const std::map<std::string, GateSpec, std::less<>>& gate_table() {
    static const std::map<std::string, GateSpec, std::less<>> table = {
        {"u3", {GateKind::U3, 3, 1}},   {"u", {GateKind::U3, 3, 1}},     {"U", {GateKind::U3, 3, 1}},
        {"u2", {GateKind::U2, 2, 1}},   {"u1", {GateKind::U1, 1, 1}},    {"p", {GateKind::U1, 1, 1}},
        {"x", {GateKind::X, 0, 1}},     {"y", {GateKind::Y, 0, 1}},      {"z", {GateKind::Z, 0, 1}},
        {"h", {GateKind::H, 0, 1}},     {"s", {GateKind::S, 0, 1}},      {"sdg", {GateKind::Sdg, 0, 1}},
        {"t", {GateKind::T, 0, 1}},     {"tdg", {GateKind::Tdg, 0, 1}},  {"cx", {GateKind::CNOT, 0, 2}},
        {"CX", {GateKind::CNOT, 0, 2}}, {"cz", {GateKind::CZ, 0, 2}},    {"swap", {GateKind::SWAP, 0, 2}},
        {"ccx", {GateKind::MCX, 0, 3}}, {"c3x", {GateKind::MCX, 0, 4}},  {"c4x", {GateKind::MCX, 0, 5}},
        {"mcx", {GateKind::MCX, 0, 0}},
    };
    return table;
}

struct Operand {
    std::size_t first = 0;
    std::size_t count = 1; // > 1 for a whole-register operand
    bool whole = false;
};

class Parser {
public:
    Parser(std::string_view text, std::vector<std::string>* warnings)
        : lexer_(text, meta_lines_), warnings_(warnings) {
        tok_ = lexer_.next();
    }

    Circuit parse() {
        if (tok_.type == Tok::Ident && tok_.text == "OPENQASM") {
            next();
            if (tok_.type != Tok::Number) {
                fail("expected a version number after OPENQASM");
            }
            if (tok_.text.rfind("2", 0) != 0) {
                throw UnsupportedStatementError("OPENQASM version " + tok_.text + " is not supported");
            }
            next();
            expect(";");
        }
        while (tok_.type != Tok::End) {
            statement();
        }
        apply_metadata();
        return std::move(circuit_);
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        throw QasmSyntaxError(tok_.line, tok_.column, message);
    }

    void next() { tok_ = lexer_.next(); }

    bool is_symbol(const char* s) const { return tok_.type == Tok::Symbol && tok_.text == s; }

    void expect(const char* s) {
        if (!is_symbol(s)) {
            fail(std::string("expected '") + s + "'" + (tok_.type == Tok::End ? " before end of input" : ", found '" + tok_.text + "'"));
        }
        next();
    }

    std::string identifier(const char* what) {
        if (tok_.type != Tok::Ident) {
            fail(std::string("expected ") + what);
        }
        std::string s = tok_.text;
        next();
        return s;
    }

    std::size_t integer() {
        if (tok_.type != Tok::Number || tok_.text.find_first_of(".eE") != std::string::npos) {
            fail("expected a non-negative integer");
        }
        std::size_t v = 0;
        const auto* b = tok_.text.data();
        const auto [p, ec] = std::from_chars(b, b + tok_.text.size(), v);
        if (ec != std::errc()) {
            fail("integer out of range");
        }
        next();
        return v;
    }

    void statement() {
        if (tok_.type != Tok::Ident) {
            fail("expected a statement, found '" + tok_.text + "'");
        }
        const std::string word = tok_.text;
        if (word == "include") {
            next();
            if (tok_.type != Tok::String) {
                fail("expected a file name after include");
            }
            next();
            expect(";");
            return;
        }
        if (word == "qreg" || word == "creg") {
            next();
            const std::string name = identifier("a register name");
            expect("[");
            const std::size_t size = integer();
            expect("]");
            expect(";");
            if (qregs_.count(name) != 0 || cregs_.count(name) != 0) {
                fail("register '" + name + "' declared twice");
            }
            if (word == "qreg") {
                if (!measured_.empty()) {
                    fail("qreg declared after measurement");
                }
                qregs_[name] = {circuit_.num_qubits, size};
                for (std::size_t i = 0; i < size; ++i) {
                    circuit_.qubit_names.push_back(name + "[" + std::to_string(i) + "]");
                    circuit_.ancilla.push_back(false);
                }
                circuit_.num_qubits += size;
            } else {
                cregs_[name] = {0, size};
            }
            return;
        }
        if (word == "barrier") {
            next();
            operands();
            expect(";");
            return;
        }
        if (word == "measure") {
            next();
            const auto q = operand();
            if (tok_.type != Tok::Arrow) {
                fail("expected '->' in measure");
            }
            next();
            const std::string creg = identifier("a classical register");
            if (cregs_.count(creg) == 0) {
                fail("unknown classical register '" + creg + "'");
            }
            if (is_symbol("[")) {
                next();
                integer();
                expect("]");
            }
            expect(";");
            for (std::size_t i = 0; i < q.count; ++i) {
                measured_.push_back(q.first + i);
            }
            return;
        }
        if (word == "gate" || word == "opaque" || word == "if" || word == "reset") {
            throw UnsupportedStatementError("line " + std::to_string(tok_.line) + ": '" + word +
                                            "' statements are not supported");
        }
        gate_application();
    }

    double expression() { return additive(); }

    double additive() {
        double v = multiplicative();
        while (is_symbol("+") || is_symbol("-")) {
            const bool plus = tok_.text == "+";
            next();
            const double rhs = multiplicative();
            v = plus ? v + rhs : v - rhs;
        }
        return v;
    }

    double multiplicative() {
        double v = unary();
        while (is_symbol("*") || is_symbol("/")) {
            const bool mul = tok_.text == "*";
            next();
            const double rhs = unary();
            if (!mul && rhs == 0.0) {
                fail("division by zero in angle expression");
            }
            v = mul ? v * rhs : v / rhs;
        }
        return v;
    }

    double unary() {
        if (is_symbol("-")) {
            next();
            return -unary();
        }
        if (is_symbol("+")) {
            next();
            return unary();
        }
        return primary();
    }

    double primary() {
        if (is_symbol("(")) {
            next();
            const double v = expression();
            expect(")");
            return v;
        }
        if (tok_.type == Tok::Ident && tok_.text == "pi") {
            next();
            return std::numbers::pi;
        }
        if (tok_.type == Tok::Number) {
            double v = 0;
            std::istringstream in(tok_.text);
            in.imbue(std::locale::classic());
            if (!(in >> v) || !in.eof()) {
                fail("malformed number '" + tok_.text + "'");
            }
            next();
            return v;
        }
        fail(tok_.type == Tok::End ? "unexpected end of input in expression"
                                   : "unexpected '" + tok_.text + "' in expression");
    }

    Operand operand() {
        const auto line = tok_.line;
        const auto column = tok_.column;
        const std::string name = identifier("a qubit operand");
        const auto it = qregs_.find(name);
        if (it == qregs_.end()) {
            throw QasmSyntaxError(line, column, "unknown quantum register '" + name + "'");
        }
        if (is_symbol("[")) {
            next();
            const std::size_t idx = integer();
            expect("]");
            if (idx >= it->second.size) {
                throw QasmSyntaxError(line, column, "index " + std::to_string(idx) + " out of range for '" + name + "'");
            }
            return {it->second.offset + idx, 1, false};
        }
        return {it->second.offset, it->second.size, true};
    }

    std::vector<Operand> operands() {
        std::vector<Operand> ops;
        ops.push_back(operand());
        while (is_symbol(",")) {
            next();
            ops.push_back(operand());
        }
        return ops;
    }

    void gate_application() {
        const auto line = tok_.line;
        const auto column = tok_.column;
        const std::string name = tok_.text;
        const auto& table = gate_table();
        const auto spec_it = table.find(name);
        if (spec_it == table.end()) {
            throw UnsupportedStatementError("line " + std::to_string(line) + ": unsupported gate '" + name + "'");
        }
        const GateSpec spec = spec_it->second;
        next();
        std::vector<double> params;
        if (is_symbol("(")) {
            next();
            if (!is_symbol(")")) {
                params.push_back(expression());
                while (is_symbol(",")) {
                    next();
                    params.push_back(expression());
                }
            }
            expect(")");
        }
        if (params.size() != spec.params) {
            throw QasmSyntaxError(line, column, "gate '" + name + "' expects " + std::to_string(spec.params) +
                                                    " parameter(s), got " + std::to_string(params.size()));
        }
        const auto ops = operands();
        expect(";");
        if (spec.operands != 0 && ops.size() != spec.operands) {
            throw QasmSyntaxError(line, column, "gate '" + name + "' expects " + std::to_string(spec.operands) +
                                                    " operand(s), got " + std::to_string(ops.size()));
        }
        if (spec.operands == 0 && ops.size() < 2) {
            throw QasmSyntaxError(line, column, "mcx needs at least one control and a target");
        }
        if (!measured_.empty()) {
            throw UnsupportedStatementError("line " + std::to_string(line) +
                                            ": gates after a measurement (mid-circuit measurement) are not supported");
        }
        std::size_t width = 1;
        for (const auto& op : ops) {
            if (op.whole) {
                if (width != 1 && width != op.count) {
                    throw QasmSyntaxError(line, column, "register operands of different sizes");
                }
                width = op.count;
            }
        }
        for (std::size_t k = 0; k < width; ++k) {
            std::vector<Qubit> qs;
            for (const auto& op : ops) {
                qs.push_back(op.whole ? op.first + k : op.first);
            }
            Gate g;
            g.kind = spec.kind;
            g.params = params;
            if (spec.kind == GateKind::SWAP) {
                g.targets = qs;
            } else {
                g.targets = {qs.back()};
                g.controls.assign(qs.begin(), qs.end() - 1);
            }
            try {
                validate(g, circuit_.num_qubits);
            } catch (const DimensionMismatchError& e) {
                throw QasmSyntaxError(line, column, e.what());
            }
            circuit_.gates.push_back(std::move(g));
        }
    }

    std::vector<std::size_t> numbers_after(std::istringstream& in) {
        std::vector<std::size_t> v;
        std::size_t x = 0;
        while (in >> x) {
            v.push_back(x);
        }
        return v;
    }

    void apply_metadata() {
        for (const auto& raw : meta_lines_) {
            std::istringstream in(raw);
            in.imbue(std::locale::classic());
            std::string key;
            if (!(in >> key)) {
                continue;
            }
            if (key == "i" || key == "o") {
                auto layout = numbers_after(in);
                if (layout.size() != circuit_.num_qubits) {
                    continue; // not a layout line for this circuit
                }
                std::vector<bool> seen(layout.size(), false);
                for (const auto l : layout) {
                    if (l >= layout.size() || seen[l]) {
                        throw QasmSyntaxError(1, 1, "layout comment '// " + raw + "' is not a permutation");
                    }
                    seen[l] = true;
                }
                (key == "i" ? circuit_.initial_layout : circuit_.output_layout) = std::move(layout);
            } else if (key == "ancilla") {
                for (const auto q : numbers_after(in)) {
                    if (q < circuit_.num_qubits) {
                        circuit_.ancilla[q] = true;
                    }
                }
            } else if (key == "global_phase") {
                double phase = 0;
                if (in >> phase) {
                    circuit_.global_phase = phase;
                }
            }
        }
        if (!measured_.empty() && warnings_ != nullptr) {
            warnings_->push_back("stripped " + std::to_string(measured_.size()) + " trailing measurement(s)");
        }
    }

    Circuit circuit_;
    std::vector<std::string> meta_lines_;
    Lexer lexer_;
    std::vector<std::string>* warnings_;
    Token tok_;
    std::map<std::string, Register, std::less<>> qregs_;
    std::map<std::string, Register, std::less<>> cregs_;
    std::vector<std::size_t> measured_;
};

std::string fmt_angle(double a) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", a);
    return buf;
}

// Recovers "name[i]" register structure from qubit names; falls back to one register.
std::vector<std::pair<std::string, std::size_t>> registers_of(const Circuit& c) {
    std::vector<std::pair<std::string, std::size_t>> regs;
    for (std::size_t q = 0; q < c.num_qubits; ++q) {
        const std::string& n = q < c.qubit_names.size() ? c.qubit_names[q] : std::string();
        const auto lb = n.find('[');
        if (lb == std::string::npos || n.back() != ']' || lb == 0) {
            return {{"q", c.num_qubits}};
        }
        const std::string reg = n.substr(0, lb);
        const std::string idx = n.substr(lb + 1, n.size() - lb - 2);
        if (!regs.empty() && regs.back().first == reg) {
            if (idx != std::to_string(regs.back().second)) {
                return {{"q", c.num_qubits}};
            }
            ++regs.back().second;
        } else {
            if (idx != "0") {
                return {{"q", c.num_qubits}};
            }
            for (const auto& r : regs) {
                if (r.first == reg) {
                    return {{"q", c.num_qubits}};
                }
            }
            regs.emplace_back(reg, 1);
        }
    }
    return regs;
}

} // namespace

Circuit parse_qasm(std::string_view text, std::vector<std::string>* warnings) {
    Parser parser(text, warnings);
    return parser.parse();
}

Circuit read_qasm_file(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_qasm(buffer.str(), warnings);
}

std::string emit_qasm(const Circuit& c) {
    std::ostringstream out;
    out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    auto join = [](const std::vector<std::size_t>& v) {
        std::string s;
        for (const auto x : v) {
            s += ' ' + std::to_string(x);
        }
        return s;
    };
    if (c.initial_layout) {
        out << "// i" << join(*c.initial_layout) << '\n';
    }
    if (c.output_layout) {
        out << "// o" << join(*c.output_layout) << '\n';
    }
    std::vector<std::size_t> anc;
    for (std::size_t q = 0; q < c.ancilla.size(); ++q) {
        if (c.ancilla[q]) {
            anc.push_back(q);
        }
    }
    if (!anc.empty()) {
        out << "// ancilla" << join(anc) << '\n';
    }
    if (c.global_phase != 0.0) {
        out << "// global_phase " << fmt_angle(c.global_phase) << '\n';
    }

    const auto regs = registers_of(c);
    std::vector<std::string> names;
    for (const auto& [reg, size] : regs) {
        out << "qreg " << reg << '[' << size << "];\n";
        for (std::size_t i = 0; i < size; ++i) {
            names.push_back(reg + "[" + std::to_string(i) + "]");
        }
    }
    for (const auto& g : c.gates) {
        std::string name(kind_name(g.kind));
        if (g.kind == GateKind::MCX) {
            name = g.controls.size() == 2 ? "ccx" : "mcx";
        }
        out << name;
        if (!g.params.empty()) {
            out << '(';
            for (std::size_t k = 0; k < g.params.size(); ++k) {
                out << (k ? "," : "") << fmt_angle(g.params[k]);
            }
            out << ')';
        }
        const auto qs = g.qubits();
        for (std::size_t k = 0; k < qs.size(); ++k) {
            out << (k ? "," : " ") << names.at(qs[k]);
        }
        out << ";\n";
    }
    return out.str();
}

void write_qasm_file(const Circuit& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write '" + path + "'");
    }
    out << emit_qasm(c);
}

} // namespace flowec
