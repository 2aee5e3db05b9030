#include "latticeforge/qasm.hpp"

#include <cctype>
#include <cstdlib>
#include <map>
#include <numbers>

namespace latticeforge::qasm {

namespace {

enum class Tok { Ident, Number, String, Punct, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

class Lexer {
   public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space_and_comments();
            if (pos_ >= src_.size()) break;
            const int line = line_;
            const int col = col_;
            const char ch = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
                std::string id;
                while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                    id += advance();
                }
                out.push_back({Tok::Ident, id, line, col});
            } else if (std::isdigit(static_cast<unsigned char>(ch)) || (ch == '.' && pos_ + 1 < src_.size() &&
                                                                        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
                out.push_back({Tok::Number, number(), line, col});
            } else if (ch == '"') {
                advance();
                std::string s;
                while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') s += advance();
                if (pos_ >= src_.size() || src_[pos_] != '"') fail(line, col, "unterminated string");
                advance();
                out.push_back({Tok::String, s, line, col});
            } else if (src_.substr(pos_, 2) == "->") {
                advance();
                advance();
                out.push_back({Tok::Punct, "->", line, col});
            } else if (src_.substr(pos_, 2) == "\xCF\x80") {  // UTF-8 pi
                advance();
                advance();
                out.push_back({Tok::Ident, "pi", line, col});
            } else if (std::string_view(";[](),=+-*/").find(ch) != std::string_view::npos) {
                out.push_back({Tok::Punct, std::string(1, advance()), line, col});
            } else {
                fail(line, col, std::string("unexpected character '") + ch + "'");
            }
        }
        out.push_back({Tok::End, "", line_, col_});
        return out;
    }

    [[noreturn]] static void fail(int line, int col, const std::string& what) {
        throw Error(ErrorKind::Parse, std::to_string(line) + ":" + std::to_string(col) + ": " + what,
                    {{"line", line}, {"col", col}});
    }

   private:
    char advance() {
        const char ch = src_[pos_++];
        if (ch == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return ch;
    }

    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
                advance();
            } else if (src_.substr(pos_, 2) == "//") {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (src_.substr(pos_, 2) == "/*") {
                const int line = line_, col = col_;
                advance();
                advance();
                while (pos_ < src_.size() && src_.substr(pos_, 2) != "*/") advance();
                if (pos_ >= src_.size()) fail(line, col, "unterminated comment");
                advance();
                advance();
            } else {
                break;
            }
        }
    }

    std::string number() {
        std::string s;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
            s += advance();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            s += advance();
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) s += advance();
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) s += advance();
        }
        return s;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

struct GateShape {
    std::size_t params;
    std::size_t qubits;
};

const std::map<std::string, GateShape>& known_gates() {
    static const std::map<std::string, GateShape> gates{
        {"h", {0, 1}},  {"x", {0, 1}},  {"y", {0, 1}},  {"z", {0, 1}},   {"s", {0, 1}},  {"sdg", {0, 1}},
        {"t", {0, 1}},  {"tdg", {0, 1}}, {"rx", {1, 1}}, {"ry", {1, 1}},  {"rz", {1, 1}}, {"cx", {0, 2}},
        {"cz", {0, 2}},
    };
    return gates;
}

class Parser {
   public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    ParsedProgram program() {
        ParsedProgram out;
        expect_ident("OPENQASM");
        const auto& v = expect(Tok::Number, "version number");
        if (v.text != "3" && v.text != "3.0") fail(v, "unsupported OpenQASM version " + v.text);
        out.version = v.text;
        expect_punct(";");
        while (peek().kind != Tok::End) statement(out);
        return out;
    }

    double expression_only() {
        const double v = expr();
        if (peek().kind != Tok::End) fail(peek(), "unexpected '" + peek().text + "'");
        return v;
    }

   private:
    void statement(ParsedProgram& out) {
        const Token& t = peek();
        if (t.kind != Tok::Ident) fail(t, "expected a statement");
        if (t.text == "include") {
            next();
            out.includes.push_back(expect(Tok::String, "file name").text);
            expect_punct(";");
        } else if (t.text == "qubit" || t.text == "bit") {
            next();
            expect_punct("[");
            const auto size = integer();
            expect_punct("]");
            const auto& name = expect(Tok::Ident, "register name");
            expect_punct(";");
            if (t.text == "qubit") {
                if (!qreg_.empty()) fail(name, "only one qubit register is supported");
                qreg_ = name.text;
                out.qubit_count = size;
            } else {
                if (!creg_.empty()) fail(name, "only one bit register is supported");
                creg_ = name.text;
                out.bit_count = size;
            }
        } else if (t.text == "measure") {
            // measure q[i] -> c[i];
            next();
            const auto qi = operand(qreg_, out.qubit_count);
            expect_punct("->");
            operand(creg_, out.bit_count);
            (void)qi;
            expect_punct(";");
        } else if (t.text == creg_ && !creg_.empty()) {
            next();
            if (peek().text == "[") {
                next();
                const auto ci = integer();
                if (ci >= out.bit_count) fail(t, "bit index out of range");
                expect_punct("]");
                expect_punct("=");
                expect_ident("measure");
                operand(qreg_, out.qubit_count);
            } else {
                expect_punct("=");
                expect_ident("measure");
                const auto& reg = expect(Tok::Ident, "qubit register");
                if (reg.text != qreg_) fail(reg, "unknown register '" + reg.text + "'");
                if (out.bit_count != out.qubit_count) fail(reg, "register sizes differ");
                out.measures_all = true;
            }
            expect_punct(";");
        } else {
            gate_call(out);
        }
    }

    void gate_call(ParsedProgram& out) {
        const Token& name = next();
        const auto it = known_gates().find(name.text);
        if (it == known_gates().end()) fail(name, "unknown gate '" + name.text + "'");
        if (qreg_.empty()) fail(name, "gate before qubit declaration");
        GateCall call{name.text, {}, {}};
        if (peek().text == "(") {
            next();
            call.params.push_back(expr());
            while (peek().text == ",") {
                next();
                call.params.push_back(expr());
            }
            expect_punct(")");
        }
        call.qubits.push_back(operand(qreg_, out.qubit_count));
        while (peek().text == ",") {
            next();
            call.qubits.push_back(operand(qreg_, out.qubit_count));
        }
        expect_punct(";");
        if (call.params.size() != it->second.params) fail(name, "'" + name.text + "' takes " +
                                                                    std::to_string(it->second.params) + " parameter(s)");
        if (call.qubits.size() != it->second.qubits) fail(name, "'" + name.text + "' takes " +
                                                                    std::to_string(it->second.qubits) + " qubit(s)");
        if (call.qubits.size() == 2 && call.qubits[0] == call.qubits[1]) fail(name, "repeated qubit operand");
        out.gates.push_back(std::move(call));
    }

    std::size_t operand(const std::string& reg, std::size_t size) {
        const auto& id = expect(Tok::Ident, "register operand");
        if (id.text != reg) fail(id, "unknown register '" + id.text + "'");
        expect_punct("[");
        const auto idx = integer();
        expect_punct("]");
        if (idx >= size) fail(id, "index " + std::to_string(idx) + " out of range");
        return idx;
    }

    double expr() {
        double v = term();
        while (peek().text == "+" || peek().text == "-") {
            const bool plus = next().text == "+";
            const double rhs = term();
            v = plus ? v + rhs : v - rhs;
        }
        return v;
    }

    double term() {
        double v = unary();
        while (peek().text == "*" || peek().text == "/") {
            const auto& op = next();
            const double rhs = unary();
            if (op.text == "/" && rhs == 0.0) fail(op, "division by zero");
            v = op.text == "*" ? v * rhs : v / rhs;
        }
        return v;
    }

    double unary() {
        if (peek().text == "-" && peek().kind == Tok::Punct) {
            next();
            return -unary();
        }
        if (peek().text == "+" && peek().kind == Tok::Punct) {
            next();
            return unary();
        }
        return primary();
    }

    double primary() {
        const Token& t = next();
        if (t.kind == Tok::Number) {
            char* end = nullptr;
            const double v = std::strtod(t.text.c_str(), &end);
            if (end == t.text.c_str() || *end != '\0') fail(t, "malformed number '" + t.text + "'");
            return v;
        }
        if (t.kind == Tok::Ident && t.text == "pi") return std::numbers::pi;
        if (t.kind == Tok::Punct && t.text == "(") {
            const double v = expr();
            expect_punct(")");
            return v;
        }
        fail(t, "expected an angle expression");
    }

    std::size_t integer() {
        const auto& t = expect(Tok::Number, "integer");
        if (t.text.find_first_not_of("0123456789") != std::string::npos) fail(t, "expected an integer");
        return static_cast<std::size_t>(std::stoull(t.text));
    }

    const Token& peek() const { return toks_[pos_]; }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (t.kind != Tok::End) ++pos_;
        return t;
    }
    const Token& expect(Tok kind, const char* what) {
        if (peek().kind != kind) fail(peek(), std::string("expected ") + what);
        return next();
    }
    void expect_punct(const char* p) {
        if (peek().kind != Tok::Punct || peek().text != p) fail(peek(), std::string("expected '") + p + "'");
        next();
    }
    void expect_ident(const char* word) {
        if (peek().kind != Tok::Ident || peek().text != word) fail(peek(), std::string("expected '") + word + "'");
        next();
    }
    [[noreturn]] static void fail(const Token& t, const std::string& what) { Lexer::fail(t.line, t.col, what); }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::string qreg_;
    std::string creg_;
};

}  // namespace

ParsedProgram parse(std::string_view source) { return Parser(Lexer(source).run()).program(); }

double parse_angle(std::string_view text) { return Parser(Lexer(text).run()).expression_only(); }

}  // namespace latticeforge::qasm
