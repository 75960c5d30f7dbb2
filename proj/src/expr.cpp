#include "zfree/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

namespace zfree {

namespace {

const std::vector<std::string> kFunctions{"exp", "sin", "cos", "compose"};
const std::vector<std::string> kMaps{"affine", "moebius", "lens", "parabolic", "power", "eta"};
const std::vector<std::string> kConstants{"pi", "e", "i"};

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::vector<std::string> suggestions_for(const std::string& word) {
    std::vector<std::string> all{"z"};
    for (const auto* list : {&kFunctions, &kMaps, &kConstants}) all.insert(all.end(), list->begin(), list->end());
    std::vector<std::string> out;
    for (const auto& candidate : all) {
        if (edit_distance(word, candidate) <= 2 || (!word.empty() && candidate.rfind(word, 0) == 0)) {
            out.push_back(candidate);
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ExprAST node(AstNode n) { return std::make_shared<const AstNode>(std::move(n)); }

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    ExprAST parse() {
        ExprAST e = expression();
        skip();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg, std::size_t at, std::vector<std::string> sugg = {}) {
        throw ParseError(msg, at, std::string(src_), std::move(sugg));
    }

    void skip() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= src_.size()) fail(std::string("expected '") + c + "' before end of input", pos_);
            fail(std::string("expected '") + c + "'", pos_);
        }
    }

    ExprAST expression() {
        ExprAST left = term();
        while (true) {
            skip();
            const std::size_t at = pos_;
            if (accept('+')) {
                left = node({AstNode::Kind::Binary, 0, {}, '+', {left, term()}, at});
            } else if (accept('-')) {
                left = node({AstNode::Kind::Binary, 0, {}, '-', {left, term()}, at});
            } else {
                return left;
            }
        }
    }

    ExprAST term() {
        ExprAST left = unary();
        while (true) {
            skip();
            const std::size_t at = pos_;
            if (accept('*')) {
                left = node({AstNode::Kind::Binary, 0, {}, '*', {left, unary()}, at});
            } else if (accept('/')) {
                left = node({AstNode::Kind::Binary, 0, {}, '/', {left, unary()}, at});
            } else {
                return left;
            }
        }
    }

    ExprAST unary() {
        skip();
        const std::size_t at = pos_;
        if (accept('-')) return node({AstNode::Kind::Unary, 0, {}, '-', {unary()}, at});
        if (accept('+')) return node({AstNode::Kind::Unary, 0, {}, '+', {unary()}, at});
        return power();
    }

    ExprAST power() {
        ExprAST base = primary();
        skip();
        const std::size_t at = pos_;
        if (accept('^')) return node({AstNode::Kind::Binary, 0, {}, '^', {base, unary()}, at});
        return base;
    }

    ExprAST number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                pos_ = look;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
        }
        const std::string text(src_.substr(start, pos_ - start));
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size()) fail("malformed number '" + text + "'", start);
        const bool imaginary = pos_ < src_.size() && src_[pos_] == 'i' &&
                               (pos_ + 1 >= src_.size() || !std::isalnum(static_cast<unsigned char>(src_[pos_ + 1])));
        if (imaginary) {
            ++pos_;
            return node({AstNode::Kind::Imaginary, v, {}, 0, {}, start});
        }
        return node({AstNode::Kind::Number, v, {}, 0, {}, start});
    }

    ExprAST primary() {
        skip();
        if (pos_ >= src_.size()) fail("unexpected end of input", pos_);
        const std::size_t at = pos_;
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (accept('(')) {
            ExprAST inner = expression();
            expect(')');
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
            const std::string name(src_.substr(at, pos_ - at));
            skip();
            const bool call = pos_ < src_.size() && src_[pos_] == '(';
            const bool known_call = std::find(kFunctions.begin(), kFunctions.end(), name) != kFunctions.end() ||
                                    std::find(kMaps.begin(), kMaps.end(), name) != kMaps.end();
            if (call) {
                if (!known_call) fail("unknown function '" + name + "'", at, suggestions_for(name));
                ++pos_;
                std::vector<ExprAST> args;
                skip();
                if (!accept(')')) {
                    args.push_back(expression());
                    while (accept(',')) args.push_back(expression());
                    expect(')');
                }
                return node({AstNode::Kind::Call, 0, name, 0, std::move(args), at});
            }
            if (name == "z") return node({AstNode::Kind::Variable, 0, {}, 0, {}, at});
            if (std::find(kConstants.begin(), kConstants.end(), name) != kConstants.end()) {
                return node({AstNode::Kind::Constant, 0, name, 0, {}, at});
            }
            if (known_call) fail("'" + name + "' must be called with arguments", at);
            fail("unknown identifier '" + name + "'", at, suggestions_for(name));
        }
        fail("unexpected '" + std::string(1, c) + "'", at);
    }
};

// ---- lowering ----------------------------------------------------------

using Coeffs = std::vector<Complex>;

struct Value {
    std::optional<Coeffs> poly;  // set when the value is a polynomial in z
    FuncExpr f;
    std::optional<MapExpr> map;
};

[[noreturn]] void lower_fail(const std::string& msg, const ExprAST& at) {
    throw ParseError(msg, at->position, "");
}

void trim(Coeffs& c) {
    while (c.size() > 1 && c.back() == Complex(0.0)) c.pop_back();
}

FuncExpr from_poly(Coeffs c) {
    trim(c);
    if (c.size() == 1) return FuncExpr::constant(c[0]);
    return FuncExpr::poly(std::move(c));
}

Value of_poly(Coeffs c) {
    trim(c);
    Value v;
    v.f = from_poly(c);
    v.poly = std::move(c);
    return v;
}

Value of_func(FuncExpr f) {
    Value v;
    v.f = std::move(f);
    return v;
}

std::optional<Complex> constant_of(const Value& v) {
    if (v.poly && v.poly->size() == 1) return (*v.poly)[0];
    return std::nullopt;
}

Coeffs poly_add(const Coeffs& a, const Coeffs& b, double sign) {
    Coeffs out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += sign * b[i];
    return out;
}

Coeffs poly_mul(const Coeffs& a, const Coeffs& b) {
    Coeffs out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

Value lower(const ExprAST& ast);

const Value& need_func(const Value& v, const ExprAST& at) {
    if (v.map) lower_fail("a map cannot be used as a function value", at);
    return v;
}

Complex need_constant(const ExprAST& arg) {
    const Value v = lower(arg);
    need_func(v, arg);
    const auto c = constant_of(v);
    if (!c) lower_fail("map arguments must be constants", arg);
    return *c;
}

double need_real(const ExprAST& arg) {
    const Complex c = need_constant(arg);
    if (c.imag() != 0.0) lower_fail("map argument must be real", arg);
    return c.real();
}

Value entire(FuncExpr base, Complex (*fn)(const Complex&), const Value& arg) {
    if (auto c = constant_of(arg)) return of_poly({fn(*c)});
    if (arg.poly && arg.poly->size() == 2) {
        const Coeffs& p = *arg.poly;
        if (p[0] == Complex(0.0) && p[1] == Complex(1.0)) return of_func(base);
        return of_func(FuncExpr::composed(base, MapExpr::affine(p[1], p[0])));
    }
    return of_func(FuncExpr::apply(base, arg.f));
}

Value lower_call(const ExprAST& ast) {
    const auto& name = ast->name;
    const auto& args = ast->args;
    auto arity = [&](std::size_t n) {
        if (args.size() != n) {
            lower_fail(name + " expects " + std::to_string(n) + " argument" + (n == 1 ? "" : "s") + ", got " +
                           std::to_string(args.size()),
                       ast);
        }
    };
    Value v;
    try {
        if (name == "affine") {
            arity(2);
            v.map = MapExpr::affine(need_constant(args[0]), need_constant(args[1]));
        } else if (name == "moebius") {
            arity(4);
            v.map = MapExpr::moebius(need_constant(args[0]), need_constant(args[1]), need_constant(args[2]),
                                     need_constant(args[3]));
        } else if (name == "lens") {
            arity(1);
            v.map = MapExpr::lens(need_real(args[0]));
        } else if (name == "parabolic") {
            arity(1);
            v.map = MapExpr::parabolic(need_real(args[0]));
        } else if (name == "power") {
            arity(1);
            v.map = MapExpr::power(need_real(args[0]));
        } else if (name == "eta") {
            arity(4);
            v.map = MapExpr::eta({need_real(args[0]), need_real(args[1]), need_real(args[2]), need_real(args[3])});
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        lower_fail(e.what(), ast);
    }
    if (v.map) return v;
    if (name == "compose") {
        arity(2);
        const Value first = lower(args[0]);
        if (!first.map) lower_fail("compose expects a map as its first argument", args[0]);
        const Value second = lower(args[1]);
        if (second.map) {
            Value out;
            out.map = compose_maps(*second.map, *first.map);
            return out;
        }
        return of_func(compose(second.f, *first.map));
    }
    arity(1);
    const Value arg = need_func(lower(args[0]), args[0]);
    if (name == "exp") return entire(FuncExpr::exp(), [](const Complex& z) { return std::exp(z); }, arg);
    if (name == "sin") return entire(FuncExpr::sin(), [](const Complex& z) { return std::sin(z); }, arg);
    return entire(FuncExpr::cos(), [](const Complex& z) { return std::cos(z); }, arg);
}

Value lower(const ExprAST& ast) {
    switch (ast->kind) {
        case AstNode::Kind::Number: return of_poly({Complex(ast->value, 0.0)});
        case AstNode::Kind::Imaginary: return of_poly({Complex(0.0, ast->value)});
        case AstNode::Kind::Variable: return of_poly({0.0, 1.0});
        case AstNode::Kind::Constant:
            if (ast->name == "pi") return of_poly({kPi});
            if (ast->name == "e") return of_poly({std::exp(1.0)});
            return of_poly({Complex(0.0, 1.0)});
        case AstNode::Kind::Unary: {
            const Value v = need_func(lower(ast->args[0]), ast->args[0]);
            if (ast->op == '+') return v;
            if (v.poly) return of_poly(poly_add({0.0}, *v.poly, -1.0));
            return of_func(FuncExpr::product(FuncExpr::constant(-1.0), v.f));
        }
        case AstNode::Kind::Binary: {
            const Value a = need_func(lower(ast->args[0]), ast->args[0]);
            const Value b = need_func(lower(ast->args[1]), ast->args[1]);
            switch (ast->op) {
                case '+':
                    if (a.poly && b.poly) return of_poly(poly_add(*a.poly, *b.poly, 1.0));
                    return of_func(FuncExpr::sum(a.f, b.f));
                case '-':
                    if (a.poly && b.poly) return of_poly(poly_add(*a.poly, *b.poly, -1.0));
                    return of_func(FuncExpr::sum(a.f, FuncExpr::product(FuncExpr::constant(-1.0), b.f)));
                case '*':
                    if (a.poly && b.poly && a.poly->size() + b.poly->size() <= 4098) {
                        return of_poly(poly_mul(*a.poly, *b.poly));
                    }
                    return of_func(FuncExpr::product(a.f, b.f));
                case '/':
                    if (auto c = constant_of(b)) {
                        if (*c == Complex(0.0)) lower_fail("division by the constant zero", ast);
                        if (a.poly) return of_poly(poly_mul(*a.poly, {1.0 / *c}));
                    }
                    return of_func(FuncExpr::quotient(a.f, b.f));
                default: {
                    const auto c = constant_of(b);
                    if (!c || c->imag() != 0.0) lower_fail("exponents must be real constants", ast->args[1]);
                    const double q = c->real();
                    if (a.poly && q >= 0.0 && q == std::trunc(q) && q <= 64.0) {
                        Coeffs out{1.0};
                        for (int k = 0; k < static_cast<int>(q); ++k) out = poly_mul(out, *a.poly);
                        return of_poly(out);
                    }
                    if (auto base = constant_of(a); base && q == std::trunc(q)) {
                        return of_poly({std::pow(*base, static_cast<int>(q))});
                    }
                    return of_func(FuncExpr::pow(a.f, q));
                }
            }
        }
        case AstNode::Kind::Call: return lower_call(ast);
    }
    lower_fail("unsupported node", ast);
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t position, std::string source,
                       std::vector<std::string> suggestions)
    : Error(ErrorKind::Parse,
            message + " at position " + std::to_string(position) +
                (suggestions.empty() ? std::string() : [&] {
                    std::string s = " (did you mean:";
                    for (const auto& x : suggestions) s += " " + x;
                    return s + "?)";
                }())),
      position_(position), source_(std::move(source)), suggestions_(std::move(suggestions)) {}

std::string ParseError::caret() const {
    return source_ + "\n" + std::string(std::min(position_, source_.size()), ' ') + "^";
}

bool ast_equal(const ExprAST& a, const ExprAST& b) {
    if (a->kind != b->kind || a->value != b->value || a->name != b->name || a->op != b->op ||
        a->args.size() != b->args.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a->args.size(); ++i) {
        if (!ast_equal(a->args[i], b->args[i])) return false;
    }
    return true;
}

ExprAST parse_expr(std::string_view source) { return Parser(source).parse(); }

std::string print(const ExprAST& ast) {
    switch (ast->kind) {
        case AstNode::Kind::Number: return fmt(ast->value);
        case AstNode::Kind::Imaginary: return fmt(ast->value) + "i";
        case AstNode::Kind::Variable: return "z";
        case AstNode::Kind::Constant: return ast->name;
        case AstNode::Kind::Unary: return std::string("(") + ast->op + print(ast->args[0]) + ")";
        case AstNode::Kind::Binary:
            return "(" + print(ast->args[0]) + " " + ast->op + " " + print(ast->args[1]) + ")";
        case AstNode::Kind::Call: {
            std::string s = ast->name + "(";
            for (std::size_t i = 0; i < ast->args.size(); ++i) s += (i ? ", " : "") + print(ast->args[i]);
            return s + ")";
        }
    }
    return {};
}

FuncExpr lower_function(const ExprAST& ast) {
    const Value v = lower(ast);
    if (v.map) throw ParseError("expected a function of z but got a map", ast->position, "");
    return v.f;
}

MapExpr lower_map(const ExprAST& ast) {
    const Value v = lower(ast);
    if (!v.map) throw ParseError("expected a map literal", ast->position, "");
    return *v.map;
}

namespace {

template <class Fn>
auto with_source(std::string_view source, Fn fn) {
    try {
        return fn(parse_expr(source));
    } catch (const ParseError& e) {
        std::string msg = e.what();
        const std::string prefix = std::string(to_string(ErrorKind::Parse)) + ": ";
        if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
        const auto cut = msg.rfind(" at position ");
        if (cut != std::string::npos) msg = msg.substr(0, cut);
        throw ParseError(msg, e.position(), std::string(source), e.suggestions());
    }
}

}  // namespace

FuncExpr parse_function(std::string_view source) {
    return with_source(source, [](const ExprAST& a) { return lower_function(a); });
}

MapExpr parse_map(std::string_view source) {
    return with_source(source, [](const ExprAST& a) { return lower_map(a); });
}

}  // namespace zfree
