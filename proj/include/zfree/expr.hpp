#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "zfree/funcs.hpp"

namespace zfree {

/// Parse tree of the expression language:
///   literals 1.5, 2i, 1e-3; variable z; constants pi, e, i;
///   + - * / ^ with ^ > unary minus > * / > + -, ^ right-associative;
///   calls exp, sin, cos, compose(map, expr);
///   map literals affine(a,b), moebius(a,b,c,d), lens(r), parabolic(d),
///   power(q), eta(alpha, r, delta1, delta3).
struct AstNode;
using ExprAST = std::shared_ptr<const AstNode>;

struct AstNode {
    enum class Kind { Number, Imaginary, Variable, Constant, Unary, Binary, Call };
    Kind kind;
    double value = 0.0;  // Number / Imaginary
    std::string name;    // Constant / Call
    char op = 0;         // Unary / Binary
    std::vector<ExprAST> args;
    std::size_t position = 0;
};

/// Structural equality, ignoring source positions.
bool ast_equal(const ExprAST& a, const ExprAST& b);

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position, std::string source,
               std::vector<std::string> suggestions = {});

    std::size_t position() const { return position_; }
    const std::vector<std::string>& suggestions() const { return suggestions_; }
    /// The source line with a caret under the offending position.
    std::string caret() const;

private:
    std::size_t position_;
    std::string source_;
    std::vector<std::string> suggestions_;
};

ExprAST parse_expr(std::string_view source);

/// Fully parenthesised text that parses back to an equal tree.
std::string print(const ExprAST& ast);

/// Lowering folds polynomial arithmetic ("(z-1)*(z-2)" becomes a Poly) and
/// affine arguments of exp/sin/cos into ComposedWithMap.
FuncExpr lower_function(const ExprAST& ast);
MapExpr lower_map(const ExprAST& ast);

FuncExpr parse_function(std::string_view source);
MapExpr parse_map(std::string_view source);

}  // namespace zfree
