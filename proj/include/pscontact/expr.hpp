#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pscontact/jet.hpp"

namespace pscontact {

enum class CallFn { Sin, Cos, Tan, Exp, Ln, Sqrt, Sinh, Cosh, Neg };

const char* call_fn_name(CallFn fn);

// Immutable AST of a scalar component function over chart coordinates.
// Coordinates are resolved against the declared coordinate list at parse
// time; '^' exponents are restricted to integer literals.
struct Expr {
    enum class Kind { Constant, Coordinate, Binary, Call };

    Kind kind;
    double constant = 0.0;          // Constant
    std::string name;               // Coordinate
    int coord = -1;                 // Coordinate: index into the chart list
    char op = 0;                    // Binary: one of + - * / ^
    CallFn fn = CallFn::Neg;        // Call
    std::shared_ptr<const Expr> lhs; // Binary left / Call argument
    std::shared_ptr<const Expr> rhs; // Binary right
};

using ExprPtr = std::shared_ptr<const Expr>;

ExprPtr make_constant(double c);

// Grammar: sum of terms; '*' '/' bind tighter; unary minus tighter still;
// '^' tightest with an integer-literal exponent; fn(expr) calls; parentheses.
// Unknown identifiers are rejected against the coordinate list.
ExprPtr parse_expression(std::string_view text, std::span<const std::string> coordinates);

// Canonical printing; parse(print(parse(s))) is structurally equal to
// parse(s).
std::string to_string(const Expr& e);
inline std::string to_string(const ExprPtr& e) { return to_string(*e); }

bool structurally_equal(const Expr& a, const Expr& b);

// Plain recursive evaluation (equals the order-0 jet evaluation).
double eval_value(const Expr& e, std::span<const double> point);

// Exact partials of the expression at the point, by folding jet arithmetic
// over the AST. Domain violations surface as EvalError carrying the point
// and the path of the failing node.
Jet eval_jet(const Expr& e, std::span<const double> point, int order);

} // namespace pscontact
