#include "pscontact/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>

#include "pscontact/errors.hpp"

namespace pscontact {

namespace {

constexpr int kMaxNestingDepth = 200;
constexpr int kMaxExponentMagnitude = 64;

struct FnEntry {
    const char* name;
    CallFn fn;
};

constexpr FnEntry kFunctions[] = {
    {"sin", CallFn::Sin},   {"cos", CallFn::Cos},   {"tan", CallFn::Tan},
    {"exp", CallFn::Exp},   {"ln", CallFn::Ln},     {"sqrt", CallFn::Sqrt},
    {"sinh", CallFn::Sinh}, {"cosh", CallFn::Cosh}, {"neg", CallFn::Neg},
};

std::optional<CallFn> lookup_fn(std::string_view name) {
    for (const auto& f : kFunctions) {
        if (name == f.name) return f.fn;
    }
    return std::nullopt;
}

ExprPtr make_coordinate(std::string name, int index) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Coordinate;
    e->name = std::move(name);
    e->coord = index;
    return e;
}

ExprPtr make_binary(char op, ExprPtr l, ExprPtr r) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Binary;
    e->op = op;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
}

ExprPtr make_call(CallFn fn, ExprPtr arg) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Call;
    e->fn = fn;
    e->lhs = std::move(arg);
    return e;
}

class Parser {
public:
    Parser(std::string_view text, std::span<const std::string> coords)
        : text_(text), coords_(coords) {}

    ExprPtr run() {
        if (text_.find_first_not_of(" \t\r\n") == std::string_view::npos) {
            throw ParseError(ParseError::Kind::Syntax, 0, "empty expression");
        }
        ExprPtr e = parse_sum();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected trailing input");
        }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(ParseError::Kind::Syntax, pos_, what);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    struct DepthGuard {
        explicit DepthGuard(Parser& p) : p(p) {
            if (++p.depth_ > kMaxNestingDepth) {
                throw ParseError(ParseError::Kind::Syntax, p.pos_, "expression nested too deeply");
            }
        }
        ~DepthGuard() { --p.depth_; }
        Parser& p;
    };

    ExprPtr parse_sum() {
        DepthGuard guard(*this);
        ExprPtr e = parse_term();
        for (;;) {
            char c = peek();
            if (c != '+' && c != '-') return e;
            ++pos_;
            e = make_binary(c, e, parse_term());
        }
    }

    ExprPtr parse_term() {
        DepthGuard guard(*this);
        ExprPtr e = parse_unary();
        for (;;) {
            char c = peek();
            if (c != '*' && c != '/') return e;
            ++pos_;
            e = make_binary(c, e, parse_unary());
        }
    }

    ExprPtr parse_unary() {
        DepthGuard guard(*this);
        if (consume('-')) {
            return make_call(CallFn::Neg, parse_unary());
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        DepthGuard guard(*this);
        ExprPtr e = parse_primary();
        while (peek() == '^') {
            ++pos_;
            e = make_binary('^', e, parse_exponent());
        }
        return e;
    }

    // '^' accepts only an integer literal, optionally negated or wrapped in
    // parentheses: x^2, x^-2, x^(-2).
    ExprPtr parse_exponent() {
        char c = peek();
        std::size_t at = pos_;
        if (c == '(') {
            ++pos_;
            ExprPtr inner = parse_exponent();
            if (!consume(')')) fail("expected ')' after exponent");
            return inner;
        }
        if (c == '-') {
            ++pos_;
            ExprPtr inner = parse_exponent();
            return make_constant(-inner->constant);
        }
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw ParseError(ParseError::Kind::NonIntegerExponent, at,
                             "exponent must be an integer literal");
        }
        double v = parse_number_literal();
        if (v != std::floor(v) || std::abs(v) > kMaxExponentMagnitude) {
            throw ParseError(ParseError::Kind::NonIntegerExponent, at,
                             "exponent must be a small integer literal");
        }
        return make_constant(v);
    }

    double parse_number_literal() {
        skip_space();
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        double value = 0.0;
        auto res = std::from_chars(begin, end, value);
        if (res.ec != std::errc{} || !std::isfinite(value)) {
            fail("malformed number");
        }
        pos_ += static_cast<std::size_t>(res.ptr - begin);
        return value;
    }

    ExprPtr parse_primary() {
        DepthGuard guard(*this);
        char c = peek();
        std::size_t at = pos_;
        if (c == '(') {
            ++pos_;
            ExprPtr e = parse_sum();
            if (!consume(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return make_constant(parse_number_literal());
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string ident = parse_identifier();
            if (auto fn = lookup_fn(ident)) {
                if (!consume('(')) fail("expected '(' after function name");
                ExprPtr arg = parse_sum();
                if (!consume(')')) fail("expected ')' after function argument");
                return make_call(*fn, std::move(arg));
            }
            for (std::size_t i = 0; i < coords_.size(); ++i) {
                if (coords_[i] == ident) {
                    return make_coordinate(ident, static_cast<int>(i));
                }
            }
            throw ParseError(ParseError::Kind::UnknownIdentifier, at,
                             "unknown identifier '" + ident + "'");
        }
        fail("expected expression");
    }

    std::string parse_identifier() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
                ++pos_;
            } else {
                break;
            }
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    std::string_view text_;
    std::span<const std::string> coords_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

int precedence_of(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Constant:
            return (e.constant < 0) ? 1 : 4; // negative constants print signed
        case Expr::Kind::Coordinate:
            return 4;
        case Expr::Kind::Call:
            return (e.fn == CallFn::Neg) ? 2 : 4;
        case Expr::Kind::Binary:
            if (e.op == '^') return 3;
            if (e.op == '*' || e.op == '/') return 2;
            return 1;
    }
    return 4;
}

void print_node(const Expr& e, std::string& out, int parent_prec, bool right_operand);

void print_child(const ExprPtr& e, std::string& out, int parent_prec, bool right_operand) {
    print_node(*e, out, parent_prec, right_operand);
}

void print_constant(double v, std::string& out) {
    // shortest representation that parses back to the same double
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

void print_node(const Expr& e, std::string& out, int parent_prec, bool right_operand) {
    int prec = precedence_of(e);
    bool need_parens = prec < parent_prec || (prec == parent_prec && right_operand);
    if (need_parens) out += '(';
    switch (e.kind) {
        case Expr::Kind::Constant:
            print_constant(e.constant, out);
            break;
        case Expr::Kind::Coordinate:
            out += e.name;
            break;
        case Expr::Kind::Call:
            if (e.fn == CallFn::Neg) {
                out += '-';
                print_child(e.lhs, out, 2, true);
            } else {
                out += call_fn_name(e.fn);
                out += '(';
                print_child(e.lhs, out, 0, false);
                out += ')';
            }
            break;
        case Expr::Kind::Binary:
            print_child(e.lhs, out, prec, false);
            out += e.op;
            if (e.op == '^') {
                // Exponent is always a Constant; parenthesize when negative.
                if (e.rhs->constant < 0) {
                    out += '(';
                    print_constant(e.rhs->constant, out);
                    out += ')';
                } else {
                    print_constant(e.rhs->constant, out);
                }
            } else {
                print_child(e.rhs, out, prec, true);
            }
            break;
    }
    if (need_parens) out += ')';
}

const char* node_label(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Constant: return "const";
        case Expr::Kind::Coordinate: return e.name.c_str();
        case Expr::Kind::Call: return call_fn_name(e.fn);
        case Expr::Kind::Binary:
            switch (e.op) {
                case '+': return "add";
                case '-': return "sub";
                case '*': return "mul";
                case '/': return "div";
                case '^': return "pow";
            }
            return "binary";
    }
    return "node";
}

Jet eval_jet_node(const Expr& e, std::span<const double> point, int order) {
    const int nv = static_cast<int>(point.size());
    try {
        switch (e.kind) {
            case Expr::Kind::Constant:
                return Jet::constant(e.constant, nv, order);
            case Expr::Kind::Coordinate:
                return Jet::variable(e.coord, point[e.coord], nv, order);
            case Expr::Kind::Call: {
                Jet arg = eval_jet_node(*e.lhs, point, order);
                switch (e.fn) {
                    case CallFn::Sin: return sin(arg);
                    case CallFn::Cos: return cos(arg);
                    case CallFn::Tan: return tan(arg);
                    case CallFn::Exp: return exp(arg);
                    case CallFn::Ln: return ln(arg);
                    case CallFn::Sqrt: return sqrt(arg);
                    case CallFn::Sinh: return sinh(arg);
                    case CallFn::Cosh: return cosh(arg);
                    case CallFn::Neg: return -arg;
                }
                throw JetError("expr: unknown function");
            }
            case Expr::Kind::Binary: {
                Jet l = eval_jet_node(*e.lhs, point, order);
                switch (e.op) {
                    case '+': return l + eval_jet_node(*e.rhs, point, order);
                    case '-': return l - eval_jet_node(*e.rhs, point, order);
                    case '*': return l * eval_jet_node(*e.rhs, point, order);
                    case '/': return l / eval_jet_node(*e.rhs, point, order);
                    case '^': return pow_int(l, static_cast<int>(e.rhs->constant));
                }
                throw JetError("expr: unknown operator");
            }
        }
        throw JetError("expr: unknown node kind");
    } catch (const JetDomainError& ex) {
        throw EvalError(ex.what(), std::vector<double>(point.begin(), point.end()),
                        node_label(e));
    } catch (EvalError& ex) {
        ex.ast_path = std::string(node_label(e)) + "/" + ex.ast_path;
        throw;
    }
}

} // namespace

const char* call_fn_name(CallFn fn) {
    switch (fn) {
        case CallFn::Sin: return "sin";
        case CallFn::Cos: return "cos";
        case CallFn::Tan: return "tan";
        case CallFn::Exp: return "exp";
        case CallFn::Ln: return "ln";
        case CallFn::Sqrt: return "sqrt";
        case CallFn::Sinh: return "sinh";
        case CallFn::Cosh: return "cosh";
        case CallFn::Neg: return "neg";
    }
    return "?";
}

ExprPtr make_constant(double c) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Constant;
    e->constant = c;
    return e;
}

ExprPtr parse_expression(std::string_view text, std::span<const std::string> coordinates) {
    return Parser(text, coordinates).run();
}

std::string to_string(const Expr& e) {
    std::string out;
    print_node(e, out, 0, false);
    return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::Constant:
            return a.constant == b.constant;
        case Expr::Kind::Coordinate:
            return a.coord == b.coord && a.name == b.name;
        case Expr::Kind::Call:
            return a.fn == b.fn && structurally_equal(*a.lhs, *b.lhs);
        case Expr::Kind::Binary:
            return a.op == b.op && structurally_equal(*a.lhs, *b.lhs) &&
                   structurally_equal(*a.rhs, *b.rhs);
    }
    return false;
}

double eval_value(const Expr& e, std::span<const double> point) {
    switch (e.kind) {
        case Expr::Kind::Constant:
            return e.constant;
        case Expr::Kind::Coordinate:
            return point[e.coord];
        case Expr::Kind::Call: {
            double v = eval_value(*e.lhs, point);
            switch (e.fn) {
                case CallFn::Sin: return std::sin(v);
                case CallFn::Cos: return std::cos(v);
                case CallFn::Tan: return std::tan(v);
                case CallFn::Exp: return std::exp(v);
                case CallFn::Ln: return std::log(v);
                case CallFn::Sqrt: return std::sqrt(v);
                case CallFn::Sinh: return std::sinh(v);
                case CallFn::Cosh: return std::cosh(v);
                case CallFn::Neg: return -v;
            }
            return 0.0;
        }
        case Expr::Kind::Binary: {
            double l = eval_value(*e.lhs, point);
            double r = eval_value(*e.rhs, point);
            switch (e.op) {
                case '+': return l + r;
                case '-': return l - r;
                case '*': return l * r;
                case '/': return l / r;
                case '^': return std::pow(l, r);
            }
            return 0.0;
        }
    }
    return 0.0;
}

Jet eval_jet(const Expr& e, std::span<const double> point, int order) {
    Jet result = eval_jet_node(e, point, order);
    if (!result.all_finite()) {
        throw EvalError("expression evaluated to a non-finite value",
                        std::vector<double>(point.begin(), point.end()), node_label(e));
    }
    return result;
}

} // namespace pscontact
