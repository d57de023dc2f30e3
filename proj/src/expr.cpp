#include "diagphase/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

namespace diagphase {

using NodePtr = std::shared_ptr<const Expr::Node>;

namespace {

NodePtr make_node(ExprOp op, double v, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->value = v;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

bool node_has(const Expr::Node& n, ExprOp op) {
    if (n.op == op) return true;
    if (n.lhs && node_has(*n.lhs, op)) return true;
    return n.rhs && node_has(*n.rhs, op);
}

double eval_node(const Expr::Node& n, double x) {
    switch (n.op) {
    case ExprOp::Const: return n.value;
    case ExprOp::Var: return x;
    case ExprOp::Neg: return -eval_node(*n.lhs, x);
    case ExprOp::Sin: return std::sin(eval_node(*n.lhs, x));
    case ExprOp::Cos: return std::cos(eval_node(*n.lhs, x));
    case ExprOp::Exp: return std::exp(eval_node(*n.lhs, x));
    case ExprOp::Abs: return std::abs(eval_node(*n.lhs, x));
    case ExprOp::Sqrt: {
        double a = eval_node(*n.lhs, x);
        if (a < 0.0) throw DomainError("sqrt of negative value");
        return std::sqrt(a);
    }
    case ExprOp::Add: return eval_node(*n.lhs, x) + eval_node(*n.rhs, x);
    case ExprOp::Sub: return eval_node(*n.lhs, x) - eval_node(*n.rhs, x);
    case ExprOp::Mul: return eval_node(*n.lhs, x) * eval_node(*n.rhs, x);
    case ExprOp::Div: {
        double d = eval_node(*n.rhs, x);
        if (d == 0.0) throw DomainError("division by zero");
        return eval_node(*n.lhs, x) / d;
    }
    case ExprOp::Pow: {
        double base = eval_node(*n.lhs, x);
        double e = eval_node(*n.rhs, x);
        if (e != std::floor(e) && base < 0.0) throw DomainError("non-integer power of negative value");
        if (base == 0.0 && e < 0.0) throw DomainError("division by zero");
        return std::pow(base, e);
    }
    }
    return 0.0;
}

Jet jet_node(const Expr::Node& n, double x) {
    switch (n.op) {
    case ExprOp::Const: return Jet::constant(n.value);
    case ExprOp::Var: return Jet::variable(x);
    case ExprOp::Neg: return -jet_node(*n.lhs, x);
    case ExprOp::Sin: return sin(jet_node(*n.lhs, x));
    case ExprOp::Cos: return cos(jet_node(*n.lhs, x));
    case ExprOp::Exp: return exp(jet_node(*n.lhs, x));
    case ExprOp::Sqrt: return sqrt(jet_node(*n.lhs, x));
    case ExprOp::Abs: return abs(jet_node(*n.lhs, x));
    case ExprOp::Add: return jet_node(*n.lhs, x) + jet_node(*n.rhs, x);
    case ExprOp::Sub: return jet_node(*n.lhs, x) - jet_node(*n.rhs, x);
    case ExprOp::Mul: return jet_node(*n.lhs, x) * jet_node(*n.rhs, x);
    case ExprOp::Div: return jet_node(*n.lhs, x) / jet_node(*n.rhs, x);
    case ExprOp::Pow: {
        // The exponent subtree is x-free (enforced by the parser).
        double e = eval_node(*n.rhs, x);
        Jet base = jet_node(*n.lhs, x);
        if (e != std::floor(e) && base.c[0] < 0.0) throw DomainError("non-integer power of negative value");
        return pow(base, e);
    }
    }
    return Jet{};
}

int precedence(ExprOp op) {
    switch (op) {
    case ExprOp::Add:
    case ExprOp::Sub: return 1;
    case ExprOp::Mul:
    case ExprOp::Div: return 2;
    case ExprOp::Neg: return 3;
    case ExprOp::Pow: return 4;
    default: return 5;
    }
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string print_node(const Expr::Node& n);

std::string wrap(const Expr::Node& n, bool parens) {
    std::string s = print_node(n);
    return parens ? "(" + s + ")" : s;
}

std::string print_node(const Expr::Node& n) {
    switch (n.op) {
    case ExprOp::Const: return n.value < 0.0 ? "(" + format_number(n.value) + ")" : format_number(n.value);
    case ExprOp::Var: return "x";
    case ExprOp::Neg: return "-" + wrap(*n.lhs, precedence(n.lhs->op) < 3);
    case ExprOp::Sin: return "sin(" + print_node(*n.lhs) + ")";
    case ExprOp::Cos: return "cos(" + print_node(*n.lhs) + ")";
    case ExprOp::Exp: return "exp(" + print_node(*n.lhs) + ")";
    case ExprOp::Sqrt: return "sqrt(" + print_node(*n.lhs) + ")";
    case ExprOp::Abs: return "abs(" + print_node(*n.lhs) + ")";
    case ExprOp::Pow:
        return wrap(*n.lhs, precedence(n.lhs->op) < 5) + "^" + wrap(*n.rhs, precedence(n.rhs->op) < 3);
    default: {
        int p = precedence(n.op);
        const char* sym = n.op == ExprOp::Add ? " + " : n.op == ExprOp::Sub ? " - " : n.op == ExprOp::Mul ? "*" : "/";
        return wrap(*n.lhs, precedence(n.lhs->op) < p) + sym + wrap(*n.rhs, precedence(n.rhs->op) <= p);
    }
    }
}

bool equal_nodes(const Expr::Node& a, const Expr::Node& b) {
    if (a.op != b.op) return false;
    if (a.op == ExprOp::Const) return a.value == b.value;
    if (a.lhs && !equal_nodes(*a.lhs, *b.lhs)) return false;
    if (a.rhs && !equal_nodes(*a.rhs, *b.rhs)) return false;
    return true;
}

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    NodePtr parse() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
        NodePtr e = parse_sum();
        skip_ws();
        if (pos_ < s_.size()) throw ParseError(std::string("unexpected character '") + s_[pos_] + "'", pos_);
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_sum() {
        NodePtr lhs = parse_product();
        for (;;) {
            if (accept('+')) lhs = make_node(ExprOp::Add, 0, lhs, parse_product());
            else if (accept('-')) lhs = make_node(ExprOp::Sub, 0, lhs, parse_product());
            else return lhs;
        }
    }

    NodePtr parse_product() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (accept('*')) lhs = make_node(ExprOp::Mul, 0, lhs, parse_unary());
            else if (accept('/')) lhs = make_node(ExprOp::Div, 0, lhs, parse_unary());
            else return lhs;
        }
    }

    NodePtr parse_unary() {
        if (accept('-')) return make_node(ExprOp::Neg, 0, parse_unary(), nullptr);
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (accept('^')) {
            skip_ws();
            std::size_t exp_at = pos_;
            NodePtr e = parse_unary();
            if (node_has(*e, ExprOp::Var)) throw ParseError("exponent must not depend on x", exp_at);
            return make_node(ExprOp::Pow, 0, base, e);
        }
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_sum();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr parse_number() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            } else {
                pos_ = save;
            }
        }
        std::string tok(s_.substr(start, pos_ - start));
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size() || tok == ".") throw ParseError("malformed number '" + tok + "'", start);
        return make_node(ExprOp::Const, v, nullptr, nullptr);
    }

    NodePtr parse_identifier() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        std::string name(s_.substr(start, pos_ - start));
        if (name == "x") return make_node(ExprOp::Var, 0, nullptr, nullptr);
        if (name == "pi") return make_node(ExprOp::Const, std::numbers::pi, nullptr, nullptr);
        ExprOp op;
        if (name == "sin") op = ExprOp::Sin;
        else if (name == "cos") op = ExprOp::Cos;
        else if (name == "exp") op = ExprOp::Exp;
        else if (name == "sqrt") op = ExprOp::Sqrt;
        else if (name == "abs") op = ExprOp::Abs;
        else throw ParseError("unknown identifier '" + name + "'", start);
        if (!accept('(')) throw ParseError("expected '(' after " + name, pos_);
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ')') throw ParseError(name + " expects 1 argument, got 0", pos_);
        NodePtr arg = parse_sum();
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ',') throw ParseError(name + " expects 1 argument", pos_);
        if (!accept(')')) throw ParseError("expected ')'", pos_);
        return make_node(op, 0, arg, nullptr);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr::Expr() : root_(make_node(ExprOp::Const, 0.0, nullptr, nullptr)) {}

Expr Expr::constant(double v) { return Expr(make_node(ExprOp::Const, v, nullptr, nullptr)); }
Expr Expr::variable() { return Expr(make_node(ExprOp::Var, 0.0, nullptr, nullptr)); }

Expr Expr::unary(ExprOp op, const Expr& arg) {
    switch (op) {
    case ExprOp::Neg:
    case ExprOp::Sin:
    case ExprOp::Cos:
    case ExprOp::Exp:
    case ExprOp::Sqrt:
    case ExprOp::Abs: return Expr(make_node(op, 0.0, arg.root_, nullptr));
    default: throw std::invalid_argument("not a unary operator");
    }
}

Expr Expr::binary(ExprOp op, const Expr& lhs, const Expr& rhs) {
    switch (op) {
    case ExprOp::Add:
    case ExprOp::Sub:
    case ExprOp::Mul:
    case ExprOp::Div: return Expr(make_node(op, 0.0, lhs.root_, rhs.root_));
    case ExprOp::Pow:
        if (rhs.depends_on_x()) throw std::invalid_argument("exponent must not depend on x");
        return Expr(make_node(op, 0.0, lhs.root_, rhs.root_));
    default: throw std::invalid_argument("not a binary operator");
    }
}

double Expr::eval(double x) const { return eval_node(*root_, x); }

Jet Expr::eval_jet(double x) const { return jet_node(*root_, x); }

double Expr::eval_deriv(double x, int order) const {
    if (order < 0 || order > kMaxOrder) throw std::invalid_argument("derivative order must be in 0..4");
    if (order == 0) return eval(x);
    return eval_jet(x).derivative(order);
}

bool Expr::has_kinks() const { return node_has(*root_, ExprOp::Abs); }
bool Expr::depends_on_x() const { return node_has(*root_, ExprOp::Var); }

std::string Expr::to_string() const { return print_node(*root_); }

bool Expr::operator==(const Expr& other) const { return equal_nodes(*root_, *other.root_); }

Expr parse_expression(std::string_view text) {
    Parser p(text);
    return Expr(p.parse());
}

}  // namespace diagphase
