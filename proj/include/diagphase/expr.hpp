#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "diagphase/jet.hpp"

namespace diagphase {

class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::invalid_argument(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

enum class ExprOp { Const, Var, Neg, Sin, Cos, Exp, Sqrt, Abs, Add, Sub, Mul, Div, Pow };

// Immutable expression tree in one real variable x.
class Expr {
public:
    struct Node {
        ExprOp op;
        double value = 0.0;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };

    Expr();  // the constant 0
    static Expr constant(double v);
    static Expr variable();
    static Expr unary(ExprOp op, const Expr& arg);
    static Expr binary(ExprOp op, const Expr& lhs, const Expr& rhs);

    double eval(double x) const;
    Jet eval_jet(double x) const;
    // d^order/dx^order at x, order in 0..4.
    double eval_deriv(double x, int order) const;

    // True when the tree contains abs (derivatives may not exist everywhere).
    bool has_kinks() const;
    bool depends_on_x() const;

    std::string to_string() const;
    bool operator==(const Expr& other) const;

    const Node& root() const { return *root_; }

private:
    friend Expr parse_expression(std::string_view text);
    explicit Expr(std::shared_ptr<const Node> n) : root_(std::move(n)) {}
    std::shared_ptr<const Node> root_;
};

// Grammar: see README. Throws ParseError with the byte offset of the problem.
Expr parse_expression(std::string_view text);

inline double eval_deriv(const Expr& e, double x, int order) { return e.eval_deriv(x, order); }

}  // namespace diagphase
