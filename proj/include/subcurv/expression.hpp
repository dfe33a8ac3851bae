#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "subcurv/errors.hpp"

namespace subcurv {

// A closed-form scalar expression in variables x1..xn.
//
// Grammar (recursive descent, '^' right-associative, '-' binds as in -x^2 == -(x^2)):
//   expr  := term (('+'|'-') term)*
//   term  := unary (('*'|'/') unary)*
//   unary := '-'? power
//   power := atom ('^' unary)?
//   atom  := number | 'pi' | 'e' | var | func '(' expr ')' | '(' expr ')'
//   func  := exp | log | sqrt | sin | cos | tan | sinh | cosh
//
// Immutable; nodes are shared, so copies are cheap and evaluation is safe
// from multiple threads.
class Expression {
public:
    struct Node;  // opaque AST node

    Expression();  // the constant 0

    // Throws SyntaxError (with byte offset), UnknownIdentifier, ArityError.
    static Expression parse(std::string_view text);
    static Expression number(double v);

    // Evaluates at x (x[i] is the value of x{i+1}).  Throws DomainViolation if
    // the result is not finite (division by zero, log of a non-positive value,
    // ...), ShapeError if x has fewer entries than the expression references.
    double eval(std::span<const double> x) const;

    // Exact partial derivative d/dx{var+1} as a new expression (symbolic).
    Expression derivative(int var) const;

    // Forward-mode (dual-number) partial d/dx{var+1} evaluated at x.
    // No symbolic blow-up; exact to round-off.
    double eval_dual(std::span<const double> x, int var) const;

    // 1 + highest variable index referenced (0 for constant expressions).
    int max_var() const;

    bool is_constant() const;

    // Canonical printable form; parse(to_string()) has the same AST shape.
    std::string to_string() const;

private:
    explicit Expression(std::shared_ptr<const Node> root);
    std::shared_ptr<const Node> root_;
};

}  // namespace subcurv
