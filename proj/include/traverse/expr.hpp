// Symbolic scalar expressions over x_1..x_{n+1} with exact differentiation.
//
// Expression trees are immutable and shared; smart constructors fold
// constants and strip algebraic no-ops so that iterated Lie derivatives
// stay small.

#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace traverse {

struct ExprError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp };

class Expr {
  public:
    Op op = Op::Const;
    double value = 0.0;   // Op::Const
    int var = -1;         // Op::Var
    int exponent = 0;     // Op::Pow (integer exponent)
    ExprPtr a, b;

    double eval(std::span<const double> x) const;
    ExprPtr diff(int var) const;
    std::string to_string() const;
    int max_var() const;
};

// smart constructors
ExprPtr constant(double v);
ExprPtr variable(int index);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr div(ExprPtr a, ExprPtr b);
ExprPtr neg(ExprPtr a);
ExprPtr pow_int(ExprPtr base, int exponent);
ExprPtr sin_e(ExprPtr a);
ExprPtr cos_e(ExprPtr a);
ExprPtr exp_e(ExprPtr a);

// Infix parser; `vars` maps identifier -> variable index. Grammar:
// + - * / ^ (integer exponents), unary minus, sin/cos/exp, parentheses.
ExprPtr parse_expr(const std::string& text, const std::vector<std::string>& vars);

}  // namespace traverse
