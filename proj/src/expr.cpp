#include "traverse/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace traverse {

namespace {

std::shared_ptr<Expr> make(Op op, ExprPtr a = nullptr, ExprPtr b = nullptr) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

bool is_const(const ExprPtr& e, double v) {
    return e->op == Op::Const && e->value == v;
}

}  // namespace

ExprPtr constant(double v) {
    auto e = std::make_shared<Expr>();
    e->op = Op::Const;
    e->value = v;
    return e;
}

ExprPtr variable(int index) {
    if (index < 0) throw ExprError("variable index must be nonnegative");
    auto e = std::make_shared<Expr>();
    e->op = Op::Var;
    e->var = index;
    return e;
}

ExprPtr add(ExprPtr a, ExprPtr b) {
    if (a->op == Op::Const && b->op == Op::Const) return constant(a->value + b->value);
    if (is_const(a, 0)) return b;
    if (is_const(b, 0)) return a;
    return make(Op::Add, std::move(a), std::move(b));
}

ExprPtr sub(ExprPtr a, ExprPtr b) {
    if (a->op == Op::Const && b->op == Op::Const) return constant(a->value - b->value);
    if (is_const(b, 0)) return a;
    if (is_const(a, 0)) return neg(std::move(b));
    return make(Op::Sub, std::move(a), std::move(b));
}

ExprPtr mul(ExprPtr a, ExprPtr b) {
    if (a->op == Op::Const && b->op == Op::Const) return constant(a->value * b->value);
    if (is_const(a, 0) || is_const(b, 0)) return constant(0);
    if (is_const(a, 1)) return b;
    if (is_const(b, 1)) return a;
    return make(Op::Mul, std::move(a), std::move(b));
}

ExprPtr div(ExprPtr a, ExprPtr b) {
    if (is_const(b, 0)) throw ExprError("division by constant zero");
    if (a->op == Op::Const && b->op == Op::Const) return constant(a->value / b->value);
    if (is_const(a, 0)) return constant(0);
    if (is_const(b, 1)) return a;
    return make(Op::Div, std::move(a), std::move(b));
}

ExprPtr neg(ExprPtr a) {
    if (a->op == Op::Const) return constant(-a->value);
    if (a->op == Op::Neg) return a->a;
    return make(Op::Neg, std::move(a));
}

ExprPtr pow_int(ExprPtr base, int exponent) {
    if (exponent == 0) return constant(1);
    if (exponent == 1) return base;
    if (base->op == Op::Const) return constant(std::pow(base->value, exponent));
    auto e = make(Op::Pow, std::move(base));
    e->exponent = exponent;
    return e;
}

ExprPtr sin_e(ExprPtr a) {
    if (a->op == Op::Const) return constant(std::sin(a->value));
    return make(Op::Sin, std::move(a));
}

ExprPtr cos_e(ExprPtr a) {
    if (a->op == Op::Const) return constant(std::cos(a->value));
    return make(Op::Cos, std::move(a));
}

ExprPtr exp_e(ExprPtr a) {
    if (a->op == Op::Const) return constant(std::exp(a->value));
    return make(Op::Exp, std::move(a));
}

double Expr::eval(std::span<const double> x) const {
    switch (op) {
        case Op::Const: return value;
        case Op::Var:
            if (var >= static_cast<int>(x.size())) throw ExprError("evaluation point has too few coordinates");
            return x[var];
        case Op::Add: return a->eval(x) + b->eval(x);
        case Op::Sub: return a->eval(x) - b->eval(x);
        case Op::Mul: return a->eval(x) * b->eval(x);
        case Op::Div: return a->eval(x) / b->eval(x);
        case Op::Neg: return -a->eval(x);
        case Op::Pow: return std::pow(a->eval(x), exponent);
        case Op::Sin: return std::sin(a->eval(x));
        case Op::Cos: return std::cos(a->eval(x));
        case Op::Exp: return std::exp(a->eval(x));
    }
    throw ExprError("unsupported expression node");
}

ExprPtr Expr::diff(int v) const {
    switch (op) {
        case Op::Const: return constant(0);
        case Op::Var: return constant(var == v ? 1 : 0);
        case Op::Add: return add(a->diff(v), b->diff(v));
        case Op::Sub: return sub(a->diff(v), b->diff(v));
        case Op::Mul: return add(mul(a->diff(v), b), mul(a, b->diff(v)));
        case Op::Div:
            // (a/b)' = a'/b - a b'/b^2
            return sub(div(a->diff(v), b), div(mul(a, b->diff(v)), mul(b, b)));
        case Op::Neg: return neg(a->diff(v));
        case Op::Pow:
            return mul(mul(constant(exponent), pow_int(a, exponent - 1)), a->diff(v));
        case Op::Sin: return mul(cos_e(a), a->diff(v));
        case Op::Cos: return neg(mul(sin_e(a), a->diff(v)));
        case Op::Exp: {
            auto self = std::make_shared<Expr>(*this);
            return mul(self, a->diff(v));
        }
    }
    throw ExprError("unsupported expression node");
}

int Expr::max_var() const {
    switch (op) {
        case Op::Const: return -1;
        case Op::Var: return var;
        default: {
            int m = a ? a->max_var() : -1;
            if (b) m = std::max(m, b->max_var());
            return m;
        }
    }
}

std::string Expr::to_string() const {
    std::ostringstream os;
    switch (op) {
        case Op::Const: os << value; break;
        case Op::Var:
            // default coordinate names; reparses with {"x","y","z"}
            if (var < 3)
                os << "xyz"[var];
            else
                os << "x" << var;
            break;
        case Op::Add: os << "(" << a->to_string() << " + " << b->to_string() << ")"; break;
        case Op::Sub: os << "(" << a->to_string() << " - " << b->to_string() << ")"; break;
        case Op::Mul: os << "(" << a->to_string() << "*" << b->to_string() << ")"; break;
        case Op::Div: os << "(" << a->to_string() << "/" << b->to_string() << ")"; break;
        case Op::Neg: os << "(-" << a->to_string() << ")"; break;
        case Op::Pow: os << a->to_string() << "^" << exponent; break;
        case Op::Sin: os << "sin(" << a->to_string() << ")"; break;
        case Op::Cos: os << "cos(" << a->to_string() << ")"; break;
        case Op::Exp: os << "exp(" << a->to_string() << ")"; break;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;
    const std::vector<std::string>& vars;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw ExprError("parse error at position " + std::to_string(pos) + ": " + msg);
    }

    ExprPtr parse() {
        auto e = expr();
        skip_ws();
        if (pos != s.size()) fail("trailing input");
        return e;
    }

    ExprPtr expr() {
        auto lhs = term();
        for (;;) {
            if (eat('+')) lhs = add(lhs, term());
            else if (eat('-')) lhs = sub(lhs, term());
            else return lhs;
        }
    }

    ExprPtr term() {
        auto lhs = factor();
        for (;;) {
            if (eat('*')) lhs = mul(lhs, factor());
            else if (eat('/')) lhs = div(lhs, factor());
            else return lhs;
        }
    }

    ExprPtr factor() {
        if (eat('-')) return neg(factor());
        return power();
    }

    ExprPtr power() {
        auto base = atom();
        if (eat('^')) {
            int sign = 1;
            if (eat('-')) sign = -1;
            skip_ws();
            size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == start) fail("expected integer exponent after '^'");
            int e = sign * std::stoi(s.substr(start, pos - start));
            return pow_int(base, e);
        }
        return base;
    }

    ExprPtr atom() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of input");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            auto e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    ExprPtr number() {
        size_t start = pos;
        while (pos < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' ||
                s[pos] == 'e' || s[pos] == 'E' ||
                ((s[pos] == '+' || s[pos] == '-') && (s[pos - 1] == 'e' || s[pos - 1] == 'E'))))
            ++pos;
        return constant(std::stod(s.substr(start, pos - start)));
    }

    ExprPtr identifier() {
        size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        std::string name = s.substr(start, pos - start);
        if (name == "sin" || name == "cos" || name == "exp") {
            if (!eat('(')) fail("expected '(' after " + name);
            auto arg = expr();
            if (!eat(')')) fail("expected ')'");
            if (name == "sin") return sin_e(arg);
            if (name == "cos") return cos_e(arg);
            return exp_e(arg);
        }
        if (name == "pi") return constant(M_PI);
        for (size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == name) return variable(static_cast<int>(i));
        fail("unknown identifier '" + name + "'");
    }
};

}  // namespace

ExprPtr parse_expr(const std::string& text, const std::vector<std::string>& vars) {
    Parser p{text, 0, vars};
    return p.parse();
}

}  // namespace traverse
