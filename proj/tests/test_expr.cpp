#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "traverse/expr.hpp"

using namespace traverse;

namespace {

double central_diff(const ExprPtr& e, std::vector<double> x, int var) {
    const double h = 1e-6;
    x[var] += h;
    double hi = e->eval(x);
    x[var] -= 2 * h;
    double lo = e->eval(x);
    return (hi - lo) / (2 * h);
}

}  // namespace

TEST_CASE("parse and evaluate") {
    auto e = parse_expr("1 - x^2 - y^2", {"x", "y"});
    CHECK(e->eval(std::vector<double>{0.5, 0.5}) == doctest::Approx(0.5));
    CHECK(e->eval(std::vector<double>{1.0, 0.0}) == doctest::Approx(0.0));

    auto t = parse_expr("sin(x) * cos(y) + exp(-x)", {"x", "y"});
    std::vector<double> p{0.3, -0.7};
    CHECK(t->eval(p) ==
          doctest::Approx(std::sin(0.3) * std::cos(-0.7) + std::exp(-0.3)));
}

TEST_CASE("operator precedence and unary minus") {
    auto e = parse_expr("-x + 2 * y^3", {"x", "y"});
    std::vector<double> p{1.5, 2.0};
    CHECK(e->eval(p) == doctest::Approx(-1.5 + 2 * 8.0));
    auto f = parse_expr("(x + y)^2 / 4", {"x", "y"});
    CHECK(f->eval(p) == doctest::Approx(12.25 / 4));
}

TEST_CASE("exact derivative matches central difference") {
    std::vector<std::string> exprs = {
        "x^3 - 2*x*y + y^2", "sin(x*y) + cos(x)", "exp(x - y^2)",
        "(1 - x^2 - y^2) * y", "x / (1 + y^2)"};
    for (const auto& s : exprs) {
        auto e = parse_expr(s, {"x", "y"});
        for (int var = 0; var < 2; ++var) {
            auto d = e->diff(var);
            for (double x : {-0.8, 0.1, 0.7})
                for (double y : {-0.5, 0.3}) {
                    std::vector<double> p{x, y};
                    double exact = d->eval(p);
                    double approx = central_diff(e, p, var);
                    CHECK(exact == doctest::Approx(approx).epsilon(1e-6));
                }
        }
    }
}

TEST_CASE("constant folding keeps derivatives of constants trivial") {
    auto e = parse_expr("3 * 4 + 1", {});
    CHECK(e->op == Op::Const);
    CHECK(e->value == doctest::Approx(13.0));
    auto d = parse_expr("x^2", {"x"})->diff(0)->diff(0);
    CHECK(d->eval(std::vector<double>{5.0}) == doctest::Approx(2.0));
}

TEST_CASE("to_string output reparses to the same function") {
    auto e = parse_expr("x^2*y - sin(y)/(1 + x^2)", {"x", "y"});
    auto round = parse_expr(e->to_string(), {"x", "y"});
    for (double x : {-1.0, 0.2, 1.3})
        for (double y : {-0.4, 0.9}) {
            std::vector<double> p{x, y};
            CHECK(e->eval(p) == doctest::Approx(round->eval(p)).epsilon(1e-12));
        }
}

TEST_CASE("parse errors carry position context") {
    CHECK_THROWS_AS(parse_expr("x +", {"x"}), ExprError);
    CHECK_THROWS_AS(parse_expr("bogus(x)", {"x"}), ExprError);
    CHECK_THROWS_AS(parse_expr("x ^ y", {"x", "y"}), ExprError);
    CHECK_THROWS_AS(parse_expr("(x", {"x"}), ExprError);
}
