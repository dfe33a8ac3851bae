#include "subcurv/expression.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"

using subcurv::Expression;

namespace {

double ev(const char* text, std::vector<double> x = {}) {
    return Expression::parse(text).eval(x);
}

}  // namespace

TEST_CASE("arithmetic and precedence") {
    CHECK(ev("1 + 2*3") == 7);
    CHECK(ev("(1 + 2)*3") == 9);
    CHECK(ev("1 - 2 - 3") == -4);
    CHECK(ev("2/4/2") == 0.25);
    CHECK(ev("2^3^2") == 512);   // right-associative
    CHECK(ev("-2^2") == -4);     // unary minus binds looser than ^
    CHECK(ev("2^-3") == 0.125);
    CHECK(ev("x1 + 2*x2", {1, 3}) == 7);
    CHECK(ev("-x1^2", {3}) == -9);
}

TEST_CASE("number literals") {
    CHECK(ev("1.5e2") == 150);
    CHECK(ev("1E-2") == 0.01);
    CHECK(ev(".5") == 0.5);
    CHECK(ev("3.") == 3);
    CHECK(ev("1e+3") == 1000);
}

TEST_CASE("constants and functions") {
    CHECK(ev("pi") == doctest::Approx(M_PI));
    CHECK(ev("e") == doctest::Approx(M_E));
    CHECK(ev("2*e") == doctest::Approx(2 * M_E));  // 'e' after a number is the constant
    CHECK(ev("e^2") == doctest::Approx(M_E * M_E));
    CHECK(ev("exp(1)") == doctest::Approx(M_E));
    CHECK(ev("log(e)") == doctest::Approx(1));
    CHECK(ev("sqrt(2)") == doctest::Approx(std::sqrt(2.0)));
    CHECK(ev("sin(pi/6)") == doctest::Approx(0.5));
    CHECK(ev("cos(0)") == 1);
    CHECK(ev("tan(pi/4)") == doctest::Approx(1));
    CHECK(ev("sinh(1)") == doctest::Approx(std::sinh(1.0)));
    CHECK(ev("cosh(1)") == doctest::Approx(std::cosh(1.0)));
}

TEST_CASE("syntax errors carry a byte offset") {
    try {
        Expression::parse("x1 + $");
        FAIL("no exception");
    } catch (const subcurv::SyntaxError& err) {
        CHECK(err.offset == 5);
    }
    try {
        Expression::parse("2e");  // number 2 then stray 'e' constant: juxtaposition
        FAIL("no exception");
    } catch (const subcurv::SyntaxError& err) {
        CHECK(err.offset == 1);
    }
    CHECK_THROWS_AS(Expression::parse("(1 + 2"), subcurv::SyntaxError);
    CHECK_THROWS_AS(Expression::parse("1 + * 2"), subcurv::SyntaxError);
    CHECK_THROWS_AS(Expression::parse(""), subcurv::SyntaxError);
    CHECK_THROWS_AS(Expression::parse("2 x1"), subcurv::SyntaxError);
    CHECK_THROWS_AS(Expression::parse("sin x1"), subcurv::SyntaxError);
}

TEST_CASE("identifier and arity errors") {
    CHECK_THROWS_AS(Expression::parse("foo(1)"), subcurv::UnknownIdentifier);
    CHECK_THROWS_AS(Expression::parse("x"), subcurv::UnknownIdentifier);
    CHECK_THROWS_AS(Expression::parse("x0"), subcurv::UnknownIdentifier);
    CHECK_THROWS_AS(Expression::parse("x01"), subcurv::UnknownIdentifier);
    CHECK_THROWS_AS(Expression::parse("sin()"), subcurv::ArityError);
    CHECK_THROWS_AS(Expression::parse("sin(x1, x2)"), subcurv::ArityError);
}

TEST_CASE("domain violations at evaluation") {
    CHECK_THROWS_AS(ev("1/x1", {0}), subcurv::DomainViolation);
    CHECK_THROWS_AS(ev("log(x1)", {-1.0}), subcurv::DomainViolation);
    CHECK_THROWS_AS(ev("sqrt(x1)", {-4.0}), subcurv::DomainViolation);
    CHECK_THROWS_AS(ev("x2", {1.0}), subcurv::ShapeError);
}

TEST_CASE("metadata") {
    CHECK(Expression::parse("x3 + x1").max_var() == 3);
    CHECK(Expression::parse("sin(2)").max_var() == 0);
    CHECK(Expression::parse("pi*e").is_constant());
    CHECK(!Expression::parse("pi*x1").is_constant());
}

TEST_CASE("symbolic derivatives") {
    std::vector<double> p{0.7, -0.3};

    auto d = [&](const char* text, int var) {
        return Expression::parse(text).derivative(var).eval(p);
    };

    CHECK(d("x1^2", 0) == doctest::Approx(2 * 0.7));
    CHECK(d("x1^3 + 4*x1", 0) == doctest::Approx(3 * 0.49 + 4));
    CHECK(d("sin(x1)", 0) == doctest::Approx(std::cos(0.7)));
    CHECK(d("cos(x1)", 0) == doctest::Approx(-std::sin(0.7)));
    CHECK(d("tan(x1)", 0) == doctest::Approx(1 / (std::cos(0.7) * std::cos(0.7))));
    CHECK(d("exp(2*x1)", 0) == doctest::Approx(2 * std::exp(1.4)));
    CHECK(d("log(x1)", 0) == doctest::Approx(1 / 0.7));
    CHECK(d("sqrt(x1)", 0) == doctest::Approx(0.5 / std::sqrt(0.7)));
    CHECK(d("sinh(x1)", 0) == doctest::Approx(std::cosh(0.7)));
    CHECK(d("cosh(x1)", 0) == doctest::Approx(std::sinh(0.7)));
    CHECK(d("x1/x2", 0) == doctest::Approx(1 / -0.3));
    CHECK(d("x1/x2", 1) == doctest::Approx(-0.7 / 0.09));
    CHECK(d("x1*x2", 1) == doctest::Approx(0.7));
    CHECK(d("x2", 0) == 0);
    // general power: d/dx1 x1^x2 = x2*x1^(x2-1),  d/dx2 x1^x2 = x1^x2 * log(x1)
    CHECK(d("x1^x2", 0) == doctest::Approx(-0.3 * std::pow(0.7, -1.3)));
    CHECK(d("x1^x2", 1) == doctest::Approx(std::pow(0.7, -0.3) * std::log(0.7)));
    // second derivative
    CHECK(Expression::parse("x1^4").derivative(0).derivative(0).eval(p) ==
          doctest::Approx(12 * 0.49));
}

TEST_CASE("dual-number derivatives match symbolic ones") {
    const char* cases[] = {
        "x1^2 + 3*x1*x2 - x2^3",
        "sin(x1)*cos(x2) + tan(x1/4)",
        "exp(-x1^2) * log(2 + x2)",
        "sqrt(1 + x1^2 + x2^2)",
        "x1^x2",
        "sinh(x1) / cosh(x2)",
        "(x1 + x2)^3 / (1 + x1^2)",
        "2^x1",
    };
    std::vector<double> p{0.8, 1.3};
    for (const char* text : cases) {
        CAPTURE(text);
        Expression ex = Expression::parse(text);
        for (int var = 0; var < 2; ++var) {
            double sym = ex.derivative(var).eval(p);
            double dual = ex.eval_dual(p, var);
            CHECK(dual == doctest::Approx(sym).epsilon(1e-12));
        }
    }
}

TEST_CASE("printing round-trips") {
    const char* cases[] = {
        "x1 + 2*x2",  "2^3^2",  "-x1^2", "(x1 + x2)*(x1 - x2)",
        "sin(x1)/x2", "2^-3",   "1 - 2 - 3", "x1/x2/x3",
        "exp(-(x1 + x2))",
    };
    std::vector<double> p{0.4, -1.2, 2.5};
    for (const char* text : cases) {
        CAPTURE(text);
        Expression ex = Expression::parse(text);
        Expression re = Expression::parse(ex.to_string());
        CHECK(re.eval(p) == ex.eval(p));
        CHECK(re.to_string() == ex.to_string());
    }
}
