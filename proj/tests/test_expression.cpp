#include "vemref/expression.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace vemref;

namespace {

// Jets seeded so that (u, v) are the active variables and x, y, z are an
// affine image of them, as on a tilted fracture.
Expression::Variables seed(double u, double v)
{
    Expression::Variables s;
    s.u = {u, {1, 0}, {}};
    s.v = {v, {0, 1}, {}};
    s.x = {0.3 + 0.6 * u, {0.6, 0.0}, {}};
    s.y = {-0.2 + 0.8 * v, {0.0, 0.8}, {}};
    s.z = {0.1 + 0.8 * u, {0.8, 0.0}, {}};
    return s;
}

} // namespace

TEST(Expression, Arithmetic)
{
    EXPECT_DOUBLE_EQ(Expression("1 + 2 * 3").value(0, 0, 0), 7.0);
    EXPECT_DOUBLE_EQ(Expression("2 ^ 3 ^ 2").value(0, 0, 0), 512.0);
    EXPECT_DOUBLE_EQ(Expression("2 ** 3").value(0, 0, 0), 8.0);
    EXPECT_DOUBLE_EQ(Expression("-2^2").value(0, 0, 0), -4.0);
    EXPECT_DOUBLE_EQ(Expression("(x - y) / z").value(5, 1, 2), 2.0);
    EXPECT_DOUBLE_EQ(Expression("1.5e1").value(0, 0, 0), 15.0);
    EXPECT_DOUBLE_EQ(Expression("pi").value(0, 0, 0), std::numbers::pi);
    EXPECT_DOUBLE_EQ(Expression("atan2(1, -1)").value(0, 0, 0), 0.75 * std::numbers::pi);
    EXPECT_DOUBLE_EQ(Expression("arctan(y, x)").value(-1, 0, 0), std::numbers::pi);
    EXPECT_DOUBLE_EQ(Expression("abs(x) * sign(x)").value(-3, 0, 0), -3.0);
    EXPECT_DOUBLE_EQ(Expression("pow(x, 0.5)").value(9, 0, 0), 3.0);
}

TEST(Expression, JetsMatchFiniteDifferences)
{
    const char* cases[] = {
        "sin(x) * exp(y) + z^3",
        "x*y*(x^2 + y^2)*arctan(y, x)",
        "log(2 + x^2) / (1 + z^2)",
        "sqrt(1 + x^2 + y^2) - tanh(z) + cosh(u*v)",
        "atan(x) + asin(0.3*y) + acos(0.2*z) + tan(0.5*x)",
        "pow(1.5 + x, y) + sinh(v) + (2 + x)^(1 + 0.1*z)",
        "abs(z - 1.5) * x^3 - 8*pi*abs(y + 1.5)",
    };
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> d(-0.9, 0.9);
    const double h = 1e-4;
    for (const char* text : cases) {
        const Expression e(text);
        for (int trial = 0; trial < 25; ++trial) {
            const double u = d(rng), v = d(rng);
            auto f = [&](double a, double b) { return e.eval(seed(a, b)).v; };
            const Jet2 j = e.eval(seed(u, v));
            EXPECT_NEAR(j.v, f(u, v), 1e-14) << text;
            EXPECT_NEAR(j.d[0], (f(u + h, v) - f(u - h, v)) / (2 * h), 1e-6) << text;
            EXPECT_NEAR(j.d[1], (f(u, v + h) - f(u, v - h)) / (2 * h), 1e-6) << text;
            EXPECT_NEAR(j.h[0], (f(u + h, v) - 2 * f(u, v) + f(u - h, v)) / (h * h), 2e-4) << text;
            EXPECT_NEAR(j.h[2], (f(u, v + h) - 2 * f(u, v) + f(u, v - h)) / (h * h), 2e-4) << text;
            EXPECT_NEAR(j.h[1], (f(u + h, v + h) - f(u + h, v - h) - f(u - h, v + h) + f(u - h, v - h)) / (4 * h * h),
                        2e-4)
                << text;
        }
    }
}

TEST(Expression, ErrorsNameTheColumn)
{
    for (const char* bad : {"1 +", "sin(x", "foo(x)", "x $ 2", "atan2(x)", "w + 1", "3 4", ""}) {
        try {
            Expression e(bad);
            ADD_FAILURE() << "accepted: " << bad;
        } catch (const ExpressionError& err) {
            EXPECT_NE(std::string(err.what()).find("column"), std::string::npos) << err.what();
        }
    }
}
