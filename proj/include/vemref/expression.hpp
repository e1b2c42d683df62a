#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>

namespace vemref {

class ExpressionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Second-order jet in two variables: value, gradient and Hessian (uu, uv, vv).
struct Jet2 {
    double v = 0.0;
    std::array<double, 2> d{};
    std::array<double, 3> h{};

    static Jet2 constant(double c) { return {c, {}, {}}; }
    double laplacian() const { return h[0] + h[2]; }
};

/// Parsed closed-form expression over the variables x, y, z, u, v and the
/// constants pi and e. Functions: sin cos tan asin acos atan sinh cosh tanh
/// exp log sqrt abs sign, pow(a, b), atan2(y, x); arctan(y, x) is atan2.
/// Operators: + - * / ^ (also **), right-associative powers.
class Expression {
public:
    Expression() = default;
    explicit Expression(const std::string& text);

    const std::string& text() const { return text_; }
    bool empty() const { return !root_; }

    struct Variables {
        Jet2 x, y, z, u, v;
    };
    Jet2 eval(const Variables& vars) const;
    double value(double x, double y, double z) const;

    struct Node;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

} // namespace vemref
