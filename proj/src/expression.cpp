#include "vemref/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

namespace vemref {

namespace {

Jet2 operator+(const Jet2& a, const Jet2& b)
{
    return {a.v + b.v, {a.d[0] + b.d[0], a.d[1] + b.d[1]}, {a.h[0] + b.h[0], a.h[1] + b.h[1], a.h[2] + b.h[2]}};
}

Jet2 scale(const Jet2& a, double s)
{
    return {s * a.v, {s * a.d[0], s * a.d[1]}, {s * a.h[0], s * a.h[1], s * a.h[2]}};
}

Jet2 operator*(const Jet2& a, const Jet2& b)
{
    Jet2 r;
    r.v = a.v * b.v;
    for (int i = 0; i < 2; ++i)
        r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    r.h[0] = a.h[0] * b.v + 2 * a.d[0] * b.d[0] + a.v * b.h[0];
    r.h[1] = a.h[1] * b.v + a.d[0] * b.d[1] + a.d[1] * b.d[0] + a.v * b.h[1];
    r.h[2] = a.h[2] * b.v + 2 * a.d[1] * b.d[1] + a.v * b.h[2];
    return r;
}

/// phi(a) given phi, phi', phi'' at a.v.
Jet2 chain(const Jet2& a, double f, double f1, double f2)
{
    Jet2 r;
    r.v = f;
    r.d = {f1 * a.d[0], f1 * a.d[1]};
    r.h[0] = f2 * a.d[0] * a.d[0] + f1 * a.h[0];
    r.h[1] = f2 * a.d[0] * a.d[1] + f1 * a.h[1];
    r.h[2] = f2 * a.d[1] * a.d[1] + f1 * a.h[2];
    return r;
}

/// phi(a, b) given the value, first partials (pa, pb) and second partials (paa, pab, pbb).
Jet2 chain2(const Jet2& a, const Jet2& b, double f, double pa, double pb, double paa, double pab, double pbb)
{
    Jet2 r;
    r.v = f;
    for (int i = 0; i < 2; ++i)
        r.d[i] = pa * a.d[i] + pb * b.d[i];
    const int I[3] = {0, 0, 1}, J[3] = {0, 1, 1};
    for (int k = 0; k < 3; ++k) {
        const int i = I[k], j = J[k];
        r.h[k] = pa * a.h[k] + pb * b.h[k] + paa * a.d[i] * a.d[j] + pab * (a.d[i] * b.d[j] + a.d[j] * b.d[i]) +
                 pbb * b.d[i] * b.d[j];
    }
    return r;
}

bool is_constant(const Jet2& a)
{
    return a.d[0] == 0.0 && a.d[1] == 0.0 && a.h[0] == 0.0 && a.h[1] == 0.0 && a.h[2] == 0.0;
}

Jet2 reciprocal(const Jet2& a)
{
    const double iv = 1.0 / a.v;
    return chain(a, iv, -iv * iv, 2.0 * iv * iv * iv);
}

Jet2 power(const Jet2& a, const Jet2& b)
{
    if (is_constant(b)) {
        const double c = b.v;
        if (c == 0.0)
            return Jet2::constant(1.0);
        if (c == 1.0)
            return a;
        if (c == 2.0)
            return a * a;
        return chain(a, std::pow(a.v, c), c * std::pow(a.v, c - 1), c * (c - 1) * std::pow(a.v, c - 2));
    }
    // a^b = exp(b log a), a > 0.
    const double la = std::log(a.v);
    const double f = std::pow(a.v, b.v);
    return chain2(a, b, f, b.v * f / a.v, f * la, f * b.v * (b.v - 1) / (a.v * a.v), f * (1.0 + b.v * la) / a.v,
                  f * la * la);
}

Jet2 atan2_jet(const Jet2& y, const Jet2& x)
{
    const double r2 = x.v * x.v + y.v * y.v;
    const double r4 = r2 * r2;
    // Partials with respect to (y, x).
    return chain2(y, x, std::atan2(y.v, x.v), x.v / r2, -y.v / r2, -2 * x.v * y.v / r4, (y.v * y.v - x.v * x.v) / r4,
                  2 * x.v * y.v / r4);
}

Jet2 apply_function(const std::string& f, const Jet2& a)
{
    const double x = a.v;
    if (f == "sin")
        return chain(a, std::sin(x), std::cos(x), -std::sin(x));
    if (f == "cos")
        return chain(a, std::cos(x), -std::sin(x), -std::cos(x));
    if (f == "tan") {
        const double t = std::tan(x), s = 1 + t * t;
        return chain(a, t, s, 2 * t * s);
    }
    if (f == "asin") {
        const double q = 1 - x * x;
        return chain(a, std::asin(x), 1 / std::sqrt(q), x / (q * std::sqrt(q)));
    }
    if (f == "acos") {
        const double q = 1 - x * x;
        return chain(a, std::acos(x), -1 / std::sqrt(q), -x / (q * std::sqrt(q)));
    }
    if (f == "atan" || f == "arctan") {
        const double q = 1 + x * x;
        return chain(a, std::atan(x), 1 / q, -2 * x / (q * q));
    }
    if (f == "sinh")
        return chain(a, std::sinh(x), std::cosh(x), std::sinh(x));
    if (f == "cosh")
        return chain(a, std::cosh(x), std::sinh(x), std::cosh(x));
    if (f == "tanh") {
        const double t = std::tanh(x), s = 1 - t * t;
        return chain(a, t, s, -2 * t * s);
    }
    if (f == "exp")
        return chain(a, std::exp(x), std::exp(x), std::exp(x));
    if (f == "log")
        return chain(a, std::log(x), 1 / x, -1 / (x * x));
    if (f == "sqrt") {
        const double s = std::sqrt(x);
        return chain(a, s, 0.5 / s, -0.25 / (s * x));
    }
    if (f == "abs")
        return chain(a, std::abs(x), x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0), 0.0);
    if (f == "sign")
        return Jet2::constant(x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0));
    throw ExpressionError("unknown function '" + f + "'");
}

bool known_unary(const std::string& f)
{
    static const char* names[] = {"sin",  "cos",  "tan", "asin", "acos", "atan", "arctan", "sinh",
                                  "cosh", "tanh", "exp", "log",  "sqrt", "abs",  "sign"};
    for (const char* n : names)
        if (f == n)
            return true;
    return false;
}

} // namespace

struct Expression::Node {
    enum class Kind { number, variable, negate, add, sub, mul, div, pow, call1, call2 } kind;
    double number = 0.0;
    char var = 0;
    std::string fn;
    std::shared_ptr<const Node> a, b;

    Jet2 eval(const Variables& vars) const
    {
        switch (kind) {
        case Kind::number:
            return Jet2::constant(number);
        case Kind::variable:
            switch (var) {
            case 'x': return vars.x;
            case 'y': return vars.y;
            case 'z': return vars.z;
            case 'u': return vars.u;
            default: return vars.v;
            }
        case Kind::negate:
            return scale(a->eval(vars), -1.0);
        case Kind::add:
            return a->eval(vars) + b->eval(vars);
        case Kind::sub:
            return a->eval(vars) + scale(b->eval(vars), -1.0);
        case Kind::mul:
            return a->eval(vars) * b->eval(vars);
        case Kind::div:
            return a->eval(vars) * reciprocal(b->eval(vars));
        case Kind::pow:
            return power(a->eval(vars), b->eval(vars));
        case Kind::call1:
            return apply_function(fn, a->eval(vars));
        case Kind::call2:
            if (fn == "pow")
                return power(a->eval(vars), b->eval(vars));
            return atan2_jet(a->eval(vars), b->eval(vars));
        }
        return {};
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse()
    {
        NodePtr n = expr();
        skip();
        if (pos_ != s_.size())
            fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw ExpressionError("expression \"" + s_ + "\" at column " + std::to_string(pos_ + 1) + ": " + what);
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool accept(const char* tok)
    {
        skip();
        const std::string t(tok);
        if (s_.compare(pos_, t.size(), t) == 0) {
            pos_ += t.size();
            return true;
        }
        return false;
    }

    static NodePtr make(Kind k, NodePtr a = {}, NodePtr b = {})
    {
        auto n = std::make_shared<Expression::Node>();
        n->kind = k;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }

    NodePtr expr()
    {
        NodePtr n = term();
        for (;;) {
            if (accept("+"))
                n = make(Kind::add, n, term());
            else if (accept("-"))
                n = make(Kind::sub, n, term());
            else
                return n;
        }
    }

    NodePtr term()
    {
        NodePtr n = unary();
        for (;;) {
            skip();
            if (accept("*"))
                n = make(Kind::mul, n, unary());
            else if (accept("/"))
                n = make(Kind::div, n, unary());
            else
                return n;
        }
    }

    NodePtr unary()
    {
        if (accept("-"))
            return make(Kind::negate, unary());
        if (accept("+"))
            return unary();
        return power();
    }

    NodePtr power()
    {
        NodePtr base = primary();
        if (accept("^") || accept("**"))
            return make(Kind::pow, base, unary());
        return base;
    }

    NodePtr primary()
    {
        skip();
        if (pos_ >= s_.size())
            fail("unexpected end of input");
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            double val = 0.0;
            try {
                val = std::stod(s_.substr(pos_), &used);
            } catch (const std::exception&) {
                fail("malformed number");
            }
            pos_ += used;
            auto n = std::make_shared<Expression::Node>();
            n->kind = Kind::number;
            n->number = val;
            return n;
        }
        if (accept("(")) {
            NodePtr n = expr();
            if (!accept(")"))
                fail("expected ')'");
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            const std::string id = s_.substr(start, pos_ - start);
            if (accept("(")) {
                NodePtr a = expr();
                NodePtr b;
                if (accept(","))
                    b = expr();
                if (!accept(")"))
                    fail("expected ')' after arguments of " + id);
                auto n = std::make_shared<Expression::Node>();
                n->a = a;
                n->b = b;
                if (b) {
                    if (id != "atan2" && id != "arctan" && id != "atan" && id != "pow")
                        fail("function '" + id + "' takes one argument");
                    n->kind = Kind::call2;
                    n->fn = id == "pow" ? "pow" : "atan2";
                } else {
                    if (!known_unary(id))
                        fail("unknown function '" + id + "'");
                    n->kind = Kind::call1;
                    n->fn = id;
                }
                return n;
            }
            auto n = std::make_shared<Expression::Node>();
            if (id == "pi") {
                n->kind = Kind::number;
                n->number = std::numbers::pi;
            } else if (id == "e") {
                n->kind = Kind::number;
                n->number = std::numbers::e;
            } else if (id.size() == 1 && std::string("xyzuv").find(id[0]) != std::string::npos) {
                n->kind = Kind::variable;
                n->var = id[0];
            } else {
                pos_ = start;
                fail("unknown identifier '" + id + "'");
            }
            return n;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

} // namespace

Expression::Expression(const std::string& text) : text_(text)
{
    root_ = Parser(text_).parse();
}

Jet2 Expression::eval(const Variables& vars) const
{
    if (!root_)
        return {};
    return root_->eval(vars);
}

double Expression::value(double x, double y, double z) const
{
    Variables vars{Jet2::constant(x), Jet2::constant(y), Jet2::constant(z), {}, {}};
    return eval(vars).v;
}

} // namespace vemref
