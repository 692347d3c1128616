#pragma once

#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gkforge/error.hpp"
#include "gkforge/scalar.hpp"

namespace gkforge {

/// Small expression language: numbers, named variables, + - * / ^, exp cosh sinh sqrt log.
class Expr {
public:
    enum class Op { Num, Var, Neg, Add, Sub, Mul, Div, Pow, Exp, Cosh, Sinh, Sqrt, Log };

    struct Node {
        Op op;
        Rational num;  // Op::Num
        std::size_t var = 0;
        std::shared_ptr<const Node> a, b;
    };
    using Ptr = std::shared_ptr<const Node>;

    Expr() : p_(make_num(Rational(0))) {}
    explicit Expr(Ptr p) : p_(std::move(p)) {}
    static Expr constant(const Rational& q) { return Expr(make_num(q)); }
    static Expr variable(std::size_t i)
    {
        auto n = std::make_shared<Node>();
        n->op = Op::Var;
        n->var = i;
        return Expr(n);
    }

    /// Parses text; identifiers must appear in vars (their position is the variable index).
    static Expr parse(const std::string& text, const std::vector<std::string>& vars)
    {
        Parser ps{text, vars, 0};
        Expr e(ps.expr());
        ps.skip();
        if (ps.pos != text.size()) ps.fail("unexpected '" + std::string(1, text[ps.pos]) + "'");
        return e;
    }

    double eval(const std::vector<double>& x) const { return evald(p_.get(), x); }

    /// Exact evaluation; throws Irrational on transcendental functions or non-integer powers.
    Rational eval_exact(const std::vector<Rational>& x) const { return evalq(p_.get(), x); }

    bool depends_on(std::size_t v) const { return depends(p_.get(), v); }
    bool is_constant_zero() const { return p_->op == Op::Num && sgn(p_->num) == 0; }

    Expr diff(std::size_t v) const { return Expr(d(p_, v)); }

    const Ptr& node() const { return p_; }

    friend Expr operator+(const Expr& a, const Expr& b) { return Expr(add(a.p_, b.p_)); }
    friend Expr operator-(const Expr& a, const Expr& b) { return Expr(subtract(a.p_, b.p_)); }
    friend Expr operator*(const Expr& a, const Expr& b) { return Expr(mul(a.p_, b.p_)); }
    friend Expr operator/(const Expr& a, const Expr& b) { return Expr(divide(a.p_, b.p_)); }

private:
    Ptr p_;

    static Ptr make_num(const Rational& q)
    {
        auto n = std::make_shared<Node>();
        n->op = Op::Num;
        n->num = q;
        return n;
    }
    static Ptr make(Op op, Ptr a, Ptr b = nullptr)
    {
        auto n = std::make_shared<Node>();
        n->op = op;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }
    static bool is_num(const Ptr& p, long v) { return p->op == Op::Num && p->num == v; }
    static bool is_num(const Ptr& p) { return p->op == Op::Num; }

    static Ptr add(const Ptr& a, const Ptr& b)
    {
        if (is_num(a) && is_num(b)) return make_num(a->num + b->num);
        if (is_num(a, 0)) return b;
        if (is_num(b, 0)) return a;
        return make(Op::Add, a, b);
    }
    static Ptr subtract(const Ptr& a, const Ptr& b)
    {
        if (is_num(a) && is_num(b)) return make_num(a->num - b->num);
        if (is_num(b, 0)) return a;
        if (is_num(a, 0)) return neg(b);
        return make(Op::Sub, a, b);
    }
    static Ptr neg(const Ptr& a)
    {
        if (is_num(a)) return make_num(-a->num);
        if (a->op == Op::Neg) return a->a;
        return make(Op::Neg, a);
    }
    static Ptr mul(const Ptr& a, const Ptr& b)
    {
        if (is_num(a) && is_num(b)) return make_num(a->num * b->num);
        if (is_num(a, 0) || is_num(b, 0)) return make_num(Rational(0));
        if (is_num(a, 1)) return b;
        if (is_num(b, 1)) return a;
        return make(Op::Mul, a, b);
    }
    static Ptr divide(const Ptr& a, const Ptr& b)
    {
        if (is_num(a) && is_num(b) && sgn(b->num) != 0) return make_num(a->num / b->num);
        if (is_num(a, 0)) return make_num(Rational(0));
        if (is_num(b, 1)) return a;
        return make(Op::Div, a, b);
    }
    static Ptr power(const Ptr& a, const Ptr& b)
    {
        if (is_num(b, 0)) return make_num(Rational(1));
        if (is_num(b, 1)) return a;
        return make(Op::Pow, a, b);
    }

    static Ptr d(const Ptr& p, std::size_t v)
    {
        if (!depends(p.get(), v)) return make_num(Rational(0));
        switch (p->op) {
        case Op::Num: return make_num(Rational(0));
        case Op::Var: return make_num(Rational(p->var == v ? 1 : 0));
        case Op::Neg: return neg(d(p->a, v));
        case Op::Add: return add(d(p->a, v), d(p->b, v));
        case Op::Sub: return subtract(d(p->a, v), d(p->b, v));
        case Op::Mul: return add(mul(d(p->a, v), p->b), mul(p->a, d(p->b, v)));
        case Op::Div:
            return divide(subtract(mul(d(p->a, v), p->b), mul(p->a, d(p->b, v))), mul(p->b, p->b));
        case Op::Pow:
            if (!depends(p->b.get(), v)) {
                // c * a^(c-1) * a'
                return mul(mul(p->b, power(p->a, subtract(p->b, make_num(Rational(1))))), d(p->a, v));
            }
            // a^b (b' log a + b a'/a)
            return mul(p, add(mul(d(p->b, v), make(Op::Log, p->a)), divide(mul(p->b, d(p->a, v)), p->a)));
        case Op::Exp: return mul(p, d(p->a, v));
        case Op::Cosh: return mul(make(Op::Sinh, p->a), d(p->a, v));
        case Op::Sinh: return mul(make(Op::Cosh, p->a), d(p->a, v));
        case Op::Sqrt: return divide(d(p->a, v), mul(make_num(Rational(2)), p));
        case Op::Log: return divide(d(p->a, v), p->a);
        }
        return make_num(Rational(0));
    }

    static bool depends(const Node* p, std::size_t v)
    {
        if (!p) return false;
        if (p->op == Op::Var) return p->var == v;
        return depends(p->a.get(), v) || depends(p->b.get(), v);
    }

    static double evald(const Node* p, const std::vector<double>& x)
    {
        switch (p->op) {
        case Op::Num: return p->num.get_d();
        case Op::Var: return x.at(p->var);
        case Op::Neg: return -evald(p->a.get(), x);
        case Op::Add: return evald(p->a.get(), x) + evald(p->b.get(), x);
        case Op::Sub: return evald(p->a.get(), x) - evald(p->b.get(), x);
        case Op::Mul: return evald(p->a.get(), x) * evald(p->b.get(), x);
        case Op::Div: return evald(p->a.get(), x) / evald(p->b.get(), x);
        case Op::Pow: {
            double base = evald(p->a.get(), x);
            if (p->b->op == Op::Num && p->b->num.get_den() == 1) {
                // integer exponent passed as an exact integer keeps negative bases valid
                long e = p->b->num.get_num().get_si();
                return std::pow(base, static_cast<double>(e));
            }
            return std::pow(base, evald(p->b.get(), x));
        }
        case Op::Exp: return std::exp(evald(p->a.get(), x));
        case Op::Cosh: return std::cosh(evald(p->a.get(), x));
        case Op::Sinh: return std::sinh(evald(p->a.get(), x));
        case Op::Sqrt: return std::sqrt(evald(p->a.get(), x));
        case Op::Log: return std::log(evald(p->a.get(), x));
        }
        return 0;
    }

    static Rational evalq(const Node* p, const std::vector<Rational>& x)
    {
        switch (p->op) {
        case Op::Num: return p->num;
        case Op::Var: return x.at(p->var);
        case Op::Neg: return -evalq(p->a.get(), x);
        case Op::Add: return evalq(p->a.get(), x) + evalq(p->b.get(), x);
        case Op::Sub: return evalq(p->a.get(), x) - evalq(p->b.get(), x);
        case Op::Mul: return evalq(p->a.get(), x) * evalq(p->b.get(), x);
        case Op::Div: {
            Rational den = evalq(p->b.get(), x);
            if (sgn(den) == 0) throw Error(ErrorKind::InadmissibleParams, "division by zero");
            return evalq(p->a.get(), x) / den;
        }
        case Op::Pow: {
            Rational base = evalq(p->a.get(), x), e = evalq(p->b.get(), x);
            if (e.get_den() == 1) {
                long k = e.get_num().get_si();
                if (k < 0 && sgn(base) == 0) throw Error(ErrorKind::InadmissibleParams, "zero to a negative power");
                Rational r(1), b = k < 0 ? Rational(1 / base) : base;
                for (long i = 0; i < std::labs(k); ++i) r *= b;
                return r;
            }
            if (e == Rational(1, 2)) {
                Rational r;
                if (rational_sqrt(base, r)) return r;
            }
            throw Error(ErrorKind::Irrational, "non-integer power");
        }
        case Op::Sqrt: {
            Rational r, base = evalq(p->a.get(), x);
            if (rational_sqrt(base, r)) return r;
            throw Error(ErrorKind::Irrational, "sqrt of a non-square");
        }
        default: throw Error(ErrorKind::Irrational, "transcendental function in exact evaluation");
        }
    }

    struct Parser {
        const std::string& s;
        const std::vector<std::string>& vars;
        std::size_t pos;

        [[noreturn]] void fail(const std::string& msg) const
        {
            throw Error(ErrorKind::Parse, msg + " at column " + std::to_string(pos + 1) + " in '" + s + "'");
        }
        void skip()
        {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool eat(char c)
        {
            skip();
            if (pos < s.size() && s[pos] == c) { ++pos; return true; }
            return false;
        }
        Ptr expr()
        {
            Ptr l = term();
            while (true) {
                if (eat('+')) l = add(l, term());
                else if (eat('-')) l = subtract(l, term());
                else return l;
            }
        }
        Ptr term()
        {
            Ptr l = unary();
            while (true) {
                if (eat('*')) l = mul(l, unary());
                else if (eat('/')) l = divide(l, unary());
                else return l;
            }
        }
        Ptr unary()
        {
            if (eat('-')) return neg(unary());
            if (eat('+')) return unary();
            return pow_();
        }
        Ptr pow_()
        {
            Ptr b = primary();
            if (eat('^')) return power(b, unary());
            return b;
        }
        Ptr primary()
        {
            skip();
            if (pos >= s.size()) fail("unexpected end");
            char c = s[pos];
            if (c == '(') {
                ++pos;
                Ptr e = expr();
                if (!eat(')')) fail("expected ')'");
                return e;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                std::size_t b = pos;
                while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.')) ++pos;
                if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E') && pos + 1 < s.size() &&
                    (std::isdigit(static_cast<unsigned char>(s[pos + 1])) || s[pos + 1] == '-' || s[pos + 1] == '+')) {
                    ++pos;
                    if (s[pos] == '-' || s[pos] == '+') ++pos;
                    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                }
                return make_num(parse_rational(s.substr(b, pos - b)));
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t b = pos;
                while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
                std::string id = s.substr(b, pos - b);
                static const std::map<std::string, Op> funcs{
                    {"exp", Op::Exp}, {"cosh", Op::Cosh}, {"sinh", Op::Sinh}, {"sqrt", Op::Sqrt}, {"log", Op::Log}};
                auto f = funcs.find(id);
                if (f != funcs.end()) {
                    if (!eat('(')) fail("expected '(' after " + id);
                    Ptr a = expr();
                    if (!eat(')')) fail("expected ')'");
                    return make(f->second, a);
                }
                for (std::size_t i = 0; i < vars.size(); ++i)
                    if (vars[i] == id) return variable(i).p_;
                pos = b;
                fail("unknown identifier '" + id + "'");
            }
            fail("unexpected '" + std::string(1, c) + "'");
        }
    };
};

}  // namespace gkforge
