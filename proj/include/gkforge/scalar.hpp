#pragma once

#include <gmpxx.h>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gkforge/error.hpp"

namespace gkforge {

using Rational = mpq_class;

inline constexpr double kDefaultTol = 1e-9;

/// Parse "p/q", an integer, or a plain decimal ("0.25", "-1e-3") into a canonical rational.
inline Rational parse_rational(std::string_view s)
{
    std::string t(s);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
    std::size_t b = 0;
    while (b < t.size() && std::isspace(static_cast<unsigned char>(t[b]))) ++b;
    t = t.substr(b);
    if (t.empty()) throw Error(ErrorKind::Parse, "empty rational literal");
    if (t[0] == '+') t = t.substr(1);
    Rational q;
    if (t.find_first_of(".eE") == std::string::npos) {
        if (q.set_str(t, 10) != 0) throw Error(ErrorKind::Parse, "bad rational literal '" + t + "'");
        if (t.find('/') != std::string::npos && q.get_den() == 0)
            throw Error(ErrorKind::Parse, "zero denominator in '" + t + "'");
        q.canonicalize();
        return q;
    }
    // decimal with optional exponent, read exactly
    bool neg = false;
    std::size_t i = 0;
    if (t[i] == '-') { neg = true; ++i; }
    std::string digits;
    long exp10 = 0;
    bool seen_dot = false, any = false;
    for (; i < t.size(); ++i) {
        char c = t[i];
        if (std::isdigit(static_cast<unsigned char>(c))) { digits += c; any = true; if (seen_dot) --exp10; }
        else if (c == '.' && !seen_dot) seen_dot = true;
        else break;
    }
    if (!any) throw Error(ErrorKind::Parse, "bad decimal literal '" + t + "'");
    if (i < t.size()) {
        if (t[i] != 'e' && t[i] != 'E') throw Error(ErrorKind::Parse, "bad decimal literal '" + t + "'");
        long e = 0;
        auto r = std::from_chars(t.data() + i + 1, t.data() + t.size(), e);
        if (r.ec != std::errc() || r.ptr != t.data() + t.size())
            throw Error(ErrorKind::Parse, "bad exponent in '" + t + "'");
        exp10 += e;
    }
    mpz_class num(digits, 10), scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
    if (exp10 >= 0) q = Rational(num * scale);
    else q = Rational(num, scale);
    q.canonicalize();
    return neg ? Rational(-q) : q;
}

/// Shortest round-trip text for a double.
inline std::string format_double(double x)
{
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static constexpr const char* name = "rational";
    static Rational from_rational(const Rational& q) { return q; }
    static Rational from_int(long v) { return Rational(v); }
    static bool is_zero(const Rational& x, double) { return sgn(x) == 0; }
    static int sign(const Rational& x, double) { return sgn(x); }
    static double to_double(const Rational& x) { return x.get_d(); }
    static std::string to_string(const Rational& x) { return x.get_str(); }
    static bool finite(const Rational&) { return true; }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static constexpr const char* name = "float";
    static double from_rational(const Rational& q) { return q.get_d(); }
    static double from_int(long v) { return static_cast<double>(v); }
    static bool is_zero(double x, double tol) { return std::fabs(x) <= tol; }
    static int sign(double x, double tol) { return std::fabs(x) <= tol ? 0 : (x > 0 ? 1 : -1); }
    static double to_double(double x) { return x; }
    static std::string to_string(double x) { return format_double(x); }
    static bool finite(double x) { return std::isfinite(x); }
};

template <class S>
bool is_zero(const S& x, double tol = kDefaultTol) { return ScalarTraits<S>::is_zero(x, tol); }

template <class S>
S from_rational(const Rational& q) { return ScalarTraits<S>::from_rational(q); }

template <class S>
double to_double(const S& x) { return ScalarTraits<S>::to_double(x); }

template <class S>
std::string to_string(const S& x) { return ScalarTraits<S>::to_string(x); }

/// Exact rational square root when num and den are perfect squares.
inline bool rational_sqrt(const Rational& q, Rational& out)
{
    if (sgn(q) < 0) return false;
    mpz_class n = q.get_num(), d = q.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    out = Rational(rn, rd);
    out.canonicalize();
    return true;
}

}  // namespace gkforge
