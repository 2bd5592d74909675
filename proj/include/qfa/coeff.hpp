#pragma once

#include "qfa/ratfun.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qfa {

// Scalar of the engine: a + b*w with a,b in Q(q) and w^2 = 1 + q^2.
// The square root never leaves this rank-2 extension, so all arithmetic is
// exact and equality is decidable componentwise.
class Coefficient {
public:
    Coefficient() = default;
    Coefficient(long c) : a_(c) {}
    explicit Coefficient(RatFun a) : a_(std::move(a)) {}
    Coefficient(RatFun a, RatFun b) : a_(std::move(a)), b_(std::move(b)) {}

    static Coefficient zero() { return Coefficient(); }
    static Coefficient one() { return Coefficient(1); }
    static Coefficient q() { return Coefficient(RatFun::q_power(1)); }
    static Coefficient w() { return Coefficient(RatFun(0), RatFun(1)); }
    static Coefficient q_pow(long e) { return Coefficient(RatFun::q_power(e)); }
    static Coefficient from_int(long c) { return Coefficient(c); }
    static Coefficient from_rat(const Rat& x) { return Coefficient(RatFun(x)); }
    // 1 + q^2 (what w squares to)
    static RatFun w_square() { return RatFun(IntPoly(1) + IntPoly::q_power(2)); }

    const RatFun& a() const { return a_; }
    const RatFun& b() const { return b_; }

    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    bool is_one() const { return a_.is_one() && b_.is_zero(); }

    friend bool operator==(const Coefficient& x, const Coefficient& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator!=(const Coefficient& x, const Coefficient& y) { return !(x == y); }

    Coefficient operator-() const { return Coefficient(-a_, -b_); }

    friend Coefficient operator+(const Coefficient& x, const Coefficient& y) {
        return Coefficient(x.a_ + y.a_, x.b_ + y.b_);
    }
    friend Coefficient operator-(const Coefficient& x, const Coefficient& y) {
        return Coefficient(x.a_ - y.a_, x.b_ - y.b_);
    }
    friend Coefficient operator*(const Coefficient& x, const Coefficient& y) {
        if (x.b_.is_zero() && y.b_.is_zero()) return Coefficient(x.a_ * y.a_);
        return Coefficient(x.a_ * y.a_ + x.b_ * y.b_ * w_square(),
                           x.a_ * y.b_ + x.b_ * y.a_);
    }

    Coefficient inverse() const {
        if (is_zero()) throw std::domain_error("Coefficient: inverse of zero");
        if (b_.is_zero()) return Coefficient(a_.inverse());
        // (a + b w)^-1 = (a - b w)/(a^2 - b^2 (1+q^2)); the norm cannot vanish
        // because 1+q^2 is not a square in Q(q).
        RatFun n = a_ * a_ - b_ * b_ * w_square();
        if (n.is_zero()) throw std::domain_error("Coefficient: vanishing norm");
        RatFun ni = n.inverse();
        return Coefficient(a_ * ni, -(b_ * ni));
    }

    friend Coefficient operator/(const Coefficient& x, const Coefficient& y) {
        return x * y.inverse();
    }

    Coefficient& operator+=(const Coefficient& o) { *this = *this + o; return *this; }
    Coefficient& operator-=(const Coefficient& o) { *this = *this - o; return *this; }
    Coefficient& operator*=(const Coefficient& o) { *this = *this * o; return *this; }
    Coefficient& operator/=(const Coefficient& o) { *this = *this / o; return *this; }

    friend Coefficient pow(const Coefficient& x, long n) {
        if (n < 0) return pow(x.inverse(), -n);
        Coefficient r = one(), base = x;
        while (n > 0) {
            if (n & 1) r *= base;
            base *= base;
            n >>= 1;
        }
        return r;
    }

    bool is_polynomial() const { return b_.is_zero() && a_.is_polynomial(); }

    bool is_polynomial_in_q_squared() const {
        return is_polynomial() && a_.num().even_powers_only();
    }

    // Classify the q-exponent parity of a w-free polynomial value:
    // -1 zero, 0 all exponents even, 1 all exponents odd, 2 mixed or not a
    // polynomial in q.
    int q_exponent_parity() const {
        if (is_zero()) return -1;
        if (is_polynomial_in_q_squared()) return 0;
        Coefficient shifted = *this * q();
        if (shifted.is_polynomial_in_q_squared()) return 1;
        return 2;
    }

    size_t complexity() const { return a_.complexity() + b_.complexity(); }

private:
    RatFun a_, b_;
};

// ---------------------------------------------------------------------------
// Canonical string form.
//
//   poly := term (("+" | "-") term)*
//   term := coef ["*q^" int] ["*w"]
//   coef := int ["/" uint]
//
// Terms are printed with ascending exponents, w-free part first, e.g.
//   1 - 1*q^4 + 1*q^10
// Printing requires both parts to have monomial denominators (exact negative
// q-powers are folded into the exponent); anything else refuses to print
// rather than produce a non-round-trippable string.
// ---------------------------------------------------------------------------

namespace detail {

struct GrammarTerm {
    long exp;
    Rat coef;
    bool w;
};

inline void collect_terms(const RatFun& part, bool w, std::vector<GrammarTerm>& out) {
    if (part.is_zero()) return;
    const IntPoly& den = part.den();
    if (!den.is_monomial())
        throw std::domain_error("Coefficient: value has a non-monomial denominator, "
                                "not representable in the dump grammar");
    Int d = den.leading();
    long e = den.low_degree();
    const IntPoly& num = part.num();
    for (long k = num.low_degree(); k <= num.degree(); ++k) {
        Int c = num.coeff(k);
        if (c == 0) continue;
        out.push_back(GrammarTerm{k - e, Rat(c, d), w});
    }
}

inline std::string rat_mag_string(const Rat& x) {
    Rat m = x < 0 ? Rat(-x) : x;
    std::string s = boost::multiprecision::numerator(m).str();
    if (boost::multiprecision::denominator(m) != 1)
        s += "/" + boost::multiprecision::denominator(m).str();
    return s;
}

}  // namespace detail

inline std::string print_coefficient(const Coefficient& c) {
    std::vector<detail::GrammarTerm> terms;
    detail::collect_terms(c.a(), false, terms);
    detail::collect_terms(c.b(), true, terms);
    if (terms.empty()) return "0";
    std::string s;
    for (size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        bool neg = t.coef < 0;
        if (i == 0) s += neg ? "-" : "";
        else s += neg ? " - " : " + ";
        s += detail::rat_mag_string(t.coef);
        if (t.exp != 0) s += "*q^" + std::to_string(t.exp);
        if (t.w) s += "*w";
    }
    return s;
}

inline Coefficient parse_coefficient(const std::string& str) {
    struct Cursor {
        const std::string& s;
        size_t i = 0;
        void skip_ws() { while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i; }
        bool done() { skip_ws(); return i >= s.size(); }
        char peek() { skip_ws(); return i < s.size() ? s[i] : '\0'; }
        bool eat(char c) {
            skip_ws();
            if (i < s.size() && s[i] == c) { ++i; return true; }
            return false;
        }
        bool eat_str(const char* p) {
            skip_ws();
            size_t j = i;
            for (; *p; ++p, ++j)
                if (j >= s.size() || s[j] != *p) return false;
            i = j;
            return true;
        }
        Int integer(bool allow_sign = false) {
            skip_ws();
            bool neg = allow_sign && eat('-');
            skip_ws();
            if (i >= s.size() || !isdigit((unsigned char)s[i]))
                throw std::invalid_argument("coefficient parse: expected integer in '" + s + "'");
            Int v = 0;
            while (i < s.size() && isdigit((unsigned char)s[i])) {
                v = v * 10 + (s[i] - '0');
                ++i;
            }
            return neg ? Int(-v) : v;
        }
    } cur{str};

    Coefficient total;
    bool first = true;
    while (!cur.done()) {
        int sign = 1;
        if (cur.eat('-')) sign = -1;
        else if (cur.eat('+')) sign = 1;
        else if (!first)
            throw std::invalid_argument("coefficient parse: expected '+' or '-' in '" + str + "'");
        first = false;

        Int numv = cur.integer();
        Int denv = 1;
        if (cur.eat('/')) {
            denv = cur.integer();
            if (denv <= 0) throw std::invalid_argument("coefficient parse: bad denominator");
        }
        long e = 0;
        bool has_w = false;
        while (cur.peek() == '*') {
            cur.eat('*');
            if (cur.eat_str("q^")) {
                e = long(cur.integer(/*allow_sign=*/true));
            } else if (cur.eat('w')) {
                has_w = true;
            } else {
                throw std::invalid_argument("coefficient parse: expected q^ or w in '" + str + "'");
            }
        }
        Coefficient term = Coefficient::from_rat(Rat(sign * numv, denv)) * Coefficient::q_pow(e);
        if (has_w) term *= Coefficient::w();
        total += term;
    }
    if (first) throw std::invalid_argument("coefficient parse: empty input");
    return total;
}

// ---------------------------------------------------------------------------
// Exact evaluation: q -> q0 in Q, w -> sqrt(1+q0^2) kept as a formal root.
// Values live in Q(sqrt(r0)) as exact pairs (x, y) = x + y*sqrt(r0).
// ---------------------------------------------------------------------------

struct EvalPoint {
    Rat q0;
    Rat r0;  // 1 + q0^2, never a perfect square for the shipped points

    static EvalPoint at(const Rat& q0) { return EvalPoint{q0, 1 + q0 * q0}; }
};

inline std::vector<EvalPoint> default_eval_points() {
    return {EvalPoint::at(Rat(2, 3)), EvalPoint::at(Rat(3, 5)), EvalPoint::at(Rat(5, 7))};
}

struct QuadRat {
    Rat x, y;  // x + y*sqrt(r0)

    bool is_zero() const { return x == 0 && y == 0; }
    friend bool operator==(const QuadRat& a, const QuadRat& b) = default;
};

inline QuadRat evaluate(const Coefficient& c, const EvalPoint& pt) {
    return QuadRat{c.a().eval(pt.q0), c.b().eval(pt.q0)};
}

}  // namespace qfa
