#pragma once

#include "qfa/coeff.hpp"

namespace qfa {

// Field adaptors.  Higher layers are templated on one of these so the same
// solver code runs either fully symbolically over Q(q,w) or at an exact
// rational evaluation point (fast arithmetic in Q(sqrt(r0))).

struct SymbolicField {
    using S = Coefficient;

    S zero() const { return Coefficient::zero(); }
    S one() const { return Coefficient::one(); }
    bool is_zero(const S& s) const { return s.is_zero(); }
    bool eq(const S& s, const S& t) const { return s == t; }
    S add(const S& s, const S& t) const { return s + t; }
    S sub(const S& s, const S& t) const { return s - t; }
    S mul(const S& s, const S& t) const { return s * t; }
    S div(const S& s, const S& t) const { return s / t; }
    S neg(const S& s) const { return -s; }
    S inv(const S& s) const { return s.inverse(); }
    void madd(S& acc, const S& s, const S& t) const { acc += s * t; }
    S from_coeff(const Coefficient& c) const { return c; }
    S q_power(long e) const { return Coefficient::q_pow(e); }
    // Pivoting heuristic: prefer scalars with few terms.
    size_t weight(const S& s) const { return s.complexity(); }
    std::string str(const S& s) const { return print_coefficient(s); }
    std::string mode_tag() const { return "symbolic"; }
};

struct EvalField {
    EvalPoint pt;

    explicit EvalField(EvalPoint p) : pt(std::move(p)) {}

    using S = QuadRat;

    S zero() const { return QuadRat{0, 0}; }
    S one() const { return QuadRat{1, 0}; }
    bool is_zero(const S& s) const { return s.is_zero(); }
    bool eq(const S& s, const S& t) const { return s == t; }
    S add(const S& s, const S& t) const { return QuadRat{s.x + t.x, s.y + t.y}; }
    S sub(const S& s, const S& t) const { return QuadRat{s.x - t.x, s.y - t.y}; }
    S mul(const S& s, const S& t) const {
        return QuadRat{s.x * t.x + s.y * t.y * pt.r0, s.x * t.y + s.y * t.x};
    }
    S inv(const S& s) const {
        Rat n = s.x * s.x - s.y * s.y * pt.r0;
        if (n == 0) throw std::domain_error("EvalField: inverse of zero (or square r0)");
        return QuadRat{s.x / n, -s.y / n};
    }
    S div(const S& s, const S& t) const { return mul(s, inv(t)); }
    S neg(const S& s) const { return QuadRat{-s.x, -s.y}; }
    void madd(S& acc, const S& s, const S& t) const {
        acc.x += s.x * t.x + s.y * t.y * pt.r0;
        acc.y += s.x * t.y + s.y * t.x;
    }
    S from_coeff(const Coefficient& c) const { return evaluate(c, pt); }
    S q_power(long e) const {
        Rat p = 1;
        Rat base = e >= 0 ? pt.q0 : Rat(1) / pt.q0;
        long n = e >= 0 ? e : -e;
        for (long i = 0; i < n; ++i) p *= base;
        return QuadRat{p, 0};
    }
    size_t weight(const S&) const { return 1; }
    std::string str(const S& s) const {
        std::string r = s.x.str();
        if (s.y != 0) r += " + (" + s.y.str() + ")*sqrt(r0)";
        return r;
    }
    std::string mode_tag() const {
        return "eval:q=" + boost::multiprecision::numerator(pt.q0).str() + "/" +
               boost::multiprecision::denominator(pt.q0).str();
    }
};

}  // namespace qfa
