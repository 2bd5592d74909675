#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cassert>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfa {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Univariate integer-coefficient polynomial in q, stored densely with an
// exponent offset so that monomials q^e cost O(1) regardless of e.
// Invariant: coefficient vector is empty (the zero polynomial) or has nonzero
// first and last entries.  off_ >= 0 always (true polynomials, not Laurent).
class IntPoly {
public:
    IntPoly() = default;
    IntPoly(long c) { if (c != 0) { off_ = 0; c_.push_back(Int(c)); } }
    explicit IntPoly(Int c) { if (c != 0) { off_ = 0; c_.push_back(std::move(c)); } }

    static IntPoly monomial(Int coef, long exp) {
        IntPoly p;
        if (coef != 0) {
            if (exp < 0) throw std::invalid_argument("IntPoly: negative exponent");
            p.off_ = exp;
            p.c_.push_back(std::move(coef));
        }
        return p;
    }
    static IntPoly q_power(long exp) { return monomial(Int(1), exp); }

    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && off_ == 0 && c_[0] == 1; }
    // Degree of the zero polynomial is -1 by convention.
    long degree() const { return c_.empty() ? -1 : off_ + long(c_.size()) - 1; }
    long low_degree() const { return c_.empty() ? 0 : off_; }
    bool is_monomial() const { return c_.size() == 1; }

    const Int& leading() const {
        static const Int z{0};
        return c_.empty() ? z : c_.back();
    }

    Int coeff(long e) const {
        if (c_.empty() || e < off_ || e > degree()) return Int(0);
        return c_[size_t(e - off_)];
    }

    friend bool operator==(const IntPoly& a, const IntPoly& b) {
        return a.off_ == b.off_ && a.c_ == b.c_;
    }
    friend bool operator!=(const IntPoly& a, const IntPoly& b) { return !(a == b); }

    IntPoly operator-() const {
        IntPoly r(*this);
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        long lo = std::min(a.off_, b.off_);
        long hi = std::max(a.degree(), b.degree());
        IntPoly r;
        r.off_ = lo;
        r.c_.assign(size_t(hi - lo + 1), Int(0));
        for (size_t i = 0; i < a.c_.size(); ++i) r.c_[size_t(a.off_ - lo) + i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) r.c_[size_t(b.off_ - lo) + i] += b.c_[i];
        r.trim();
        return r;
    }
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }

    friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
        if (a.is_zero() || b.is_zero()) return IntPoly();
        IntPoly r;
        r.off_ = a.off_ + b.off_;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, Int(0));
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (size_t j = 0; j < b.c_.size(); ++j) {
                if (b.c_[j] == 0) continue;
                r.c_[i + j] += a.c_[i] * b.c_[j];
            }
        }
        r.trim();
        return r;
    }

    IntPoly& operator+=(const IntPoly& o) { *this = *this + o; return *this; }
    IntPoly& operator-=(const IntPoly& o) { *this = *this - o; return *this; }
    IntPoly& operator*=(const IntPoly& o) { *this = *this * o; return *this; }

    friend IntPoly operator*(const IntPoly& a, const Int& k) {
        if (k == 0) return IntPoly();
        IntPoly r(a);
        for (auto& x : r.c_) x *= k;
        return r;
    }

    // Shift exponents by d (d may be negative; the result must stay a
    // polynomial, i.e. low_degree() + d >= 0).
    IntPoly shifted(long d) const {
        if (is_zero()) return IntPoly();
        if (off_ + d < 0) throw std::invalid_argument("IntPoly::shifted: negative valuation");
        IntPoly r(*this);
        r.off_ += d;
        return r;
    }

    // Exact division; throws if the division leaves a remainder.
    friend IntPoly divexact(const IntPoly& a, const IntPoly& b) {
        if (b.is_zero()) throw std::invalid_argument("IntPoly: division by zero");
        if (a.is_zero()) return IntPoly();
        IntPoly rem(a), quo;
        quo.off_ = 0;
        long dq = a.degree() - b.degree();
        if (dq < 0) throw std::invalid_argument("IntPoly: inexact division");
        quo.c_.assign(size_t(dq + 1), Int(0));
        while (!rem.is_zero() && rem.degree() >= b.degree()) {
            Int q = rem.leading() / b.leading();
            if (q * b.leading() != rem.leading())
                throw std::invalid_argument("IntPoly: inexact division");
            long e = rem.degree() - b.degree();
            quo.c_[size_t(e)] = q;
            rem -= b * IntPoly::monomial(q, e);
        }
        if (!rem.is_zero()) throw std::invalid_argument("IntPoly: inexact division");
        quo.trim();
        return quo;
    }

    Int content() const {
        Int g = 0;
        for (const auto& x : c_) {
            g = boost::multiprecision::gcd(g, x);
            if (g == 1) break;
        }
        return g;
    }

    IntPoly primitive_part() const {
        if (is_zero()) return IntPoly();
        Int g = content();
        if (leading() < 0) g = -g;
        IntPoly r(*this);
        for (auto& x : r.c_) x /= g;
        return r;
    }

    // gcd in Z[q], normalized to have positive leading coefficient.
    // Uses the primitive PRS; inputs here stay small enough that this is fine.
    friend IntPoly gcd(IntPoly a, IntPoly b) {
        if (a.is_zero()) return b.leading() < 0 ? -b : b;
        if (b.is_zero()) return a.leading() < 0 ? -a : a;
        Int cg = boost::multiprecision::gcd(a.content(), b.content());
        long sh = std::min(a.off_, b.off_);
        a.off_ -= sh;
        b.off_ -= sh;
        IntPoly A = a.primitive_part(), B = b.primitive_part();
        if (A.degree() < B.degree()) std::swap(A, B);
        while (!B.is_zero()) {
            // pseudo-remainder of A by B
            IntPoly R = A;
            while (!R.is_zero() && R.degree() >= B.degree()) {
                Int lb = B.leading();
                long e = R.degree() - B.degree();
                R = R * lb - B * IntPoly::monomial(R.leading(), e);
            }
            A = B;
            B = R.is_zero() ? IntPoly() : R.primitive_part();
        }
        IntPoly g = A * cg;
        g.off_ += sh;
        if (g.leading() < 0) g = -g;
        return g;
    }

    friend IntPoly pow(const IntPoly& a, long n) {
        if (n < 0) throw std::invalid_argument("IntPoly::pow: negative exponent");
        IntPoly r(1), base(a);
        while (n > 0) {
            if (n & 1) r *= base;
            base *= base;
            n >>= 1;
        }
        return r;
    }

    Rat eval(const Rat& q0) const {
        if (is_zero()) return Rat(0);
        Rat acc(0);
        for (size_t i = c_.size(); i-- > 0;) acc = acc * q0 + Rat(c_[i]);
        if (off_ > 0) {
            if (q0 == 0) return Rat(0);
            Rat p(1);
            for (long i = 0; i < off_; ++i) p *= q0;
            acc *= p;
        }
        return acc;
    }

    // Substitute q -> -q (negate odd-exponent coefficients).
    IntPoly subst_neg_q() const {
        IntPoly r(*this);
        for (size_t i = 0; i < r.c_.size(); ++i)
            if ((r.off_ + long(i)) % 2 != 0) r.c_[i] = -r.c_[i];
        return r;
    }

    bool even_powers_only() const {
        for (size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != 0 && (off_ + long(i)) % 2 != 0) return false;
        return true;
    }

    size_t term_count() const {
        size_t n = 0;
        for (const auto& x : c_) n += (x != 0);
        return n;
    }

    // Debug form only; canonical printing lives with the coefficient grammar.
    std::string debug_string() const {
        if (is_zero()) return "0";
        std::string s;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            if (!s.empty()) s += c_[i] > 0 ? "+" : "";
            s += c_[i].str() + "q^" + std::to_string(off_ + long(i));
        }
        return s;
    }

    template <typename H>
    void hash_into(H&& h) const {
        h(off_);
        for (const auto& x : c_) h(long(x % 0x7fffffff));
    }

private:
    void trim() {
        size_t b = 0, e = c_.size();
        while (e > b && c_[e - 1] == 0) --e;
        while (b < e && c_[b] == 0) ++b;
        if (b == e) { c_.clear(); off_ = 0; return; }
        if (b > 0) c_.erase(c_.begin(), c_.begin() + long(b));
        c_.resize(e - b);
        off_ += long(b);
    }

    long off_ = 0;
    std::vector<Int> c_;
};

}  // namespace qfa
