#pragma once

#include "qfa/poly.hpp"

namespace qfa {

// Element of Q(q) held as num/den with num,den in Z[q], gcd(num,den) = 1
// (including integer content) and den having positive leading coefficient.
// This makes the representation of every field element unique, so equality
// is componentwise.
class RatFun {
public:
    RatFun() : den_(1) {}
    RatFun(long c) : num_(c), den_(1) {}
    explicit RatFun(Int c) : num_(std::move(c)), den_(1) {}
    explicit RatFun(IntPoly p) : num_(std::move(p)), den_(1) {}
    RatFun(IntPoly num, IntPoly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }
    explicit RatFun(const Rat& x)
        : num_(Int(boost::multiprecision::numerator(x))),
          den_(Int(boost::multiprecision::denominator(x))) {}

    static RatFun q_power(long e) {
        RatFun r;
        if (e >= 0) r.num_ = IntPoly::q_power(e);
        else { r.num_ = IntPoly(1); r.den_ = IntPoly::q_power(-e); }
        return r;
    }

    const IntPoly& num() const { return num_; }
    const IntPoly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_polynomial() const { return den_.is_one(); }

    friend bool operator==(const RatFun& a, const RatFun& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFun& a, const RatFun& b) { return !(a == b); }

    RatFun operator-() const {
        RatFun r(*this);
        r.num_ = -r.num_;
        return r;
    }

    friend RatFun operator+(const RatFun& a, const RatFun& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_ == b.den_) {
            RatFun r;
            r.num_ = a.num_ + b.num_;
            r.den_ = a.den_;
            r.normalize();
            return r;
        }
        RatFun r;
        r.num_ = a.num_ * b.den_ + b.num_ * a.den_;
        r.den_ = a.den_ * b.den_;
        r.normalize();
        return r;
    }
    friend RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }

    friend RatFun operator*(const RatFun& a, const RatFun& b) {
        if (a.is_zero() || b.is_zero()) return RatFun();
        if (a.den_.is_one() && b.den_.is_one()) {
            RatFun r;
            r.num_ = a.num_ * b.num_;
            return r;
        }
        // cross-reduce before multiplying to keep intermediates small
        IntPoly g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
        RatFun r;
        r.num_ = divexact(a.num_, g1) * divexact(b.num_, g2);
        r.den_ = divexact(a.den_, g2) * divexact(b.den_, g1);
        r.normalize();
        return r;
    }

    RatFun inverse() const {
        if (is_zero()) throw std::domain_error("RatFun: inverse of zero");
        RatFun r;
        r.num_ = den_;
        r.den_ = num_;
        if (r.den_.leading() < 0) { r.num_ = -r.num_; r.den_ = -r.den_; }
        return r;
    }

    friend RatFun operator/(const RatFun& a, const RatFun& b) { return a * b.inverse(); }

    RatFun& operator+=(const RatFun& o) { *this = *this + o; return *this; }
    RatFun& operator-=(const RatFun& o) { *this = *this - o; return *this; }
    RatFun& operator*=(const RatFun& o) { *this = *this * o; return *this; }
    RatFun& operator/=(const RatFun& o) { *this = *this / o; return *this; }

    friend RatFun pow(const RatFun& a, long n) {
        if (n < 0) return pow(a.inverse(), -n);
        RatFun r(1), base(a);
        while (n > 0) {
            if (n & 1) r *= base;
            base *= base;
            n >>= 1;
        }
        return r;
    }

    Rat eval(const Rat& q0) const {
        Rat d = den_.eval(q0);
        if (d == 0) throw std::domain_error("RatFun: evaluation point is a pole");
        return num_.eval(q0) / d;
    }

    RatFun subst_neg_q() const {
        RatFun r;
        r.num_ = num_.subst_neg_q();
        r.den_ = den_.subst_neg_q();
        r.normalize();
        return r;
    }

    size_t complexity() const { return num_.term_count() + den_.term_count(); }

private:
    void normalize() {
        if (den_.is_zero()) throw std::domain_error("RatFun: zero denominator");
        if (num_.is_zero()) { den_ = IntPoly(1); return; }
        if (!den_.is_one()) {
            IntPoly g = gcd(num_, den_);
            if (!g.is_one()) {
                num_ = divexact(num_, g);
                den_ = divexact(den_, g);
            }
        }
        if (den_.leading() < 0) { num_ = -num_; den_ = -den_; }
    }

    IntPoly num_, den_;
};

}  // namespace qfa
