#pragma once

#include "qfa/fields.hpp"

#include <map>
#include <optional>

namespace qfa {

// Which deformation parameter a Fock slot uses: plain q or q^2.
// All oscillator rewriting below is written in terms of the slot base qb,
// realized as integer multiples of the exponent in the global q.
enum class Base : uint8_t { Q = 1, Q2 = 2 };

inline long base_unit(Base b) { return b == Base::Q ? 1 : 2; }
inline const char* base_name(Base b) { return b == Base::Q ? "q" : "q^2"; }

enum class OscLetter : uint8_t { APlus, AMinus, K };

// Normal-ordered oscillator monomial (a+)^p k^n (a-)^m with p*m = 0.
struct OscMono {
    long p = 0, n = 0, m = 0;

    auto operator<=>(const OscMono&) const = default;
};

// Element of the q-oscillator algebra in PBW coordinates.
//
// Defining relations (qb = base parameter of the slot):
//   k a+ = qb a+ k,   k a- = qb^-1 a- k,
//   a- a+ = 1 - qb^2 k^2,   a+ a- = 1 - k^2.
//
// Products are computed by absorbing letters into the normal form one at a
// time, which keeps every intermediate exactly normal ordered.
class OscExpr {
public:
    OscExpr() : base_(Base::Q) {}
    explicit OscExpr(Base b) : base_(b) {}

    static OscExpr zero(Base b) { return OscExpr(b); }
    static OscExpr scalar(Base b, const Coefficient& c) {
        OscExpr e(b);
        e.add_term(OscMono{0, 0, 0}, c);
        return e;
    }
    static OscExpr one(Base b) { return scalar(b, Coefficient::one()); }
    static OscExpr a_plus(Base b) {
        OscExpr e(b);
        e.add_term(OscMono{1, 0, 0}, Coefficient::one());
        return e;
    }
    static OscExpr a_minus(Base b) {
        OscExpr e(b);
        e.add_term(OscMono{0, 0, 1}, Coefficient::one());
        return e;
    }
    static OscExpr k(Base b, long n = 1) {
        OscExpr e(b);
        e.add_term(OscMono{0, n, 0}, Coefficient::one());
        return e;
    }
    static OscExpr letter(Base b, OscLetter l) {
        switch (l) {
            case OscLetter::APlus: return a_plus(b);
            case OscLetter::AMinus: return a_minus(b);
            default: return k(b);
        }
    }

    Base base() const { return base_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<OscMono, Coefficient>& terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }

    void add_term(const OscMono& m, const Coefficient& c) {
        if (m.p != 0 && m.m != 0)
            throw std::logic_error("OscExpr: monomial violates p*m = 0");
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend bool operator==(const OscExpr& x, const OscExpr& y) {
        return x.base_ == y.base_ && x.terms_ == y.terms_;
    }

    OscExpr operator-() const {
        OscExpr r(base_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    friend OscExpr operator+(const OscExpr& x, const OscExpr& y) {
        x.check_base(y);
        OscExpr r(x);
        for (const auto& [m, c] : y.terms_) r.add_term(m, c);
        return r;
    }
    friend OscExpr operator-(const OscExpr& x, const OscExpr& y) { return x + (-y); }

    friend OscExpr operator*(const OscExpr& x, const Coefficient& c) {
        OscExpr r(x.base_);
        if (c.is_zero()) return r;
        for (const auto& [m, k] : x.terms_) r.terms_.emplace(m, k * c);
        return r;
    }
    friend OscExpr operator*(const Coefficient& c, const OscExpr& x) { return x * c; }

    // Right-multiply a single PBW monomial by one letter; exact one-step
    // normal ordering derived from the defining relations.
    static void mono_times_letter(Base b, const OscMono& mo, OscLetter l,
                                  std::vector<std::pair<OscMono, Coefficient>>& out) {
        const long u = base_unit(b);
        switch (l) {
            case OscLetter::APlus:
                if (mo.m == 0) {
                    // (a+)^p k^n a+ = qb^n (a+)^(p+1) k^n
                    out.emplace_back(OscMono{mo.p + 1, mo.n, 0},
                                     Coefficient::q_pow(u * mo.n));
                } else {
                    // ... (a-)^m a+ = ...(a-)^(m-1) - qb^(2m) ... k^2 (a-)^(m-1)
                    out.emplace_back(OscMono{0, mo.n, mo.m - 1}, Coefficient::one());
                    out.emplace_back(OscMono{0, mo.n + 2, mo.m - 1},
                                     -Coefficient::q_pow(u * 2 * mo.m));
                }
                break;
            case OscLetter::K:
                // (a-)^m k = qb^m k (a-)^m
                out.emplace_back(OscMono{mo.p, mo.n + 1, mo.m},
                                 Coefficient::q_pow(u * mo.m));
                break;
            case OscLetter::AMinus:
                if (mo.p == 0) {
                    out.emplace_back(OscMono{0, mo.n, mo.m + 1}, Coefficient::one());
                } else {
                    // (a+)^p k^n a- = qb^-n [ (a+)^(p-1) k^n - (a+)^(p-1) k^(n+2) ]
                    out.emplace_back(OscMono{mo.p - 1, mo.n, 0},
                                     Coefficient::q_pow(-u * mo.n));
                    out.emplace_back(OscMono{mo.p - 1, mo.n + 2, 0},
                                     -Coefficient::q_pow(-u * mo.n));
                }
                break;
        }
    }

    OscExpr times_letter(OscLetter l) const {
        OscExpr r(base_);
        std::vector<std::pair<OscMono, Coefficient>> parts;
        for (const auto& [m, c] : terms_) {
            parts.clear();
            mono_times_letter(base_, m, l, parts);
            for (const auto& [pm, pc] : parts) r.add_term(pm, c * pc);
        }
        return r;
    }

    friend OscExpr operator*(const OscExpr& x, const OscExpr& y) {
        x.check_base(y);
        OscExpr r(x.base_);
        for (const auto& [ym, yc] : y.terms_) {
            // absorb (a+)^p k^n (a-)^m of the right factor letter by letter
            OscExpr acc = x;
            for (long i = 0; i < ym.p; ++i) acc = acc.times_letter(OscLetter::APlus);
            for (long i = 0; i < ym.n; ++i) acc = acc.times_letter(OscLetter::K);
            for (long i = 0; i < ym.m; ++i) acc = acc.times_letter(OscLetter::AMinus);
            for (const auto& [m, c] : acc.terms_) r.add_term(m, c * yc);
        }
        return r;
    }

    OscExpr& operator+=(const OscExpr& o) { *this = *this + o; return *this; }
    OscExpr& operator-=(const OscExpr& o) { *this = *this - o; return *this; }
    OscExpr& operator*=(const OscExpr& o) { *this = *this * o; return *this; }

    // Net occupation shift if it is the same for every monomial (p - m);
    // nullopt for the zero expression or mixed shifts.
    std::optional<long> uniform_shift() const {
        std::optional<long> s;
        for (const auto& [m, c] : terms_) {
            long d = m.p - m.m;
            if (!s) s = d;
            else if (*s != d) return std::nullopt;
        }
        return s;
    }

    // Apply to the Fock basis vector |occ>:
    //   k|j> = qb^j |j>,  a+|j> = |j+1>,  a-|j> = (1 - qb^(2j)) |j-1>.
    // Each PBW monomial maps |occ> to a single scaled basis vector.
    template <class F>
    void apply_to(const F& fld, long occ,
                  std::vector<std::pair<long, typename F::S>>& out) const {
        const long u = base_unit(base_);
        for (const auto& [mo, c] : terms_) {
            if (occ < mo.m) continue;  // (a-)^m annihilates: product below has a zero factor
            typename F::S s = fld.from_coeff(c);
            bool dead = false;
            for (long t = 0; t < mo.m; ++t) {
                long j = occ - t;
                if (j == 0) { dead = true; break; }
                s = fld.mul(s, fld.sub(fld.one(), fld.q_power(u * 2 * j)));
            }
            if (dead) continue;
            long mid = occ - mo.m;
            if (mo.n != 0) s = fld.mul(s, fld.q_power(u * mo.n * mid));
            out.emplace_back(mid + mo.p, std::move(s));
        }
    }

private:
    void check_base(const OscExpr& o) const {
        if (base_ != o.base_)
            throw std::logic_error("OscExpr: mixing oscillator bases q and q^2");
    }

    Base base_;
    std::map<OscMono, Coefficient> terms_;
};

inline OscExpr normal_order(Base b, const std::vector<OscLetter>& word) {
    OscExpr e = OscExpr::one(b);
    for (OscLetter l : word) e = e.times_letter(l);
    return e;
}

// Sparse vector in a single Fock space, exact symbolic coefficients.
struct FockVector {
    Base base = Base::Q;
    std::map<long, Coefficient> entries;

    static FockVector basis(Base b, long occ) {
        FockVector v;
        v.base = b;
        v.entries[occ] = Coefficient::one();
        return v;
    }

    void add(long occ, const Coefficient& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = entries.try_emplace(occ, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) entries.erase(it);
        }
    }

    friend bool operator==(const FockVector& x, const FockVector& y) {
        return x.base == y.base && x.entries == y.entries;
    }
};

inline FockVector apply(const OscExpr& op, const FockVector& v) {
    if (op.base() != v.base)
        throw std::logic_error("apply: oscillator base mismatch between operator and vector");
    FockVector r;
    r.base = v.base;
    SymbolicField F;
    std::vector<std::pair<long, Coefficient>> out;
    for (const auto& [occ, c] : v.entries) {
        out.clear();
        op.apply_to(F, occ, out);
        for (auto& [o2, s] : out) r.add(o2, c * s);
    }
    return r;
}

}  // namespace qfa
