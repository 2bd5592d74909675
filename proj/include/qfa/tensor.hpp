#pragma once

#include "qfa/fock.hpp"

#include <unordered_map>
#include <vector>

namespace qfa {

// Occupation multi-index over up to 16 Fock slots, packed 8 bits per slot.
// Slot 0 sits in the lowest byte; lexicographic comparisons go through
// lex_less, not the raw packed value.
struct MultiIndex {
    unsigned __int128 v = 0;

    static MultiIndex of(std::initializer_list<long> occs) {
        MultiIndex m;
        int s = 0;
        for (long o : occs) m = m.with(s++, o);
        return m;
    }
    static MultiIndex from(const std::vector<long>& occs) {
        MultiIndex m;
        for (size_t s = 0; s < occs.size(); ++s) m = m.with(int(s), occs[s]);
        return m;
    }

    long get(int slot) const { return long((v >> (8 * slot)) & 0xff); }

    MultiIndex with(int slot, long val) const {
        if (val < 0 || val > 255)
            throw std::out_of_range("MultiIndex: occupation out of range");
        MultiIndex m;
        unsigned __int128 mask = (unsigned __int128)0xff << (8 * slot);
        m.v = (v & ~mask) | ((unsigned __int128)(uint8_t)val << (8 * slot));
        return m;
    }

    MultiIndex extract(const std::vector<int>& slots) const {
        MultiIndex m;
        for (size_t i = 0; i < slots.size(); ++i) m = m.with(int(i), get(slots[i]));
        return m;
    }

    MultiIndex replace(const std::vector<int>& slots, MultiIndex sub) const {
        MultiIndex m = *this;
        for (size_t i = 0; i < slots.size(); ++i) m = m.with(slots[i], sub.get(int(i)));
        return m;
    }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.v == b.v; }
    friend bool operator!=(const MultiIndex& a, const MultiIndex& b) { return a.v != b.v; }

    static bool lex_less(const MultiIndex& a, const MultiIndex& b, int nslots) {
        for (int s = 0; s < nslots; ++s) {
            long x = a.get(s), y = b.get(s);
            if (x != y) return x < y;
        }
        return false;
    }

    std::string str(int nslots) const {
        std::string s = "(";
        for (int i = 0; i < nslots; ++i) {
            if (i) s += ",";
            s += std::to_string(get(i));
        }
        return s + ")";
    }
};

struct MultiIndexHash {
    size_t operator()(const MultiIndex& m) const {
        uint64_t lo = uint64_t(m.v), hi = uint64_t(m.v >> 64);
        uint64_t x = lo ^ (hi * 0x9e3779b97f4a7c15ULL);
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebULL;
        x ^= x >> 31;
        return size_t(x);
    }
};

using SlotSignature = std::vector<Base>;

inline std::string signature_str(const SlotSignature& sig) {
    std::string s = "(";
    for (size_t i = 0; i < sig.size(); ++i) {
        if (i) s += ",";
        s += base_name(sig[i]);
    }
    return s + ")";
}

// Sparse vector on a tensor product of Fock slots; no zero entries stored.
template <class F>
struct TensorVec {
    using S = typename F::S;
    std::unordered_map<MultiIndex, S, MultiIndexHash> terms;

    static TensorVec basis(MultiIndex m, const F& fld) {
        TensorVec v;
        v.terms.emplace(m, fld.one());
        return v;
    }

    void add(const F& fld, const MultiIndex& k, const S& val) {
        if (fld.is_zero(val)) return;
        auto [it, fresh] = terms.try_emplace(k, val);
        if (!fresh) {
            it->second = fld.add(it->second, val);
            if (fld.is_zero(it->second)) terms.erase(it);
        }
    }

    bool operator==(const TensorVec& o) const { return terms == o.terms; }
};

// Operator on a tensor product of Fock slots, stored as a sum of pure tensor
// products of oscillator expressions (one factor per slot).  This is how
// images of coproducts under a word of representations arrive naturally: each
// path through the coproduct contributes one product term.
class TensorOp {
public:
    struct Term {
        std::vector<OscExpr> factors;
    };

    TensorOp() = default;
    explicit TensorOp(SlotSignature sig) : sig_(std::move(sig)) {}

    const SlotSignature& signature() const { return sig_; }
    const std::vector<Term>& terms() const { return terms_; }
    int slots() const { return int(sig_.size()); }

    void add_product(std::vector<OscExpr> factors) {
        if (factors.size() != sig_.size())
            throw std::logic_error("TensorOp: factor count does not match signature");
        for (size_t s = 0; s < factors.size(); ++s) {
            if (factors[s].base() != sig_[s])
                throw std::logic_error("TensorOp: slot base mismatch at slot " +
                                       std::to_string(s));
            if (factors[s].is_zero()) return;  // whole product vanishes
        }
        terms_.push_back(Term{std::move(factors)});
    }

    TensorOp reversed() const {
        SlotSignature rsig(sig_.rbegin(), sig_.rend());
        TensorOp r(rsig);
        for (const auto& t : terms_) {
            std::vector<OscExpr> f(t.factors.rbegin(), t.factors.rend());
            r.terms_.push_back(Term{std::move(f)});
        }
        return r;
    }

    // Accumulate scale * (this |in>) into out.
    template <class F>
    void apply_basis(const F& fld, const MultiIndex& in, const typename F::S& scale,
                     TensorVec<F>& out) const {
        using S = typename F::S;
        std::vector<std::pair<long, S>> slot_out;
        std::vector<std::pair<MultiIndex, S>> partial, next;
        for (const auto& t : terms_) {
            partial.assign(1, {in, scale});
            bool dead = false;
            for (int s = 0; s < slots() && !dead; ++s) {
                slot_out.clear();
                t.factors[size_t(s)].apply_to(fld, in.get(s), slot_out);
                if (slot_out.empty()) { dead = true; break; }
                next.clear();
                for (const auto& [idx, val] : partial)
                    for (const auto& [occ, c] : slot_out)
                        next.emplace_back(idx.with(s, occ), fld.mul(val, c));
                partial.swap(next);
            }
            if (dead) continue;
            for (auto& [idx, val] : partial) out.add(fld, idx, val);
        }
    }

    template <class F>
    TensorVec<F> apply(const F& fld, const TensorVec<F>& v) const {
        TensorVec<F> out;
        for (const auto& [idx, val] : v.terms) apply_basis(fld, idx, val, out);
        return out;
    }

    // Canonical expansion in the joint PBW basis; two operator sums are equal
    // iff these maps agree.
    std::map<std::vector<OscMono>, Coefficient> canonical_form() const {
        std::map<std::vector<OscMono>, Coefficient> out;
        std::vector<std::pair<std::vector<OscMono>, Coefficient>> partial, next;
        for (const auto& t : terms_) {
            partial.assign(1, {{}, Coefficient::one()});
            for (int s = 0; s < slots(); ++s) {
                next.clear();
                for (const auto& [mons, c] : partial)
                    for (const auto& [m, mc] : t.factors[size_t(s)].terms()) {
                        auto mm = mons;
                        mm.push_back(m);
                        next.emplace_back(std::move(mm), c * mc);
                    }
                partial.swap(next);
            }
            for (auto& [mons, c] : partial) {
                auto [it, fresh] = out.try_emplace(mons, c);
                if (!fresh) {
                    it->second += c;
                    if (it->second.is_zero()) out.erase(it);
                }
            }
        }
        return out;
    }

    bool equals(const TensorOp& o) const {
        return sig_ == o.sig_ && canonical_form() == o.canonical_form();
    }

    // Net occupation shift per slot if every term agrees, used by the block
    // solvers to classify generators as raising/lowering/diagonal.
    std::optional<std::vector<long>> uniform_slot_shift() const {
        std::optional<std::vector<long>> res;
        for (const auto& t : terms_) {
            std::vector<long> sh;
            for (const auto& f : t.factors) {
                auto s = f.uniform_shift();
                if (!s) return std::nullopt;
                sh.push_back(*s);
            }
            if (!res) res = sh;
            else if (*res != sh) return std::nullopt;
        }
        return res;
    }

private:
    SlotSignature sig_;
    std::vector<Term> terms_;
};

}  // namespace qfa
