#pragma once

#include <algorithm>
#include <random>
#include <sstream>

#include "qfa/intertwiner.hpp"
#include "qfa/report.hpp"

namespace qfa {

// ---------------------------------------------------------------------------
// Placements and equation specifications.
//
// An equation is an identity between two products of solved tensors acting on
// a common ambient tensor product of Fock slots.  Each factor is a Placement:
// a tensor kind plus the list of ambient slots its legs attach to, given in
// the tensor's own leg order with 1-based ambient numbering (matching the
// usual subscript notation, e.g. S_{123} or J_{3579}).
//
// In a product the rightmost factor acts first, as with composition of
// operators.
// ---------------------------------------------------------------------------

struct Placement {
    TensorKind kind;
    std::vector<int> slots;  // 1-based ambient slot numbers, one per tensor leg

    std::string str() const {
        std::string s = kind_name(kind);
        for (int x : slots) s += std::to_string(x);
        return s;
    }
};

struct EquationSpec {
    std::string name;
    SlotSignature ambient;
    // Factors listed left to right as printed; the last entry acts first.
    std::vector<Placement> left;
    std::vector<Placement> right;

    int nslots() const { return int(ambient.size()); }

    // Every leg must land on a distinct in-range slot whose base matches the
    // tensor's own signature.  For the three-slot tensor a reversed slot list
    // is legal (it names the same operator because its entries are invariant
    // under simultaneous reversal of the in and out triples); the four-slot
    // tensor has an asymmetric signature, so only the forward order can pass.
    void validate() const {
        for (const auto* side : {&left, &right})
            for (const Placement& p : *side) {
                const TensorShape shape = TensorShape::of(p.kind);
                if (int(p.slots.size()) != shape.nslots())
                    throw std::logic_error(name + ": leg count mismatch in " + p.str());
                std::vector<int> seen;
                for (int t = 0; t < shape.nslots(); ++t) {
                    int a = p.slots[size_t(t)];
                    if (a < 1 || a > nslots())
                        throw std::logic_error(name + ": slot out of range in " + p.str());
                    if (std::count(seen.begin(), seen.end(), a))
                        throw std::logic_error(name + ": repeated slot in " + p.str());
                    seen.push_back(a);
                    if (ambient[size_t(a - 1)] != shape.sig[size_t(t)])
                        throw std::logic_error(name + ": base mismatch in " + p.str() +
                                               " at ambient slot " + std::to_string(a));
                }
            }
    }

    // --- The three verified identities -------------------------------------

    // Tetrahedron identity for the three-slot tensor, on six q^2 slots:
    //   S_356 S_246 S_145 S_123 = S_123 S_145 S_246 S_356.
    static EquationSpec tetrahedron() {
        EquationSpec e;
        e.name = "tetrahedron";
        e.ambient = SlotSignature(6, Base::Q2);
        auto S = [](std::vector<int> v) { return Placement{TensorKind::S, std::move(v)}; };
        e.left = {S({3, 5, 6}), S({2, 4, 6}), S({1, 4, 5}), S({1, 2, 3})};
        e.right = {S({1, 2, 3}), S({1, 4, 5}), S({2, 4, 6}), S({3, 5, 6})};
        e.validate();
        return e;
    }

    static SlotSignature nine_slot_signature() {
        return {Base::Q, Base::Q2, Base::Q, Base::Q2, Base::Q2,
                Base::Q2, Base::Q, Base::Q2, Base::Q2};
    }

    // Reflection identity coupling both tensors, on nine slots
    // (q, q^2, q, q^2, q^2, q^2, q, q^2, q^2):
    //   S_456 S_489 J_3579 S_269 S_258 J_1678 J_1234
    //     = J_1234 J_1678 S_258 S_269 J_3579 S_489 S_456.
    static EquationSpec reflection() {
        EquationSpec e;
        e.name = "reflection";
        e.ambient = nine_slot_signature();
        auto S = [](std::vector<int> v) { return Placement{TensorKind::S, std::move(v)}; };
        auto J = [](std::vector<int> v) { return Placement{TensorKind::J, std::move(v)}; };
        e.left = {S({4, 5, 6}), S({4, 8, 9}), J({3, 5, 7, 9}), S({2, 6, 9}),
                  S({2, 5, 8}), J({1, 6, 7, 8}), J({1, 2, 3, 4})};
        e.right = {J({1, 2, 3, 4}), J({1, 6, 7, 8}), S({2, 5, 8}), S({2, 6, 9}),
                   J({3, 5, 7, 9}), S({4, 8, 9}), S({4, 5, 6})};
        e.validate();
        return e;
    }

    // The same identity conjugated by S_456 (using that the three-slot tensor
    // is an involution), written with the reversed slot list S_654:
    //   S_489 J_3579 S_269 S_258 J_1678 J_1234 S_654
    //     = S_654 J_1234 J_1678 S_258 S_269 J_3579 S_489.
    static EquationSpec reflection_rotated() {
        EquationSpec e;
        e.name = "reflection-rotated";
        e.ambient = nine_slot_signature();
        auto S = [](std::vector<int> v) { return Placement{TensorKind::S, std::move(v)}; };
        auto J = [](std::vector<int> v) { return Placement{TensorKind::J, std::move(v)}; };
        e.left = {S({4, 8, 9}), J({3, 5, 7, 9}), S({2, 6, 9}), S({2, 5, 8}),
                  J({1, 6, 7, 8}), J({1, 2, 3, 4}), S({6, 5, 4})};
        e.right = {S({6, 5, 4}), J({1, 2, 3, 4}), J({1, 6, 7, 8}), S({2, 5, 8}),
                   S({2, 6, 9}), J({3, 5, 7, 9}), S({4, 8, 9})};
        e.validate();
        return e;
    }
};

// ---------------------------------------------------------------------------
// Equation verifier.  Applies placements of the two solved tensors to sparse
// ambient vectors and compares both sides of an EquationSpec on a window of
// basis vectors (all occupations <= window) or on an explicit vector list.
// ---------------------------------------------------------------------------

template <class F>
class EquationVerifier {
  public:
    using S = typename F::S;
    using Vec = TensorVec<F>;

    EquationVerifier(const F& fld, IntertwinerTensor<F>& s3,
                     IntertwinerTensor<F>* j4 = nullptr)
        : fld_(fld), s3_(&s3), j4_(j4) {}

    // Apply one placed tensor to a sparse vector.  Each output term stays in
    // the same conserved-weight block of the placement as its input term;
    // this is checked on every emitted term.
    Vec apply_placement(const Placement& p, const Vec& v) {
        const TensorShape shape = TensorShape::of(p.kind);
        IntertwinerTensor<F>* T = (p.kind == TensorKind::S) ? s3_ : j4_;
        if (!T)
            throw std::logic_error("equation uses a tensor that was not supplied: " +
                                   p.str());
        std::vector<int> sl(p.slots.size());
        for (size_t t = 0; t < p.slots.size(); ++t) sl[t] = p.slots[t] - 1;
        Vec out;
        for (const auto& [idx, val] : v.terms) {
            MultiIndex sub = idx.extract(sl);
            BlockKey key = shape.key_of(sub);
            note_block(p.kind, key);
            const auto& blk = T->block(key);
            int c = blk.pos.at(sub);
            for (int r = 0; r < blk.size(); ++r) {
                const S& e = blk.col[size_t(c)][size_t(r)];
                if (fld_.is_zero(e)) continue;
                if (shape.key_of(blk.basis[size_t(r)]) != key)
                    throw std::logic_error("conservation violated in " + p.str());
                out.add(fld_, idx.replace(sl, blk.basis[size_t(r)]), fld_.mul(e, val));
            }
        }
        return out;
    }

    // Apply a printed product (rightmost factor first).
    Vec apply_side(const std::vector<Placement>& side, Vec v) {
        for (auto it = side.rbegin(); it != side.rend(); ++it)
            v = apply_placement(*it, v);
        return v;
    }

    // Compare both sides on one basis vector; returns an empty string on
    // agreement, else a witness description.
    std::string check_vector(const EquationSpec& spec, const MultiIndex& m) {
        Vec in = Vec::basis(m, fld_);
        Vec lhs = apply_side(spec.left, in);
        Vec rhs = apply_side(spec.right, std::move(in));
        for (const auto& [k, val] : rhs.terms) lhs.add(fld_, k, fld_.neg(val));
        if (lhs.terms.empty()) return {};
        const auto& [k, d] = *lhs.terms.begin();
        std::string diff = fld_.str(d);
        if (diff.size() > 60) diff = diff.substr(0, 57) + "...";
        return "in=" + m.str(spec.nslots()) + ",out=" + k.str(spec.nslots()) +
               ",lhs-rhs=" + diff;
    }

    CheckReport verify(const EquationSpec& spec, long window) {
        std::vector<MultiIndex> vs;
        MultiIndex m;
        enumerate(spec.nslots(), window, 0, m, vs);
        return verify_vectors(spec, vs, window);
    }

    CheckReport verify_vectors(const EquationSpec& spec,
                               const std::vector<MultiIndex>& vs, long window) {
        spec.validate();
        max_s_ = max_j_ = BlockKey{0, 0};
        CheckReport rep;
        rep.name = spec.name;
        rep.window = window;
        rep.mode = fld_.mode_tag();
        for (const MultiIndex& m : vs) {
            std::string w = check_vector(spec, m);
            ++rep.vectors;
            if (!w.empty()) {
                rep.pass = false;
                rep.witness = w;
                break;
            }
        }
        rep.max_s_block = max_s_;
        rep.max_j_block = max_j_;
        return rep;
    }

    // Deterministically sample `count` distinct occupation vectors with
    // entries <= cap, excluding the all-zero vector (it is covered by every
    // windowed sweep).
    static std::vector<MultiIndex> sample_vectors(int nslots, long cap, int count,
                                                  uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<long> occ(0, cap);
        std::vector<MultiIndex> out;
        std::unordered_map<MultiIndex, bool, MultiIndexHash> seen;
        while (int(out.size()) < count) {
            MultiIndex m;
            long tot = 0;
            for (int s = 0; s < nslots; ++s) {
                long o = occ(rng);
                tot += o;
                m = m.with(s, o);
            }
            if (tot == 0 || count_guard(seen, m)) continue;
            out.push_back(m);
        }
        return out;
    }

  private:
    static bool count_guard(std::unordered_map<MultiIndex, bool, MultiIndexHash>& seen,
                            const MultiIndex& m) {
        auto [it, fresh] = seen.try_emplace(m, true);
        (void)it;
        return !fresh;
    }

    static void enumerate(int nslots, long window, int s, MultiIndex& m,
                          std::vector<MultiIndex>& out) {
        if (s == nslots) {
            out.push_back(m);
            return;
        }
        for (long o = 0; o <= window; ++o) {
            m = m.with(s, o);
            enumerate(nslots, window, s + 1, m, out);
        }
        m = m.with(s, 0);
    }

    void note_block(TensorKind k, const BlockKey& b) {
        BlockKey& mx = (k == TensorKind::S) ? max_s_ : max_j_;
        if (b.level() > mx.level() || (b.level() == mx.level() && mx < b)) mx = b;
    }

    const F& fld_;
    IntertwinerTensor<F>* s3_;
    IntertwinerTensor<F>* j4_;
    BlockKey max_s_{0, 0};
    BlockKey max_j_{0, 0};
};

// ---------------------------------------------------------------------------
// Symmetry checks for the three-slot tensor: it is an involution and its
// entries are invariant under simultaneous reversal of both index triples.
// Checked on every block with P, Q <= max_block.
// ---------------------------------------------------------------------------

template <class F>
inline std::vector<CheckReport> verify_s_symmetries(IntertwinerTensor<F>& s3,
                                                    long max_block) {
    const F& fld = s3.field();
    CheckReport inv, rev;
    inv.name = "s-involution";
    rev.name = "s-reversal";
    inv.window = rev.window = max_block;
    inv.mode = rev.mode = fld.mode_tag();
    const std::vector<int> flip{2, 1, 0};
    for (long P = 0; P <= max_block; ++P)
        for (long Q = 0; Q <= max_block; ++Q) {
            const auto& blk = s3.block(BlockKey{P, Q});
            int n = blk.size();
            for (int c = 0; c < n; ++c) {
                // involution: column c of the square must be e_c
                for (int r = 0; r < n; ++r) {
                    typename F::S acc = fld.zero();
                    for (int k = 0; k < n; ++k)
                        fld.madd(acc, blk.col[size_t(k)][size_t(r)],
                                 blk.col[size_t(c)][size_t(k)]);
                    bool want_one = (r == c);
                    bool ok = want_one ? fld.eq(acc, fld.one()) : fld.is_zero(acc);
                    if (!ok && inv.pass) {
                        inv.pass = false;
                        inv.witness = "block=" + blk.key.str() +
                                      ",out=" + blk.basis[size_t(r)].str(3) +
                                      ",in=" + blk.basis[size_t(c)].str(3);
                    }
                }
                // reversal: entry(out,in) == entry(rev out, rev in)
                for (int r = 0; r < n; ++r) {
                    MultiIndex ro = blk.basis[size_t(r)].extract(flip);
                    MultiIndex ri = blk.basis[size_t(c)].extract(flip);
                    const auto& mirror = s3.block(s3.key_of(ri));
                    const auto& direct = blk.col[size_t(c)][size_t(r)];
                    const auto& mirrored =
                        mirror.col[size_t(mirror.pos.at(ri))][size_t(mirror.pos.at(ro))];
                    if (!fld.eq(direct, mirrored) && rev.pass) {
                        rev.pass = false;
                        rev.witness = "block=" + blk.key.str() +
                                      ",out=" + blk.basis[size_t(r)].str(3) +
                                      ",in=" + blk.basis[size_t(c)].str(3);
                    }
                }
                inv.vectors++;
                rev.vectors++;
            }
        }
    return {inv, rev};
}

}  // namespace qfa
