#pragma once

// Intertwiners between coproduct words of the fundamental representations.
//
// Two operators are produced here, both determined (up to one overall scalar,
// pinned by vacuum |0...0> -> |0...0| with value 1) by a linear intertwining
// equation:
//
//   kind S: X on (F_{q^2})^{x3} with  pi_{212}(D f) X = X rev(pi_{121}(D f)),
//   kind J: X on F_q x F_{q^2} x F_q x F_{q^2} with
//           pi_{3232}(D f) X = X rev(pi_{2323}(D f)),
//
// for all 49 algebra generators f = t_uv, where rev is slot reversal.  Both
// operators are block diagonal for the key  (P, Q) = (weighted occupation
// sums); blocks are solved exactly, level by level, from the equations that
// raise lower blocks into the current one, then every remaining equation
// touching solved blocks is verified exactly.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <vector>

#include "qfa/fields.hpp"
#include "qfa/linsolve.hpp"
#include "qfa/params.hpp"
#include "qfa/reps.hpp"
#include "qfa/tensor.hpp"

namespace qfa {

enum class TensorKind { S, J };

inline const char* kind_name(TensorKind k) { return k == TensorKind::S ? "S" : "J"; }

struct BlockKey {
    long P = 0, Q = 0;

    auto operator<=>(const BlockKey&) const = default;
    long level() const { return P + Q; }
    std::string str() const { return "(" + std::to_string(P) + "," + std::to_string(Q) + ")"; }
};

// Slot layout and conserved key of one tensor kind.
struct TensorShape {
    TensorKind kind;
    SlotSignature sig;
    std::vector<long> pw, qw;  // per-slot weights defining P and Q

    static TensorShape of(TensorKind k) {
        if (k == TensorKind::S)
            return {k, {Base::Q2, Base::Q2, Base::Q2}, {1, 1, 0}, {0, 1, 1}};
        return {k, {Base::Q, Base::Q2, Base::Q, Base::Q2}, {1, 2, 1, 0}, {0, 1, 1, 1}};
    }

    int nslots() const { return int(sig.size()); }

    BlockKey key_of(const MultiIndex& m) const {
        BlockKey b;
        for (int s = 0; s < nslots(); ++s) {
            b.P += pw[size_t(s)] * m.get(s);
            b.Q += qw[size_t(s)] * m.get(s);
        }
        return b;
    }

    BlockKey shift_of_monomials(const std::vector<OscMono>& mons) const {
        BlockKey b;
        for (int s = 0; s < nslots(); ++s) {
            long d = mons[size_t(s)].p - mons[size_t(s)].m;
            b.P += pw[size_t(s)] * d;
            b.Q += qw[size_t(s)] * d;
        }
        return b;
    }

    // All occupation tuples with the given key, lexicographically sorted.
    std::vector<MultiIndex> block_basis(const BlockKey& b) const {
        std::vector<MultiIndex> out;
        if (b.P < 0 || b.Q < 0) return out;
        if (kind == TensorKind::S) {
            for (long j = 0; j <= std::min(b.P, b.Q); ++j)
                out.push_back(MultiIndex::of({b.P - j, j, b.Q - j}));
        } else {
            for (long j = 0; 2 * j <= b.P && j <= b.Q; ++j)
                for (long k = 0; k + 2 * j <= b.P && j + k <= b.Q; ++k)
                    out.push_back(MultiIndex::of({b.P - 2 * j - k, j, k, b.Q - j - k}));
        }
        std::sort(out.begin(), out.end(), [&](const MultiIndex& x, const MultiIndex& y) {
            return MultiIndex::lex_less(x, y, nslots());
        });
        return out;
    }
};

// ---------------------------------------------------------------------------
// Closed form for the undressed 3-slot tensor at canonical parameters:
//
//   S^{abc}_{ijk} = d(i+j, a+b) d(j+k, b+c) *
//     sum_{l+u=b, l,u>=0} (-1)^l q^{2i(c-j) + 2(k+1)l + 2u(u-k)}
//       * P(i) P(j) P(c+u) / (P(u) P(l) P(i-u) P(j-l) P(c)),
//
// with P(n) = prod_{t=1..n} (1 - q^{4t}) and a summand dropped whenever any
// argument is negative.
// ---------------------------------------------------------------------------

inline IntPoly q4_pochhammer(long n) {
    IntPoly r = IntPoly::monomial(1, 0);
    for (long t = 1; t <= n; ++t) r = r * (IntPoly::monomial(1, 0) - IntPoly::monomial(1, 4 * t));
    return r;
}

inline Coefficient closed_form_s_entry(long a, long b, long c, long i, long j, long k) {
    if (a < 0 || b < 0 || c < 0 || i < 0 || j < 0 || k < 0) return Coefficient::zero();
    if (i + j != a + b || j + k != b + c) return Coefficient::zero();
    Coefficient total = Coefficient::zero();
    for (long l = 0; l <= b; ++l) {
        long u = b - l;
        if (i - u < 0 || j - l < 0) continue;
        IntPoly num = q4_pochhammer(i) * q4_pochhammer(j) * q4_pochhammer(c + u);
        IntPoly den = q4_pochhammer(u) * q4_pochhammer(l) * q4_pochhammer(i - u) *
                      q4_pochhammer(j - l) * q4_pochhammer(c);
        long e = 2 * i * (c - j) + 2 * (k + 1) * l + 2 * u * (u - k);
        Coefficient term{RatFun(num, den) * RatFun::q_power(e)};
        if (l % 2 == 1) term = -term;
        total += term;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Dressing factors: the solved tensor at parameters p equals the canonical
// one multiplied entrywise by a unit monomial in the parameters.
// ---------------------------------------------------------------------------

inline Coefficient s_dressing(const ParameterSet& p, const MultiIndex& out,
                              const MultiIndex& in) {
    long a = out.get(0), b = out.get(1), c = out.get(2);
    long j = in.get(1), k = in.get(2);
    (void)c;
    Coefficient base = -p.alpha1 * p.beta1 * Coefficient::q_pow(-2);
    return pow(base, j) * pow(p.mu1, a - j + k) * pow(p.mu2, b - a - k) * pow(p.sigma1, b + j);
}

inline Coefficient j_dressing(const ParameterSet& p, const MultiIndex& out,
                              const MultiIndex& in) {
    long b = out.get(1), c = out.get(2);
    long j = in.get(1), k = in.get(2), l = in.get(3);
    return pow(p.epsilon(), b + j + l) * pow(p.rho(), b + c) *
           pow(p.sigma() * p.mu2, c - k) * pow(p.mu3, b - j);
}

// Grading that controls the q-parity of the 4-slot tensor's entries: every
// nonzero entry of the canonical tensor is a polynomial in q whose exponents
// all share the parity of grade(out) + grade(in).  On the two base-q slots a
// quantum pair counts once; on the weight-two base-q^2 slot each quantum
// counts once.
inline long j_parity_grade(const MultiIndex& m) {
    return (m.get(0) / 2 + m.get(1) + m.get(2) / 2) & 1L;
}

// ---------------------------------------------------------------------------
// Block-diagonal solved tensor.
// ---------------------------------------------------------------------------

template <class F>
struct IntertwinerBlock {
    BlockKey key;
    std::vector<MultiIndex> basis;
    std::unordered_map<MultiIndex, int, MultiIndexHash> pos;
    // col[c][r] = entry with in-state basis[c], out-state basis[r]
    std::vector<std::vector<typename F::S>> col;

    int size() const { return int(basis.size()); }
};

template <class F>
class IntertwinerTensor {
  public:
    using S = typename F::S;
    using IBlock = IntertwinerBlock<F>;

    IntertwinerTensor(TensorKind kind, const ParameterSet& par, F fld)
        : shape_(TensorShape::of(kind)), par_(par), fld_(std::move(fld)) {
        par_.validate();
        par_.sigma();  // the compatible-family signs must all be defined
        par_.rho();
        par_.epsilon();
        build_ops();
    }

    TensorKind kind() const { return shape_.kind; }
    const TensorShape& shape() const { return shape_; }
    const ParameterSet& params() const { return par_; }
    const F& field() const { return fld_; }
    BlockKey key_of(const MultiIndex& m) const { return shape_.key_of(m); }

    // Refuse to solve blocks above this total level (guards runaway recursion
    // when a caller asks for out-of-window data).
    void set_max_level(long lvl) { max_level_ = lvl; }

    const IBlock& block(const BlockKey& b) {
        auto it = memo_.find(b);
        if (it != memo_.end()) return *it->second;
        if (b.P < 0 || b.Q < 0)
            throw std::invalid_argument("block key out of domain " + b.str());
        if (max_level_ && b.level() > *max_level_)
            throw std::runtime_error(std::string(kind_name(kind())) +
                                     ": block level cap exceeded at " + b.str());
        if (!solving_.insert(b).second)
            throw std::logic_error("cyclic block dependency at " + b.str());
        auto blk = std::make_unique<IBlock>();
        solve_block(*blk, b);
        IBlock* p = blk.get();
        memo_.emplace(b, std::move(blk));
        verify_block(*p);
        solving_.erase(b);
        return *p;
    }

    S entry(const MultiIndex& out, const MultiIndex& in) {
        BlockKey bo = key_of(out), bi = key_of(in);
        if (bo != bi) return fld_.zero();
        const IBlock& blk = block(bi);
        int r = blk.pos.at(out), c = blk.pos.at(in);
        return blk.col[size_t(c)][size_t(r)];
    }

    S undressed_entry(const MultiIndex& out, const MultiIndex& in) {
        S e = entry(out, in);
        Coefficient d = (kind() == TensorKind::S) ? s_dressing(par_, out, in)
                                                  : j_dressing(par_, out, in);
        return fld_.div(e, fld_.from_coeff(d));
    }

    // Visit nonzero entries of the column at `in`: f(out_index, value).
    template <class CB>
    void for_column(const MultiIndex& in, CB&& f) {
        const IBlock& blk = block(key_of(in));
        int c = blk.pos.at(in);
        for (int r = 0; r < blk.size(); ++r)
            if (!fld_.is_zero(blk.col[size_t(c)][size_t(r)]))
                f(blk.basis[size_t(r)], blk.col[size_t(c)][size_t(r)]);
    }

    std::vector<BlockKey> solved_keys() const {
        std::vector<BlockKey> ks;
        for (const auto& [k, v] : memo_) ks.push_back(k);
        return ks;
    }

    // -----------------------------------------------------------------------
    // Uniqueness certificate.  For a solved block B, assemble the full local
    // linear system on the unknowns {block entries} + {scalar c tying the
    // block scale to the already-solved neighbour blocks} and compute its
    // nullity.  Nullity 1 means the intertwiner block is unique up to the one
    // global scalar.
    //
    // The symbolic nullity is certified through evaluation: specializing q
    // can only lower the rank, hence only raise the nullity, and the solved
    // block itself provides a nonzero symbolic solution (nullity >= 1).  So
    // an evaluated nullity of 1 pins the symbolic nullity to exactly 1.  If
    // every evaluation point is degenerate the system is eliminated
    // symbolically instead.
    // -----------------------------------------------------------------------
    struct UniquenessReport {
        long nullity = -1;
        std::string method;
    };

    UniquenessReport uniqueness_report(const BlockKey& b) {
        block(b);
        if constexpr (std::is_same_v<F, SymbolicField>) {
            for (const EvalPoint& pt : default_eval_points()) {
                EvalField g(pt);
                long n = local_nullity(g, b,
                                       [&](const S& v) { return evaluate(v, pt); });
                if (n == 1) return {1, g.mode_tag()};
            }
            long n = local_nullity(fld_, b, [](const S& v) { return v; });
            return {n, "symbolic"};
        } else {
            long n = local_nullity(fld_, b, [](const S& v) { return v; });
            return {n, fld_.mode_tag()};
        }
    }

    // Shift components of the generator image words, for inspection/tests.
    const std::map<BlockKey, TensorOp>& components_left(int u, int v) const {
        return gens_[size_t(gi(u, v))].L;
    }
    const std::map<BlockKey, TensorOp>& components_right(int u, int v) const {
        return gens_[size_t(gi(u, v))].R;
    }

  private:
    struct GenOps {
        int u = 0, v = 0;
        std::map<BlockKey, TensorOp> L, R;  // weight components, keyed by shift
    };

    static int gi(int u, int v) { return (u - 1) * 7 + (v - 1); }

    void build_ops() {
        FundamentalRep p1 = build_rep(1, par_);
        FundamentalRep p2 = build_rep(2, par_);
        FundamentalRep p3 = build_rep(3, par_);
        std::vector<const FundamentalRep*> lw, rw;
        if (kind() == TensorKind::S) {
            lw = {&p2, &p1, &p2};
            rw = {&p1, &p2, &p1};
        } else {
            lw = {&p3, &p2, &p3, &p2};
            rw = {&p2, &p3, &p2, &p3};
        }
        gens_.resize(49);
        for (int u = 1; u <= 7; ++u)
            for (int v = 1; v <= 7; ++v) {
                GenOps& g = gens_[size_t(gi(u, v))];
                g.u = u;
                g.v = v;
                g.L = split_components(rep_word_op(lw, u, v));
                g.R = split_components(rep_word_op(rw, u, v).reversed());
                for (const auto& comps : {std::cref(g.L), std::cref(g.R)})
                    for (const auto& [d, op] : comps.get()) {
                        if (d.level() == 0 && d != BlockKey{0, 0})
                            throw std::logic_error(
                                "generator t_" + std::to_string(u) + std::to_string(v) +
                                " has an off-diagonal level-preserving component " +
                                d.str() + "; level-by-level solving is not valid");
                        deltas_.insert(d);
                    }
            }
    }

    // Split an operator into its weight components: group the joint PBW
    // monomials of the canonical form by the (P,Q) shift they induce.
    std::map<BlockKey, TensorOp> split_components(const TensorOp& op) const {
        if (op.signature() != shape_.sig)
            throw std::logic_error("intertwiner word has unexpected slot signature");
        std::map<BlockKey, TensorOp> comps;
        for (const auto& [mons, c] : op.canonical_form()) {
            BlockKey d = shape_.shift_of_monomials(mons);
            auto [it, fresh] = comps.try_emplace(d, TensorOp(shape_.sig));
            std::vector<OscExpr> fs;
            fs.reserve(mons.size());
            for (int s = 0; s < shape_.nslots(); ++s) {
                OscExpr e(shape_.sig[size_t(s)]);
                e.add_term(mons[size_t(s)], s == 0 ? c : Coefficient::one());
                fs.push_back(std::move(e));
            }
            it->second.add_product(std::move(fs));
        }
        return comps;
    }

    template <class G>
    std::vector<typename G::S> to_dense(const G& gf, const TensorVec<G>& v,
                                        const IBlock& blk, const char* what) const {
        std::vector<typename G::S> out(size_t(blk.size()), gf.zero());
        for (const auto& [idx, val] : v.terms) {
            auto it = blk.pos.find(idx);
            if (it == blk.pos.end())
                throw std::logic_error(std::string("weight component leaked outside its "
                                                   "target block (") +
                                       what + " at " + blk.key.str() + ")");
            out[size_t(it->second)] = val;
        }
        return out;
    }

    // Apply a component op to a stored column of a solved source block.
    template <class G, class Conv>
    TensorVec<G> apply_to_column(const G& gf, const TensorOp& op, const IBlock& src,
                                 int c, Conv&& conv) const {
        TensorVec<G> out;
        for (int r = 0; r < src.size(); ++r) {
            const S& x = src.col[size_t(c)][size_t(r)];
            if (fld_.is_zero(x)) continue;
            op.apply_basis(gf, src.basis[size_t(r)], conv(x), out);
        }
        return out;
    }

    void solve_block(IBlock& blk, const BlockKey& b) {
        blk.key = b;
        blk.basis = shape_.block_basis(b);
        const int M = blk.size();
        if (M == 0) throw std::logic_error("empty block basis at " + b.str());
        for (int i = 0; i < M; ++i) blk.pos.emplace(blk.basis[size_t(i)], i);
        blk.col.assign(size_t(M), std::vector<S>(size_t(M), fld_.zero()));
        if (b == BlockKey{0, 0}) {
            blk.col[0][0] = fld_.one();  // vacuum normalization
            return;
        }

        // Columns of the unknown block are pinned by the raising equations:
        // for a weight component with shift d > 0 (by level) and source block
        // B-d already solved,  X_B (R^d |in>) = L^d (X_{B-d} |in>).  Pairs
        // (y, z) = (R^d|in>, L^d X|in>) are eliminated to reduced echelon form
        // in y; dependent pairs must stay consistent, which verifies the
        // surplus equations on the fly.
        struct PairRow {
            int lead;
            std::vector<S> y, z;
        };
        std::vector<PairRow> rows;
        std::map<int, int> by_lead;

        auto process_pair = [&](std::vector<S> y, std::vector<S> z,
                                const GenOps& g, const BlockKey& d) {
            for (const auto& [lead, ri] : by_lead) {
                const S& c = y[size_t(lead)];
                if (fld_.is_zero(c)) continue;
                S nc = fld_.neg(c);
                const PairRow& pr = rows[size_t(ri)];
                for (int r = 0; r < M; ++r) {
                    if (!fld_.is_zero(pr.y[size_t(r)])) fld_.madd(y[size_t(r)], nc, pr.y[size_t(r)]);
                    if (!fld_.is_zero(pr.z[size_t(r)])) fld_.madd(z[size_t(r)], nc, pr.z[size_t(r)]);
                }
            }
            int lead = -1;
            for (int r = 0; r < M; ++r)
                if (!fld_.is_zero(y[size_t(r)])) { lead = r; break; }
            if (lead < 0) {
                for (int r = 0; r < M; ++r)
                    if (!fld_.is_zero(z[size_t(r)]))
                        throw std::runtime_error(
                            std::string(kind_name(kind())) + " block " + blk.key.str() +
                            ": inconsistent raising equation from t_" +
                            std::to_string(g.u) + std::to_string(g.v) + " shift " + d.str());
                return;
            }
            S inv = fld_.inv(y[size_t(lead)]);
            for (int r = 0; r < M; ++r) {
                y[size_t(r)] = fld_.mul(inv, y[size_t(r)]);
                z[size_t(r)] = fld_.mul(inv, z[size_t(r)]);
            }
            for (auto& pr : rows) {  // keep the y-side fully reduced
                const S c = pr.y[size_t(lead)];
                if (fld_.is_zero(c)) continue;
                S nc = fld_.neg(c);
                for (int r = 0; r < M; ++r) {
                    if (!fld_.is_zero(y[size_t(r)])) fld_.madd(pr.y[size_t(r)], nc, y[size_t(r)]);
                    if (!fld_.is_zero(z[size_t(r)])) fld_.madd(pr.z[size_t(r)], nc, z[size_t(r)]);
                }
            }
            by_lead.emplace(lead, int(rows.size()));
            rows.push_back(PairRow{lead, std::move(y), std::move(z)});
        };

        for (const GenOps& g : gens_) {
            std::set<BlockKey> ds;
            for (const auto& [d, op] : g.L) ds.insert(d);
            for (const auto& [d, op] : g.R) ds.insert(d);
            for (const BlockKey& d : ds) {
                if (d.level() <= 0) continue;
                BlockKey src{b.P - d.P, b.Q - d.Q};
                if (src.P < 0 || src.Q < 0) continue;
                const IBlock& sb = block(src);
                auto lit = g.L.find(d);
                auto rit = g.R.find(d);
                for (int c = 0; c < sb.size(); ++c) {
                    TensorVec<F> yv, zv;
                    if (rit != g.R.end())
                        rit->second.apply_basis(fld_, sb.basis[size_t(c)], fld_.one(), yv);
                    if (lit != g.L.end())
                        zv = apply_to_column(fld_, lit->second, sb, c,
                                             [](const S& x) { return x; });
                    if (yv.terms.empty() && zv.terms.empty()) continue;
                    process_pair(to_dense(fld_, yv, blk, "raising y"),
                                 to_dense(fld_, zv, blk, "raising z"), g, d);
                }
            }
        }

        if (int(rows.size()) == M) {
            // fully reduced echelon with M leads: y rows are exactly the unit
            // vectors, so z rows are the block columns
            for (const auto& pr : rows) blk.col[size_t(pr.lead)] = pr.z;
            return;
        }
        solve_block_full(blk);
    }

    // Fallback when the raising images do not span the block: solve the block
    // entries from all raising plus same-block equations as one linear system.
    void solve_block_full(IBlock& blk) {
        const int M = blk.size();
        const int unknowns = M * M;  // x_{r,c} at index c*M + r
        using Row = typename Eliminator<F>::Row;
        std::vector<Row> rows;
        auto push_row = [&](std::map<int, S>& m) {
            Row r;
            for (auto& [c, v] : m)
                if (!fld_.is_zero(v)) r.emplace_back(c, v);
            if (!r.empty()) rows.push_back(std::move(r));
        };

        for (const GenOps& g : gens_) {
            // raising equations: X (R^d|in>) = L^d(X_src|in>)
            std::set<BlockKey> ds;
            for (const auto& [d, op] : g.L) ds.insert(d);
            for (const auto& [d, op] : g.R) ds.insert(d);
            for (const BlockKey& d : ds) {
                if (d.level() <= 0) continue;
                BlockKey src{blk.key.P - d.P, blk.key.Q - d.Q};
                if (src.P < 0 || src.Q < 0) continue;
                const IBlock& sb = block(src);
                auto lit = g.L.find(d);
                auto rit = g.R.find(d);
                for (int c = 0; c < sb.size(); ++c) {
                    TensorVec<F> yv, zv;
                    if (rit != g.R.end())
                        rit->second.apply_basis(fld_, sb.basis[size_t(c)], fld_.one(), yv);
                    if (lit != g.L.end())
                        zv = apply_to_column(fld_, lit->second, sb, c,
                                             [](const S& x) { return x; });
                    auto y = to_dense(fld_, yv, blk, "raising y");
                    auto z = to_dense(fld_, zv, blk, "raising z");
                    for (int r = 0; r < M; ++r) {
                        std::map<int, S> row;
                        for (int m = 0; m < M; ++m)
                            if (!fld_.is_zero(y[size_t(m)])) row[m * M + r] = y[size_t(m)];
                        if (!fld_.is_zero(z[size_t(r)])) row[unknowns] = fld_.neg(z[size_t(r)]);
                        push_row(row);
                    }
                }
            }
            // same-block equations: L^0 X = X R^0
            auto lit = g.L.find(BlockKey{0, 0});
            auto rit = g.R.find(BlockKey{0, 0});
            if (lit == g.L.end() && rit == g.R.end()) continue;
            auto lcols = std::vector<std::vector<S>>(size_t(M));
            for (int m = 0; m < M; ++m) {
                TensorVec<F> lv;
                if (lit != g.L.end())
                    lit->second.apply_basis(fld_, blk.basis[size_t(m)], fld_.one(), lv);
                lcols[size_t(m)] = to_dense(fld_, lv, blk, "diag L");
            }
            for (int c = 0; c < M; ++c) {
                TensorVec<F> rv;
                if (rit != g.R.end())
                    rit->second.apply_basis(fld_, blk.basis[size_t(c)], fld_.one(), rv);
                auto y = to_dense(fld_, rv, blk, "diag R");
                for (int r = 0; r < M; ++r) {
                    std::map<int, S> row;
                    for (int m = 0; m < M; ++m) {
                        if (!fld_.is_zero(lcols[size_t(m)][size_t(r)])) {
                            auto [it2, fresh] = row.try_emplace(c * M + m,
                                                                lcols[size_t(m)][size_t(r)]);
                            if (!fresh) it2->second = fld_.add(it2->second, lcols[size_t(m)][size_t(r)]);
                        }
                        if (!fld_.is_zero(y[size_t(m)])) {
                            S neg = fld_.neg(y[size_t(m)]);
                            auto [it2, fresh] = row.try_emplace(m * M + r, neg);
                            if (!fresh) it2->second = fld_.add(it2->second, neg);
                        }
                    }
                    push_row(row);
                }
            }
        }

        auto res = solve_inhomogeneous(fld_, unknowns, rows);
        if (!res.consistent)
            throw std::runtime_error(std::string(kind_name(kind())) + " block " +
                                     blk.key.str() + ": local system inconsistent");
        if (!res.unique)
            throw std::runtime_error(std::string(kind_name(kind())) + " block " +
                                     blk.key.str() +
                                     ": local system does not determine the block");
        for (int c = 0; c < M; ++c)
            for (int r = 0; r < M; ++r) blk.col[size_t(c)][size_t(r)] = res.solution[size_t(c * M + r)];
    }

    // Check every same-block and lowering equation of a freshly solved block.
    // With the raising equations consumed during the solve, this makes each
    // intertwining equation between solved blocks verified exactly once.
    void verify_block(IBlock& blk) {
        const int M = blk.size();
        for (const GenOps& g : gens_) {
            std::set<BlockKey> ds;
            for (const auto& [d, op] : g.L) ds.insert(d);
            for (const auto& [d, op] : g.R) ds.insert(d);
            for (const BlockKey& d : ds) {
                if (d.level() > 0) continue;
                BlockKey tgt{blk.key.P + d.P, blk.key.Q + d.Q};
                auto lit = g.L.find(d);
                auto rit = g.R.find(d);
                if (tgt.P < 0 || tgt.Q < 0) {
                    // no states with that key: both sides must vanish
                    for (int c = 0; c < M; ++c) {
                        TensorVec<F> lv, rv;
                        if (lit != g.L.end())
                            lv = apply_to_column(fld_, lit->second, blk, c,
                                                 [](const S& x) { return x; });
                        if (rit != g.R.end())
                            rit->second.apply_basis(fld_, blk.basis[size_t(c)], fld_.one(), rv);
                        if (!lv.terms.empty() || !rv.terms.empty())
                            throw std::logic_error("component maps into an empty block at " +
                                                   blk.key.str());
                    }
                    continue;
                }
                const IBlock& tb = (tgt == blk.key) ? blk : block(tgt);
                for (int c = 0; c < M; ++c) {
                    TensorVec<F> lv, rv;
                    if (lit != g.L.end())
                        lv = apply_to_column(fld_, lit->second, blk, c,
                                             [](const S& x) { return x; });
                    if (rit != g.R.end())
                        rit->second.apply_basis(fld_, blk.basis[size_t(c)], fld_.one(), rv);
                    auto lhs = to_dense(fld_, lv, tb, "verify L");
                    auto y = to_dense(fld_, rv, tb, "verify R");
                    for (int r = 0; r < tb.size(); ++r) {
                        S rhs = fld_.zero();
                        for (int m = 0; m < tb.size(); ++m)
                            if (!fld_.is_zero(y[size_t(m)]))
                                fld_.madd(rhs, y[size_t(m)], tb.col[size_t(m)][size_t(r)]);
                        if (!fld_.eq(lhs[size_t(r)], rhs))
                            throw std::runtime_error(
                                std::string(kind_name(kind())) + " block " + blk.key.str() +
                                ": intertwining equation fails for t_" + std::to_string(g.u) +
                                std::to_string(g.v) + " shift " + d.str() + " on state " +
                                blk.basis[size_t(c)].str(shape_.nslots()));
                    }
                }
            }
        }
    }

    // Nullity of the full local system of block b over field G (see
    // uniqueness_report).  conv maps stored solved values into G.
    template <class G, class Conv>
    long local_nullity(const G& gf, const BlockKey& b, Conv&& conv) {
        using GS = typename G::S;
        const IBlock& blk = block(b);
        const int M = blk.size();
        const int unknowns = M * M + 1;  // + the scalar tying neighbours
        const int cidx = M * M;
        Eliminator<G> elim(gf, /*keep_reduced=*/false);
        auto insert_row = [&](std::map<int, GS>& m) {
            typename Eliminator<G>::Row r;
            for (auto& [c, v] : m)
                if (!gf.is_zero(v)) r.emplace_back(c, v);
            if (!r.empty()) elim.insert(std::move(r));
        };
        auto dense_in = [&](const TensorVec<G>& v, const IBlock& in_blk) {
            std::vector<GS> out(size_t(in_blk.size()), gf.zero());
            for (const auto& [idx, val] : v.terms) out[size_t(in_blk.pos.at(idx))] = val;
            return out;
        };

        for (const GenOps& g : gens_) {
            std::set<BlockKey> ds;
            for (const auto& [d, op] : g.L) ds.insert(d);
            for (const auto& [d, op] : g.R) ds.insert(d);
            for (const BlockKey& d : ds) {
                auto lit = g.L.find(d);
                auto rit = g.R.find(d);
                if (d.level() == 0) {
                    // L^0 X - X R^0 = 0, rows indexed by (in c, out r)
                    auto lcols = std::vector<std::vector<GS>>(size_t(M));
                    for (int m = 0; m < M; ++m) {
                        TensorVec<G> lv;
                        if (lit != g.L.end())
                            lit->second.apply_basis(gf, blk.basis[size_t(m)], gf.one(), lv);
                        lcols[size_t(m)] = dense_in(lv, blk);
                    }
                    for (int c = 0; c < M; ++c) {
                        TensorVec<G> rv;
                        if (rit != g.R.end())
                            rit->second.apply_basis(gf, blk.basis[size_t(c)], gf.one(), rv);
                        auto y = dense_in(rv, blk);
                        for (int r = 0; r < M; ++r) {
                            std::map<int, GS> row;
                            for (int m = 0; m < M; ++m) {
                                if (!gf.is_zero(lcols[size_t(m)][size_t(r)])) {
                                    auto [it2, fresh] = row.try_emplace(c * M + m,
                                                                        lcols[size_t(m)][size_t(r)]);
                                    if (!fresh)
                                        it2->second = gf.add(it2->second,
                                                             lcols[size_t(m)][size_t(r)]);
                                }
                                if (!gf.is_zero(y[size_t(m)])) {
                                    GS neg = gf.neg(y[size_t(m)]);
                                    auto [it2, fresh] = row.try_emplace(m * M + r, neg);
                                    if (!fresh) it2->second = gf.add(it2->second, neg);
                                }
                            }
                            insert_row(row);
                        }
                    }
                } else if (d.level() > 0) {
                    // raising into b: X (R^d|in>) = c * L^d(X_src|in>)
                    BlockKey src{b.P - d.P, b.Q - d.Q};
                    if (src.P < 0 || src.Q < 0) continue;
                    const IBlock& sb = block(src);
                    for (int c = 0; c < sb.size(); ++c) {
                        TensorVec<G> yv, zv;
                        if (rit != g.R.end())
                            rit->second.apply_basis(gf, sb.basis[size_t(c)], gf.one(), yv);
                        if (lit != g.L.end())
                            zv = apply_to_column(gf, lit->second, sb, c, conv);
                        auto y = dense_in(yv, blk);
                        auto z = dense_in(zv, blk);
                        for (int r = 0; r < M; ++r) {
                            std::map<int, GS> row;
                            for (int m = 0; m < M; ++m)
                                if (!gf.is_zero(y[size_t(m)])) row[m * M + r] = y[size_t(m)];
                            if (!gf.is_zero(z[size_t(r)])) row[cidx] = gf.neg(z[size_t(r)]);
                            insert_row(row);
                        }
                    }
                } else {
                    // lowering from b: L^d(X|in>) = c * X_tgt (R^d|in>)
                    BlockKey tgt{b.P + d.P, b.Q + d.Q};
                    if (tgt.P < 0 || tgt.Q < 0) continue;
                    const IBlock& tb = block(tgt);
                    auto lcols = std::vector<std::vector<GS>>(size_t(M));
                    for (int m = 0; m < M; ++m) {
                        TensorVec<G> lv;
                        if (lit != g.L.end())
                            lit->second.apply_basis(gf, blk.basis[size_t(m)], gf.one(), lv);
                        lcols[size_t(m)] = dense_in(lv, tb);
                    }
                    for (int c = 0; c < M; ++c) {
                        TensorVec<G> rv;
                        if (rit != g.R.end())
                            rit->second.apply_basis(gf, blk.basis[size_t(c)], gf.one(), rv);
                        auto y = dense_in(rv, tb);
                        for (int r = 0; r < tb.size(); ++r) {
                            GS rhs = gf.zero();
                            for (int m = 0; m < tb.size(); ++m)
                                if (!gf.is_zero(y[size_t(m)]))
                                    gf.madd(rhs, y[size_t(m)], conv(tb.col[size_t(m)][size_t(r)]));
                            std::map<int, GS> row;
                            for (int m = 0; m < M; ++m)
                                if (!gf.is_zero(lcols[size_t(m)][size_t(r)]))
                                    row[c * M + m] = lcols[size_t(m)][size_t(r)];
                            if (!gf.is_zero(rhs)) row[cidx] = gf.neg(rhs);
                            insert_row(row);
                        }
                    }
                }
            }
        }
        if (b == BlockKey{0, 0}) {
            std::map<int, GS> row;
            row[0] = gf.one();
            row[cidx] = gf.neg(gf.one());
            insert_row(row);
        }
        return elim.nullity(unknowns);
    }

    TensorShape shape_;
    ParameterSet par_;
    F fld_;
    std::vector<GenOps> gens_;
    std::set<BlockKey> deltas_;
    std::map<BlockKey, std::unique_ptr<IBlock>> memo_;
    std::set<BlockKey> solving_;
    std::optional<long> max_level_;
};

}  // namespace qfa
