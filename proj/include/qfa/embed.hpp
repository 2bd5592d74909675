#pragma once

#include <memory>
#include <mutex>
#include <ostream>

#include "qfa/frt.hpp"
#include "qfa/ncpoly.hpp"

namespace qfa {

// ---------------------------------------------------------------------------
// The generator-level embedding of the rank-2 odd-orthogonal function algebra
// into the rank-2 symplectic one, verified by noncommutative rewriting: every
// defining relation of the source maps to an element that reduces to zero
// modulo the defining relations of the target.
// ---------------------------------------------------------------------------

inline int sym_gen_id(int i, int j) { return (i - 1) * 4 + (j - 1); }

inline std::string sym_gen_name(int id) {
    return "s" + std::to_string(id / 4 + 1) + std::to_string(id % 4 + 1);
}

inline NCPoly sym_gen(int i, int j) { return NCPoly::generator(sym_gen_id(i, j)); }

// Defining relations of the symplectic function algebra (exchange relations
// for all external index tuples, plus both metric contractions).
inline std::vector<NCPoly> symplectic_relations() {
    const StructureConstants& sc = structure_constants(LieType::C2);
    const int N = sc.N;
    std::vector<NCPoly> rels;
    for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j)
            for (int k = 1; k <= N; ++k)
                for (int l = 1; l <= N; ++l) {
                    NCPoly rel;
                    for (const auto& mp : sc.R.row_cols[size_t(sc.R.pid(i, j))])
                        rel += sc.R.at(i, j, mp[0], mp[1]) *
                               (sym_gen(mp[0], k) * sym_gen(mp[1], l));
                    for (const auto& mp : sc.R.col_rows[size_t(sc.R.pid(k, l))])
                        rel -= (sym_gen(j, mp[1]) * sym_gen(i, mp[0])) *
                               sc.R.at(mp[0], mp[1], k, l);
                    if (!rel.is_zero()) rels.push_back(std::move(rel));
                }
    for (int i = 1; i <= N; ++i)
        for (int m = 1; m <= N; ++m) {
            NCPoly r1, r2;
            for (int k = 1; k <= N; ++k) {
                r1 += sc.C(dual_index(N, k), k) * sc.C(dual_index(N, m), m) *
                      (sym_gen(i, dual_index(N, k)) * sym_gen(dual_index(N, m), k));
                r2 += sc.C(i, dual_index(N, i)) * sc.C(k, dual_index(N, k)) *
                      (sym_gen(k, dual_index(N, i)) * sym_gen(dual_index(N, k), m));
            }
            if (i == m) {
                r1 -= NCPoly::scalar(Coefficient::one());
                r2 -= NCPoly::scalar(Coefficient::one());
            }
            if (!r1.is_zero()) rels.push_back(std::move(r1));
            if (!r2.is_zero()) rels.push_back(std::move(r2));
        }
    return rels;
}

// Completed rewriter for the symplectic algebra, degree bound 4 (enough to
// reduce products of two generator images).  Built once per process.
inline const RewriteSystem& symplectic_rewriter() {
    static std::mutex mu;
    static std::unique_ptr<RewriteSystem> rs;
    std::lock_guard<std::mutex> lock(mu);
    if (!rs) {
        auto fresh = std::make_unique<RewriteSystem>(4);
        for (const NCPoly& rel : symplectic_relations()) fresh->add_relation(rel);
        fresh->complete();
        rs = std::move(fresh);
    }
    return *rs;
}

// Images of the 25 source generators.  Row/column index 3 of the source picks
// up one factor of w = sqrt(1+q^2); everything stays in the quadratic
// extension.
inline NCPoly embedding_image(int i, int j) {
    if (i < 1 || i > 5 || j < 1 || j > 5)
        throw std::out_of_range("embedding_image: generator index");
    static const int xi[6] = {0, 1, 1, 2, 2, 3};
    static const int eta[6] = {0, 2, 3, 3, 4, 4};
    const Coefficient q = Coefficient::q();
    const Coefficient w = Coefficient::w();
    if (i == 3 && j == 3) {
        return sym_gen(2, 2) * sym_gen(3, 3) - q * (sym_gen(2, 1) * sym_gen(3, 4)) +
               q * (sym_gen(2, 4) * sym_gen(3, 1)) -
               q * q * (sym_gen(2, 3) * sym_gen(3, 2));
    }
    Coefficient sign = Coefficient::one();
    if (i == 5) sign = -sign;
    if (j == 3) {
        NCPoly p = (-Coefficient::q_pow(-1)) * (sym_gen(xi[i], 1) * sym_gen(eta[i], 4)) +
                   q * (sym_gen(xi[i], 4) * sym_gen(eta[i], 1));
        return (sign * w) * p;
    }
    if (j == 5) sign = -sign;
    Coefficient pre = sign;
    if (i == 3) pre = pre * w;
    NCPoly p = sym_gen(xi[i], xi[j]) * sym_gen(eta[i], eta[j]) -
               q * (sym_gen(xi[i], eta[j]) * sym_gen(eta[i], xi[j]));
    return pre * p;
}

// w-parity of a source relation: images are homogeneous in w, with parity
// equal to the number of self-dual indices among the generator subscripts.
inline bool w_parity_uniform(const NCPoly& p, int parity) {
    for (const auto& [word, c] : p.terms()) {
        (void)word;
        if (parity % 2 == 0 ? !c.b().is_zero() : !c.a().is_zero()) return false;
    }
    return true;
}

// Verify that every defining relation of the rank-2 odd-orthogonal algebra
// maps to zero.  Trace lines (one per exchange relation) go to `trace` when
// given.
inline CheckReport verify_embedding(std::ostream* trace = nullptr) {
    CheckReport out;
    out.name = "embedding";
    out.mode = "symbolic";
    out.window = 4;  // rewriting degree bound
    const RewriteSystem& rs = symplectic_rewriter();
    const StructureConstants& b2 = structure_constants(LieType::B2);
    const int N = b2.N;

    NCPoly img[6][6];
    for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j) img[i][j] = rs.reduce(embedding_image(i, j));

    auto self_dual = [&](int a) { return 2 * a == N + 1 ? 1 : 0; };

    for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j)
            for (int k = 1; k <= N; ++k)
                for (int l = 1; l <= N; ++l) {
                    NCPoly rel;
                    for (const auto& mp : b2.R.row_cols[size_t(b2.R.pid(i, j))])
                        rel += b2.R.at(i, j, mp[0], mp[1]) * (img[mp[0]][k] * img[mp[1]][l]);
                    for (const auto& mp : b2.R.col_rows[size_t(b2.R.pid(k, l))])
                        rel -= (img[j][mp[1]] * img[i][mp[0]]) * b2.R.at(mp[0], mp[1], k, l);
                    int parity = self_dual(i) + self_dual(j) + self_dual(k) + self_dual(l);
                    bool hom = w_parity_uniform(rel, parity);
                    NCPoly red = rs.reduce(rel);
                    ++out.vectors;
                    bool ok = hom && red.is_zero();
                    if (trace)
                        *trace << "B2-REL " << i << "," << j << "," << k << "," << l
                               << " -> reduced_terms=" << red.term_count()
                               << " result=" << (red.is_zero() ? "ZERO" : "NONZERO")
                               << "\n";
                    if (!ok && out.pass) {
                        out.pass = false;
                        out.witness = std::string(hom ? "exchange(" : "parity(") +
                                      std::to_string(i) + "," + std::to_string(j) + "," +
                                      std::to_string(k) + "," + std::to_string(l) +
                                      ") terms=" + std::to_string(red.term_count());
                    }
                }

    for (int i = 1; i <= N; ++i)
        for (int m = 1; m <= N; ++m) {
            NCPoly r1, r2;
            for (int k = 1; k <= N; ++k) {
                r1 += b2.C(dual_index(N, k), k) * b2.C(dual_index(N, m), m) *
                      (img[i][dual_index(N, k)] * img[dual_index(N, m)][k]);
                r2 += b2.C(i, dual_index(N, i)) * b2.C(k, dual_index(N, k)) *
                      (img[k][dual_index(N, i)] * img[dual_index(N, k)][m]);
            }
            if (i == m) {
                r1 -= NCPoly::scalar(Coefficient::one());
                r2 -= NCPoly::scalar(Coefficient::one());
            }
            NCPoly red1 = rs.reduce(r1), red2 = rs.reduce(r2);
            out.vectors += 2;
            if (!(red1.is_zero() && red2.is_zero()) && out.pass) {
                out.pass = false;
                out.witness = "contraction(" + std::to_string(i) + "," +
                              std::to_string(m) + ")";
            }
        }
    return out;
}

}  // namespace qfa
