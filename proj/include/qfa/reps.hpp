#pragma once

#include "qfa/params.hpp"
#include "qfa/tensor.hpp"

#include <functional>

namespace qfa {

// One fundamental representation: a dim x dim matrix of oscillator
// expressions over a single Fock slot, 1-based index access.
struct FundamentalRep {
    std::string name;
    int dim = 0;
    Base base = Base::Q;
    std::vector<OscExpr> entries;          // row-major
    std::vector<std::vector<int>> nzcols;  // per row: 1-based nonzero column list

    const OscExpr& operator()(int i, int j) const {
        return entries[size_t((i - 1) * dim + (j - 1))];
    }

    void set(int i, int j, OscExpr e) {
        entries[size_t((i - 1) * dim + (j - 1))] = std::move(e);
    }

    void finalize() {
        nzcols.assign(size_t(dim), {});
        for (int i = 1; i <= dim; ++i)
            for (int j = 1; j <= dim; ++j)
                if (!(*this)(i, j).is_zero()) nzcols[size_t(i - 1)].push_back(j);
    }
};

// The three fundamental representations, 7x7 over Osc_{q^2}, Osc_{q^2}, Osc_q.
inline FundamentalRep build_rep(int which, const ParameterSet& par) {
    par.validate();
    FundamentalRep rep;
    rep.name = "pi" + std::to_string(which);
    rep.dim = 7;
    rep.base = which == 3 ? Base::Q : Base::Q2;
    rep.entries.assign(49, OscExpr::zero(rep.base));

    const Base B = rep.base;
    auto one = [&](const Coefficient& c) { return OscExpr::scalar(B, c); };
    auto Am = OscExpr::a_minus(B), Ap = OscExpr::a_plus(B), K = OscExpr::k(B);
    Coefficient q2 = Coefficient::q_pow(2);

    if (which == 1) {
        rep.set(1, 1, par.mu1 * Am);
        rep.set(1, 2, par.alpha1 * K);
        rep.set(2, 1, par.beta1 * K);
        rep.set(2, 2, par.nu1 * Ap);
        rep.set(3, 3, one(par.kappa1));
        rep.set(4, 4, one(par.sigma1));
        rep.set(5, 5, one(par.kappa1.inverse()));
        rep.set(6, 6, par.nu1.inverse() * Am);
        rep.set(6, 7, q2 * par.beta1.inverse() * K);
        rep.set(7, 6, q2 * par.alpha1.inverse() * K);
        rep.set(7, 7, par.mu1.inverse() * Ap);
    } else if (which == 2) {
        rep.set(1, 1, one(par.kappa2));
        rep.set(2, 2, par.mu2 * Am);
        rep.set(2, 3, par.alpha2 * K);
        rep.set(3, 2, par.beta2 * K);
        rep.set(3, 3, par.nu2 * Ap);
        rep.set(4, 4, one(par.sigma2));
        rep.set(5, 5, par.nu2.inverse() * Am);
        rep.set(5, 6, q2 * par.beta2.inverse() * K);
        rep.set(6, 5, q2 * par.alpha2.inverse() * K);
        rep.set(6, 6, par.mu2.inverse() * Ap);
        rep.set(7, 7, one(par.kappa2.inverse()));
    } else if (which == 3) {
        Coefficient r(Coefficient::w_square());  // 1 + q^2
        Coefficient a3 = par.alpha3, m3 = par.mu3;
        rep.set(1, 1, one(par.kappa31));
        rep.set(2, 2, one(par.kappa32));
        rep.set(3, 3, m3 * (Am * Am));
        rep.set(3, 4, a3 * (K * Am));
        rep.set(3, 5, -(r * m3).inverse() * a3 * a3 * (K * K));
        rep.set(4, 3, -(r * a3.inverse() * m3) * (Am * K));
        rep.set(4, 4, Am * Ap - K * K);
        rep.set(4, 5, -(Coefficient::q() * m3).inverse() * a3 * (K * Ap));
        rep.set(5, 3, -(r * q2 * pow(a3, -2) * m3) * (K * K));
        rep.set(5, 4, r * a3.inverse() * (K * Ap));
        rep.set(5, 5, m3.inverse() * (Ap * Ap));
        rep.set(6, 6, one(par.kappa32.inverse()));
        rep.set(7, 7, one(par.kappa31.inverse()));
    } else {
        throw std::invalid_argument("build_rep: index must be 1, 2 or 3");
    }
    rep.finalize();
    return rep;
}

// 5x5 subrepresentation: drop the first and last rows and columns.  Applied
// to pi2 and pi3 this yields the two fundamental representations of the
// rank-2 subalgebra generated by (t_ij) with 2 <= i,j <= 6.
inline FundamentalRep b2_subrep(const FundamentalRep& rep) {
    if (rep.dim != 7) throw std::invalid_argument("b2_subrep: expects a 7x7 representation");
    FundamentalRep sub;
    sub.name = rep.name + "-sub";
    sub.dim = 5;
    sub.base = rep.base;
    sub.entries.assign(25, OscExpr::zero(rep.base));
    for (int i = 1; i <= 5; ++i)
        for (int j = 1; j <= 5; ++j) sub.set(i, j, rep(i + 1, j + 1));
    sub.finalize();
    return sub;
}

// pi_{w} (Delta^{(s-1)} t_{uv}) as a sum over paths u -> ... -> v, one factor
// per slot.
inline TensorOp rep_word_op(const std::vector<const FundamentalRep*>& word, int u, int v) {
    if (word.empty()) throw std::invalid_argument("rep_word_op: empty word");
    int dim = word[0]->dim;
    SlotSignature sig;
    for (auto* r : word) {
        if (r->dim != dim) throw std::invalid_argument("rep_word_op: mixed dimensions");
        sig.push_back(r->base);
    }
    TensorOp op(sig);
    std::vector<OscExpr> factors(word.size(), OscExpr());
    std::function<void(size_t, int)> go = [&](size_t s, int row) {
        if (s + 1 == word.size()) {
            const OscExpr& e = (*word[s])(row, v);
            if (!e.is_zero()) {
                factors[s] = e;
                op.add_product(factors);
            }
            return;
        }
        for (int c : word[s]->nzcols[size_t(row - 1)]) {
            factors[s] = (*word[s])(row, c);
            go(s + 1, c);
        }
    };
    go(0, u);
    return op;
}

// Antidiagonal structure constants: C_ij = delta_{i,N+1-j} q^{rho_j} with
// rho = (2n-1, ..., 3, 1, 0, -1, -3, ..., -(2n-1)) for odd N = 2n+1.
inline std::vector<long> c_matrix_exponents(int N) {
    if (N % 2 == 0) throw std::invalid_argument("c_matrix_exponents: N must be odd here");
    std::vector<long> rho(size_t(N), 0L);
    int n = N / 2;
    for (int i = 0; i < n; ++i) rho[size_t(i)] = 2 * (n - i) - 1;
    rho[size_t(n)] = 0;
    for (int i = 0; i < n; ++i) rho[size_t(N - 1 - i)] = -(2 * (n - i) - 1);
    return rho;
}

struct RelationWitness {
    bool pass = true;
    std::string description;
};

// Both quadratic contraction relations
//   sum_j q^(rho_{j'} + rho_m) t_{ij} t_{m'j'} = delta_{im}
//   q^(rho_{i'}) sum_k q^(rho_{k'}) t_{ki'} t_{k'm} = delta_{im}
// hold in the image of a single representation (j' = N+1-j).
inline RelationWitness check_c_relations(const FundamentalRep& rep) {
    const int N = rep.dim;
    auto rho = c_matrix_exponents(N);
    auto rx = [&](int i) { return rho[size_t(i - 1)]; };
    auto dual = [&](int i) { return N + 1 - i; };
    for (int i = 1; i <= N; ++i)
        for (int m = 1; m <= N; ++m) {
            OscExpr lhs1 = OscExpr::zero(rep.base), lhs2 = OscExpr::zero(rep.base);
            for (int j = 1; j <= N; ++j) {
                lhs1 += Coefficient::q_pow(rx(dual(j)) + rx(m)) * (rep(i, j) * rep(dual(m), dual(j)));
                lhs2 += Coefficient::q_pow(rx(dual(i)) + rx(dual(j))) * (rep(j, dual(i)) * rep(dual(j), m));
            }
            OscExpr expect = i == m ? OscExpr::one(rep.base) : OscExpr::zero(rep.base);
            if (!(lhs1 == expect))
                return {false, rep.name + ": first contraction relation fails at (i,m)=(" +
                                   std::to_string(i) + "," + std::to_string(m) + ")"};
            if (!(lhs2 == expect))
                return {false, rep.name + ": second contraction relation fails at (i,m)=(" +
                                   std::to_string(i) + "," + std::to_string(m) + ")"};
        }
    return {};
}

struct TranspositionReport {
    bool pass = true;
    int witness_u = 0, witness_v = 0;
};

// The two-slot words (1,3) and (3,1) are equivalent with the plain
// transposition as intertwiner iff kappa_1 = sigma_1 and kappa_31 = kappa_32:
// check P pi_13(Delta t_uv) P = pi_31(Delta t_uv) for all 49 generators.
inline TranspositionReport check_13_transposition(const ParameterSet& par) {
    FundamentalRep p1 = build_rep(1, par), p3 = build_rep(3, par);
    for (int u = 1; u <= 7; ++u)
        for (int v = 1; v <= 7; ++v) {
            TensorOp lhs = rep_word_op({&p1, &p3}, u, v).reversed();
            TensorOp rhs = rep_word_op({&p3, &p1}, u, v);
            if (!lhs.equals(rhs)) return {false, u, v};
        }
    return {};
}

}  // namespace qfa
