#include <catch2/catch_amalgamated.hpp>

#include "generic_params.hpp"
#include "qfa/reps.hpp"

using namespace qfa;
using qfa_test::generic_params;

namespace {

Coefficient qp(long e) { return Coefficient::q_pow(e); }

}  // namespace

TEST_CASE("parameter constraint validation") {
    CHECK_NOTHROW(ParameterSet::canonical().validate());
    CHECK_NOTHROW(generic_params().validate());
    CHECK(ParameterSet::canonical().is_canonical());
    CHECK_FALSE(generic_params().is_canonical());

    ParameterSet bad = ParameterSet::canonical();
    bad.beta1 = Coefficient::one();  // alpha1*beta1 != -q^2 mu1 nu1
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    ParameterSet bad2 = ParameterSet::canonical();
    bad2.sigma2 = Coefficient::from_int(2);
    CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);

    ParameterSet bad3 = ParameterSet::canonical();
    bad3.alpha3 = Coefficient::zero();
    CHECK_THROWS_AS(bad3.validate(), std::invalid_argument);

    // sign extraction on the compatible family
    CHECK(ParameterSet::canonical().sigma() == Coefficient::one());
    CHECK(ParameterSet::canonical().rho() == Coefficient::one());
    CHECK(ParameterSet::canonical().epsilon() == Coefficient::one());
    CHECK(generic_params().sigma() == -Coefficient::one());
    CHECK(generic_params().rho() == -Coefficient::one());
    CHECK(generic_params().epsilon() == -Coefficient::one());

    ParameterSet mixed = ParameterSet::canonical();
    mixed.kappa31 = -Coefficient::one();
    CHECK_THROWS_AS(mixed.rho(), std::invalid_argument);

    // serialize/parse round-trip
    ParameterSet g = generic_params();
    ParameterSet g2 = ParameterSet::parse(g.serialize());
    CHECK(g.serialize() == g2.serialize());
    CHECK(g.id_string() == g2.id_string());
    CHECK(g.id_string() != "canonical");
    CHECK(ParameterSet::canonical().id_string() == "canonical");
}

TEST_CASE("representation matrices match their defining table") {
    ParameterSet par = ParameterSet::canonical();
    FundamentalRep p1 = build_rep(1, par), p2 = build_rep(2, par), p3 = build_rep(3, par);

    CHECK(p1.base == Base::Q2);
    CHECK(p2.base == Base::Q2);
    CHECK(p3.base == Base::Q);

    // canonical parameters: pi1(t_12) = K, pi1(t_21) = -q^2 K
    CHECK(p1(1, 2) == OscExpr::k(Base::Q2));
    CHECK(p1(2, 1) == -qp(2) * OscExpr::k(Base::Q2));
    CHECK(p1(6, 7) == qp(2) * (-qp(-2)) * OscExpr::k(Base::Q2));  // q^2 beta1^-1 K = -K
    CHECK(p1(4, 4) == OscExpr::one(Base::Q2));
    CHECK(p1(3, 5).is_zero());

    // pi3 row 4: operator ordering matters; the (4,4) entry is diagonal
    // on the Fock space with eigenvalue 1 - q^(2m) - q^(2m+2).
    FockVector v2 = FockVector::basis(Base::Q, 2);
    FockVector r = apply(p3(4, 4), v2);
    REQUIRE(r.entries.size() == 1);
    CHECK(r.entries.at(2) == Coefficient::one() - qp(4) - qp(6));

    // pi3(t_34) = k a- : |m> -> q^(m-1)(1-q^(2m)) |m-1>
    FockVector r34 = apply(p3(3, 4), FockVector::basis(Base::Q, 3));
    REQUIRE(r34.entries.size() == 1);
    CHECK(r34.entries.at(2) == qp(2) * (Coefficient::one() - qp(6)));

    // pi3(t_43) = -r a- k : |m> -> -r q^m (1-q^(2m)) |m-1>  (canonical alpha3=mu3=1)
    FockVector r43 = apply(p3(4, 3), FockVector::basis(Base::Q, 3));
    REQUIRE(r43.entries.size() == 1);
    CHECK(r43.entries.at(2) ==
          -Coefficient(Coefficient::w_square()) * qp(3) * (Coefficient::one() - qp(6)));

    // pi3(t_35) = -(r)^-1 k^2 at canonical: |m> -> -(r)^-1 q^(2m) |m>
    FockVector r35 = apply(p3(3, 5), FockVector::basis(Base::Q, 1));
    REQUIRE(r35.entries.size() == 1);
    CHECK(r35.entries.at(1) ==
          -Coefficient(Coefficient::w_square()).inverse() * qp(2));
}

TEST_CASE("contraction relations hold in every fundamental representation") {
    for (const ParameterSet& par : {ParameterSet::canonical(), generic_params()}) {
        for (int i : {1, 2, 3}) {
            FundamentalRep rep = build_rep(i, par);
            auto w = check_c_relations(rep);
            INFO(w.description);
            CHECK(w.pass);
        }
        // and in the 5x5 subrepresentations with the rank-2 exponents
        for (int i : {2, 3}) {
            FundamentalRep sub = b2_subrep(build_rep(i, par));
            auto w = check_c_relations(sub);
            INFO(w.description);
            CHECK(w.pass);
        }
    }
}

TEST_CASE("rank-2 exponent table") {
    CHECK(c_matrix_exponents(7) == std::vector<long>{5, 3, 1, 0, -1, -3, -5});
    CHECK(c_matrix_exponents(5) == std::vector<long>{3, 1, 0, -1, -3});
}

TEST_CASE("coproduct word operators") {
    ParameterSet par = ParameterSet::canonical();
    FundamentalRep p1 = build_rep(1, par), p2 = build_rep(2, par);

    // pi_12(Delta t_11) = mu1 A- (x) kappa2 1 : exactly one path survives
    TensorOp op = rep_word_op({&p1, &p2}, 1, 1);
    REQUIRE(op.terms().size() == 1);
    SymbolicField F;
    TensorVec<SymbolicField> in = TensorVec<SymbolicField>::basis(MultiIndex::of({2, 1}), F);
    TensorVec<SymbolicField> out = op.apply(F, in);
    REQUIRE(out.terms.size() == 1);
    CHECK(out.terms.at(MultiIndex::of({1, 1})) == Coefficient::one() - qp(8));

    // pi_21(Delta t_44) = sigma2 (x) sigma1 plus two K-paths
    TensorOp d44 = rep_word_op({&p2, &p1}, 4, 4);
    CHECK(d44.terms().size() == 1);  // rows (4,*) of pi2: only t_44 nonzero

    // signature sanity
    CHECK(op.signature() == SlotSignature{Base::Q2, Base::Q2});
    FundamentalRep p3 = build_rep(3, par);
    CHECK(rep_word_op({&p1, &p3}, 1, 1).signature() == SlotSignature{Base::Q2, Base::Q});
}

TEST_CASE("two-slot transposition equivalence detects parameter mismatches") {
    // compatible family: passes
    CHECK(check_13_transposition(ParameterSet::canonical()).pass);
    CHECK(check_13_transposition(generic_params()).pass);

    // kappa_31 != kappa_32 : first failure at generator (1,2),
    // where the two sides differ by exactly that ratio
    ParameterSet pk = ParameterSet::canonical();
    pk.kappa32 = -Coefficient::one();
    auto r1 = check_13_transposition(pk);
    CHECK_FALSE(r1.pass);
    CHECK(r1.witness_u == 1);
    CHECK(r1.witness_v == 2);

    // kappa_1 != sigma_1 : first failure at generator (3,4)
    ParameterSet ps = ParameterSet::canonical();
    ps.sigma1 = -Coefficient::one();
    auto r2 = check_13_transposition(ps);
    CHECK_FALSE(r2.pass);
    CHECK(r2.witness_u == 3);
    CHECK(r2.witness_v == 4);
}
