#include <catch2/catch_amalgamated.hpp>

#include "qfa/equations.hpp"
#include "qfa/fields.hpp"

using namespace qfa;

namespace {

EvalField eval0() { return EvalField(default_eval_points()[0]); }

template <class F>
IntertwinerTensor<F> make_tensor(TensorKind k, const F& fld) {
    return IntertwinerTensor<F>(k, ParameterSet::canonical(), fld);
}

}  // namespace

TEST_CASE("equation specs validate and reject malformed placements") {
    CHECK_NOTHROW(EquationSpec::tetrahedron());
    CHECK_NOTHROW(EquationSpec::reflection());
    CHECK_NOTHROW(EquationSpec::reflection_rotated());

    EquationSpec bad;
    bad.name = "bad";
    bad.ambient = EquationSpec::nine_slot_signature();

    // four-slot tensor must land on (q, q2, q, q2); slots (2,1,3,4) start on q2
    bad.left = {Placement{TensorKind::J, {2, 1, 3, 4}}};
    bad.right = bad.left;
    CHECK_THROWS_AS(bad.validate(), std::logic_error);

    bad.left = {Placement{TensorKind::S, {5, 5, 6}}};  // repeated slot
    bad.right = bad.left;
    CHECK_THROWS_AS(bad.validate(), std::logic_error);

    bad.left = {Placement{TensorKind::S, {5, 6, 10}}};  // out of range
    bad.right = bad.left;
    CHECK_THROWS_AS(bad.validate(), std::logic_error);

    // reversed slot list is fine for the three-slot tensor (uniform signature)
    bad.left = {Placement{TensorKind::S, {6, 5, 4}}};
    bad.right = bad.left;
    CHECK_NOTHROW(bad.validate());
}

TEST_CASE("vacuum is a fixed point of both sides of every identity") {
    SymbolicField F;
    auto S3 = make_tensor(TensorKind::S, F);
    auto J4 = make_tensor(TensorKind::J, F);
    EquationVerifier<SymbolicField> V(F, S3, &J4);

    for (const EquationSpec& spec : {EquationSpec::tetrahedron(),
                                     EquationSpec::reflection(),
                                     EquationSpec::reflection_rotated()}) {
        TensorVec<SymbolicField> vac =
            TensorVec<SymbolicField>::basis(MultiIndex{}, F);
        TensorVec<SymbolicField> lhs = V.apply_side(spec.left, vac);
        REQUIRE(lhs.terms.size() == 1);
        CHECK(lhs.terms.begin()->first == MultiIndex{});
        CHECK(lhs.terms.begin()->second == Coefficient::one());
        CHECK(V.apply_side(spec.right, vac) == lhs);
    }
}

TEST_CASE("reversed three-slot placement equals the forward placement") {
    SymbolicField F;
    auto S3 = make_tensor(TensorKind::S, F);
    EquationVerifier<SymbolicField> V(F, S3);

    Placement fwd{TensorKind::S, {4, 5, 6}};
    Placement rev{TensorKind::S, {6, 5, 4}};
    for (MultiIndex m : {MultiIndex::of({0, 0, 0, 1, 2, 0}),
                         MultiIndex::of({1, 0, 1, 2, 0, 1}),
                         MultiIndex::of({0, 2, 0, 1, 1, 2})}) {
        TensorVec<SymbolicField> v = TensorVec<SymbolicField>::basis(m, F);
        CHECK(V.apply_placement(fwd, v) == V.apply_placement(rev, v));
    }
}

TEST_CASE("tetrahedron identity holds symbolically on the window-1 sweep") {
    SymbolicField F;
    auto S3 = make_tensor(TensorKind::S, F);
    EquationVerifier<SymbolicField> V(F, S3);

    CheckReport rep = V.verify(EquationSpec::tetrahedron(), 1);
    INFO(rep.line());
    CHECK(rep.pass);
    CHECK(rep.vectors == 64);
    CHECK(rep.witness.empty());
    CHECK(rep.line().find("CHECK tetrahedron vectors=64 window=1 mode=symbolic "
                          "result=PASS") == 0);
}

TEST_CASE("tetrahedron identity holds on the window-2 sweep in evaluated mode") {
    EvalField F = eval0();
    auto S3 = make_tensor(TensorKind::S, F);
    EquationVerifier<EvalField> V(F, S3);

    CheckReport rep = V.verify(EquationSpec::tetrahedron(), 2);
    INFO(rep.line());
    CHECK(rep.pass);
    CHECK(rep.vectors == 729);
    CHECK(rep.mode == "eval:q=2/3");
}

TEST_CASE("reflection identity holds on the window-1 sweep in evaluated mode") {
    EvalField F = eval0();
    auto S3 = make_tensor(TensorKind::S, F);
    auto J4 = make_tensor(TensorKind::J, F);
    EquationVerifier<EvalField> V(F, S3, &J4);

    CheckReport rep = V.verify(EquationSpec::reflection(), 1);
    INFO(rep.line());
    CHECK(rep.pass);
    CHECK(rep.vectors == 512);
    CHECK(rep.witness.empty());
}

TEST_CASE("rotated reflection identity holds on sampled vectors in evaluated mode") {
    EvalField F = eval0();
    auto S3 = make_tensor(TensorKind::S, F);
    auto J4 = make_tensor(TensorKind::J, F);
    EquationVerifier<EvalField> V(F, S3, &J4);

    auto vs = EquationVerifier<EvalField>::sample_vectors(9, 1, 40, 20260825);
    CheckReport rep = V.verify_vectors(EquationSpec::reflection_rotated(), vs, 1);
    INFO(rep.line());
    CHECK(rep.pass);
    CHECK(rep.vectors == 40);
}

TEST_CASE("symbolic and evaluated contractions agree term by term") {
    SymbolicField SF;
    auto S3s = make_tensor(TensorKind::S, SF);
    EquationVerifier<SymbolicField> VS(SF, S3s);

    EvalField EF = eval0();
    auto S3e = make_tensor(TensorKind::S, EF);
    EquationVerifier<EvalField> VE(EF, S3e);

    EquationSpec spec = EquationSpec::tetrahedron();
    MultiIndex m = MultiIndex::of({1, 0, 1, 1, 0, 2});
    TensorVec<SymbolicField> sv =
        VS.apply_side(spec.left, TensorVec<SymbolicField>::basis(m, SF));
    TensorVec<EvalField> ev =
        VE.apply_side(spec.left, TensorVec<EvalField>::basis(m, EF));

    REQUIRE(!sv.terms.empty());
    REQUIRE(sv.terms.size() == ev.terms.size());
    for (const auto& [k, val] : sv.terms) {
        auto it = ev.terms.find(k);
        REQUIRE(it != ev.terms.end());
        CHECK(evaluate(val, EF.pt) == it->second);
    }
}

TEST_CASE("three-slot symmetry checks pass and report in the standard shape") {
    SymbolicField F;
    auto S3 = make_tensor(TensorKind::S, F);

    auto reps = verify_s_symmetries(S3, 4);
    REQUIRE(reps.size() == 2);
    for (const CheckReport& r : reps) {
        INFO(r.line());
        CHECK(r.pass);
        CHECK(r.vectors > 0);
    }
    CHECK(reps[0].line().find("CHECK s-involution ") == 0);
    CHECK(reps[1].line().find("CHECK s-reversal ") == 0);
}

TEST_CASE("a false identity is reported with a witness") {
    SymbolicField F;
    auto S3 = make_tensor(TensorKind::S, F);
    EquationVerifier<SymbolicField> V(F, S3);

    EquationSpec wrong;
    wrong.name = "involution-vs-identity";
    wrong.ambient = SlotSignature(3, Base::Q2);
    wrong.left = {Placement{TensorKind::S, {1, 2, 3}}};
    wrong.right = {Placement{TensorKind::S, {1, 2, 3}},
                   Placement{TensorKind::S, {1, 2, 3}}};
    wrong.validate();

    CheckReport rep = V.verify(wrong, 1);
    CHECK_FALSE(rep.pass);
    CHECK(!rep.witness.empty());
    CHECK(rep.line().find("result=FAIL witness=") != std::string::npos);
}

TEST_CASE("window sweeps are monotone: a bigger window rechecks the smaller one") {
    EvalField F = eval0();
    auto S3 = make_tensor(TensorKind::S, F);
    EquationVerifier<EvalField> V(F, S3);

    // window w covers (w+1)^6 vectors including all of window w-1; passing at
    // 2 implies the window-1 subset passed inside the same sweep.
    CheckReport r1 = V.verify(EquationSpec::tetrahedron(), 1);
    CheckReport r2 = V.verify(EquationSpec::tetrahedron(), 2);
    CHECK(r1.pass);
    CHECK(r2.pass);
    CHECK(r2.vectors > r1.vectors);
    CHECK(r2.max_s_block.level() >= r1.max_s_block.level());
}
