#include <catch2/catch_amalgamated.hpp>

#include "generic_params.hpp"
#include "qfa/frt.hpp"

using namespace qfa;

namespace {

Coefficient qp(long e) { return Coefficient::q_pow(e); }

std::vector<FundamentalRep> fundamental_reps(LieType t, const ParameterSet& par) {
    std::vector<FundamentalRep> reps;
    if (t == LieType::B3) {
        reps.push_back(build_rep(1, par));
        reps.push_back(build_rep(2, par));
        reps.push_back(build_rep(3, par));
    } else {
        reps.push_back(b2_subrep(build_rep(2, par)));
        reps.push_back(b2_subrep(build_rep(3, par)));
    }
    return reps;
}

}  // namespace

TEST_CASE("metric matrix entries match the closed form") {
    const StructureConstants& b3 = structure_constants(LieType::B3);
    CHECK(b3.C(1, 7) == qp(-5));
    CHECK(b3.C(2, 6) == qp(-3));
    CHECK(b3.C(4, 4) == Coefficient::one());
    CHECK(b3.C(7, 1) == qp(5));
    CHECK(b3.C(1, 2).is_zero());
    CHECK(b3.C(1, 1).is_zero());

    const StructureConstants& b2 = structure_constants(LieType::B2);
    CHECK(b2.C(1, 5) == qp(-3));
    CHECK(b2.C(3, 3) == Coefficient::one());
    CHECK(b2.C(5, 1) == qp(3));

    const StructureConstants& c2 = structure_constants(LieType::C2);
    CHECK(c2.C(1, 4) == -qp(-2));
    CHECK(c2.C(2, 3) == -qp(-1));
    CHECK(c2.C(3, 2) == qp(1));
    CHECK(c2.C(4, 1) == qp(2));
    CHECK(c2.C(2, 2).is_zero());
}

TEST_CASE("vector representation weights pair to zero across the antidiagonal") {
    for (LieType t : {LieType::B2, LieType::B3, LieType::C2}) {
        const int N = lie_dim(t);
        for (int i = 1; i <= N; ++i) {
            auto w = vector_weight(t, i);
            auto wd = vector_weight(t, dual_index(N, i));
            REQUIRE(w.size() == size_t(lie_rank(t)));
            bool zero = true;
            for (size_t s = 0; s < w.size(); ++s) {
                CHECK(w[s] + wd[s] == 0);
                if (w[s] != 0) zero = false;
            }
            // exactly the self-dual middle index carries weight zero
            CHECK(zero == (2 * i == N + 1));
        }
    }
}

TEST_CASE("exchange ansatz support is triangular and weight conserving") {
    WeightAnsatz a2 = build_ansatz(LieType::B2);
    WeightAnsatz a3 = build_ansatz(LieType::B3);
    WeightAnsatz ac = build_ansatz(LieType::C2);
    CHECK(a2.support.size() == 43);
    CHECK(a3.support.size() == 88);
    CHECK(ac.support.size() == 26);
    CHECK(a3.index.count({1, 1, 1, 1}) == 1);
    CHECK(a3.index.count({2, 1, 1, 2}) == 1);
    CHECK(a3.index.count({1, 2, 2, 1}) == 0);  // one-sided orientation
    for (const auto& e : a3.support) {
        auto lw = vector_weight(LieType::B3, e[0]);
        auto rw = vector_weight(LieType::B3, e[1]);
        auto lw2 = vector_weight(LieType::B3, e[2]);
        auto rw2 = vector_weight(LieType::B3, e[3]);
        for (size_t s = 0; s < lw.size(); ++s)
            REQUIRE(lw[s] + rw[s] == lw2[s] + rw2[s]);
    }
}

TEST_CASE("the linear system pins the exchange matrix up to one scalar") {
    for (LieType t : {LieType::B2, LieType::B3}) {
        const StructureConstants& sc = structure_constants(t);
        INFO(lie_name(t));
        CHECK(sc.origin == "solved");
        CHECK(sc.solve_nullity == 1);
        CHECK(sc.solve_rank == sc.ansatz_unknowns - 1);
        CHECK(sc.R.at(1, 1, 1, 1) == qp(2));
    }
    CHECK(structure_constants(LieType::C2).origin == "closed-form");
}

TEST_CASE("solved matrices match the frozen closed form entry for entry") {
    for (LieType t : {LieType::B2, LieType::B3}) {
        const StructureConstants& sc = structure_constants(t);
        RMatrix cf = closed_form_r(t);
        INFO(lie_name(t));
        REQUIRE(sc.R.entries.size() == cf.entries.size());
        CHECK(sc.R.entries == cf.entries);
    }
}

TEST_CASE("spot values of the exchange matrices") {
    const RMatrix& r3 = structure_constants(LieType::B3).R;
    const Coefficient gap2 = qp(2) - qp(-2);
    CHECK(r3.at(1, 1, 1, 1) == qp(2));
    CHECK(r3.at(1, 7, 1, 7) == qp(-2));
    CHECK(r3.at(4, 4, 4, 4) == Coefficient::one());  // self-dual index
    CHECK(r3.at(1, 2, 1, 2) == Coefficient::one());
    CHECK(r3.at(2, 1, 1, 2) == gap2);
    CHECK(r3.at(1, 2, 2, 1).is_zero());  // the other orientation is absent
    CHECK(r3.at(7, 1, 4, 4) == -gap2 * qp(-5));
    CHECK(r3.at(7, 1, 1, 7) == gap2 - gap2 * qp(-10));

    const RMatrix& rc = structure_constants(LieType::C2).R;
    const Coefficient gap1 = qp(1) - qp(-1);
    CHECK(rc.at(1, 1, 1, 1) == qp(1));
    CHECK(rc.at(1, 4, 1, 4) == qp(-1));
    CHECK(rc.at(2, 1, 1, 2) == gap1);
    // the symplectic sign pattern shows up in the zero-weight block
    CHECK(rc.at(4, 1, 3, 2) == -gap1 * qp(-1));   // both signs negative
    CHECK(rc.at(3, 2, 1, 4) == gap1 * qp(-3));    // one sign negative
    CHECK(rc.at(4, 1, 1, 4) == gap1 + gap1 * qp(-4));
}

TEST_CASE("the quantum Yang-Baxter identity holds for all three matrices") {
    for (LieType t : {LieType::B2, LieType::B3, LieType::C2}) {
        CheckReport r = ybe_report(structure_constants(t).R, lie_name(t));
        INFO(r.line());
        CHECK(r.pass);
        long n = lie_dim(t);
        CHECK(r.vectors == n * n * n);
        CHECK(r.mode == "symbolic");
    }
    CheckReport r = ybe_report(structure_constants(LieType::B3).R, "so7");
    CHECK(r.line() == "CHECK so7-yangbaxter vectors=343 window=0 mode=symbolic result=PASS");
}

TEST_CASE("every weight block of the exchange matrices is invertible") {
    for (LieType t : {LieType::B2, LieType::B3, LieType::C2}) {
        CheckReport r = invertibility_report(t, structure_constants(t).R, lie_name(t));
        INFO(r.line());
        CHECK(r.pass);
    }
}

TEST_CASE("the metric line is a two-sided eigenline with the frozen eigenvalues") {
    MetricLineResult b2 = metric_line_report(structure_constants(LieType::B2), "so5");
    MetricLineResult b3 = metric_line_report(structure_constants(LieType::B3), "so7");
    MetricLineResult c2 = metric_line_report(structure_constants(LieType::C2), "sp4");
    CHECK(b2.report.pass);
    CHECK(b3.report.pass);
    CHECK(c2.report.pass);
    CHECK(b2.lambda == qp(-8));
    CHECK(b3.lambda == qp(-12));
    CHECK(c2.lambda == -qp(-5));
}

TEST_CASE("flip eigenspace dimensions split the square completely") {
    auto dims = [&](LieType t, const Coefficient& lam) {
        long u = step_exponent(t);
        return spectrum_dims(structure_constants(t).R, {qp(u), -qp(-u), lam});
    };
    CHECK(dims(LieType::B2, qp(-8)) == std::vector<long>{14, 10, 1});
    CHECK(dims(LieType::B3, qp(-12)) == std::vector<long>{27, 21, 1});
    CHECK(dims(LieType::C2, -qp(-5)) == std::vector<long>{10, 5, 1});
}

TEST_CASE("exchange and contraction relations hold in every fundamental representation") {
    ParameterSet par = ParameterSet::canonical();
    const StructureConstants& b3 = structure_constants(LieType::B3);
    for (const auto& rep : fundamental_reps(LieType::B3, par)) {
        CheckReport r = rtt_check(rep, b3, 12);
        INFO(r.line());
        CHECK(r.pass);
        CHECK(r.vectors == 7 * 7 * 7 * 7 + 7 * 7);
        CHECK(r.window == 12);
    }
    const StructureConstants& b2 = structure_constants(LieType::B2);
    for (const auto& rep : fundamental_reps(LieType::B2, par)) {
        CheckReport r = rtt_check(rep, b2, 12);
        INFO(r.line());
        CHECK(r.pass);
        CHECK(r.vectors == 5 * 5 * 5 * 5 + 5 * 5);
    }
}

TEST_CASE("exchange relations are insensitive to the representation parameters") {
    ParameterSet par = qfa_test::generic_params();
    const StructureConstants& b3 = structure_constants(LieType::B3);
    for (const auto& rep : fundamental_reps(LieType::B3, par))
        CHECK(rtt_check(rep, b3, 4).pass);
    const StructureConstants& b2 = structure_constants(LieType::B2);
    for (const auto& rep : fundamental_reps(LieType::B2, par))
        CHECK(rtt_check(rep, b2, 4).pass);
}

TEST_CASE("contraction relations act as the identity on the vacuum") {
    ParameterSet par = ParameterSet::canonical();
    FundamentalRep pi1 = build_rep(1, par);
    const StructureConstants& sc = structure_constants(LieType::B3);
    const int N = sc.N;
    auto first_contraction = [&](int i, int m) {
        OscExpr acc = OscExpr::zero(pi1.base);
        for (int k = 1; k <= N; ++k)
            acc += sc.C(dual_index(N, k), k) * sc.C(dual_index(N, m), m) *
                   (pi1(i, dual_index(N, k)) * pi1(dual_index(N, m), k));
        return acc;
    };
    auto on_vacuum = apply_osc(first_contraction(1, 1), 0);
    REQUIRE(on_vacuum.size() == 1);
    CHECK(on_vacuum[0].first == 0);
    CHECK(on_vacuum[0].second == Coefficient::one());
    CHECK(apply_osc(first_contraction(1, 2), 0).empty());
}

TEST_CASE("operator application to number states is exact") {
    auto plus = apply_osc(OscExpr::a_plus(Base::Q2), 3);
    REQUIRE(plus.size() == 1);
    CHECK(plus[0].first == 4);
    CHECK(plus[0].second == Coefficient::one());

    auto minus = apply_osc(OscExpr::a_minus(Base::Q2), 3);
    REQUIRE(minus.size() == 1);
    CHECK(minus[0].first == 2);
    CHECK(minus[0].second == Coefficient::one() - qp(12));
    CHECK(apply_osc(OscExpr::a_minus(Base::Q2), 0).empty());

    auto kq = apply_osc(OscExpr::k(Base::Q), 2);
    REQUIRE(kq.size() == 1);
    CHECK(kq[0].second == qp(2));
    auto kq2 = apply_osc(OscExpr::k(Base::Q2, 2), 2);
    REQUIRE(kq2.size() == 1);
    CHECK(kq2[0].second == qp(8));

    // composite expressions agree with step-by-step application
    OscExpr comp = OscExpr::a_minus(Base::Q) * OscExpr::a_plus(Base::Q);
    auto img = apply_osc(comp, 5);
    REQUIRE(img.size() == 1);
    CHECK(img[0].first == 5);
    CHECK(img[0].second == Coefficient::one() - qp(12));
}

TEST_CASE("a tampered matrix fails the gates with a witness") {
    RMatrix bad = closed_form_r(LieType::B2);
    bad.entries[{2, 1, 1, 2}] += Coefficient::one();
    bad.finalize();

    CheckReport ybe = ybe_report(bad, "tampered");
    CHECK_FALSE(ybe.pass);
    CHECK(ybe.line().find("result=FAIL witness=") != std::string::npos);

    StructureConstants sc = structure_constants(LieType::B2);
    sc.R = bad;
    CheckReport rtt = rtt_check(b2_subrep(build_rep(2, ParameterSet::canonical())), sc, 4);
    CHECK_FALSE(rtt.pass);
    CHECK(rtt.witness.find("exchange(") != std::string::npos);
    CHECK(rtt.witness.find("state=") != std::string::npos);

    // the metric line only sees the zero-weight block, so tamper there
    StructureConstants sc0 = structure_constants(LieType::B2);
    RMatrix bad0 = closed_form_r(LieType::B2);
    bad0.entries[{4, 2, 1, 5}] += Coefficient::one();
    bad0.finalize();
    sc0.R = bad0;
    MetricLineResult ml = metric_line_report(sc0, "tampered");
    CHECK_FALSE(ml.report.pass);
    CHECK_FALSE(ml.report.witness.empty());
}

TEST_CASE("structure constants are memoized") {
    const StructureConstants* a = &structure_constants(LieType::B3);
    const StructureConstants* b = &structure_constants(LieType::B3);
    CHECK(a == b);
}
