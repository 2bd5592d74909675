#include <catch2/catch_amalgamated.hpp>

#include "qfa/fields.hpp"

#include <random>

using namespace qfa;

namespace {

// Independent helpers for building expected values in tests.
IntPoly P(std::initializer_list<std::pair<long, long>> terms) {
    IntPoly p;
    for (auto [c, e] : terms) p += IntPoly::monomial(Int(c), e);
    return p;
}

std::mt19937_64 rng(0xC0FFEE01);

IntPoly random_poly(int max_deg, int max_coef) {
    std::uniform_int_distribution<int> deg(0, max_deg), coef(-max_coef, max_coef);
    IntPoly p;
    int d = deg(rng);
    for (int e = 0; e <= d; ++e) p += IntPoly::monomial(Int(coef(rng)), e);
    return p;
}

Coefficient random_coeff(bool with_w = true) {
    RatFun den;
    do { den = RatFun(random_poly(3, 2)); } while (den.is_zero());
    RatFun a = RatFun(random_poly(4, 3)) / den;
    RatFun b;
    if (with_w) b = RatFun(random_poly(3, 2)) / den;
    return Coefficient(a, b);
}

// Random value guaranteed printable by the grammar (monomial denominators).
Coefficient random_laurent() {
    std::uniform_int_distribution<int> e(0, 5), d(1, 9);
    RatFun denom = RatFun(IntPoly::monomial(Int(d(rng)), e(rng)));
    return Coefficient(RatFun(random_poly(6, 5)) / denom,
                       RatFun(random_poly(4, 3)) / denom);
}

}  // namespace

TEST_CASE("integer polynomial ring basics") {
    IntPoly one(1), q = IntPoly::q_power(1), q2 = IntPoly::q_power(2);
    CHECK((one + q2).degree() == 2);
    CHECK((q * q) == q2);
    CHECK((one - one).is_zero());
    CHECK(IntPoly::monomial(Int(3), 5).low_degree() == 5);

    // (1+q^2)(1-q^2) = 1-q^4
    CHECK((one + q2) * (one - q2) == P({{1, 0}, {-1, 4}}));

    // exact division undoes multiplication
    IntPoly a = P({{1, 0}, {2, 1}, {-1, 3}});
    IntPoly b = P({{3, 2}, {1, 5}});
    CHECK(divexact(a * b, b) == a);
    CHECK_THROWS(divexact(P({{1, 0}, {1, 1}}), P({{2, 0}})));

    // gcd with content: gcd(2(1-q^2), 4(1-q)) = 2(1-q) up to sign convention
    IntPoly g = gcd(P({{2, 0}, {-2, 2}}), P({{4, 0}, {-4, 1}}));
    CHECK(g == P({{-2, 0}, {2, 1}}) * Int(-1) * Int(-1));  // leading coeff positive
    CHECK(g.leading() > 0);
    CHECK(g == P({{-2, 0}, {2, 1}}));

    CHECK(pow(one + q, 2) == P({{1, 0}, {2, 1}, {1, 2}}));
    CHECK(P({{1, 0}, {1, 1}}).eval(Rat(2, 3)) == Rat(5, 3));
}

TEST_CASE("rational function canonical form") {
    RatFun q = RatFun::q_power(1);
    // (1-q^4)/(1-q^2) reduces to 1+q^2; expected value cross-checked by
    // multiplying back: (1+q^2)(1-q^2) == 1-q^4.
    IntPoly n = P({{1, 0}, {-1, 4}}), d = P({{1, 0}, {-1, 2}});
    REQUIRE(P({{1, 0}, {1, 2}}) * d == n);
    RatFun r(n, d);
    CHECK(r == RatFun(P({{1, 0}, {1, 2}})));
    CHECK(r.is_polynomial());

    // denominator sign normalization: 1/(1-q) has positive-leading den q-1
    RatFun s(IntPoly(1), P({{1, 0}, {-1, 1}}));
    CHECK(s.den() == P({{-1, 0}, {1, 1}}));
    CHECK(s.num() == IntPoly(-1));

    // canonical form is stable under redundant scaling
    IntPoly g = P({{2, 1}, {2, 3}});
    CHECK(RatFun(n * g, d * g) == r);

    CHECK(RatFun::q_power(-3) * RatFun::q_power(3) == RatFun(1));
    CHECK(pow(q, -2) == RatFun(IntPoly(1), IntPoly::q_power(2)));
    CHECK((q - q).is_zero());
    CHECK(RatFun(Rat(2, 3)).eval(Rat(1, 2)) == Rat(2, 3));
    CHECK(RatFun(P({{1, 0}, {1, 1}}), P({{1, 0}, {-1, 1}})).eval(Rat(1, 2)) == Rat(3));
}

TEST_CASE("w extension: w^2 = 1 + q^2") {
    Coefficient w = Coefficient::w();
    Coefficient r(Coefficient::w_square());
    CHECK(w * w == r);

    // inverse of 1+q^2
    CHECK(r.inverse() * r == Coefficient::one());
    // inverse of w is w/(1+q^2)
    CHECK(w.inverse() == w / r);
    CHECK(w.inverse() * w == Coefficient::one());
    // mixed element
    Coefficient c = Coefficient::one() + Coefficient::q_pow(2) * w;
    CHECK(c * c.inverse() == Coefficient::one());
    CHECK(pow(c, 3) == c * c * c);
    CHECK(pow(c, -2) * c * c == Coefficient::one());
}

TEST_CASE("polynomial-in-q^2 detection") {
    CHECK(parse_coefficient("1 - 1*q^4 + 1*q^10").is_polynomial_in_q_squared());
    CHECK_FALSE(parse_coefficient("1 - 1*q^3").is_polynomial_in_q_squared());
    CHECK_FALSE((Coefficient::one() / (Coefficient::one() + Coefficient::q_pow(2)))
                    .is_polynomial());
    CHECK_FALSE(Coefficient::w().is_polynomial_in_q_squared());
    CHECK(Coefficient::zero().is_polynomial_in_q_squared());
}

TEST_CASE("canonical grammar round-trip") {
    // pinned example: exact string form with ascending powers
    Coefficient c = Coefficient::one() - Coefficient::q_pow(4) + Coefficient::q_pow(10);
    CHECK(print_coefficient(c) == "1 - 1*q^4 + 1*q^10");
    CHECK(parse_coefficient("1 - 1*q^4 + 1*q^10") == c);

    CHECK(print_coefficient(Coefficient::zero()) == "0");
    CHECK(parse_coefficient("0") == Coefficient::zero());

    CHECK(print_coefficient(-Coefficient::q_pow(2)) == "-1*q^2");
    CHECK(print_coefficient(Coefficient::w()) == "1*w");
    CHECK(print_coefficient(Coefficient::from_rat(Rat(-2, 3)) * Coefficient::q_pow(-1)) ==
          "-2/3*q^-1");
    CHECK(print_coefficient(Coefficient::q_pow(1) + Coefficient::w() * Coefficient::q_pow(3)) ==
          "1*q^1 + 1*q^3*w");

    // parse accepts unordered/mixed input but prints canonically
    CHECK(print_coefficient(parse_coefficient("1*q^4 + 1 - 2*q^4")) == "1 - 1*q^4");

    // printing a value with a non-monomial denominator must refuse
    CHECK_THROWS_AS(print_coefficient(Coefficient::one() /
                                      (Coefficient::one() - Coefficient::q_pow(2))),
                    std::domain_error);

    CHECK_THROWS(parse_coefficient(""));
    CHECK_THROWS(parse_coefficient("q^2"));       // coefficient is mandatory
    CHECK_THROWS(parse_coefficient("1 + + 2"));
    CHECK_THROWS(parse_coefficient("1*x^2"));

    for (int i = 0; i < 200; ++i) {
        Coefficient v = random_laurent();
        std::string s = print_coefficient(v);
        CHECK(parse_coefficient(s) == v);
        CHECK(print_coefficient(parse_coefficient(s)) == s);
    }
}

TEST_CASE("evaluation is a ring homomorphism") {
    auto pts = default_eval_points();
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].q0 == Rat(2, 3));
    CHECK(pts[0].r0 == Rat(13, 9));

    for (const auto& pt : pts) {
        EvalField F(pt);
        // w evaluates to the formal root: w*w -> r0
        QuadRat wv = F.from_coeff(Coefficient::w());
        CHECK(F.mul(wv, wv) == QuadRat{pt.r0, 0});

        int trials = 400;  // x3 points = 1200 triples total
        for (int i = 0; i < trials; ++i) {
            Coefficient x = random_coeff(), y = random_coeff();
            CHECK(F.from_coeff(x + y) == F.add(F.from_coeff(x), F.from_coeff(y)));
            CHECK(F.from_coeff(x * y) == F.mul(F.from_coeff(x), F.from_coeff(y)));
            if (!y.is_zero())
                CHECK(F.from_coeff(x / y) == F.div(F.from_coeff(x), F.from_coeff(y)));
        }
    }
}

TEST_CASE("field adaptor consistency") {
    SymbolicField F;
    Coefficient x = random_coeff(), y = random_coeff();
    CHECK(F.add(x, y) == x + y);
    Coefficient acc = F.zero();
    F.madd(acc, x, y);
    CHECK(acc == x * y);

    EvalField E(EvalPoint::at(Rat(2, 3)));
    QuadRat a{Rat(1, 2), Rat(3)}, b{Rat(-2), Rat(1, 5)};
    QuadRat m = E.mul(a, b);
    QuadRat acc2 = E.zero();
    E.madd(acc2, a, b);
    CHECK(m == acc2);
    CHECK(E.mul(a, E.inv(a)) == E.one());
    CHECK(E.q_power(-2) == QuadRat{Rat(9, 4), 0});
}
