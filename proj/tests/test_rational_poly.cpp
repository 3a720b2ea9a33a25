#include <catch2/catch_amalgamated.hpp>

#include <loopw/poly.hpp>
#include <loopw/rational.hpp>

#include <random>

using namespace loopw;

namespace {

Rat random_rat(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-6, 6);
    std::uniform_int_distribution<int> den(1, 4);
    return Rat(num(rng), den(rng));
}

Poly random_poly(std::mt19937& rng, int max_deg = 4) {
    std::uniform_int_distribution<int> deg(0, max_deg);
    std::uniform_int_distribution<int> nterms(1, 5);
    Poly p;
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        Monomial mo{deg(rng), deg(rng), deg(rng)};
        if (mo.d + mo.l + mo.m > max_deg) continue;
        p.add_term(mo, random_rat(rng));
    }
    return p;
}

} // namespace

TEST_CASE("rational parsing and printing round-trip") {
    CHECK(rat_str(rat_parse("3/4")) == "3/4");
    CHECK(rat_str(rat_parse("-3/4")) == "-3/4");
    CHECK(rat_str(rat_parse("10/5")) == "2");
    CHECK(rat_str(rat_parse("0")) == "0");
    CHECK(rat_str(rat_parse("-0")) == "0");
    CHECK(rat_parse("6/-4") == Rat(-3, 2));
    CHECK_THROWS_AS(rat_parse(""), std::invalid_argument);
    CHECK_THROWS_AS(rat_parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(rat_parse("x"), std::invalid_argument);
    CHECK_THROWS_AS(rat_parse("1.5"), std::invalid_argument);
    CHECK_THROWS_AS(rat_parse("1/2/3"), std::invalid_argument);
    CHECK_THROWS_AS(rat_parse("2 /3"), std::invalid_argument);
}

TEST_CASE("rational helpers") {
    CHECK(rat_is_integer(Rat(8, 4)));
    CHECK_FALSE(rat_is_integer(Rat(1, 2)));
    CHECK(rat_pow(Rat(2, 3), 3) == Rat(8, 27));
    CHECK(rat_pow(Rat(2, 3), -2) == Rat(9, 4));
    CHECK(rat_pow(Rat(5), 0) == 1);
    CHECK_THROWS_AS(rat_pow(Rat(0), -1), std::domain_error);
    CHECK(rat_factorial(0) == 1);
    CHECK(rat_factorial(5) == 120);
    CHECK(rat_binom(5, 2) == 10);
    CHECK(rat_binom(3, 0) == 1);
    CHECK(rat_binom(3, 7) == 0);
}

TEST_CASE("polynomial ring axioms on random samples") {
    std::mt19937 rng(20260816);
    for (int trial = 0; trial < 60; ++trial) {
        Poly p = random_poly(rng), q = random_poly(rng), r = random_poly(rng);
        CHECK((p * q) == (q * p));
        CHECK(((p * q) * r) == (p * (q * r)));
        Poly sum = p;
        sum += q;
        CHECK((sum * r) == (p * r) + (q * r));
        Poly zero_check = p;
        zero_check -= p;
        CHECK(zero_check.is_zero());
    }
}

TEST_CASE("polynomial evaluation is a ring homomorphism") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        Poly p = random_poly(rng), q = random_poly(rng);
        Rat d = random_rat(rng), l = random_rat(rng), m = random_rat(rng);
        CHECK(poly_eval((p * q), d, l, m) ==
              poly_eval(p, d, l, m) * poly_eval(q, d, l, m));
        CHECK(poly_eval(p + q, d, l, m) == poly_eval(p, d, l, m) + poly_eval(q, d, l, m));
    }
}

TEST_CASE("substitution basics") {
    // D + 2*lam with lam -> -D - lam gives -D - 2*lam.
    Poly p = poly_D() + poly_lam() * Rat(2);
    Poly expect = -(poly_D() + poly_lam() * Rat(2));
    CHECK(subst_skew(p) == expect);

    // shift by lam then by -lam is the identity.
    std::mt19937 rng(99);
    for (int t = 0; t < 20; ++t) {
        Poly q = random_poly(rng);
        CHECK(shift_D(shift_D(q, poly_lam()), -poly_lam()) == q);
        CHECK(subst_skew(subst_skew(q)) == q);
    }
}

TEST_CASE("simultaneous substitution uses original values") {
    // p = D * lam; swap D <-> lam simultaneously: result is still D * lam.
    Poly p = (poly_D() * poly_lam());
    std::map<Var, Poly> swap{{Var::D, poly_lam()}, {Var::Lam, poly_D()}};
    CHECK(p.substituted(swap) == p);

    // D -> lam while lam -> -D - lam: (D + 2 lam) becomes lam + 2(-D - lam).
    Poly q = poly_D() + poly_lam() * Rat(2);
    std::map<Var, Poly> sub{{Var::D, poly_lam()}, {Var::Lam, -poly_D() - poly_lam()}};
    CHECK(q.substituted(sub) == -poly_D() * Rat(2) - poly_lam());
}

TEST_CASE("substitution is multiplicative") {
    std::mt19937 rng(31);
    std::map<Var, Poly> sub{{Var::D, poly_D() + poly_lam()},
                            {Var::Lam, poly_mu() * Rat(2)},
                            {Var::Mu, poly_D() - poly_one()}};
    for (int t = 0; t < 20; ++t) {
        Poly p = random_poly(rng, 3), q = random_poly(rng, 3);
        CHECK((p * q).substituted(sub) ==
              (p.substituted(sub) * q.substituted(sub)));
    }
}

TEST_CASE("degree and support") {
    Poly p = poly_pow(poly_D(), 3) + (poly_lam() * poly_mu());
    CHECK(p.degree(Var::D) == 3);
    CHECK(p.degree(Var::Lam) == 1);
    CHECK(p.degree(Var::Mu) == 1);
    CHECK(Poly{}.degree(Var::D) == -1);
    CHECK(p.support(Var::D) == std::vector<int>{0, 3});
    CHECK(p.depends_on(Var::Mu));
    CHECK_FALSE(poly_D().depends_on(Var::Lam));
}

TEST_CASE("canonical printing") {
    CHECK(poly_str(Poly{}) == "0");
    CHECK(poly_str(poly_one()) == "1");
    Poly p = poly_D() + poly_lam() * Rat(2);
    CHECK(poly_str(p) == "2*lam + D");
    Poly q = poly_pow(poly_D(), 2) * Rat(-1, 2);
    CHECK(poly_str(q) == "-1/2*D^2");
}
