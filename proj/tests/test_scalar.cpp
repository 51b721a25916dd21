#include <doctest.h>

#include "helpers.hpp"

using namespace qtheta;
using namespace qth_test;

TEST_CASE("polar multiplication") {
    Backend b = cx();
    Scalar x = cscalar(b, 2, 1, 0, 1);
    Scalar y = cscalar(b, 3, 1, 1, 2);
    Scalar p = x.mul(y);
    CHECK(p.abs_part().q == 6);
    CHECK(p.turns_part().q == mpq_class(1, 2));
}

TEST_CASE("inverse is a two-sided unit") {
    Backend b = cx();
    Scalar x = cscalar(b, 7, 3, 2, 5);
    CHECK(x.mul(x.inv()).exact_eq(Scalar::one(b)));
    CHECK(x.inv().mul(x).exact_eq(Scalar::one(b)));
}

TEST_CASE("p-adic rational arithmetic") {
    Backend b = padic(5);
    Scalar x = Scalar::from_rational(b, mpq_class(3, 5));
    Scalar y = Scalar::from_rational(b, mpq_class(5, 3));
    CHECK(x.mul(y).exact_eq(Scalar::one(b)));
    CHECK(x.padic_valuation() == -1);
}

TEST_CASE("square roots") {
    Backend b = cx();
    Scalar four = cscalar(b, 4, 1, 0, 1);
    CHECK(four.sqrt().exact_eq(cscalar(b, 2, 1, 0, 1)));
    Scalar m1 = cscalar(b, 1, 1, 1, 2);
    CHECK(m1.sqrt(Branch::Principal).exact_eq(cscalar(b, 1, 1, 1, 4)));
    CHECK(m1.sqrt(Branch::Other).exact_eq(cscalar(b, 1, 1, 3, 4)));

    Backend p3 = padic(3);
    Scalar nf = Scalar::from_rational(p3, mpq_class(9, 4));
    CHECK(nf.sqrt().rat() == mpq_class(3, 2));
    CHECK_THROWS_AS(Scalar::from_rational(p3, 2).sqrt(), std::domain_error);
    CHECK_THROWS_AS(Scalar::from_rational(p3, -4).sqrt(), std::domain_error);
}

TEST_CASE("log norms") {
    Backend b = cx();
    BigFloat e = BigFloat::from_si(1, b.prec).exp();
    Scalar x = Scalar::from_polar(b, PosReal::from_f(e), Turns::from_q(mpq_class(1, 3)));
    CHECK(std::abs(x.log_norm().to_double() - 1.0) < 1e-70);

    Scalar u = cscalar(b, 1, 1, 7, 13);
    CHECK(u.log_norm().is_zero());

    Backend p5 = padic(5);
    Scalar q = Scalar::from_rational(p5, mpq_class(1, 5));
    CHECK(std::abs(q.log_norm().to_double() - std::log(5.0)) < 1e-15);
}

TEST_CASE("randomized algebraic identities") {
    Backend b = cx();
    auto g = rng(11);
    std::uniform_int_distribution<long> num(1, 40), den(1, 20), tn(0, 23);
    for (int t = 0; t < 200; ++t) {
        Scalar x = cscalar(b, num(g), den(g), tn(g), 24);
        Scalar y = cscalar(b, num(g), den(g), tn(g), 24);
        Scalar z = cscalar(b, num(g), den(g), tn(g), 24);
        CHECK(x.mul(y).exact_eq(y.mul(x)));
        CHECK(x.mul(y.mul(z)).exact_eq(x.mul(y).mul(z)));
        CHECK(x.mul(x.inv()).exact_eq(Scalar::one(b)));
        // log norm is additive
        double lhs = x.mul(y).log_norm().to_double();
        double rhs = (x.log_norm() + y.log_norm()).to_double();
        CHECK(std::abs(lhs - rhs) <= 2e-70 * std::max(1.0, std::abs(lhs)));
        // sqrt squares back exactly on rational data
        Scalar r = x.sqrt(t % 2 ? Branch::Principal : Branch::Other);
        CHECK(r.pow(2).turns_part().q == x.turns_part().q);
    }
}

TEST_CASE("integer powers stay exact on rational polar data") {
    Backend b = cx();
    Scalar x = cscalar(b, 3, 2, 5, 7);
    Scalar p = x.pow(11);
    CHECK(p.turns_part().exact);
    CHECK(p.turns_part().q == mpq_class(55 % 7, 7));
    CHECK(p.abs_part().exact);
    Scalar back = p.mul(x.pow(-11));
    CHECK(back.exact_eq(Scalar::one(b)));
}

TEST_CASE("coefficient addition") {
    Backend b = cx();
    Coefficient a = cscalar(b, 2, 1, 1, 4).to_coefficient();
    Coefficient c = cscalar(b, 3, 1, 1, 4).to_coefficient();
    Coefficient s = a.add(c);  // colinear: stays exact
    CHECK(s.abs_part().exact);
    CHECK(s.abs_part().q == 5);
    CHECK(s.turns_part().q == mpq_class(1, 4));

    Coefficient d = a.add(a.negated());
    CHECK(d.is_zero());

    // generic path: 1 + i has modulus sqrt(2) and turns 1/8
    Coefficient one = Coefficient::one(b);
    Coefficient i = cscalar(b, 1, 1, 1, 4).to_coefficient();
    Coefficient z = one.add(i);
    CHECK(std::abs(z.norm().to_double() - std::sqrt(2.0)) < 1e-60);
    CHECK(std::abs(z.turns_part().to_f(b.prec).to_double() - 0.125) < 1e-60);

    // cancellation through the cartesian path collapses to exact zero
    Coefficient w = z.sub(i).sub(one);
    CHECK(w.is_zero());
}

TEST_CASE("p-adic coefficients are exact") {
    Backend b = padic(7);
    Coefficient x = Coefficient::from_rational(b, mpq_class(3, 14));
    Coefficient y = Coefficient::from_rational(b, mpq_class(-3, 14));
    CHECK(x.add(y).is_zero());
    CHECK(x.mul(y).rat() == mpq_class(-9, 196));
}

TEST_CASE("scalar json round trip is bit-exact on rational data") {
    Backend b = cx();
    Scalar x = cscalar(b, 22, 7, 3, 8);
    auto j = io::scalar_to_json(x);
    Scalar y = io::scalar_from_json(j, b);
    CHECK(y.exact_eq(x));
    CHECK(io::scalar_to_json(y) == j);

    Backend p = padic(11);
    Scalar q = Scalar::from_rational(p, mpq_class(-121, 13));
    CHECK(io::scalar_from_json(io::scalar_to_json(q), p).exact_eq(q));

    // inexact values reproduce their bits through the decimal rendering
    Scalar s = Scalar::from_polar(
        b, PosReal::from_f(BigFloat::from_si(2, b.prec).sqrt()),
        Turns::from_f(BigFloat::from_si(3, b.prec).sqrt()));
    Scalar s2 = io::scalar_from_json(io::scalar_to_json(s), b);
    CHECK(Coefficient::dist(s.to_coefficient(), s2.to_coefficient()).to_double() < 1e-70);
}

TEST_CASE("malformed scalar literals name the field") {
    Backend b = cx();
    io::json j;
    j["abs"] = "2x";
    j["turns"] = "0";
    CHECK_THROWS_WITH_AS(io::scalar_from_json(j, b, "alpha.offdiag"),
                         doctest::Contains("alpha.offdiag"), std::invalid_argument);
    io::json k;
    k["abs"] = "2";
    CHECK_THROWS_WITH_AS(io::scalar_from_json(k, b, "psi"), doctest::Contains("turns"),
                         std::invalid_argument);
}

TEST_CASE("backend mismatch is rejected") {
    Scalar x = cscalar(cx(), 2, 1, 0, 1);
    Scalar y = Scalar::from_rational(padic(5), 2);
    CHECK_THROWS_AS(x.mul(y), std::invalid_argument);
}
