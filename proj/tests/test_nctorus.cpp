#include <doctest.h>

#include "helpers.hpp"

using namespace qtheta;
using namespace qth_test;

namespace {

GroupRingElement mono(const TorusPtr& t, IntVec h) {
    return GroupRingElement::monomial(t, std::move(h), Coefficient::one(t->backend()));
}

}  // namespace

TEST_CASE("xy = q yx presentation") {
    Backend b = cx();
    // alpha(e1,e2) = q^{1/2} realizes the commutation relation with q
    Scalar qhalf = cscalar(b, 1, 1, 1, 10);  // q = e^{2 pi i / 5}
    TorusPtr T = make_torus(AlternatingPairing(b, 2, {qhalf}, {1, 1}));
    GroupRingElement x = mono(T, {1, 0}), y = mono(T, {0, 1});
    GroupRingElement xy = ring_mul(x, y), yx = ring_mul(y, x);
    CHECK(xy.coeff(IntVec{1, 1}).to_scalar()->exact_eq(qhalf));
    Scalar q = qhalf.pow(2);
    CHECK(xy.eq(yx.scaled(q.to_coefficient()), 0.0));
}

TEST_CASE("monomial inverses") {
    Backend b = cx();
    TorusPtr T = make_torus(AlternatingPairing(b, 2, {cscalar(b, 2, 1, 1, 3)}, {1, 1}));
    GroupRingElement x = mono(T, {2, -1});
    CHECK(ring_mul(x, ring_inv(x)).eq(GroupRingElement::unit(T), 0.0));

    GroupRingElement two = GroupRingElement::monomial(T, {0, 0}, cscalar(b, 2, 1, 0, 1).to_coefficient());
    CHECK(ring_inv(two).coeff(IntVec{0, 0}).to_scalar()->exact_eq(cscalar(b, 1, 2, 0, 1)));

    GroupRingElement sum = x.add(mono(T, {0, 3}));
    CHECK_THROWS_AS(ring_inv(sum), std::domain_error);

    // with a -1 diagonal sign, e(h)^-1 = eps(h) e(-h)
    TorusPtr S = make_torus(AlternatingPairing(b, 1, {}, {-1}));
    GroupRingElement e1 = mono(S, {1});
    GroupRingElement inv = ring_inv(e1);
    CHECK(inv.coeff(IntVec{-1}).to_scalar()->exact_eq(Scalar::minus_one(b)));
    CHECK(ring_mul(e1, inv).eq(GroupRingElement::unit(S), 0.0));
}

TEST_CASE("triple product follows the expansion") {
    Backend b = cx();
    Scalar q = cscalar(b, 3, 2, 1, 7);
    TorusPtr T = make_torus(AlternatingPairing(b, 2, {q}, {1, -1}));
    auto g = rng(37);
    for (int t = 0; t < 100; ++t) {
        IntVec h1 = random_vec(g, 2, -4, 4), h2 = random_vec(g, 2, -4, 4), h3 = random_vec(g, 2, -4, 4);
        GroupRingElement p = ring_mul(ring_mul(mono(T, h1), mono(T, h2)), mono(T, h3));
        IntVec sum{h1[0] + h2[0] + h3[0], h1[1] + h2[1] + h3[1]};
        Scalar expected = T->alpha().eval(h1, h2).mul(T->alpha().eval(h1, h3)).mul(T->alpha().eval(h2, h3));
        CHECK(p.coeff(sum).to_scalar()->exact_eq(expected));
    }
}

TEST_CASE("ring_mul is associative on random monomial triples") {
    Backend b = cx();
    Scalar q = cscalar(b, 1, 1, 3, 11);
    TorusPtr T = make_torus(AlternatingPairing(b, 3, {q, q.pow(4), q.inv()}, {1, -1, 1}));
    auto g = rng(41);
    for (int t = 0; t < 500; ++t) {
        GroupRingElement x = mono(T, random_vec(g, 3, -3, 3));
        GroupRingElement y = mono(T, random_vec(g, 3, -3, 3));
        GroupRingElement z = mono(T, random_vec(g, 3, -3, 3));
        CHECK(ring_mul(ring_mul(x, y), z).eq(ring_mul(x, ring_mul(y, z)), 0.0));
    }
}

TEST_CASE("morphism validation") {
    Backend b = cx();
    Scalar q = cscalar(b, 1, 1, 1, 5);
    TorusPtr T = make_torus(AlternatingPairing(b, 2, {q}, {1, 1}));

    MorphismReport idrep = morphism_check(*T, *T, IntMat::identity(2));
    CHECK(idrep.compatible);
    CHECK(idrep.sigma_is_one);

    TorusMorphism multn = make_mult_n(T, 3);
    CHECK(multn.sigma_is_one());
    CHECK(multn.target()->alpha().offdiag(0, 1).exact_eq(q.pow(9)));

    // doubling against the un-squared parameter violates (2.2)
    MorphismReport bad = morphism_check(*T, *T, IntMat::identity(2).scaled(2));
    CHECK_FALSE(bad.compatible);
    CHECK_THROWS_AS(TorusMorphism::make(T, T, IntMat::identity(2).scaled(2),
                                        {Scalar::one(b), Scalar::one(b)}),
                    std::domain_error);
}

TEST_CASE("shift morphism acts by h(b)") {
    Backend b = cx();
    Scalar q = cscalar(b, 1, 1, 2, 9);
    TorusPtr T = make_torus(AlternatingPairing(b, 2, {q}, {1, 1}));
    CharacterPoint pt(b, {cscalar(b, 2, 1, 1, 6), cscalar(b, 5, 3, 0, 1)});
    TorusMorphism shift = make_shift(T, pt);
    auto g = rng(43);
    for (int t = 0; t < 50; ++t) {
        IntVec h = random_vec(g, 2, -5, 5);
        GroupRingElement out = shift.apply_star(mono(T, h));
        CHECK(out.coeff(h).to_scalar()->exact_eq(pt.eval(h)));
        CHECK(out.support_size() == 1);
    }
}

TEST_CASE("shift and multiplication commutation rule") {
    Backend b = cx();
    Scalar q = cscalar(b, 1, 1, 1, 7);
    TorusPtr T = make_torus(AlternatingPairing(b, 2, {q}, {1, 1}));
    long n = 2;
    TorusMorphism multn = make_mult_n(T, n);
    CharacterPoint pt(b, {cscalar(b, 3, 2, 1, 8), cscalar(b, 1, 1, 3, 10)});
    TorusMorphism shift_b = make_shift(T, pt);                      // on T(H, alpha)
    TorusMorphism shift_nb = make_shift(multn.target(), pt.pow(n)); // on T(H, alpha^{n^2})
    auto g = rng(47);
    for (int t = 0; t < 50; ++t) {
        IntVec h = random_vec(g, 2, -5, 5);
        GroupRingElement x = mono(multn.target(), h);
        GroupRingElement lhs = shift_b.apply_star(multn.apply_star(x));
        GroupRingElement rhs = multn.apply_star(shift_nb.apply_star(x));
        CHECK(lhs.eq(rhs, 0.0));
    }
}

TEST_CASE("mumford morphism") {
    Backend b = cx();
    Scalar q = cscalar(b, 1, 1, 1, 8);
    AlternatingPairing alpha(b, 1, {}, {1});
    // nontrivial rank-2 alpha for the well-definedness identity
    AlternatingPairing alpha2(b, 2, {q}, {1, 1});
    auto g = rng(53);
    for (int t = 0; t < 50; ++t) {
        IntVec h = random_vec(g, 2, -4, 4), k = random_vec(g, 2, -4, 4);
        IntVec hp = random_vec(g, 2, -4, 4), kp = random_vec(g, 2, -4, 4);
        IntVec u{h[0] + k[0], h[1] + k[1], h[0] - k[0], h[1] - k[1]};
        IntVec v{hp[0] + kp[0], hp[1] + kp[1], hp[0] - kp[0], hp[1] - kp[1]};
        Scalar lhs = alpha2.direct_sum(alpha2).eval(u, v);
        Scalar rhs = alpha2.pow(2).eval(h, hp).mul(alpha2.pow(2).eval(k, kp));
        CHECK(lhs.exact_eq(rhs));
    }

    TorusMorphism M = make_mumford(alpha);
    CHECK(M.sigma_is_one());
    GroupRingElement x = mono(M.target(), {2, 3});
    GroupRingElement out = M.apply_star(x);
    CHECK(out.coeff(IntVec{5, -1}).to_scalar()->exact_eq(Scalar::one(b)));
}

TEST_CASE("external multiplication and direct products") {
    Backend b = cx();
    Scalar qa = cscalar(b, 1, 1, 1, 6), qb = cscalar(b, 1, 1, 1, 4);
    AlternatingPairing alpha(b, 2, {qa}, {1, 1}), beta(b, 2, {qb}, {1, 1});
    TorusMorphism m = make_external_mult(alpha, beta);
    CHECK(m.sigma_is_one());
    GroupRingElement x = mono(m.target(), {1, -2});
    GroupRingElement out = m.apply_star(x);
    CHECK(out.coeff(IntVec{1, -2, 1, -2}).to_scalar()->exact_eq(Scalar::one(b)));

    TorusPtr Ta = make_torus(alpha), Tb = make_torus(beta);
    TorusPtr prod = direct_product(Ta, Tb);
    auto g = rng(59);
    for (int t = 0; t < 50; ++t) {
        IntVec h1 = random_vec(g, 2, -3, 3), h2 = random_vec(g, 2, -3, 3);
        IntVec g1 = random_vec(g, 2, -3, 3), g2 = random_vec(g, 2, -3, 3);
        GroupRingElement lhs = ring_mul(tensor(prod, mono(Ta, h1), mono(Tb, h2)),
                                        tensor(prod, mono(Ta, g1), mono(Tb, g2)));
        GroupRingElement rhs = tensor(prod, ring_mul(mono(Ta, h1), mono(Ta, g1)),
                                      ring_mul(mono(Tb, h2), mono(Tb, g2)));
        CHECK(lhs.eq(rhs, 0.0));
    }
}

TEST_CASE("morphisms are ring homomorphisms") {
    Backend b = cx();
    Scalar q = cscalar(b, 1, 1, 1, 5);
    TorusPtr T = make_torus(AlternatingPairing(b, 2, {q}, {1, 1}));
    CharacterPoint pt(b, {cscalar(b, 2, 1, 1, 12), cscalar(b, 7, 4, 5, 9)});
    std::vector<TorusMorphism> ms;
    ms.push_back(make_shift(T, pt));
    ms.push_back(make_mult_n(T, -1));
    ms.push_back(make_mult_n(T, 2));
    ms.push_back(make_mumford(T->alpha()));
    auto g = rng(61);
    for (const TorusMorphism& F : ms) {
        int n1 = F.target()->rank();
        for (int t = 0; t < 50; ++t) {
            GroupRingElement x = mono(F.target(), random_vec(g, n1, -4, 4));
            GroupRingElement y = mono(F.target(), random_vec(g, n1, -4, 4));
            CHECK(F.apply_star(ring_mul(x, y)).eq(ring_mul(F.apply_star(x), F.apply_star(y)), 0.0));
        }
    }
}

TEST_CASE("nontrivial characteristic morphism") {
    Backend b = cx();
    Scalar q = cscalar(b, 1, 1, 1, 3);
    TorusPtr T1 = make_torus(AlternatingPairing(b, 2, {q}, {1, 1}));
    TorusPtr T2 = make_torus(AlternatingPairing(b, 2, {q.negated()}, {1, 1}));
    // f = identity: alpha_1 alpha_2^-1 = -1 on the basis pair, so sigma != 1
    TorusMorphism F = TorusMorphism::make(T2, T1, IntMat::identity(2),
                                          {cscalar(b, 2, 1, 0, 1), cscalar(b, 3, 1, 1, 4)});
    CHECK_FALSE(F.sigma_is_one());
    auto g = rng(67);
    for (int t = 0; t < 100; ++t) {
        IntVec h = random_vec(g, 2, -5, 5), k = random_vec(g, 2, -5, 5);
        IntVec sum{h[0] + k[0], h[1] + k[1]};
        // coefficient relation (2.6)
        Scalar lhs = F.coeff(h).mul(F.coeff(k)).mul(F.coeff(sum).inv());
        Scalar sigma = Scalar::one(b);
        if (F.sigma(h, k) < 0) sigma = sigma.negated();
        CHECK(lhs.exact_eq(sigma));
        // it is still a ring homomorphism
        GroupRingElement x = mono(T1, h), y = mono(T1, k);
        CHECK(F.apply_star(ring_mul(x, y)).eq(ring_mul(F.apply_star(x), F.apply_star(y)), 0.0));
    }
}

TEST_CASE("morphisms with the same lattice map differ by a character") {
    Backend b = cx();
    Scalar q = cscalar(b, 1, 1, 1, 5);
    TorusPtr T = make_torus(AlternatingPairing(b, 2, {q}, {1, 1}));
    TorusMorphism F1 = TorusMorphism::make(T, T, IntMat::identity(2),
                                           {cscalar(b, 2, 1, 1, 3), cscalar(b, 5, 2, 0, 1)});
    TorusMorphism F2 = TorusMorphism::make(T, T, IntMat::identity(2),
                                           {cscalar(b, 7, 3, 1, 6), cscalar(b, 1, 2, 3, 8)});
    auto g = rng(71);
    for (int t = 0; t < 100; ++t) {
        IntVec h = random_vec(g, 2, -5, 5), k = random_vec(g, 2, -5, 5);
        IntVec sum{h[0] + k[0], h[1] + k[1]};
        Scalar ratio_sum = F2.coeff(sum).mul(F1.coeff(sum).inv());
        Scalar ratio_prod = F2.coeff(h).mul(F1.coeff(h).inv()).mul(F2.coeff(k)).mul(F1.coeff(k).inv());
        CHECK(ratio_sum.exact_eq(ratio_prod));
    }
}

TEST_CASE("groupoid convolution") {
    Backend b = cx();
    auto C = [&](long n, long d = 1) { return Coefficient::from_rational(padic(2), mpq_class(n, d)); };
    (void)C;
    auto one = Coefficient::one(b);
    auto zero = Coefficient::zero(b);

    // Z/2 group ring: (a0 + a1 x)(b0 + b1 x) has unit part a0 b0 + a1 b1
    FiniteGroupoid z2 = FiniteGroupoid::from_group_table({{0, 1}, {1, 0}}, 0);
    std::vector<Coefficient> f{cscalar(b, 2, 1, 0, 1).to_coefficient(),
                               cscalar(b, 3, 1, 0, 1).to_coefficient()};
    std::vector<Coefficient> g{cscalar(b, 5, 1, 0, 1).to_coefficient(),
                               cscalar(b, 7, 1, 0, 1).to_coefficient()};
    auto conv = groupoid_convolve(z2, f, g);
    CHECK(conv[0].norm().to_double() == doctest::Approx(2 * 5 + 3 * 7).epsilon(1e-12));
    CHECK(conv[1].norm().to_double() == doctest::Approx(2 * 7 + 3 * 5).epsilon(1e-12));

    // delta at the identities is a two-sided unit
    FiniteGroupoid pg = FiniteGroupoid::pair_groupoid(2);
    std::vector<Coefficient> delta(4, zero);
    delta[pg.identity(0)] = one;
    delta[pg.identity(1)] = one;
    auto h = rng(73);
    std::uniform_int_distribution<long> val(-9, 9);
    std::vector<Coefficient> r;
    for (int i = 0; i < 4; ++i) {
        long v = val(h);
        r.push_back(v == 0 ? zero
                           : (v > 0 ? cscalar(b, v, 1, 0, 1) : cscalar(b, -v, 1, 1, 2)).to_coefficient());
    }
    auto lu = groupoid_convolve(pg, delta, r);
    auto ru = groupoid_convolve(pg, r, delta);
    for (int i = 0; i < 4; ++i) {
        CHECK(Coefficient::dist(lu[i], r[i]).to_double() == 0.0);
        CHECK(Coefficient::dist(ru[i], r[i]).to_double() == 0.0);
    }
}

TEST_CASE("pair groupoid convolution is 2x2 matrix multiplication") {
    Backend b = cx();
    FiniteGroupoid pg = FiniteGroupoid::pair_groupoid(2);
    // M(f)[src][tgt] = f(morphism src -> tgt); convolution = matrix product
    auto as_matrix = [&](const std::vector<Coefficient>& f) {
        std::vector<std::vector<Coefficient>> M(2, std::vector<Coefficient>(2, Coefficient::zero(b)));
        for (int i = 0; i < 4; ++i) M[pg.src(i)][pg.tgt(i)] = f[i];
        return M;
    };
    auto g = rng(79);
    std::uniform_int_distribution<long> val(1, 9);
    std::vector<Coefficient> f, h;
    for (int i = 0; i < 4; ++i) {
        f.push_back(cscalar(b, val(g), 1, 0, 1).to_coefficient());
        h.push_back(cscalar(b, val(g), 1, 0, 1).to_coefficient());
    }
    auto conv = as_matrix(groupoid_convolve(pg, f, h));
    auto Mf = as_matrix(f), Mh = as_matrix(h);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Coefficient expect = Coefficient::zero(b);
            for (int k = 0; k < 2; ++k) expect = expect.add(Mf[i][k].mul(Mh[k][j]));
            CHECK(Coefficient::dist(conv[i][j], expect).to_double() == 0.0);
        }
}

TEST_CASE("convolution is associative on small groupoids") {
    Backend b = cx();
    std::vector<FiniteGroupoid> gs;
    gs.push_back(FiniteGroupoid::from_group_table({{0, 1}, {1, 0}}, 0));
    gs.push_back(FiniteGroupoid::from_group_table({{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}, 0));
    gs.push_back(FiniteGroupoid::pair_groupoid(2));
    auto g = rng(83);
    std::uniform_int_distribution<long> val(1, 5);
    for (const FiniteGroupoid& G : gs) {
        int nm = G.morphisms();
        REQUIRE(nm <= 6);
        std::vector<Coefficient> x, y, z;
        for (int i = 0; i < nm; ++i) {
            x.push_back(cscalar(b, val(g), 1, 0, 1).to_coefficient());
            y.push_back(cscalar(b, val(g), 1, 0, 1).to_coefficient());
            z.push_back(cscalar(b, val(g), 1, 0, 1).to_coefficient());
        }
        auto lhs = groupoid_convolve(G, groupoid_convolve(G, x, y), z);
        auto rhs = groupoid_convolve(G, x, groupoid_convolve(G, y, z));
        for (int i = 0; i < nm; ++i) CHECK(Coefficient::dist(lhs[i], rhs[i]).to_double() == 0.0);
    }
}
