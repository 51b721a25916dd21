#include <doctest.h>

#include "helpers.hpp"

using namespace qtheta;
using namespace qth_test;

namespace {

FramedTorus elliptic_framed(const Backend& b, const Scalar& q, const Scalar& qt) {
    AbstractTorus base(b, 1, 1, {q});
    return FramedTorus(std::move(base), {qt});
}

}  // namespace

TEST_CASE("poincare duality") {
    Backend b = cx();
    Scalar q = cscalar(b, 4, 1, 1, 3);
    AbstractTorus a(b, 1, 1, {q});
    AbstractTorus d = poincare_dual(a);
    CHECK(d.entry(0, 0).exact_eq(q.inv()));
    CHECK(poincare_dual(d).eq(a, 0.0));

    // rectangular tables are legal: duality is table transposition
    AbstractTorus rect(b, 2, 1, {q, q.pow(2)});
    AbstractTorus rd = poincare_dual(rect);
    CHECK(rd.char_rank() == 1);
    CHECK(rd.period_rank() == 2);
    CHECK(rd.entry(0, 1).exact_eq(q.pow(-2)));
    CHECK(poincare_dual(rd).eq(rect, 0.0));
}

TEST_CASE("mirror duality swaps the two pairings") {
    Backend b = cx();
    Scalar q = cscalar(b, 4, 1, 0, 1), qt = cscalar(b, 9, 1, 1, 5);
    FramedTorus f = elliptic_framed(b, q, qt);
    FramedTorus m = mirror_dual(f);
    CHECK(m.base().entry(0, 0).exact_eq(qt));
    CHECK(m.framing_entry(0, 0).exact_eq(q));
    CHECK(mirror_dual(m).eq(f, 0.0));

    FramedTorus selfm = elliptic_framed(b, q, q);
    CHECK(mirror_dual(selfm).eq(selfm, 0.0));
}

TEST_CASE("framing nondegeneracy kernels") {
    Backend b = cx();
    // |q| != 1: q^h = 1 forces h = 0
    FramedTorus f = elliptic_framed(b, cscalar(b, 4, 1, 0, 1), cscalar(b, 9, 1, 0, 1));
    NondegeneracyReport rep = framing_nondegenerate(f);
    CHECK(rep.main.nondegenerate);
    CHECK(rep.main.exact);
    CHECK(rep.framing.nondegenerate);

    // q = 1 is totally degenerate
    FramedTorus g = elliptic_framed(b, Scalar::one(b), cscalar(b, 9, 1, 0, 1));
    NondegeneracyReport rep2 = framing_nondegenerate(g);
    CHECK_FALSE(rep2.main.nondegenerate);
    CHECK(rep2.main.kernel.cols() == 1);

    // root of unity of order d: kernel is exactly dZ
    FramedTorus h = elliptic_framed(b, cscalar(b, 1, 1, 2, 7), cscalar(b, 9, 1, 0, 1));
    NondegeneracyReport rep3 = framing_nondegenerate(h);
    CHECK_FALSE(rep3.main.nondegenerate);
    CHECK(rep3.main.exact);
    REQUIRE(rep3.main.kernel.cols() == 1);
    CHECK(std::llabs(rep3.main.kernel.at(0, 0)) == 7);

    // p-adic tables use exact sign and valuation balance
    Backend p5 = padic(5);
    FramedTorus pf(AbstractTorus(p5, 1, 1, {Scalar::from_rational(p5, mpq_class(2, 5))}),
                   {Scalar::from_rational(p5, -1)});
    NondegeneracyReport rep4 = framing_nondegenerate(pf);
    CHECK(rep4.main.nondegenerate);
    CHECK_FALSE(rep4.framing.nondegenerate);  // (-1)^2 = 1: kernel 2Z
    CHECK(rep4.framing.exact);
    CHECK(std::llabs(rep4.framing.kernel.at(0, 0)) == 2);

    // inexact moduli take the screened numeric route
    Scalar irr = Scalar::from_polar(b, PosReal::from_f(BigFloat::from_si(2, b.prec).sqrt()),
                                    Turns::zero());
    FramedTorus nf = elliptic_framed(b, irr, cscalar(b, 9, 1, 0, 1));
    NondegeneracyReport rep5 = framing_nondegenerate(nf);
    CHECK(rep5.main.nondegenerate);
    CHECK_FALSE(rep5.main.exact);
}

TEST_CASE("fibration data and the common base") {
    Backend b = cx();
    Scalar q = cscalar(b, 4, 1, 0, 1), qt = cscalar(b, 9, 1, 0, 1);
    FramedTorus f = elliptic_framed(b, q, qt);
    FibrationReport rep = fibration_data(f);
    REQUIRE(rep.discrete);
    CHECK(rep.base_map(0, 0) == doctest::Approx(std::log(9.0) / std::log(4.0)).epsilon(1e-12));
    // G * Lambda = Lambda^t
    CHECK((rep.base_map * rep.side_a.log_lattice - rep.side_b.log_lattice).cwiseAbs().maxCoeff() <=
          1e-12);

    FramedTorus same = elliptic_framed(b, q, q);
    FibrationReport rep2 = fibration_data(same);
    CHECK(rep2.base_map(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

    // |q| = 1: periods are not discrete; the T_q regime is reported
    FramedTorus nc = elliptic_framed(b, cscalar(b, 1, 1, 1, 3), qt);
    FibrationReport rep3 = fibration_data(nc);
    CHECK_FALSE(rep3.discrete);
    CHECK(rep3.notice.find("noncommutative") != std::string::npos);

    // rank-2 sanity: G solves the linear identification exactly
    std::vector<Scalar> table = {cscalar(b, 2, 1, 0, 1), cscalar(b, 3, 1, 0, 1),
                                 Scalar::one(b), cscalar(b, 5, 1, 0, 1)};
    std::vector<Scalar> ftable = {cscalar(b, 7, 2, 0, 1), Scalar::one(b),
                                  cscalar(b, 2, 3, 0, 1), cscalar(b, 4, 1, 0, 1)};
    FramedTorus f2(AbstractTorus(b, 2, 2, table), ftable);
    FibrationReport rep4 = fibration_data(f2);
    REQUIRE(rep4.discrete);
    CHECK((rep4.base_map * rep4.side_a.log_lattice - rep4.side_b.log_lattice)
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
}

TEST_CASE("complex structure from tau") {
    // tau = iE
    Eigen::MatrixXcd tau = Eigen::MatrixXcd::Zero(2, 2);
    tau(0, 0) = std::complex<double>(0, 1);
    tau(1, 1) = std::complex<double>(0, 1);
    Eigen::MatrixXd I = complex_structure_from_tau(tau);
    Eigen::MatrixXd expect(4, 4);
    expect << 0, 0, 1, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, -1, 0, 0;
    CHECK((I - expect).cwiseAbs().maxCoeff() == 0.0);

    // n = 1 closed form
    double x = 0.7, y = 1.9;
    Eigen::MatrixXcd t1(1, 1);
    t1(0, 0) = std::complex<double>(x, y);
    Eigen::MatrixXd I1 = complex_structure_from_tau(t1);
    CHECK(I1(0, 0) == doctest::Approx(x / y).epsilon(1e-14));
    CHECK(I1(0, 1) == doctest::Approx(1 / y).epsilon(1e-14));
    CHECK(I1(1, 0) == doctest::Approx(-y - x * x / y).epsilon(1e-14));
    CHECK(I1(1, 1) == doctest::Approx(-x / y).epsilon(1e-14));
    CHECK(I1.determinant() == doctest::Approx(1.0).epsilon(1e-12));

    // the defining system (Re tau + i Im tau, E) I = (-Im tau + i Re tau, iE)
    auto g = rng(113);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 100; ++t) {
        int n = 1 + static_cast<int>(g() % 4);
        Eigen::MatrixXd re(n, n), m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                re(i, j) = u(g);
                m(i, j) = u(g);
            }
        re = ((re + re.transpose()) / 2).eval();
        Eigen::MatrixXd im = m * m.transpose() + Eigen::MatrixXd::Identity(n, n) * 0.4;
        Eigen::MatrixXcd tt(n, n);
        tt.real() = re;
        tt.imag() = im;
        Eigen::MatrixXd II = complex_structure_from_tau(tt);
        Eigen::MatrixXd sq = II * II + Eigen::MatrixXd::Identity(2 * n, 2 * n);
        CHECK(sq.cwiseAbs().maxCoeff() <= 1e-12);

        Eigen::MatrixXcd lhs(n, 2 * n), rhs(n, 2 * n);
        lhs.leftCols(n) = tt;
        lhs.rightCols(n) = Eigen::MatrixXcd::Identity(n, n);
        rhs.leftCols(n) = std::complex<double>(0, 1) * tt;
        rhs.rightCols(n) = std::complex<double>(0, 1) * Eigen::MatrixXcd::Identity(n, n);
        CHECK((lhs * II.cast<std::complex<double>>() - rhs).cwiseAbs().maxCoeff() <= 1e-12);

        // round trip
        Eigen::MatrixXcd back = tau_from_complex_structure(II);
        CHECK((back - tt).cwiseAbs().maxCoeff() <= 1e-12);
    }

    // modular shear: I(tau + 1) is conjugate to I(tau) by S = [[1,0],[1,1]]
    Eigen::MatrixXcd t2(1, 1);
    t2(0, 0) = std::complex<double>(x + 1, y);
    Eigen::MatrixXd I2 = complex_structure_from_tau(t2);
    Eigen::MatrixXd S(2, 2);
    S << 1, 0, 1, 1;
    CHECK((S * I2 - I1 * S).cwiseAbs().maxCoeff() <= 1e-12);

    // failure modes
    Eigen::MatrixXcd sing(1, 1);
    sing(0, 0) = std::complex<double>(1.0, 0.0);
    CHECK_THROWS_AS(complex_structure_from_tau(sing), std::domain_error);
    Eigen::MatrixXd badY = expect;
    badY(0, 2) = 0;
    badY(1, 3) = 0;
    CHECK_THROWS_AS(tau_from_complex_structure(badY), std::invalid_argument);
}

TEST_CASE("framing from omega") {
    Backend b = cx();
    // omega = 0 and integer omega give the trivial framing, bit-exact
    std::vector<ComplexLit> zero{ComplexLit::from_q(0, 0)};
    auto t0 = framing_from_omega(b, 1, 1, zero);
    CHECK(t0[0].exact_eq(Scalar::one(b)));
    std::vector<ComplexLit> ints{ComplexLit::from_q(7, 0)};
    auto t1 = framing_from_omega(b, 1, 1, ints);
    CHECK(t1[0].exact_eq(Scalar::one(b)));

    // integer shifts leave the table unchanged on turns
    std::vector<ComplexLit> w{ComplexLit::from_q(mpq_class(1, 3), mpq_class(1, 2))};
    std::vector<ComplexLit> ws{ComplexLit::from_q(mpq_class(1, 3) + 5, mpq_class(1, 2))};
    auto a1 = framing_from_omega(b, 1, 1, w);
    auto a2 = framing_from_omega(b, 1, 1, ws);
    CHECK(a1[0].turns_part().q == a2[0].turns_part().q);
    CHECK(a1[0].abs_part().approx == a2[0].abs_part().approx);

    // n = m = 1, omega = tau': the framing value is e^{2 pi i tau'} and the
    // multiplicative data reproduces tau' mod Z
    mpq_class re(1, 3);
    mpq_class im(1, 2);
    auto table = framing_from_omega(b, 1, 1, {ComplexLit::from_q(re, im)});
    CHECK(table[0].turns_part().q == re);
    double logabs = table[0].log_norm().to_double();
    CHECK(logabs == doctest::Approx(-2 * std::acos(-1.0) * 0.5).epsilon(1e-14));
}

TEST_CASE("monodromy transvections") {
    IntMat M = monodromy_matrix(1, 1, 1);
    CHECK(M == IntMat::from_rows({{1, 1}, {0, 1}}));
    CHECK_THROWS_AS(monodromy_matrix(2, 1, 1), std::invalid_argument);

    for (int n = 1; n <= 4; ++n) {
        std::vector<IntMat> all;
        for (int r = 1; r <= n; ++r)
            for (int s = 1; s <= n; ++s) all.push_back(monodromy_matrix(r, s, n));
        IntMat fixed = invariant_sublattice(all);
        // the common fixed sublattice is exactly the span of the gammas
        IntMat gammas(2 * n, n);
        for (int i = 0; i < n; ++i) gammas.at(i, i) = 1;
        CHECK(lattice_equal(fixed, gammas));
    }

    // a single M_rs fixes a rank 2n-1 sublattice; verify against brute force
    for (int n = 1; n <= 3; ++n) {
        IntMat M21 = monodromy_matrix(1, n, n);
        IntMat fixed = invariant_sublattice({M21});
        CHECK(fixed.cols() == 2 * n - 1);
        for (const IntVec& v : sup_ball(2 * n, 2)) {
            bool brute_fixed = M21.apply(v) == v;
            CHECK(brute_fixed == lattice_contains(fixed, v));
        }
    }
}

TEST_CASE("framed torus json round trip") {
    Backend b = cx();
    FramedTorus f = elliptic_framed(b, cscalar(b, 4, 1, 1, 3), cscalar(b, 9, 2, 5, 7));
    auto j = io::framed_to_json(f);
    FramedTorus back = io::framed_from_json(j, b);
    CHECK(back.eq(f, 0.0));
    CHECK(io::framed_to_json(back) == j);
}
