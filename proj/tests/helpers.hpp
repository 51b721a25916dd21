#pragma once

#include <qtheta/io.hpp>
#include <qtheta/theta.hpp>

#include <random>

// shared fixtures and independent oracles for the test suites

namespace qth_test {

using namespace qtheta;

inline Backend cx(mpfr_prec_t prec = 256) { return Backend::complex_field(prec); }
inline Backend padic(long p) { return Backend::padic_field(p); }

inline Scalar cscalar(const Backend& b, long abs_num, long abs_den, long turn_num, long turn_den) {
    return Scalar::from_polar_q(b, mpq_class(abs_num, abs_den), mpq_class(turn_num, turn_den));
}

// rank-1 commutative elliptic configuration: H = B = Z, alpha trivial,
// period point q, h_l = (1), h_r = (0), pairing s = sqrt(q), psi = 1
struct EllipticConfig {
    TorusPtr torus;
    PeriodsPtr periods;
    MultiplierPtr multiplier;
};

inline EllipticConfig elliptic_config(const Backend& b, const Scalar& q,
                                      Branch branch = Branch::Principal) {
    EllipticConfig c;
    c.torus = make_torus(AlternatingPairing::trivial(b, 1));
    c.periods = std::make_shared<const PeriodLattice>(
        c.torus, std::vector<CharacterPoint>{CharacterPoint(b, {q})});
    IntMat h_l(1, 1), h_r(1, 1);
    h_l.at(0, 0) = 1;
    SymmetricPairing s = multiplier_solve_pairing(c.torus, c.periods, h_l, h_r, branch);
    c.multiplier = std::make_shared<const ThetaMultiplier>(
        c.torus, c.periods, h_l, h_r, std::vector<Scalar>{Scalar::one(b)}, std::move(s));
    return c;
}

// rank-2 quantum configuration: unitary alpha with rational turns, periods
// correlated with alpha^2 off the diagonal so (2.12) is solvable, h_r = 0.
// h_l defaults to the identity; pass another integer matrix for higher level.
struct QuantumConfig {
    TorusPtr torus;
    PeriodsPtr periods;
    MultiplierPtr multiplier;
};

inline QuantumConfig quantum_config(const Backend& b, const mpq_class& alpha_turns,
                                    const Scalar& q1, const Scalar& q2,
                                    const IntMat* h_l_opt = nullptr) {
    QuantumConfig c;
    Scalar a12 = Scalar::from_polar_q(b, 1, alpha_turns);
    c.torus = make_torus(AlternatingPairing(b, 2, {a12}, {1, 1}));
    Scalar one = Scalar::one(b);
    // points: b_1 = (q1, a12^2), b_2 = (1, q2) realizes the symmetry relation
    CharacterPoint p1(b, {q1, a12.pow(2)});
    CharacterPoint p2(b, {one, q2});
    c.periods = std::make_shared<const PeriodLattice>(c.torus,
                                                      std::vector<CharacterPoint>{p1, p2});
    IntMat h_l = h_l_opt ? *h_l_opt : IntMat::identity(2);
    IntMat h_r(2, 2);
    SymmetricPairing s = multiplier_solve_pairing(c.torus, c.periods, h_l, h_r);
    c.multiplier = std::make_shared<const ThetaMultiplier>(
        c.torus, c.periods, h_l, h_r, std::vector<Scalar>{one, one}, std::move(s));
    return c;
}

// ---------------------------------------------------------------- oracles

// residue count of Z^n / A Z^n by brute-force box enumeration; membership
// decided with the adjugate (no Smith form involved)
inline long long brute_force_residue_count(const IntMat& A) {
    int n = A.rows();
    if (n != A.cols()) throw std::invalid_argument("square only");
    auto det2 = [&](const IntMat& M) {
        if (M.rows() == 1) return M.at(0, 0);
        if (M.rows() == 2) return M.at(0, 0) * M.at(1, 1) - M.at(0, 1) * M.at(1, 0);
        throw std::invalid_argument("oracle handles rank <= 2");
    };
    long long det = det2(A);
    if (det == 0) return -1;  // infinite
    auto in_image = [&](const IntVec& v) {
        // A x = v solvable over Z iff adj(A) v is divisible by det
        if (n == 1) return v[0] % A.at(0, 0) == 0;
        long long a = A.at(0, 0), b = A.at(0, 1), c = A.at(1, 0), d = A.at(1, 1);
        long long x = d * v[0] - b * v[1];
        long long y = -c * v[0] + a * v[1];
        return x % det == 0 && y % det == 0;
    };
    long long L = std::llabs(det);
    std::vector<IntVec> reps;
    IntVec v(n, 0);
    while (true) {
        bool fresh = true;
        for (const IntVec& r : reps) {
            IntVec diff(n);
            for (int i = 0; i < n; ++i) diff[i] = v[i] - r[i];
            if (in_image(diff)) {
                fresh = false;
                break;
            }
        }
        if (fresh) reps.push_back(v);
        int i = n - 1;
        for (; i >= 0; --i) {
            if (++v[i] < L) break;
            v[i] = 0;
        }
        if (i < 0) break;
    }
    return static_cast<long long>(reps.size());
}

// classical Jacobi theta sum p^{h^2} z^h truncated at |h| <= radius,
// summed directly in cartesian coordinates
inline Coefficient jacobi_theta_sum(const Backend& b, const Scalar& p, const Scalar& z,
                                    long long radius) {
    BigFloat re(b.prec), im(b.prec);
    BigFloat racc(b.prec), iacc(b.prec);
    BigFloat maxmag(b.prec);
    for (long long h = -radius; h <= radius; ++h) {
        Coefficient term = p.pow(h * h).mul(z.pow(h)).to_coefficient();
        term.to_cartesian(re, im);
        racc = racc + re;
        iacc = iacc + im;
        if (maxmag.cmp(term.norm()) < 0) maxmag = term.norm();
    }
    return Coefficient::from_cartesian(b, racc, iacc, maxmag);
}

inline std::mt19937_64 rng(unsigned long long seed) { return std::mt19937_64(seed); }

inline IntVec random_vec(std::mt19937_64& g, int n, long long lo, long long hi) {
    std::uniform_int_distribution<long long> d(lo, hi);
    IntVec v(n);
    for (auto& x : v) x = d(g);
    return v;
}

// uniform random unit-norm complex scalar with rational turns
inline Scalar random_unit(std::mt19937_64& g, const Backend& b) {
    std::uniform_int_distribution<long> num(0, 359);
    return Scalar::from_polar_q(b, 1, mpq_class(num(g), 360));
}

}  // namespace qth_test
