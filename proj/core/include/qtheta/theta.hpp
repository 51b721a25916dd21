#pragma once

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "qtheta/nctorus.hpp"

namespace qtheta {

// Period group B inside T(H,1)(K), stored as the table of basis points:
// column j is the character point b_j, so entry (i,j) is e(h_i)(b_j).
class PeriodLattice {
public:
    PeriodLattice(TorusPtr torus, std::vector<CharacterPoint> points);

    const TorusPtr& torus() const { return torus_; }
    int rank() const { return static_cast<int>(points_.size()); }  // m
    const CharacterPoint& basis_point(int j) const { return points_[j]; }
    // i(b) for b written additively in the basis
    CharacterPoint point(std::span<const long long> b) const;
    // (h, b) = value of e(h) at i(b)
    Scalar pair(std::span<const long long> h, std::span<const long long> b) const;
    bool same_as(const PeriodLattice& o, double tol = kDefaultTol) const;

private:
    TorusPtr torus_;
    std::vector<CharacterPoint> points_;
};

using PeriodsPtr = std::shared_ptr<const PeriodLattice>;

// Two-sided theta multiplier (h_l, h_r, psi, (,)) for a torus and period
// lattice. h_l, h_r: B -> H as integer matrices (rank(H) x rank(B)); psi is
// a character of B given on the basis; (,) is a symmetric pairing on B.
class ThetaMultiplier {
public:
    ThetaMultiplier(TorusPtr torus, PeriodsPtr periods, IntMat h_l, IntMat h_r,
                    std::vector<Scalar> psi, SymmetricPairing pairing);

    const TorusPtr& torus() const { return torus_; }
    const PeriodsPtr& periods() const { return periods_; }
    const IntMat& h_l() const { return h_l_; }
    const IntMat& h_r() const { return h_r_; }
    const IntMat& h_minus() const { return h_minus_; }
    const IntMat& h_plus() const { return h_plus_; }
    const std::vector<Scalar>& psi_basis() const { return psi_; }
    const SymmetricPairing& pairing() const { return pairing_; }

    Scalar psi(std::span<const long long> b) const;
    // one step of recursion (2.21): a_{h + h^-(b)} = a_h * factor(b, h)
    Scalar recursion_factor(std::span<const long long> b, std::span<const long long> h) const;
    ExtNat dimension() const { return smith_index(h_minus_); }
    // sup-norm width of the certification boundary band
    long long boundary_band() const;

private:
    TorusPtr torus_;
    PeriodsPtr periods_;
    IntMat h_l_, h_r_, h_minus_, h_plus_;
    std::vector<Scalar> psi_;
    SymmetricPairing pairing_;
};

using MultiplierPtr = std::shared_ptr<const ThetaMultiplier>;

struct MultiplierReport {
    bool valid = false;
    double max_residual = 0.0;
    // (i, j, residual) for every basis pair; bimultiplicativity of both
    // sides of (2.12) promotes basis validity to the full condition
    std::vector<std::tuple<int, int, double>> residuals;
};

MultiplierReport multiplier_validate(const ThetaMultiplier& L, double tol = kDefaultTol);

// Solve (2.12) for the symmetric pairing given the rest of the data. The
// square-root branch applies to every basis entry; inconsistent off-diagonal
// requirements or non-square p-adic values throw.
SymmetricPairing multiplier_solve_pairing(const TorusPtr& torus, const PeriodsPtr& periods,
                                          const IntMat& h_l, const IntMat& h_r,
                                          Branch branch = Branch::Principal,
                                          double tol = kDefaultTol);

// j_L(b): Phi -> psi(b) (b,b) e(h_{b,l}) Phi e(h_{b,r})^-1
GroupRingElement automorphy_apply(const ThetaMultiplier& L, std::span<const long long> b,
                                  const GroupRingElement& phi);
// j_L(b)^-1 via the closed form (2.15)
GroupRingElement automorphy_inverse_apply(const ThetaMultiplier& L, std::span<const long long> b,
                                          const GroupRingElement& phi);
// the twisted shift j_L(b)^-1 . b*, a group homomorphism in b
GroupRingElement period_action(const ThetaMultiplier& L, std::span<const long long> b,
                               const GroupRingElement& phi);

enum class AmpleVerdict { Ample, Degenerate, Indefinite };

struct AmpleReport {
    Eigen::MatrixXd gram;  // Q(b) = b^T gram b, natural-log scale
    AmpleVerdict verdict = AmpleVerdict::Degenerate;
    ExtNat dimension;
    double min_eigenvalue = 0.0;
    double trace = 0.0;
};

// Gram matrix of Q(b) = log |(b,b) alpha(h_{b,l}, -h_{b,r})| by polarization
// on basis vectors. Borderline spectra are never reported ample.
AmpleReport ampleness_gram(const ThetaMultiplier& L);

const char* to_string(AmpleVerdict v);

// Truncated quantized theta function: coefficients on the ball ||h||_inf <= R
// generated from one seed per coset of H / h^-(B) by recursion (2.21).
class ThetaSeries {
public:
    ThetaSeries(MultiplierPtr multiplier, long long radius, std::map<IntVec, Coefficient> coeffs,
                std::vector<Coefficient> seeds);

    const MultiplierPtr& multiplier() const { return mult_; }
    long long radius() const { return radius_; }
    const std::map<IntVec, Coefficient>& coeffs() const { return coeffs_; }
    Coefficient coeff(std::span<const long long> h) const;
    const std::vector<Coefficient>& seeds() const { return seeds_; }
    bool is_zero() const { return coeffs_.empty(); }
    // copy with one coefficient replaced (negative-control tests)
    ThetaSeries with_coeff(IntVec h, Coefficient c) const;

private:
    MultiplierPtr mult_;
    long long radius_;
    std::map<IntVec, Coefficient> coeffs_;
    std::vector<Coefficient> seeds_;
};

// One basis series per coset representative (seed 1 on its own coset).
// Requires a valid multiplier of finite dimension; a non-ample verdict is
// rejected unless force_formal is set. Coefficient generation is per-coset
// parallel when jobs > 1 and bitwise independent of the job count.
std::vector<ThetaSeries> theta_basis(const MultiplierPtr& L, long long radius,
                                     bool force_formal = false, int jobs = 1);
ThetaSeries theta_from_seeds(const MultiplierPtr& L, long long radius,
                             std::span<const Coefficient> seeds, bool force_formal = false);

// max_{||h||<=r_check} |a_{h+h^-(b)} - a_h factor(b,h)|; requires
// r_check + ||h^-(b)||_inf <= radius.
double functional_equation_residual(const ThetaSeries& theta, std::span<const long long> b,
                                    long long r_check);

struct ThetaEval {
    Coefficient value;
    double tail_bound = 0.0;
};

// sum_{||h||<=R} a_h h(x) plus a tail envelope derived from the smallest
// Gram eigenvalue; requires an ample multiplier.
ThetaEval theta_eval(const ThetaSeries& theta, const CharacterPoint& x);

// L1 (x) L2 = (h_l^(1), h_r^(2), psi1 psi2, (,)_1 (,)_2); requires
// h_l^(2) == h_r^(1) exactly and identical torus and periods.
MultiplierPtr multiplier_compose(const ThetaMultiplier& L1, const ThetaMultiplier& L2);

// Product of theta functions as a series for L1 (x) L2. Coefficients are the
// ring_mul convolution of the truncated series; certification is reliable on
// the interior ball radius() - multiplier()->boundary_band().
ThetaSeries theta_mul(const ThetaSeries& t1, const ThetaSeries& t2);

struct PullbackOptions {
    std::optional<IntMat> period_map;  // B2 -> B1; discovered by search when absent
    long long search_bound = 6;
    double tol = kDefaultTol;
};

// F*(L1) per (2.23)-(2.25). Requires characteristic 1, strict alpha
// compatibility, and F(B2) inside B1 (verified entrywise on period tables).
MultiplierPtr multiplier_pullback(const TorusMorphism& F, const ThetaMultiplier& L1,
                                  const PeriodsPtr& B2, const PullbackOptions& opt = {});

// F*(theta) with coefficients C_g = sum_{h in f^-1(g)} c_h a_h, certified
// against the pulled-back recursion. Requires Ker f = 0 and an input radius
// covering the f-preimage of the output ball.
ThetaSeries theta_pullback(const TorusMorphism& F, const ThetaSeries& theta,
                           const MultiplierPtr& pulled, long long out_radius);

// true iff the multipliers act by the same twisted shifts (same h^- and the
// same operators j^-1 b* on basis periods and basis monomials).
bool same_automorphy(const ThetaMultiplier& L1, const ThetaMultiplier& L2,
                     double tol = kDefaultTol);

}  // namespace qtheta
