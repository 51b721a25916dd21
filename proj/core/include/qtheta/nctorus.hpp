#pragma once

#include <map>
#include <memory>
#include <span>
#include <vector>

#include "qtheta/pairings.hpp"

namespace qtheta {

// Noncommutative torus T(H, alpha): a rank together with its quantization
// parameter. Instances are immutable and shared.
class NCTorus {
public:
    explicit NCTorus(AlternatingPairing alpha) : alpha_(std::move(alpha)) {}

    int rank() const { return alpha_.rank(); }
    const AlternatingPairing& alpha() const { return alpha_; }
    const Backend& backend() const { return alpha_.backend(); }
    bool same_as(const NCTorus& o, double tol = kDefaultTol) const {
        return this == &o || (rank() == o.rank() && alpha_.eq(o.alpha_, tol));
    }

private:
    AlternatingPairing alpha_;
};

using TorusPtr = std::shared_ptr<const NCTorus>;

inline TorusPtr make_torus(AlternatingPairing alpha) {
    return std::make_shared<const NCTorus>(std::move(alpha));
}
TorusPtr direct_product(const TorusPtr& t1, const TorusPtr& t2);

// Finitely supported element of Al(H, alpha): a map from H to nonzero
// coefficients. Keys are kept in lexicographic order so iteration (and any
// serialization) is deterministic.
class GroupRingElement {
public:
    explicit GroupRingElement(TorusPtr torus) : torus_(std::move(torus)) {}
    static GroupRingElement monomial(TorusPtr torus, IntVec h, Coefficient c);
    static GroupRingElement unit(TorusPtr torus);  // e(0)

    const TorusPtr& torus() const { return torus_; }
    const std::map<IntVec, Coefficient>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    size_t support_size() const { return coeffs_.size(); }
    Coefficient coeff(std::span<const long long> h) const;

    void add_term(const IntVec& h, const Coefficient& c);  // accumulate, prune zero
    GroupRingElement add(const GroupRingElement& o) const;
    GroupRingElement scaled(const Coefficient& c) const;
    bool eq(const GroupRingElement& o, double tol = kDefaultTol) const;
    // max |difference| over the union of supports
    double dist(const GroupRingElement& o) const;

private:
    TorusPtr torus_;
    std::map<IntVec, Coefficient> coeffs_;
};

// e(h) e(g) = alpha(h,g) e(h+g), extended bilinearly.
GroupRingElement ring_mul(const GroupRingElement& x, const GroupRingElement& y);
// Inverse of a monomial a e(h): a^-1 eps(h) e(-h). Throws on support != 1.
GroupRingElement ring_inv(const GroupRingElement& x);

struct MorphismReport {
    bool compatible = false;         // alpha_2^2(f h, f g) = alpha_1^2(h, g) on basis pairs
    double max_residual = 0.0;
    std::vector<int> sigma;          // characteristic on basis pairs, packed i <= j
    bool sigma_is_one = false;
};

// Morphism F: T(H2,alpha2) -> T(H1,alpha1) of noncommutative tori, given by
// the lattice map f: H1 -> H2 and the coefficients of F*(e(h)) = a_h e(f(h)).
// General a_h values are reconstructed from the basis values via
// a_{h+g} = a_h a_g sigma(h,g)^-1 applied in ascending basis order.
class TorusMorphism {
public:
    static TorusMorphism make(TorusPtr source, TorusPtr target, IntMat f,
                              std::vector<Scalar> a_basis, double tol = kDefaultTol);

    const TorusPtr& source() const { return source_; }
    const TorusPtr& target() const { return target_; }
    const IntMat& matrix() const { return f_; }
    const std::vector<Scalar>& a_basis() const { return a_basis_; }
    const MorphismReport& report() const { return report_; }
    bool sigma_is_one() const { return report_.sigma_is_one; }

    Scalar coeff(std::span<const long long> h) const;  // a_h
    int sigma(std::span<const long long> h, std::span<const long long> g) const;

    // F*(x) for x in Al(H1, alpha1)
    GroupRingElement apply_star(const GroupRingElement& x) const;
    // induced map on commutative points Hom(H2,K*) -> Hom(H1,K*)
    CharacterPoint push_point(const CharacterPoint& x) const;

private:
    TorusMorphism() = default;
    TorusPtr source_, target_;
    IntMat f_;
    std::vector<Scalar> a_basis_;
    MorphismReport report_;
};

MorphismReport morphism_check(const NCTorus& source, const NCTorus& target, const IntMat& f,
                              double tol = kDefaultTol);

// Standard morphisms (2.7)-(2.11); all have characteristic 1.
TorusMorphism make_shift(const TorusPtr& torus, const CharacterPoint& b);
// [n]: T(H,alpha) -> T(H,alpha^{n^2}); the returned morphism's target torus
// is constructed internally and reachable through target().
TorusMorphism make_mult_n(const TorusPtr& torus, long n);
// m: T(H,alpha) x T(H,beta) -> T(H,alpha beta)
TorusMorphism make_external_mult(const AlternatingPairing& alpha, const AlternatingPairing& beta);
// M: T(H+H, alpha+alpha) -> T(H+H, alpha^2+alpha^2), e(h,g) -> e(h+g, h-g)
TorusMorphism make_mumford(const AlternatingPairing& alpha);

// tensor embedding e(h1) (x) e(h2) = e((h1,h2)) into the product torus
GroupRingElement tensor(const TorusPtr& product, const GroupRingElement& x, const GroupRingElement& y);

// Finite groupoid R => U with composition table; morphism k = compose(i, j)
// means "apply j first, then i" and is defined iff src(i) == tgt(j).
class FiniteGroupoid {
public:
    static FiniteGroupoid make(int n_objects, std::vector<int> src, std::vector<int> tgt,
                               std::vector<int> identity, std::vector<std::vector<int>> compose);
    // one object, morphisms = group elements given by a multiplication table
    static FiniteGroupoid from_group_table(const std::vector<std::vector<int>>& mult, int id);
    // n mutually isomorphic objects with trivial automorphisms
    static FiniteGroupoid pair_groupoid(int n_objects);

    int objects() const { return n_objects_; }
    int morphisms() const { return static_cast<int>(src_.size()); }
    int src(int i) const { return src_[i]; }
    int tgt(int i) const { return tgt_[i]; }
    int identity(int u) const { return identity_[u]; }
    int compose(int i, int j) const { return compose_[i][j]; }  // -1 when undefined

private:
    FiniteGroupoid() = default;
    int n_objects_ = 0;
    std::vector<int> src_, tgt_, identity_;
    std::vector<std::vector<int>> compose_;
};

// (f*g)(k) = sum over factorizations k = i.j of f(j) g(i)   (Eq. A.1 pattern)
std::vector<Coefficient> groupoid_convolve(const FiniteGroupoid& G,
                                           std::span<const Coefficient> f,
                                           std::span<const Coefficient> g);

}  // namespace qtheta
