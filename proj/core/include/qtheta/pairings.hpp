#pragma once

#include <span>
#include <vector>

#include "qtheta/lattice.hpp"
#include "qtheta/scalar.hpp"

namespace qtheta {

// Alternating bimultiplicative pairing on Z^rank, stored by basis values:
// off-diagonal scalars q_ij (i<j) and diagonal signs eps_i = alpha(e_i,e_i).
// alpha(h,g) = prod_{i<j} q_ij^{h_i g_j - h_j g_i} * prod_i eps_i^{h_i g_i}.
class AlternatingPairing {
public:
    AlternatingPairing(Backend backend, int rank, std::vector<Scalar> offdiag, std::vector<int> diag);
    static AlternatingPairing trivial(const Backend& b, int rank);

    int rank() const { return rank_; }
    const Backend& backend() const { return backend_; }
    const Scalar& offdiag(int i, int j) const;  // i < j
    int diag(int i) const { return diag_[i]; }

    Scalar eval(std::span<const long long> h, std::span<const long long> g) const;
    Scalar eps(std::span<const long long> h) const;  // alpha(h,h), always +-1

    AlternatingPairing pow(long e) const;
    AlternatingPairing direct_sum(const AlternatingPairing& o) const;
    bool is_unitary(double tol = kDefaultTol) const;
    bool eq(const AlternatingPairing& o, double tol = kDefaultTol) const;

private:
    Backend backend_;
    int rank_;
    std::vector<Scalar> offdiag_;  // packed i<j row-major
    std::vector<int> diag_;
    size_t idx(int i, int j) const;
};

// Symmetric bimultiplicative pairing stored by basis values s_ij for i <= j.
class SymmetricPairing {
public:
    SymmetricPairing(Backend backend, int rank, std::vector<Scalar> table);
    static SymmetricPairing trivial(const Backend& b, int rank);

    int rank() const { return rank_; }
    const Backend& backend() const { return backend_; }
    const Scalar& entry(int i, int j) const;  // symmetric access

    Scalar eval(std::span<const long long> b1, std::span<const long long> b2) const;
    SymmetricPairing mul(const SymmetricPairing& o) const;
    bool eq(const SymmetricPairing& o, double tol = kDefaultTol) const;

private:
    Backend backend_;
    int rank_;
    std::vector<Scalar> table_;  // packed i<=j row-major
    size_t idx(int i, int j) const;
};

// Point of the commutative torus T(H,1)(K) = Hom(H, K*), stored by the value
// of each basis character.
class CharacterPoint {
public:
    CharacterPoint(Backend backend, std::vector<Scalar> values);
    static CharacterPoint identity(const Backend& b, int rank);

    int rank() const { return static_cast<int>(values_.size()); }
    const Backend& backend() const { return backend_; }
    const Scalar& value(int i) const { return values_[i]; }

    Scalar eval(std::span<const long long> h) const;  // h(b)
    CharacterPoint mul(const CharacterPoint& o) const;
    CharacterPoint pow(long e) const;
    bool eq(const CharacterPoint& o, double tol = kDefaultTol) const;

private:
    Backend backend_;
    std::vector<Scalar> values_;
};

}  // namespace qtheta
