#include "qtheta/pairings.hpp"

#include <stdexcept>

namespace qtheta {

namespace {

void require_rank(std::span<const long long> v, int rank) {
    if (static_cast<int>(v.size()) != rank) throw std::invalid_argument("rank mismatch");
}

}  // namespace

// ---------------------------------------------------- AlternatingPairing

AlternatingPairing::AlternatingPairing(Backend backend, int rank, std::vector<Scalar> offdiag,
                                       std::vector<int> diag)
    : backend_(backend), rank_(rank), offdiag_(std::move(offdiag)), diag_(std::move(diag)) {
    size_t expected = static_cast<size_t>(rank) * (rank - 1) / 2;
    if (offdiag_.size() != expected) throw std::invalid_argument("wrong off-diagonal table size");
    if (diag_.size() != static_cast<size_t>(rank)) throw std::invalid_argument("wrong diagonal size");
    for (int e : diag_)
        if (e != 1 && e != -1) throw std::invalid_argument("diagonal signs must be +-1");
    for (const Scalar& s : offdiag_) require_same_backend(backend_, s.backend());
}

AlternatingPairing AlternatingPairing::trivial(const Backend& b, int rank) {
    std::vector<Scalar> off(static_cast<size_t>(rank) * (rank - 1) / 2, Scalar::one(b));
    return AlternatingPairing(b, rank, std::move(off), std::vector<int>(rank, 1));
}

size_t AlternatingPairing::idx(int i, int j) const {
    // packed upper triangle i < j
    return static_cast<size_t>(i) * (2 * rank_ - i - 1) / 2 + (j - i - 1);
}

const Scalar& AlternatingPairing::offdiag(int i, int j) const {
    if (!(0 <= i && i < j && j < rank_)) throw std::invalid_argument("offdiag index out of range");
    return offdiag_[idx(i, j)];
}

Scalar AlternatingPairing::eval(std::span<const long long> h, std::span<const long long> g) const {
    require_rank(h, rank_);
    require_rank(g, rank_);
    Scalar r = Scalar::one(backend_);
    for (int i = 0; i < rank_; ++i)
        for (int j = i + 1; j < rank_; ++j) {
            long long e = h[i] * g[j] - h[j] * g[i];
            if (e != 0) r = r.mul(offdiag_[idx(i, j)].pow(e));
        }
    long long sign_exp = 0;
    for (int i = 0; i < rank_; ++i)
        if (diag_[i] < 0) sign_exp += h[i] * g[i];
    if (sign_exp % 2 != 0) r = r.negated();
    return r;
}

Scalar AlternatingPairing::eps(std::span<const long long> h) const {
    require_rank(h, rank_);
    long long sign_exp = 0;
    for (int i = 0; i < rank_; ++i)
        if (diag_[i] < 0) sign_exp += h[i] * h[i];
    Scalar r = Scalar::one(backend_);
    if (sign_exp % 2 != 0) r = r.negated();
    return r;
}

AlternatingPairing AlternatingPairing::pow(long e) const {
    std::vector<Scalar> off;
    off.reserve(offdiag_.size());
    for (const Scalar& s : offdiag_) off.push_back(s.pow(e));
    std::vector<int> d(diag_);
    if (e % 2 == 0)
        for (int& x : d) x = 1;
    return AlternatingPairing(backend_, rank_, std::move(off), std::move(d));
}

AlternatingPairing AlternatingPairing::direct_sum(const AlternatingPairing& o) const {
    require_same_backend(backend_, o.backend_);
    int n = rank_ + o.rank_;
    AlternatingPairing r = trivial(backend_, n);
    for (int i = 0; i < rank_; ++i)
        for (int j = i + 1; j < rank_; ++j) r.offdiag_[r.idx(i, j)] = offdiag_[idx(i, j)];
    for (int i = 0; i < o.rank_; ++i)
        for (int j = i + 1; j < o.rank_; ++j)
            r.offdiag_[r.idx(rank_ + i, rank_ + j)] = o.offdiag_[o.idx(i, j)];
    for (int i = 0; i < rank_; ++i) r.diag_[i] = diag_[i];
    for (int i = 0; i < o.rank_; ++i) r.diag_[rank_ + i] = o.diag_[i];
    return r;
}

bool AlternatingPairing::is_unitary(double tol) const {
    BigFloat one = BigFloat::from_si(1, backend_.prec);
    for (const Scalar& s : offdiag_) {
        BigFloat d = s.norm() - one;
        if (d.abs().to_double() > tol) return false;
    }
    return true;
}

bool AlternatingPairing::eq(const AlternatingPairing& o, double tol) const {
    if (rank_ != o.rank_ || backend_ != o.backend_ || diag_ != o.diag_) return false;
    for (size_t i = 0; i < offdiag_.size(); ++i)
        if (!offdiag_[i].eq(o.offdiag_[i], tol)) return false;
    return true;
}

// ------------------------------------------------------ SymmetricPairing

SymmetricPairing::SymmetricPairing(Backend backend, int rank, std::vector<Scalar> table)
    : backend_(backend), rank_(rank), table_(std::move(table)) {
    size_t expected = static_cast<size_t>(rank) * (rank + 1) / 2;
    if (table_.size() != expected) throw std::invalid_argument("wrong symmetric table size");
    for (const Scalar& s : table_) require_same_backend(backend_, s.backend());
}

SymmetricPairing SymmetricPairing::trivial(const Backend& b, int rank) {
    std::vector<Scalar> t(static_cast<size_t>(rank) * (rank + 1) / 2, Scalar::one(b));
    return SymmetricPairing(b, rank, std::move(t));
}

size_t SymmetricPairing::idx(int i, int j) const {
    // packed upper triangle i <= j
    return static_cast<size_t>(i) * (2 * rank_ - i - 1) / 2 + j;
}

const Scalar& SymmetricPairing::entry(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (!(0 <= i && j < rank_)) throw std::invalid_argument("pairing index out of range");
    return table_[idx(i, j)];
}

Scalar SymmetricPairing::eval(std::span<const long long> b1, std::span<const long long> b2) const {
    require_rank(b1, rank_);
    require_rank(b2, rank_);
    Scalar r = Scalar::one(backend_);
    for (int i = 0; i < rank_; ++i) {
        long long e = b1[i] * b2[i];
        if (e != 0) r = r.mul(entry(i, i).pow(e));
        for (int j = i + 1; j < rank_; ++j) {
            long long f = b1[i] * b2[j] + b1[j] * b2[i];
            if (f != 0) r = r.mul(entry(i, j).pow(f));
        }
    }
    return r;
}

SymmetricPairing SymmetricPairing::mul(const SymmetricPairing& o) const {
    if (rank_ != o.rank_) throw std::invalid_argument("rank mismatch");
    std::vector<Scalar> t;
    t.reserve(table_.size());
    for (size_t i = 0; i < table_.size(); ++i) t.push_back(table_[i].mul(o.table_[i]));
    return SymmetricPairing(backend_, rank_, std::move(t));
}

bool SymmetricPairing::eq(const SymmetricPairing& o, double tol) const {
    if (rank_ != o.rank_ || backend_ != o.backend_) return false;
    for (size_t i = 0; i < table_.size(); ++i)
        if (!table_[i].eq(o.table_[i], tol)) return false;
    return true;
}

// -------------------------------------------------------- CharacterPoint

CharacterPoint::CharacterPoint(Backend backend, std::vector<Scalar> values)
    : backend_(backend), values_(std::move(values)) {
    for (const Scalar& s : values_) require_same_backend(backend_, s.backend());
}

CharacterPoint CharacterPoint::identity(const Backend& b, int rank) {
    return CharacterPoint(b, std::vector<Scalar>(rank, Scalar::one(b)));
}

Scalar CharacterPoint::eval(std::span<const long long> h) const {
    require_rank(h, rank());
    Scalar r = Scalar::one(backend_);
    for (int i = 0; i < rank(); ++i)
        if (h[i] != 0) r = r.mul(values_[i].pow(h[i]));
    return r;
}

CharacterPoint CharacterPoint::mul(const CharacterPoint& o) const {
    if (rank() != o.rank()) throw std::invalid_argument("rank mismatch");
    std::vector<Scalar> v;
    v.reserve(values_.size());
    for (int i = 0; i < rank(); ++i) v.push_back(values_[i].mul(o.values_[i]));
    return CharacterPoint(backend_, std::move(v));
}

CharacterPoint CharacterPoint::pow(long e) const {
    std::vector<Scalar> v;
    v.reserve(values_.size());
    for (const Scalar& s : values_) v.push_back(s.pow(e));
    return CharacterPoint(backend_, std::move(v));
}

bool CharacterPoint::eq(const CharacterPoint& o, double tol) const {
    if (rank() != o.rank() || backend_ != o.backend_) return false;
    for (int i = 0; i < rank(); ++i)
        if (!values_[i].eq(o.values_[i], tol)) return false;
    return true;
}

}  // namespace qtheta
