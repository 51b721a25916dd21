#include "qtheta/lattice.hpp"

#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace qtheta {

namespace {

long long checked_mul(long long a, long long b) {
    __int128 p = static_cast<__int128>(a) * b;
    if (p > INT64_MAX / 4 || p < INT64_MIN / 4)
        throw std::overflow_error("integer matrix entry overflow");
    return static_cast<long long>(p);
}

// floor division quotient
long long fdiv(long long a, long long b) {
    long long q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

long long fmod_pos(long long a, long long b) {
    long long m = a % b;
    if (m < 0) m += std::llabs(b);
    return m;
}

}  // namespace

IntMat IntMat::identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMat IntMat::from_rows(const std::vector<IntVec>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r > 0 ? static_cast<int>(rows[0].size()) : 0;
    IntMat m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c)
            throw std::invalid_argument("ragged matrix rows");
        for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

IntMat IntMat::mul(const IntMat& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix dimension mismatch");
    IntMat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            long long aik = at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < o.cols_; ++j)
                r.at(i, j) += checked_mul(aik, o.at(k, j));
        }
    return r;
}

IntMat IntMat::add(const IntMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix dimension mismatch");
    IntMat r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
    return r;
}

IntMat IntMat::sub(const IntMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix dimension mismatch");
    IntMat r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
    return r;
}

IntMat IntMat::transpose() const {
    IntMat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

IntMat IntMat::scaled(long long c) const {
    IntMat r = *this;
    for (auto& x : r.a_) x = checked_mul(x, c);
    return r;
}

IntVec IntMat::apply(std::span<const long long> x) const {
    if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("vector length mismatch");
    IntVec y(rows_, 0);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) y[i] += checked_mul(at(i, j), x[j]);
    return y;
}

IntVec IntMat::column(int j) const {
    IntVec c(rows_);
    for (int i = 0; i < rows_; ++i) c[i] = at(i, j);
    return c;
}

bool IntMat::is_zero() const {
    for (auto x : a_)
        if (x != 0) return false;
    return true;
}

std::string IntMat::to_string() const {
    std::ostringstream os;
    for (int i = 0; i < rows_; ++i) {
        os << (i == 0 ? "[" : " ");
        for (int j = 0; j < cols_; ++j) os << at(i, j) << (j + 1 < cols_ ? " " : "");
        os << (i + 1 < rows_ ? ";\n" : "]");
    }
    return os.str();
}

// ------------------------------------------------------------- Smith form

namespace {

struct SmithWork {
    IntMat D, U, V, Uinv, Vinv;

    void swap_rows(int i, int j) {
        if (i == j) return;
        for (int k = 0; k < D.cols(); ++k) std::swap(D.at(i, k), D.at(j, k));
        for (int k = 0; k < U.cols(); ++k) std::swap(U.at(i, k), U.at(j, k));
        for (int k = 0; k < Uinv.rows(); ++k) std::swap(Uinv.at(k, i), Uinv.at(k, j));
    }
    void swap_cols(int i, int j) {
        if (i == j) return;
        for (int k = 0; k < D.rows(); ++k) std::swap(D.at(k, i), D.at(k, j));
        for (int k = 0; k < V.rows(); ++k) std::swap(V.at(k, i), V.at(k, j));
        for (int k = 0; k < Vinv.cols(); ++k) std::swap(Vinv.at(i, k), Vinv.at(j, k));
    }
    // row[dst] += c * row[src]
    void addmul_row(int dst, int src, long long c) {
        if (c == 0) return;
        for (int k = 0; k < D.cols(); ++k) D.at(dst, k) += checked_mul(c, D.at(src, k));
        for (int k = 0; k < U.cols(); ++k) U.at(dst, k) += checked_mul(c, U.at(src, k));
        for (int k = 0; k < Uinv.rows(); ++k) Uinv.at(k, src) -= checked_mul(c, Uinv.at(k, dst));
    }
    // col[dst] += c * col[src]
    void addmul_col(int dst, int src, long long c) {
        if (c == 0) return;
        for (int k = 0; k < D.rows(); ++k) D.at(k, dst) += checked_mul(c, D.at(k, src));
        for (int k = 0; k < V.rows(); ++k) V.at(k, dst) += checked_mul(c, V.at(k, src));
        for (int k = 0; k < Vinv.cols(); ++k) Vinv.at(src, k) -= checked_mul(c, Vinv.at(dst, k));
    }
    void negate_row(int i) {
        for (int k = 0; k < D.cols(); ++k) D.at(i, k) = -D.at(i, k);
        for (int k = 0; k < U.cols(); ++k) U.at(i, k) = -U.at(i, k);
        for (int k = 0; k < Uinv.rows(); ++k) Uinv.at(k, i) = -Uinv.at(k, i);
    }
};

}  // namespace

SmithNF smith_normal_form(const IntMat& A) {
    SmithWork w;
    w.D = A;
    w.U = IntMat::identity(A.rows());
    w.Uinv = IntMat::identity(A.rows());
    w.V = IntMat::identity(A.cols());
    w.Vinv = IntMat::identity(A.cols());

    int n = A.rows(), m = A.cols();
    int k = 0;
    while (k < n && k < m) {
        // pivot: smallest |entry| != 0 in D[k.., k..], ties to lowest row, then column
        int pi = -1, pj = -1;
        long long best = 0;
        for (int i = k; i < n; ++i)
            for (int j = k; j < m; ++j) {
                long long v = std::llabs(w.D.at(i, j));
                if (v != 0 && (pi < 0 || v < best)) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break;  // remaining block is zero
        w.swap_rows(k, pi);
        w.swap_cols(k, pj);

        bool clean = false;
        while (!clean) {
            clean = true;
            long long p = w.D.at(k, k);
            for (int i = k + 1; i < n; ++i) {
                long long q = fdiv(w.D.at(i, k), p);
                w.addmul_row(i, k, -q);
                if (w.D.at(i, k) != 0) {
                    // remainder became the new, smaller pivot
                    w.swap_rows(k, i);
                    clean = false;
                    p = w.D.at(k, k);
                }
            }
            for (int j = k + 1; j < m; ++j) {
                long long q = fdiv(w.D.at(k, j), p);
                w.addmul_col(j, k, -q);
                if (w.D.at(k, j) != 0) {
                    w.swap_cols(k, j);
                    clean = false;
                    p = w.D.at(k, k);
                }
            }
        }
        // divisibility d_k | all deeper entries
        long long p = w.D.at(k, k);
        bool fixed = false;
        for (int i = k + 1; i < n && !fixed; ++i)
            for (int j = k + 1; j < m && !fixed; ++j)
                if (w.D.at(i, j) % p != 0) {
                    w.addmul_row(k, i, 1);
                    fixed = true;
                }
        if (fixed) continue;  // redo step k with the enlarged row
        if (w.D.at(k, k) < 0) w.negate_row(k);
        ++k;
    }

    SmithNF r;
    r.D = w.D;
    r.U = w.U;
    r.V = w.V;
    r.Uinv = w.Uinv;
    r.Vinv = w.Vinv;
    r.rank = k;
    for (int i = 0; i < k; ++i) r.divisors.push_back(w.D.at(i, i));
    return r;
}

ExtNat smith_index(const IntMat& f) {
    SmithNF s = smith_normal_form(f);
    if (s.rank < f.rows()) return ExtNat::infinite();
    unsigned long long idx = 1;
    for (long long d : s.divisors) idx *= static_cast<unsigned long long>(d);
    return ExtNat{true, idx};
}

std::vector<IntVec> coset_reps(const IntMat& f) {
    SmithNF s = smith_normal_form(f);
    if (s.rank < f.rows()) throw std::domain_error("coset index is infinite");
    int n = f.rows();
    std::vector<IntVec> reps;
    IntVec y(n, 0);
    while (true) {
        reps.push_back(s.Uinv.apply(y));
        int i = n - 1;
        for (; i >= 0; --i) {
            if (++y[i] < s.divisors[i]) break;
            y[i] = 0;
        }
        if (i < 0) break;
    }
    return reps;
}

CosetReduction coset_reduce(const IntMat& f, std::span<const long long> h) {
    SmithNF s = smith_normal_form(f);
    if (s.rank < f.rows()) throw std::domain_error("coset index is infinite");
    int n = f.rows(), m = f.cols();
    IntVec y = s.U.apply(h);
    IntVec r(n), q(m, 0);
    for (int i = 0; i < n; ++i) {
        long long d = s.divisors[i];
        r[i] = fmod_pos(y[i], d);
        q[i] = (y[i] - r[i]) / d;
    }
    CosetReduction out;
    out.representative = s.Uinv.apply(r);
    out.witness = s.V.apply(q);
    return out;
}

std::optional<IntVec> solve_integer(const IntMat& f, std::span<const long long> y) {
    SmithNF s = smith_normal_form(f);
    IntVec z = s.U.apply(y);
    IntVec x(f.cols(), 0);
    for (int i = 0; i < f.rows(); ++i) {
        if (i < s.rank) {
            if (z[i] % s.divisors[i] != 0) return std::nullopt;
            x[i] = z[i] / s.divisors[i];
        } else if (z[i] != 0) {
            return std::nullopt;
        }
    }
    return s.V.apply(x);
}

IntMat kernel_basis(const IntMat& f) {
    SmithNF s = smith_normal_form(f);
    int m = f.cols();
    int kr = m - s.rank;
    IntMat K(m, kr);
    for (int j = 0; j < kr; ++j) {
        IntVec col = s.V.column(s.rank + j);
        for (int i = 0; i < m; ++i) K.at(i, j) = col[i];
    }
    return K;
}

IntMat image_basis(const IntMat& f) {
    SmithNF s = smith_normal_form(f);
    IntMat B(f.rows(), s.rank);
    for (int j = 0; j < s.rank; ++j) {
        IntVec col = s.Uinv.column(j);
        for (int i = 0; i < f.rows(); ++i) B.at(i, j) = checked_mul(col[i], s.divisors[j]);
    }
    return B;
}

bool lattice_contains(const IntMat& basis, std::span<const long long> v) {
    return solve_integer(basis, v).has_value();
}

bool lattice_equal(const IntMat& a, const IntMat& b) {
    if (a.rows() != b.rows()) return false;
    for (int j = 0; j < b.cols(); ++j) {
        IntVec c = b.column(j);
        if (!lattice_contains(a, c)) return false;
    }
    for (int j = 0; j < a.cols(); ++j) {
        IntVec c = a.column(j);
        if (!lattice_contains(b, c)) return false;
    }
    return true;
}

std::vector<IntVec> sup_ball(int rank, long long radius) {
    std::vector<IntVec> out;
    if (rank == 0) {
        out.push_back({});
        return out;
    }
    IntVec h(rank, -radius);
    while (true) {
        out.push_back(h);
        int i = rank - 1;
        for (; i >= 0; --i) {
            if (++h[i] <= radius) break;
            h[i] = -radius;
        }
        if (i < 0) break;
    }
    return out;
}

}  // namespace qtheta
