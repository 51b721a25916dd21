#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qtheta {

using IntVec = std::vector<long long>;

// Dense integer matrix, row-major. A LatticeHom f: Z^cols -> Z^rows is just
// its matrix; composition is matrix product.
class IntMat {
public:
    IntMat() : rows_(0), cols_(0) {}
    IntMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0) {}

    static IntMat identity(int n);
    static IntMat from_rows(const std::vector<IntVec>& rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    long long& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    long long at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    IntMat mul(const IntMat& o) const;
    IntMat add(const IntMat& o) const;
    IntMat sub(const IntMat& o) const;
    IntMat transpose() const;
    IntMat scaled(long long c) const;
    IntVec apply(std::span<const long long> x) const;
    IntVec column(int j) const;

    bool operator==(const IntMat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
    bool is_zero() const;
    std::string to_string() const;

private:
    int rows_, cols_;
    std::vector<long long> a_;
};

// Index [target : image], possibly infinite.
struct ExtNat {
    bool finite = true;
    unsigned long long value = 0;
    static ExtNat infinite() { return ExtNat{false, 0}; }
    bool operator==(const ExtNat& o) const {
        return finite == o.finite && (!finite || value == o.value);
    }
};

// U * A * V = D with U, V unimodular and D diagonal with d_1 | d_2 | ...
// Pivot rule: smallest nonzero entry by absolute value, ties broken by
// lowest row index then lowest column index, so output is deterministic.
struct SmithNF {
    IntMat D, U, V, Uinv, Vinv;
    int rank = 0;
    std::vector<long long> divisors;  // the nonzero d_i, positive
};

SmithNF smith_normal_form(const IntMat& A);

ExtNat smith_index(const IntMat& f);

// All coset representatives of Z^rows / f(Z^cols), canonicalized to the box
// 0 <= x_i < d_i in Smith coordinates and mapped back; first entry is 0.
std::vector<IntVec> coset_reps(const IntMat& f);

struct CosetReduction {
    IntVec representative;
    IntVec witness;  // h - representative = f(witness)
};
CosetReduction coset_reduce(const IntMat& f, std::span<const long long> h);

// Solve f(x) = y over Z; nullopt when no integral solution exists.
std::optional<IntVec> solve_integer(const IntMat& f, std::span<const long long> y);

// Basis of Ker f as matrix columns (cols = kernel rank).
IntMat kernel_basis(const IntMat& f);

// Basis of the column span of f as matrix columns, deterministic.
IntMat image_basis(const IntMat& f);

bool lattice_contains(const IntMat& basis, std::span<const long long> v);
bool lattice_equal(const IntMat& basis_a, const IntMat& basis_b);

// Enumerates all vectors with ||h||_inf <= radius in lexicographic order.
std::vector<IntVec> sup_ball(int rank, long long radius);

}  // namespace qtheta
