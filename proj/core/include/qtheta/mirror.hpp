#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "qtheta/pairings.hpp"

namespace qtheta {

// Abstract torus T/i(B) as the triple (H, B, pairing H x B -> K*); the table
// entry (i,j) is the value of e(h_i) at the period point i(b_j).
class AbstractTorus {
public:
    AbstractTorus(Backend backend, int char_rank, int period_rank, std::vector<Scalar> table);

    const Backend& backend() const { return backend_; }
    int char_rank() const { return n_; }
    int period_rank() const { return m_; }
    const Scalar& entry(int i, int j) const { return table_[static_cast<size_t>(i) * m_ + j]; }
    const std::vector<Scalar>& table() const { return table_; }

    bool eq(const AbstractTorus& o, double tol = kDefaultTol) const;

private:
    Backend backend_;
    int n_, m_;
    std::vector<Scalar> table_;
};

// characters and periods interchanged, pairing transposed and inverted
AbstractTorus poincare_dual(const AbstractTorus& a);

// Abstract torus plus a framing H^t x B -> K* (same shape as the main table
// since rk H^t = rk H).
class FramedTorus {
public:
    FramedTorus(AbstractTorus base, std::vector<Scalar> framing);

    const AbstractTorus& base() const { return base_; }
    const Scalar& framing_entry(int i, int j) const {
        return framing_[static_cast<size_t>(i) * base_.period_rank() + j];
    }
    const std::vector<Scalar>& framing_table() const { return framing_; }

    bool eq(const FramedTorus& o, double tol = kDefaultTol) const;

private:
    AbstractTorus base_;
    std::vector<Scalar> framing_;
};

// the mirror partner: read the diagram T <- B -> T^t in the other direction
FramedTorus mirror_dual(const FramedTorus& f);

struct KernelReport {
    bool nondegenerate = false;
    bool exact = false;   // kernel computed by exact integer linear algebra
    IntMat kernel;        // basis columns of the pairing kernel in H
};

struct NondegeneracyReport {
    KernelReport main, framing;
};

// Kernels of h -> (h(b_j))_j for both tables. Exact on rational data
// (rational turns and rational moduli, or the p-adic backend); otherwise a
// bounded numeric search, flagged non-exact.
NondegeneracyReport framing_nondegenerate(const FramedTorus& f, double tol = kDefaultTol);

struct FibrationSide {
    Eigen::MatrixXd log_lattice;  // entries log |P_ij|
    Eigen::MatrixXd angles;       // entries turns(P_ij) in [0,1)
};

struct FibrationReport {
    bool discrete = false;
    std::string notice;  // set when no fibration exists
    FibrationSide side_a, side_b;
    Eigen::MatrixXd base_map;  // G with G * Lambda = Lambda^t
};

// Dual real torus fibration data over the common base; requires the complex
// backend and square tables with invertible log-lattice.
FibrationReport fibration_data(const FramedTorus& f, double cond_threshold = 1e10);

// I assembled blockwise from tau; needs Im tau invertible.
Eigen::MatrixXd complex_structure_from_tau(const Eigen::MatrixXcd& tau);
// inverse direction; needs the upper-right block invertible and I^2 = -E
Eigen::MatrixXcd tau_from_complex_structure(const Eigen::MatrixXd& I, double tol = 1e-9);

// exact-or-float complex literal for omega entries
struct ComplexLit {
    bool re_exact = true;
    mpq_class re_q;
    BigFloat re_f;
    bool im_exact = true;
    mpq_class im_q;
    BigFloat im_f;

    static ComplexLit from_q(const mpq_class& re, const mpq_class& im);
};

// Exponentiation e^{2 pi i omega}: abs = e^{-2 pi Im}, turns = Re mod 1.
// Integer shifts of omega leave the table bit-identical on turns.
std::vector<Scalar> framing_from_omega(const Backend& backend, int n, int m,
                                       const std::vector<ComplexLit>& omega);

// Monodromy transvection M_rs on H_1 in the basis (gamma_1..gamma_n,
// beta_1..beta_n): fixes every gamma and every beta except beta_s -> beta_s
// + gamma_r. Indices are 1-based.
IntMat monodromy_matrix(int r, int s, int n);

// common fixed sublattice of a family of integer matrices, exact
IntMat invariant_sublattice(const std::vector<IntMat>& ms);

}  // namespace qtheta
