#include "qtheta/mirror.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qtheta {

namespace {

// trial-division factorization of a positive integer, desk scale
void factor_into(std::map<long long, long long>& exps, mpz_class n, long long sign_mult) {
    if (n < 0) throw std::logic_error("factor_into expects positive input");
    long long d = 2;
    while (n > 1) {
        if (d > 1000000)
            throw std::domain_error("entry too large for exact kernel factorization");
        if (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(d))) {
            long long e = 0;
            while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(d))) {
                mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(d));
                ++e;
            }
            exps[d] += sign_mult * e;
        }
        d += (d == 2) ? 1 : 2;
    }
}

bool scalar_rational_data(const Scalar& s, bool& negative, mpq_class& modulus, mpq_class& turns) {
    if (s.backend().field == Field::Padic) {
        negative = sgn(s.rat()) < 0;
        modulus = abs(s.rat());
        turns = 0;
        return true;
    }
    if (!s.abs_part().exact || !s.turns_part().exact) return false;
    const mpq_class& t = s.turns_part().q;
    if (t == 0) {
        negative = false;
    } else if (t == mpq_class(1, 2)) {
        negative = true;
    } else {
        // a genuine phase: keep it in the congruence part
        negative = false;
    }
    modulus = s.abs_part().q;
    turns = t;
    return true;
}

}  // namespace

// ---------------------------------------------------------- AbstractTorus

AbstractTorus::AbstractTorus(Backend backend, int char_rank, int period_rank,
                             std::vector<Scalar> table)
    : backend_(backend), n_(char_rank), m_(period_rank), table_(std::move(table)) {
    if (table_.size() != static_cast<size_t>(n_) * m_)
        throw std::invalid_argument("pairing table has wrong size");
    for (const Scalar& s : table_) require_same_backend(backend_, s.backend());
}

bool AbstractTorus::eq(const AbstractTorus& o, double tol) const {
    if (n_ != o.n_ || m_ != o.m_ || backend_ != o.backend_) return false;
    for (size_t i = 0; i < table_.size(); ++i)
        if (!table_[i].eq(o.table_[i], tol)) return false;
    return true;
}

AbstractTorus poincare_dual(const AbstractTorus& a) {
    std::vector<Scalar> t;
    t.reserve(a.table().size());
    for (int j = 0; j < a.period_rank(); ++j)
        for (int i = 0; i < a.char_rank(); ++i) t.push_back(a.entry(i, j).inv());
    return AbstractTorus(a.backend(), a.period_rank(), a.char_rank(), std::move(t));
}

// ------------------------------------------------------------ FramedTorus

FramedTorus::FramedTorus(AbstractTorus base, std::vector<Scalar> framing)
    : base_(std::move(base)), framing_(std::move(framing)) {
    if (framing_.size() != static_cast<size_t>(base_.char_rank()) * base_.period_rank())
        throw std::invalid_argument("framing table has wrong size");
    for (const Scalar& s : framing_) require_same_backend(base_.backend(), s.backend());
}

bool FramedTorus::eq(const FramedTorus& o, double tol) const {
    if (!base_.eq(o.base_, tol)) return false;
    for (size_t i = 0; i < framing_.size(); ++i)
        if (!framing_[i].eq(o.framing_[i], tol)) return false;
    return true;
}

FramedTorus mirror_dual(const FramedTorus& f) {
    AbstractTorus partner_base(f.base().backend(), f.base().char_rank(), f.base().period_rank(),
                               f.framing_table());
    return FramedTorus(std::move(partner_base), f.base().table());
}

// -------------------------------------------------------- pairing kernels

namespace {

KernelReport table_kernel(const Backend& backend, int n, int m,
                          const std::vector<Scalar>& table, double tol) {
    KernelReport rep;
    bool all_rational = true;
    for (const Scalar& s : table) {
        bool neg;
        mpq_class mod, t;
        if (!scalar_rational_data(s, neg, mod, t)) {
            all_rational = false;
            break;
        }
    }
    if (all_rational) {
        // exact path: prime-exponent balance for moduli, congruences for turns
        // variables: h_1..h_n then one auxiliary integer per congruence row
        std::vector<IntVec> rows;
        std::vector<long long> aux_moduli;  // modulus of each congruence row
        for (int j = 0; j < m; ++j) {
            std::map<long long, long long> primes;  // union of primes in column j
            std::vector<std::map<long long, long long>> exps(n);
            mpz_class denom_lcm = 1;
            std::vector<mpq_class> turns(n);
            std::vector<bool> negative(n);
            for (int i = 0; i < n; ++i) {
                bool neg;
                mpq_class mod, t;
                scalar_rational_data(table[static_cast<size_t>(i) * m + j], neg, mod, t);
                negative[i] = neg;
                turns[i] = t;
                factor_into(exps[i], mpq_class(mod).get_num(), 1);
                factor_into(exps[i], mpq_class(mod).get_den(), -1);
                for (const auto& [p, e] : exps[i])
                    if (e != 0) primes.emplace(p, 0);
                mpz_lcm(denom_lcm.get_mpz_t(), denom_lcm.get_mpz_t(), t.get_den_mpz_t());
            }
            for (const auto& [p, unused] : primes) {
                (void)unused;
                IntVec row(n, 0);
                for (int i = 0; i < n; ++i) {
                    auto it = exps[i].find(p);
                    if (it != exps[i].end()) row[i] = it->second;
                }
                rows.push_back(std::move(row));
                aux_moduli.push_back(0);
            }
            if (backend.field == Field::Padic) {
                // sign balance mod 2
                IntVec row(n, 0);
                bool any = false;
                for (int i = 0; i < n; ++i)
                    if (negative[i]) {
                        row[i] = 1;
                        any = true;
                    }
                if (any) {
                    rows.push_back(std::move(row));
                    aux_moduli.push_back(2);
                }
            } else {
                // turns congruence: sum_i h_i t_ij = 0 (mod 1)
                if (!mpz_fits_slong_p(denom_lcm.get_mpz_t()))
                    throw std::domain_error("turn denominators too large for exact kernel");
                bool any = false;
                IntVec row(n, 0);
                for (int i = 0; i < n; ++i) {
                    mpq_class scaled = turns[i] * mpq_class(denom_lcm);
                    if (scaled.get_den() != 1) throw std::logic_error("lcm failed");
                    if (!mpz_fits_slong_p(scaled.get_num_mpz_t()))
                        throw std::domain_error("turn numerators too large for exact kernel");
                    row[i] = static_cast<long long>(mpz_get_si(scaled.get_num_mpz_t()));
                    if (row[i] != 0) any = true;
                }
                if (any) {
                    rows.push_back(std::move(row));
                    aux_moduli.push_back(static_cast<long long>(mpz_get_si(denom_lcm.get_mpz_t())));
                }
            }
        }
        int n_aux = 0;
        for (long long mmod : aux_moduli)
            if (mmod != 0) ++n_aux;
        IntMat M(static_cast<int>(rows.size()), n + n_aux);
        int aux_col = n;
        for (size_t r = 0; r < rows.size(); ++r) {
            for (int i = 0; i < n; ++i) M.at(static_cast<int>(r), i) = rows[r][i];
            if (aux_moduli[r] != 0) M.at(static_cast<int>(r), aux_col++) = aux_moduli[r];
        }
        IntMat ker = kernel_basis(M);
        // project onto the h coordinates and canonicalize
        IntMat proj(n, ker.cols());
        for (int j = 0; j < ker.cols(); ++j)
            for (int i = 0; i < n; ++i) proj.at(i, j) = ker.at(i, j);
        rep.kernel = image_basis(proj);
        rep.exact = true;
        rep.nondegenerate = rep.kernel.cols() == 0;
        return rep;
    }

    // numeric fallback: bounded search for kernel generators
    const long long bound = 8;
    std::vector<IntVec> found;
    for (const IntVec& h : sup_ball(n, bound)) {
        bool in_kernel = true;
        bool nonzero = false;
        for (long long x : h)
            if (x != 0) nonzero = true;
        if (!nonzero) continue;
        for (int j = 0; j < m && in_kernel; ++j) {
            Scalar v = Scalar::one(backend);
            for (int i = 0; i < n; ++i)
                if (h[i] != 0) v = v.mul(table[static_cast<size_t>(i) * m + j].pow(h[i]));
            if (!v.is_one(tol)) in_kernel = false;
        }
        if (in_kernel) found.push_back(h);
    }
    IntMat gens(n, static_cast<int>(found.size()));
    for (size_t j = 0; j < found.size(); ++j)
        for (int i = 0; i < n; ++i) gens.at(i, static_cast<int>(j)) = found[j][i];
    rep.kernel = image_basis(gens);
    rep.exact = false;
    rep.nondegenerate = rep.kernel.cols() == 0;
    return rep;
}

}  // namespace

NondegeneracyReport framing_nondegenerate(const FramedTorus& f, double tol) {
    NondegeneracyReport rep;
    const AbstractTorus& b = f.base();
    rep.main = table_kernel(b.backend(), b.char_rank(), b.period_rank(), b.table(), tol);
    rep.framing = table_kernel(b.backend(), b.char_rank(), b.period_rank(), f.framing_table(), tol);
    return rep;
}

// ----------------------------------------------------------- fibrations

FibrationReport fibration_data(const FramedTorus& f, double cond_threshold) {
    const AbstractTorus& a = f.base();
    if (a.backend().field != Field::Complex)
        throw std::invalid_argument("fibration data is defined over the complex backend");
    int n = a.char_rank(), m = a.period_rank();
    if (n != m) throw std::invalid_argument("fibration data needs rk B = rk H");
    FibrationReport rep;
    rep.side_a.log_lattice = Eigen::MatrixXd(n, m);
    rep.side_a.angles = Eigen::MatrixXd(n, m);
    rep.side_b.log_lattice = Eigen::MatrixXd(n, m);
    rep.side_b.angles = Eigen::MatrixXd(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            rep.side_a.log_lattice(i, j) = a.entry(i, j).log_norm().to_double();
            rep.side_a.angles(i, j) =
                a.entry(i, j).turns_part().to_f(a.backend().prec).to_double();
            rep.side_b.log_lattice(i, j) = f.framing_entry(i, j).log_norm().to_double();
            rep.side_b.angles(i, j) =
                f.framing_entry(i, j).turns_part().to_f(a.backend().prec).to_double();
        }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rep.side_a.log_lattice,
                                          Eigen::ComputeThinU | Eigen::ComputeThinV);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(n - 1);
    if (smax <= 0 || smin <= 0 || smax / smin > cond_threshold) {
        rep.discrete = false;
        bool all_unit = rep.side_a.log_lattice.cwiseAbs().maxCoeff() < 1e-12;
        rep.notice = all_unit ? "noncommutative-torus regime: periods lie on the unit-norm torus"
                              : "periods not discrete: log-lattice is singular";
        return rep;
    }
    rep.discrete = true;
    rep.base_map = rep.side_b.log_lattice * rep.side_a.log_lattice.inverse();
    return rep;
}

Eigen::MatrixXd complex_structure_from_tau(const Eigen::MatrixXcd& tau) {
    if (tau.rows() != tau.cols()) throw std::invalid_argument("tau must be square");
    int n = static_cast<int>(tau.rows());
    Eigen::MatrixXd re = tau.real(), im = tau.imag();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(im);
    if (!lu.isInvertible()) throw std::domain_error("Im tau is singular");
    Eigen::MatrixXd im_inv = lu.inverse();
    Eigen::MatrixXd I(2 * n, 2 * n);
    I.topLeftCorner(n, n) = im_inv * re;
    I.topRightCorner(n, n) = im_inv;
    I.bottomLeftCorner(n, n) = -im - re * im_inv * re;
    I.bottomRightCorner(n, n) = -re * im_inv;
    return I;
}

Eigen::MatrixXcd tau_from_complex_structure(const Eigen::MatrixXd& I, double tol) {
    if (I.rows() != I.cols() || I.rows() % 2 != 0) throw std::invalid_argument("I must be 2n x 2n");
    int n = static_cast<int>(I.rows()) / 2;
    Eigen::MatrixXd sq = I * I + Eigen::MatrixXd::Identity(2 * n, 2 * n);
    if (sq.cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("matrix is not a complex structure (I^2 != -E)");
    Eigen::MatrixXd Y = I.topRightCorner(n, n);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Y);
    if (!lu.isInvertible())
        throw std::domain_error("crossover block is singular; not bijective on the splitting");
    Eigen::MatrixXd im = lu.inverse();
    Eigen::MatrixXd re = im * I.topLeftCorner(n, n);
    Eigen::MatrixXcd tau(n, n);
    tau.real() = re;
    tau.imag() = im;
    return tau;
}

ComplexLit ComplexLit::from_q(const mpq_class& re, const mpq_class& im) {
    ComplexLit c;
    c.re_q = re;
    c.im_q = im;
    return c;
}

std::vector<Scalar> framing_from_omega(const Backend& backend, int n, int m,
                                       const std::vector<ComplexLit>& omega) {
    if (backend.field != Field::Complex)
        throw std::invalid_argument("framing exponentiation is complex-backend only");
    if (omega.size() != static_cast<size_t>(n) * m)
        throw std::invalid_argument("omega has wrong size");
    std::vector<Scalar> table;
    table.reserve(omega.size());
    BigFloat two_pi = BigFloat::pi(backend.prec + 32) * BigFloat::from_si(2, backend.prec + 32);
    for (const ComplexLit& w : omega) {
        Turns turns = w.re_exact ? Turns::from_q(w.re_q) : Turns::from_f(w.re_f);
        bool im_zero = w.im_exact ? (w.im_q == 0) : w.im_f.is_zero();
        PosReal abs;
        if (im_zero) {
            abs = PosReal::from_q(1, backend.prec);
        } else {
            BigFloat im = w.im_exact ? BigFloat::from_q(w.im_q, backend.prec) : w.im_f;
            abs = PosReal::from_f((-(two_pi * im)).exp());
        }
        table.push_back(Scalar::from_polar(backend, std::move(abs), std::move(turns)));
    }
    return table;
}

// ------------------------------------------------------------- monodromy

IntMat monodromy_matrix(int r, int s, int n) {
    if (r < 1 || r > n || s < 1 || s > n) throw std::invalid_argument("monodromy index out of range");
    IntMat M = IntMat::identity(2 * n);
    M.at(r - 1, n + s - 1) = 1;
    return M;
}

IntMat invariant_sublattice(const std::vector<IntMat>& ms) {
    if (ms.empty()) throw std::invalid_argument("need at least one matrix");
    int k = ms[0].rows();
    for (const IntMat& M : ms)
        if (M.rows() != k || M.cols() != k) throw std::invalid_argument("matrices must be square, same size");
    IntMat stacked(static_cast<int>(ms.size()) * k, k);
    for (size_t t = 0; t < ms.size(); ++t) {
        IntMat diff = ms[t].sub(IntMat::identity(k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) stacked.at(static_cast<int>(t) * k + i, j) = diff.at(i, j);
    }
    return image_basis(kernel_basis(stacked));
}

}  // namespace qtheta
