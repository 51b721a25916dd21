#include "qtheta/theta.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

namespace qtheta {

namespace {

IntVec negated(std::span<const long long> v) {
    IntVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = -v[i];
    return r;
}

IntVec unit_vec(int rank, int j, long long sign = 1) {
    IntVec e(rank, 0);
    e[j] = sign;
    return e;
}

long long sup_norm(std::span<const long long> v) {
    long long m = 0;
    for (long long x : v) m = std::max(m, std::llabs(x));
    return m;
}

// coset reduction against a fixed Smith decomposition
struct CosetReducer {
    SmithNF snf;
    int n, m;
    explicit CosetReducer(const IntMat& f) : snf(smith_normal_form(f)), n(f.rows()), m(f.cols()) {
        if (snf.rank < n) throw std::domain_error("coset index is infinite");
    }
    void reduce(std::span<const long long> h, IntVec& rep, IntVec& witness) const {
        IntVec y = snf.U.apply(h);
        IntVec r(n), q(m, 0);
        for (int i = 0; i < n; ++i) {
            long long d = snf.divisors[i];
            long long mod = y[i] % d;
            if (mod < 0) mod += d;
            r[i] = mod;
            q[i] = (y[i] - mod) / d;
        }
        rep = snf.Uinv.apply(r);
        witness = snf.V.apply(q);
    }
};

}  // namespace

// ---------------------------------------------------------- PeriodLattice

PeriodLattice::PeriodLattice(TorusPtr torus, std::vector<CharacterPoint> points)
    : torus_(std::move(torus)), points_(std::move(points)) {
    for (const CharacterPoint& p : points_) {
        if (p.rank() != torus_->rank()) throw std::invalid_argument("period point rank mismatch");
        require_same_backend(p.backend(), torus_->backend());
    }
}

CharacterPoint PeriodLattice::point(std::span<const long long> b) const {
    if (static_cast<int>(b.size()) != rank()) throw std::invalid_argument("rank mismatch");
    CharacterPoint r = CharacterPoint::identity(torus_->backend(), torus_->rank());
    for (int j = 0; j < rank(); ++j)
        if (b[j] != 0) r = r.mul(points_[j].pow(b[j]));
    return r;
}

Scalar PeriodLattice::pair(std::span<const long long> h, std::span<const long long> b) const {
    return point(b).eval(h);
}

bool PeriodLattice::same_as(const PeriodLattice& o, double tol) const {
    if (this == &o) return true;
    if (rank() != o.rank() || !torus_->same_as(*o.torus_, tol)) return false;
    for (int j = 0; j < rank(); ++j)
        if (!points_[j].eq(o.points_[j], tol)) return false;
    return true;
}

// -------------------------------------------------------- ThetaMultiplier

ThetaMultiplier::ThetaMultiplier(TorusPtr torus, PeriodsPtr periods, IntMat h_l, IntMat h_r,
                                 std::vector<Scalar> psi, SymmetricPairing pairing)
    : torus_(std::move(torus)),
      periods_(std::move(periods)),
      h_l_(std::move(h_l)),
      h_r_(std::move(h_r)),
      psi_(std::move(psi)),
      pairing_(std::move(pairing)) {
    int n = torus_->rank();
    int m = periods_->rank();
    if (!periods_->torus()->same_as(*torus_))
        throw std::invalid_argument("period lattice belongs to a different torus");
    if (h_l_.rows() != n || h_l_.cols() != m || h_r_.rows() != n || h_r_.cols() != m)
        throw std::invalid_argument("h_l/h_r must be rank(H) x rank(B)");
    if (static_cast<int>(psi_.size()) != m) throw std::invalid_argument("psi needs one value per period basis vector");
    if (pairing_.rank() != m) throw std::invalid_argument("pairing rank mismatch");
    h_minus_ = h_l_.sub(h_r_);
    h_plus_ = h_l_.add(h_r_);
}

Scalar ThetaMultiplier::psi(std::span<const long long> b) const {
    Scalar r = Scalar::one(torus_->backend());
    for (size_t j = 0; j < psi_.size(); ++j)
        if (b[j] != 0) r = r.mul(psi_[j].pow(b[j]));
    return r;
}

Scalar ThetaMultiplier::recursion_factor(std::span<const long long> b,
                                         std::span<const long long> h) const {
    const AlternatingPairing& alpha = torus_->alpha();
    IntVec hlb = h_l_.apply(b);
    IntVec hrb = h_r_.apply(b);
    IntVec hpb = h_plus_.apply(b);
    Scalar r = psi(b);
    r = r.mul(periods_->pair(h, b).inv());
    r = r.mul(pairing_.eval(b, b).inv());
    r = r.mul(alpha.eps(hlb));
    r = r.mul(alpha.eval(hrb, hlb));
    r = r.mul(alpha.eval(hpb, h));
    return r;
}

long long ThetaMultiplier::boundary_band() const {
    long long band = 0;
    for (int j = 0; j < periods_->rank(); ++j)
        band = std::max(band, sup_norm(h_minus_.column(j)));
    return band;
}

MultiplierReport multiplier_validate(const ThetaMultiplier& L, double tol) {
    MultiplierReport rep;
    rep.valid = true;
    const AlternatingPairing& alpha = L.torus()->alpha();
    int m = L.periods()->rank();
    for (int i = 0; i < m; ++i) {
        IntVec bi = unit_vec(m, i);
        for (int j = 0; j < m; ++j) {
            IntVec bj = unit_vec(m, j);
            // (2.12) with b1 = b_i, b2 = b_j
            Scalar lhs = L.periods()->pair(L.h_minus().column(j), bi);
            Scalar rhs = L.pairing().eval(bi, bj).pow(2);
            rhs = rhs.mul(alpha.eval(L.h_l().column(i), L.h_l().column(j)));
            rhs = rhs.mul(alpha.eval(L.h_r().column(i), L.h_r().column(j)).inv());
            double resid =
                Coefficient::dist(lhs.to_coefficient(), rhs.to_coefficient()).to_double();
            double scale = std::max(lhs.norm().to_double(), rhs.norm().to_double());
            if (scale > 0) resid /= scale;
            rep.residuals.emplace_back(i, j, resid);
            rep.max_residual = std::max(rep.max_residual, resid);
            if (!lhs.eq(rhs, tol)) rep.valid = false;
        }
    }
    return rep;
}

SymmetricPairing multiplier_solve_pairing(const TorusPtr& torus, const PeriodsPtr& periods,
                                          const IntMat& h_l, const IntMat& h_r, Branch branch,
                                          double tol) {
    const AlternatingPairing& alpha = torus->alpha();
    int m = periods->rank();
    IntMat h_minus = h_l.sub(h_r);
    auto required_square = [&](int i, int j) {
        // (b_i, b_j)^2 isolated from (2.12)
        IntVec bi = unit_vec(m, i);
        Scalar lhs = periods->pair(h_minus.column(j), bi);
        Scalar s = lhs.mul(alpha.eval(h_l.column(i), h_l.column(j)).inv());
        return s.mul(alpha.eval(h_r.column(i), h_r.column(j)));
    };
    std::vector<Scalar> table;
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            Scalar sq = required_square(i, j);
            if (i != j) {
                Scalar sq_swapped = required_square(j, i);
                if (!sq.eq(sq_swapped, tol))
                    throw std::domain_error(
                        "inconsistent off-diagonal requirements: no symmetric pairing solves the "
                        "compatibility condition");
            }
            table.push_back(sq.sqrt(branch));
        }
    return SymmetricPairing(torus->backend(), m, std::move(table));
}

// ------------------------------------------------------ automorphy factors

GroupRingElement automorphy_apply(const ThetaMultiplier& L, std::span<const long long> b,
                                  const GroupRingElement& phi) {
    if (!phi.torus()->same_as(*L.torus())) throw std::invalid_argument("torus mismatch");
    Scalar c = L.psi(b).mul(L.pairing().eval(b, b));
    GroupRingElement left =
        GroupRingElement::monomial(phi.torus(), L.h_l().apply(b), c.to_coefficient());
    GroupRingElement right = ring_inv(GroupRingElement::monomial(
        phi.torus(), L.h_r().apply(b), Coefficient::one(L.torus()->backend())));
    return ring_mul(ring_mul(left, phi), right);
}

GroupRingElement automorphy_inverse_apply(const ThetaMultiplier& L, std::span<const long long> b,
                                          const GroupRingElement& phi) {
    if (!phi.torus()->same_as(*L.torus())) throw std::invalid_argument("torus mismatch");
    const AlternatingPairing& alpha = L.torus()->alpha();
    IntVec hlb = L.h_l().apply(b);
    IntVec hrb = L.h_r().apply(b);
    IntVec hpb = L.h_plus().apply(b);
    IntVec hmb = L.h_minus().apply(b);
    Scalar base = L.psi(b).inv().mul(L.pairing().eval(b, b).inv()).mul(alpha.eps(hlb)).mul(
        alpha.eval(hrb, hlb));
    GroupRingElement out(phi.torus());
    IntVec shifted(hmb.size());
    for (const auto& [h, c] : phi.coeffs()) {
        Scalar factor = base.mul(alpha.eval(h, hpb));
        for (size_t i = 0; i < h.size(); ++i) shifted[i] = h[i] - hmb[i];
        out.add_term(shifted, c.mul(factor));
    }
    return out;
}

GroupRingElement period_action(const ThetaMultiplier& L, std::span<const long long> b,
                               const GroupRingElement& phi) {
    TorusMorphism shift = make_shift(phi.torus(), L.periods()->point(b));
    return automorphy_inverse_apply(L, b, shift.apply_star(phi));
}

// ----------------------------------------------------------- ampleness

const char* to_string(AmpleVerdict v) {
    switch (v) {
        case AmpleVerdict::Ample: return "ample";
        case AmpleVerdict::Degenerate: return "degenerate";
        case AmpleVerdict::Indefinite: return "indefinite";
    }
    return "?";
}

AmpleReport ampleness_gram(const ThetaMultiplier& L) {
    AmpleReport rep;
    rep.dimension = L.dimension();
    int m = L.periods()->rank();
    auto quad = [&](std::span<const long long> b) {
        Scalar s = L.pairing().eval(b, b);
        IntVec hlb = L.h_l().apply(b);
        IntVec hrb_neg = negated(L.h_r().apply(b));
        Scalar a = L.torus()->alpha().eval(hlb, hrb_neg);
        return (s.log_norm() + a.log_norm()).to_double();
    };
    rep.gram = Eigen::MatrixXd::Zero(m, m);
    std::vector<double> qi(m);
    for (int i = 0; i < m; ++i) {
        qi[i] = quad(unit_vec(m, i));
        rep.gram(i, i) = qi[i];
    }
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            IntVec b(m, 0);
            b[i] = 1;
            b[j] = 1;
            double cross = (quad(b) - qi[i] - qi[j]) / 2.0;
            rep.gram(i, j) = cross;
            rep.gram(j, i) = cross;
        }
    if (m == 0) {
        rep.verdict = rep.dimension.finite ? AmpleVerdict::Ample : AmpleVerdict::Degenerate;
        return rep;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rep.gram);
    rep.min_eigenvalue = es.eigenvalues().minCoeff();
    rep.trace = rep.gram.trace();
    if (rep.dimension.finite && rep.min_eigenvalue > 1e-12 * std::max(rep.trace, 0.0) &&
        rep.min_eigenvalue > 0.0) {
        rep.verdict = AmpleVerdict::Ample;
    } else if (rep.min_eigenvalue < -1e-12 * std::max(1.0, std::abs(rep.trace))) {
        rep.verdict = AmpleVerdict::Indefinite;
    } else {
        rep.verdict = AmpleVerdict::Degenerate;
    }
    return rep;
}

// ------------------------------------------------------------ ThetaSeries

ThetaSeries::ThetaSeries(MultiplierPtr multiplier, long long radius,
                         std::map<IntVec, Coefficient> coeffs, std::vector<Coefficient> seeds)
    : mult_(std::move(multiplier)), radius_(radius), coeffs_(std::move(coeffs)), seeds_(std::move(seeds)) {
    if (radius_ < 0) throw std::invalid_argument("radius must be nonnegative");
}

Coefficient ThetaSeries::coeff(std::span<const long long> h) const {
    auto it = coeffs_.find(IntVec(h.begin(), h.end()));
    if (it == coeffs_.end()) return Coefficient::zero(mult_->torus()->backend());
    return it->second;
}

ThetaSeries ThetaSeries::with_coeff(IntVec h, Coefficient c) const {
    ThetaSeries t = *this;
    if (c.is_zero())
        t.coeffs_.erase(h);
    else
        t.coeffs_.insert_or_assign(std::move(h), std::move(c));
    return t;
}

ThetaSeries theta_from_seeds(const MultiplierPtr& L, long long radius,
                             std::span<const Coefficient> seeds, bool force_formal) {
    MultiplierReport mrep = multiplier_validate(*L);
    if (!mrep.valid)
        throw std::domain_error("multiplier fails the compatibility condition; no theta space");
    ExtNat dim = L->dimension();
    if (!dim.finite) throw std::domain_error("theta space is infinite dimensional");
    if (!force_formal) {
        AmpleReport amp = ampleness_gram(*L);
        if (amp.verdict != AmpleVerdict::Ample)
            throw std::domain_error(
                "multiplier is not ample; pass force_formal for a formal (non-analytic) series");
    }
    const IntMat& hm = L->h_minus();
    CosetReducer reducer(hm);
    std::vector<IntVec> reps = coset_reps(hm);
    if (seeds.size() != reps.size()) throw std::invalid_argument("need one seed per coset representative");
    std::map<IntVec, int> rep_index;
    for (size_t i = 0; i < reps.size(); ++i) rep_index.emplace(reps[i], static_cast<int>(i));

    int n = L->torus()->rank();
    int m = L->periods()->rank();
    std::map<IntVec, Coefficient> coeffs;
    IntVec rep, witness;
    for (const IntVec& h : sup_ball(n, radius)) {
        reducer.reduce(h, rep, witness);
        const Coefficient& seed = seeds[static_cast<size_t>(rep_index.at(rep))];
        if (seed.is_zero()) continue;
        // walk rep -> h along the witness, one period basis step at a time
        Coefficient acc = seed;
        IntVec cur = rep;
        for (int j = 0; j < m; ++j) {
            long long steps = witness[j];
            long long sgn = steps >= 0 ? 1 : -1;
            IntVec bstep = unit_vec(m, j, sgn);
            IntVec move = hm.apply(bstep);
            for (long long t = 0; t < std::llabs(steps); ++t) {
                acc = acc.mul(L->recursion_factor(bstep, cur));
                for (int i = 0; i < n; ++i) cur[i] += move[i];
            }
        }
        if (!acc.is_zero()) coeffs.emplace(h, std::move(acc));
    }
    return ThetaSeries(L, radius, std::move(coeffs),
                       std::vector<Coefficient>(seeds.begin(), seeds.end()));
}

std::vector<ThetaSeries> theta_basis(const MultiplierPtr& L, long long radius, bool force_formal,
                                     int jobs) {
    ExtNat dim = L->dimension();
    if (!dim.finite) throw std::domain_error("theta space is infinite dimensional");
    size_t count = static_cast<size_t>(dim.value);
    const Backend& b = L->torus()->backend();
    std::vector<std::optional<ThetaSeries>> slots(count);
    auto build = [&](size_t k) {
        std::vector<Coefficient> seeds(count, Coefficient::zero(b));
        seeds[k] = Coefficient::one(b);
        slots[k] = theta_from_seeds(L, radius, seeds, force_formal);
    };
    if (jobs <= 1 || count <= 1) {
        for (size_t k = 0; k < count; ++k) build(k);
    } else {
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        int workers = std::min<int>(jobs, static_cast<int>(count));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (size_t k = next.fetch_add(1); k < count; k = next.fetch_add(1)) build(k);
            });
        for (auto& t : pool) t.join();
    }
    std::vector<ThetaSeries> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

double functional_equation_residual(const ThetaSeries& theta, std::span<const long long> b,
                                    long long r_check) {
    const ThetaMultiplier& L = *theta.multiplier();
    IntVec hmb = L.h_minus().apply(b);
    if (r_check + sup_norm(hmb) > theta.radius())
        throw std::invalid_argument("certification ball exceeds the stored truncation radius");
    int n = L.torus()->rank();
    double worst = 0.0;
    IntVec shifted(n);
    for (const IntVec& h : sup_ball(n, r_check)) {
        for (int i = 0; i < n; ++i) shifted[i] = h[i] + hmb[i];
        Coefficient lhs = theta.coeff(shifted);
        Coefficient rhs = theta.coeff(h).mul(L.recursion_factor(b, h));
        worst = std::max(worst, Coefficient::dist(lhs, rhs).to_double());
    }
    return worst;
}

ThetaEval theta_eval(const ThetaSeries& theta, const CharacterPoint& x) {
    const ThetaMultiplier& L = *theta.multiplier();
    AmpleReport amp = ampleness_gram(L);
    if (amp.verdict != AmpleVerdict::Ample)
        throw std::domain_error("evaluation requires an ample multiplier");
    const Backend& bk = L.torus()->backend();
    if (x.rank() != L.torus()->rank()) throw std::invalid_argument("rank mismatch");

    ThetaEval out{Coefficient::zero(bk), 0.0};
    for (const auto& [h, c] : theta.coeffs()) out.value = out.value.add(c.mul(x.eval(h)));
    if (theta.coeffs().empty()) return out;

    // tail envelope: |a_h| <= M exp(-lambda (||h||^2 - R^2)) beyond the ball,
    // lambda = min Gram eigenvalue scaled by the operator norm of h^-
    int n = L.torus()->rank();
    long long R = theta.radius();
    Eigen::MatrixXd hm(n, L.periods()->rank());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < L.periods()->rank(); ++j) hm(i, j) = static_cast<double>(L.h_minus().at(i, j));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(hm);
    double sigma = svd.singularValues()(0);
    double lambda = sigma > 0 ? amp.min_eigenvalue / (sigma * sigma) : 0.0;
    double mu = 1.0;
    for (int i = 0; i < n; ++i) {
        double nv = x.value(i).norm().to_double();
        mu = std::max({mu, nv, nv > 0 ? 1.0 / nv : 1.0});
    }
    double M = 0.0;
    for (const auto& [h, c] : theta.coeffs())
        if (sup_norm(h) >= R - 1) M = std::max(M, c.norm().to_double());
    if (lambda <= 0.0) {
        out.tail_bound = std::numeric_limits<double>::infinity();
        return out;
    }
    double tail = 0.0, prev = std::numeric_limits<double>::infinity();
    for (long long k = 1; k <= 4000; ++k) {
        double r = static_cast<double>(R + k);
        double count = std::pow(2 * r + 1, n) - std::pow(2 * r - 1, n);
        double term = count * M * std::exp(-lambda * (r * r - static_cast<double>(R) * R) +
                                           n * r * std::log(mu));
        tail += term;
        if (term < 1e-320) break;
        if (k > 500 && term > prev) {
            tail = std::numeric_limits<double>::infinity();
            break;
        }
        prev = term;
    }
    out.tail_bound = tail;
    return out;
}

// -------------------------------------------------- product of multipliers

MultiplierPtr multiplier_compose(const ThetaMultiplier& L1, const ThetaMultiplier& L2) {
    if (!L1.torus()->same_as(*L2.torus()) || !L1.periods()->same_as(*L2.periods()))
        throw std::invalid_argument("multipliers live on different tori or period lattices");
    if (!(L2.h_l() == L1.h_r()))
        throw std::domain_error("multipliers are not composable: h_l of the second must equal h_r of the first");
    std::vector<Scalar> psi;
    psi.reserve(L1.psi_basis().size());
    for (size_t j = 0; j < L1.psi_basis().size(); ++j)
        psi.push_back(L1.psi_basis()[j].mul(L2.psi_basis()[j]));
    auto composed = std::make_shared<const ThetaMultiplier>(
        L1.torus(), L1.periods(), L1.h_l(), L2.h_r(), std::move(psi),
        L1.pairing().mul(L2.pairing()));
    MultiplierReport rep = multiplier_validate(*composed);
    if (!rep.valid)
        throw std::runtime_error("composed multiplier fails (2.12); input multipliers inconsistent");
    return composed;
}

ThetaSeries theta_mul(const ThetaSeries& t1, const ThetaSeries& t2) {
    const ThetaMultiplier& L1 = *t1.multiplier();
    const ThetaMultiplier& L2 = *t2.multiplier();
    if (ampleness_gram(L1).verdict != AmpleVerdict::Ample ||
        ampleness_gram(L2).verdict != AmpleVerdict::Ample)
        throw std::domain_error("theta multiplication requires ample multipliers");
    MultiplierPtr composed = multiplier_compose(L1, L2);
    if (ampleness_gram(*composed).verdict != AmpleVerdict::Ample)
        throw std::runtime_error("composed multiplier unexpectedly fails the ampleness test");

    TorusPtr torus = L1.torus();
    GroupRingElement x(torus), y(torus);
    for (const auto& [h, c] : t1.coeffs()) x.add_term(h, c);
    for (const auto& [h, c] : t2.coeffs()) y.add_term(h, c);
    GroupRingElement prod = ring_mul(x, y);

    long long radius = std::min(t1.radius(), t2.radius());
    std::map<IntVec, Coefficient> coeffs;
    for (const auto& [h, c] : prod.coeffs())
        if (sup_norm(h) <= radius) coeffs.emplace(h, c);

    std::vector<Coefficient> seeds;
    for (const IntVec& rep : coset_reps(composed->h_minus())) {
        auto it = coeffs.find(rep);
        seeds.push_back(it == coeffs.end() ? Coefficient::zero(torus->backend()) : it->second);
    }
    return ThetaSeries(composed, radius, std::move(coeffs), std::move(seeds));
}

// -------------------------------------------------------------- pullback

MultiplierPtr multiplier_pullback(const TorusMorphism& F, const ThetaMultiplier& L1,
                                  const PeriodsPtr& B2, const PullbackOptions& opt) {
    if (!L1.torus()->same_as(*F.target()))
        throw std::invalid_argument("multiplier must live on the target torus of F");
    if (!B2->torus()->same_as(*F.source()))
        throw std::invalid_argument("B2 must live on the source torus of F");
    if (!F.sigma_is_one())
        throw std::domain_error("pullback requires characteristic 1");
    // strict compatibility: alpha_2(f h, f g) = alpha_1(h, g), not just squares
    const AlternatingPairing& a1 = F.target()->alpha();
    const AlternatingPairing& a2 = F.source()->alpha();
    int n1 = F.target()->rank();
    for (int i = 0; i < n1; ++i)
        for (int j = i; j < n1; ++j) {
            IntVec ei = unit_vec(n1, i), ej = unit_vec(n1, j);
            Scalar lhs = a2.eval(F.matrix().apply(ei), F.matrix().apply(ej));
            Scalar rhs = a1.eval(ei, ej);
            if (!lhs.eq(rhs, opt.tol))
                throw std::domain_error("f is compatible with the squared parameters only; pullback undefined");
        }

    const PeriodsPtr& B1 = L1.periods();
    int m1 = B1->rank(), m2 = B2->rank();
    // map B2 -> B1 on points, verified entrywise on the period tables
    IntMat phi(m1, m2);
    if (opt.period_map) {
        phi = *opt.period_map;
        if (phi.rows() != m1 || phi.cols() != m2) throw std::invalid_argument("period map has wrong shape");
        for (int j = 0; j < m2; ++j) {
            CharacterPoint img = F.push_point(B2->basis_point(j));
            if (!B1->point(phi.column(j)).eq(img, opt.tol))
                throw std::domain_error("period map does not match F on the period tables");
        }
    } else {
        for (int j = 0; j < m2; ++j) {
            CharacterPoint img = F.push_point(B2->basis_point(j));
            bool found = false;
            for (const IntVec& c : sup_ball(m1, opt.search_bound)) {
                if (B1->point(c).eq(img, opt.tol)) {
                    for (int i = 0; i < m1; ++i) phi.at(i, j) = c[i];
                    found = true;
                    break;
                }
            }
            if (!found)
                throw std::domain_error("F does not map the periods B2 into B1 (no lattice expression found)");
        }
    }

    IntMat hl2 = F.matrix().mul(L1.h_l().mul(phi));
    IntMat hr2 = F.matrix().mul(L1.h_r().mul(phi));
    IntMat hm1_phi = L1.h_minus().mul(phi);
    std::vector<Scalar> psi2;
    std::vector<Scalar> pair_table;
    for (int j = 0; j < m2; ++j) {
        IntVec phib = phi.column(j);
        Scalar v = L1.psi(phib).mul(F.coeff(hm1_phi.column(j)));
        psi2.push_back(v);
    }
    for (int i = 0; i < m2; ++i)
        for (int j = i; j < m2; ++j)
            pair_table.push_back(L1.pairing().eval(phi.column(i), phi.column(j)));

    auto pulled = std::make_shared<const ThetaMultiplier>(
        F.source(), B2, std::move(hl2), std::move(hr2), std::move(psi2),
        SymmetricPairing(F.source()->backend(), m2, std::move(pair_table)));
    MultiplierReport rep = multiplier_validate(*pulled, opt.tol);
    if (!rep.valid) throw std::runtime_error("pulled-back data fails (2.12)");
    return pulled;
}

ThetaSeries theta_pullback(const TorusMorphism& F, const ThetaSeries& theta,
                           const MultiplierPtr& pulled, long long out_radius) {
    if (!theta.multiplier()->torus()->same_as(*F.target()))
        throw std::invalid_argument("series must live on the target torus of F");
    if (!pulled->torus()->same_as(*F.source()))
        throw std::invalid_argument("pulled multiplier must live on the source torus of F");
    const IntMat& f = F.matrix();
    if (kernel_basis(f).cols() != 0)
        throw std::domain_error("pullback of truncated series requires Ker f = 0");
    int n2 = F.source()->rank();
    const Backend& bk = F.source()->backend();
    std::map<IntVec, Coefficient> coeffs;
    for (const IntVec& g : sup_ball(n2, out_radius)) {
        auto h = solve_integer(f, g);
        if (!h) continue;  // C_g = 0 outside f(H_1)
        if (sup_norm(*h) > theta.radius())
            throw std::invalid_argument("input radius does not cover the f-preimage of the output ball");
        Coefficient c = theta.coeff(*h).mul(F.coeff(*h));
        if (!c.is_zero()) coeffs.emplace(g, std::move(c));
    }
    std::vector<Coefficient> seeds;
    for (const IntVec& rep : coset_reps(pulled->h_minus())) {
        auto it = coeffs.find(rep);
        seeds.push_back(it == coeffs.end() ? Coefficient::zero(bk) : it->second);
    }
    return ThetaSeries(pulled, out_radius, std::move(coeffs), std::move(seeds));
}

// -------------------------------------------------------- same automorphy

bool same_automorphy(const ThetaMultiplier& L1, const ThetaMultiplier& L2, double tol) {
    if (!L1.torus()->same_as(*L2.torus(), tol) || !L1.periods()->same_as(*L2.periods(), tol))
        return false;
    if (!(L1.h_minus() == L2.h_minus())) return false;
    int n = L1.torus()->rank();
    int m = L1.periods()->rank();
    std::vector<IntVec> probes;
    probes.push_back(IntVec(n, 0));
    for (int i = 0; i < n; ++i) probes.push_back(unit_vec(n, i));
    for (int j = 0; j < m; ++j) {
        IntVec bj = unit_vec(m, j);
        for (const IntVec& h : probes) {
            GroupRingElement mono =
                GroupRingElement::monomial(L1.torus(), h, Coefficient::one(L1.torus()->backend()));
            GroupRingElement u1 = period_action(L1, bj, mono);
            GroupRingElement u2 = period_action(L2, bj, mono);
            if (!u1.eq(u2, tol)) return false;
        }
    }
    return true;
}

}  // namespace qtheta
