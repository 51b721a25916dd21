#include "qtheta/scalar.hpp"

#include <stdexcept>

namespace qtheta {

namespace {

mpq_class mpq_mod1(const mpq_class& q) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    mpq_class r = q - mpq_class(fl);
    r.canonicalize();
    return r;
}

mpq_class mpq_pow(const mpq_class& q, long e) {
    if (e == 0) return mpq_class(1);
    unsigned long ae = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), ae);
    mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), ae);
    mpq_class r = (e > 0) ? mpq_class(num, den) : mpq_class(den, num);
    r.canonicalize();
    return r;
}

bool mpq_root_exact(const mpq_class& q, unsigned long k, mpq_class& out) {
    if (sgn(q) <= 0) return false;
    mpz_class rn, rd;
    int en = mpz_root(rn.get_mpz_t(), q.get_num_mpz_t(), k);
    int ed = mpz_root(rd.get_mpz_t(), q.get_den_mpz_t(), k);
    if (!en || !ed) return false;
    out = mpq_class(rn, rd);
    out.canonicalize();
    return true;
}

long mpz_valuation(const mpz_class& n, long p) {
    mpz_class rem, pp(p);
    return static_cast<long>(mpz_remove(rem.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

long mpq_valuation(const mpq_class& q, long p) {
    return mpz_valuation(q.get_num(), p) - mpz_valuation(q.get_den(), p);
}

BigFloat two_pow(long e, mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_set_ui_2exp(r.raw(), 1, e, MPFR_RNDN);
    return r;
}

}  // namespace

// ---------------------------------------------------------------- PosReal

PosReal PosReal::from_q(const mpq_class& value, mpfr_prec_t prec) {
    if (sgn(value) <= 0) throw std::invalid_argument("modulus must be positive");
    PosReal r;
    r.approx = BigFloat::from_q(value, prec);
    r.exact = true;
    r.q = value;
    r.q.canonicalize();
    return r;
}

PosReal PosReal::from_f(BigFloat value) {
    if (value.sign() <= 0 || value.is_nan()) throw std::invalid_argument("modulus must be positive");
    PosReal r;
    r.approx = std::move(value);
    r.exact = false;
    return r;
}

PosReal PosReal::mul(const PosReal& o) const {
    PosReal r;
    r.approx = approx * o.approx;
    if (exact && o.exact) {
        r.exact = true;
        r.q = q * o.q;
        r.q.canonicalize();
    }
    return r;
}

PosReal PosReal::inv() const {
    PosReal r;
    r.approx = BigFloat::from_si(1, approx.prec()) / approx;
    if (exact) {
        r.exact = true;
        r.q = 1 / q;
        r.q.canonicalize();
    }
    return r;
}

PosReal PosReal::pow(long e) const {
    PosReal r;
    r.approx = approx.pow_si(e);
    if (exact) {
        r.exact = true;
        r.q = mpq_pow(q, e);
    }
    return r;
}

PosReal PosReal::root(unsigned long k) const {
    PosReal r;
    r.approx = approx.rootn(k);
    mpq_class rt;
    if (exact && mpq_root_exact(q, k, rt)) {
        r.exact = true;
        r.q = rt;
        r.approx = BigFloat::from_q(rt, approx.prec());
    }
    return r;
}

// ------------------------------------------------------------------ Turns

Turns Turns::zero() {
    Turns t;
    return t;
}

Turns Turns::from_q(mpq_class value) {
    Turns t;
    t.exact = true;
    t.q = mpq_mod1(value);
    return t;
}

Turns Turns::from_f(const BigFloat& value) {
    Turns t;
    t.exact = false;
    t.f = value.mod1();
    return t;
}

Turns Turns::add(const Turns& o) const {
    if (exact && o.exact) return from_q(q + o.q);
    mpfr_prec_t p = std::max(exact ? 64 : f.prec(), o.exact ? 64 : o.f.prec());
    return from_f(to_f(p) + o.to_f(p));
}

Turns Turns::neg() const {
    if (exact) return from_q(-q);
    return from_f(-f);
}

Turns Turns::scale(long e) const {
    if (exact) return from_q(q * mpq_class(e));
    return from_f(f * BigFloat::from_si(e, f.prec()));
}

Turns Turns::root(unsigned long k, unsigned long branch) const {
    if (branch >= k) throw std::invalid_argument("root branch out of range");
    if (exact) {
        mpq_class shifted = q + mpq_class(static_cast<long>(branch));
        return from_q(shifted / mpq_class(static_cast<long>(k)));
    }
    BigFloat shifted = f + BigFloat::from_si(static_cast<long>(branch), f.prec());
    return from_f(shifted / BigFloat::from_si(static_cast<long>(k), f.prec()));
}

BigFloat Turns::to_f(mpfr_prec_t prec) const {
    if (exact) return BigFloat::from_q(q, prec);
    return f;
}

bool Turns::is_zero() const {
    if (exact) return q == 0;
    return f.is_zero();
}

bool Turns::is_half() const {
    if (exact) return q == mpq_class(1, 2);
    BigFloat half = BigFloat::from_q(mpq_class(1, 2), f.prec());
    return f == half;
}

// ----------------------------------------------------------------- Scalar

Scalar Scalar::one(const Backend& b) {
    Scalar s;
    s.backend_ = b;
    if (b.field == Field::Complex) {
        s.abs_ = PosReal::from_q(1, b.prec);
        s.turns_ = Turns::zero();
    } else {
        s.rat_ = 1;
    }
    return s;
}

Scalar Scalar::minus_one(const Backend& b) { return one(b).negated(); }

Scalar Scalar::from_polar_q(const Backend& b, const mpq_class& abs, const mpq_class& turns) {
    return from_polar(b, PosReal::from_q(abs, b.prec), Turns::from_q(turns));
}

Scalar Scalar::from_polar(const Backend& b, PosReal abs, Turns turns) {
    if (b.field != Field::Complex) throw std::invalid_argument("polar form is complex-backend only");
    Scalar s;
    s.backend_ = b;
    s.abs_ = std::move(abs);
    s.turns_ = std::move(turns);
    return s;
}

Scalar Scalar::from_rational(const Backend& b, const mpq_class& value) {
    if (b.field != Field::Padic) throw std::invalid_argument("rational form is p-adic-backend only");
    if (sgn(value) == 0) throw std::invalid_argument("K* element cannot be zero");
    Scalar s;
    s.backend_ = b;
    s.rat_ = value;
    s.rat_.canonicalize();
    return s;
}

Scalar Scalar::mul(const Scalar& o) const {
    require_same_backend(backend_, o.backend_);
    Scalar r;
    r.backend_ = backend_;
    if (backend_.field == Field::Complex) {
        r.abs_ = abs_.mul(o.abs_);
        r.turns_ = turns_.add(o.turns_);
    } else {
        r.rat_ = rat_ * o.rat_;
        r.rat_.canonicalize();
    }
    return r;
}

Scalar Scalar::inv() const {
    Scalar r;
    r.backend_ = backend_;
    if (backend_.field == Field::Complex) {
        r.abs_ = abs_.inv();
        r.turns_ = turns_.neg();
    } else {
        r.rat_ = 1 / rat_;
        r.rat_.canonicalize();
    }
    return r;
}

Scalar Scalar::pow(long e) const {
    Scalar r;
    r.backend_ = backend_;
    if (backend_.field == Field::Complex) {
        r.abs_ = abs_.pow(e);
        r.turns_ = turns_.scale(e);
    } else {
        r.rat_ = mpq_pow(rat_, e);
    }
    return r;
}

Scalar Scalar::root(unsigned long k, unsigned long branch) const {
    if (k == 0) throw std::invalid_argument("root order must be positive");
    Scalar r;
    r.backend_ = backend_;
    if (backend_.field == Field::Complex) {
        r.abs_ = abs_.root(k);
        r.turns_ = turns_.root(k, branch);
        return r;
    }
    // p-adic: an exact rational root must exist in the stored representation
    mpq_class v = rat_;
    bool negate_root = false;
    if (sgn(v) < 0) {
        if (k % 2 == 0) throw std::domain_error("p-adic element is not a k-th power");
        v = -v;
        negate_root = true;
    }
    mpq_class rt;
    if (!mpq_root_exact(v, k, rt)) throw std::domain_error("p-adic element is not a k-th power");
    if (negate_root) rt = -rt;
    if (branch != 0) {
        if (k % 2 != 0 || branch != k / 2)
            throw std::domain_error("requested root branch does not exist in Q");
        rt = -rt;
    }
    r.rat_ = rt;
    return r;
}

Scalar Scalar::sqrt(Branch branch) const {
    return root(2, branch == Branch::Principal ? 0 : 1);
}

Scalar Scalar::negated() const {
    Scalar r = *this;
    if (backend_.field == Field::Complex) {
        r.turns_ = turns_.add(Turns::from_q(mpq_class(1, 2)));
    } else {
        r.rat_ = -rat_;
    }
    return r;
}

BigFloat Scalar::log_norm() const {
    if (backend_.field == Field::Complex) return abs_.approx.log();
    long v = mpq_valuation(rat_, backend_.prime);
    BigFloat logp = BigFloat::from_si(backend_.prime, backend_.prec).log();
    return BigFloat::from_si(-v, backend_.prec) * logp;
}

BigFloat Scalar::norm() const {
    if (backend_.field == Field::Complex) return abs_.approx;
    return log_norm().exp();
}

long Scalar::padic_valuation() const {
    if (backend_.field != Field::Padic) throw std::invalid_argument("valuation is p-adic only");
    return mpq_valuation(rat_, backend_.prime);
}

bool Scalar::exact_eq(const Scalar& o) const {
    if (backend_ != o.backend_) return false;
    if (backend_.field == Field::Padic) return rat_ == o.rat_;
    if (!abs_.exact || !o.abs_.exact || !turns_.exact || !o.turns_.exact) return false;
    return abs_.q == o.abs_.q && turns_.q == o.turns_.q;
}

bool Scalar::eq(const Scalar& o, double rel_tol) const {
    if (backend_ != o.backend_) return false;
    if (exact_eq(o)) return true;
    return to_coefficient().eq(o.to_coefficient(), rel_tol);
}

bool Scalar::is_one(double rel_tol) const { return eq(one(backend_), rel_tol); }

bool Scalar::is_pm_one(double rel_tol, int& sign_out) const {
    if (eq(one(backend_), rel_tol)) {
        sign_out = 1;
        return true;
    }
    if (eq(minus_one(backend_), rel_tol)) {
        sign_out = -1;
        return true;
    }
    return false;
}

Coefficient Scalar::to_coefficient() const { return Coefficient::from_scalar(*this); }

// ------------------------------------------------------------ Coefficient

Coefficient Coefficient::zero(const Backend& b) {
    Coefficient c;
    c.backend_ = b;
    c.zero_ = true;
    c.rat_ = 0;
    return c;
}

Coefficient Coefficient::one(const Backend& b) { return from_scalar(Scalar::one(b)); }

Coefficient Coefficient::from_scalar(const Scalar& s) {
    Coefficient c;
    c.backend_ = s.backend();
    c.zero_ = false;
    if (c.backend_.field == Field::Complex) {
        c.abs_ = s.abs_part();
        c.turns_ = s.turns_part();
    } else {
        c.rat_ = s.rat();
    }
    return c;
}

Coefficient Coefficient::from_polar(const Backend& b, PosReal abs, Turns turns) {
    return from_scalar(Scalar::from_polar(b, std::move(abs), std::move(turns)));
}

Coefficient Coefficient::from_rational(const Backend& b, const mpq_class& value) {
    if (b.field != Field::Padic) throw std::invalid_argument("rational form is p-adic-backend only");
    if (sgn(value) == 0) return zero(b);
    return from_scalar(Scalar::from_rational(b, value));
}

Coefficient Coefficient::negated() const {
    if (zero_) return *this;
    Coefficient c = *this;
    if (backend_.field == Field::Complex) {
        c.turns_ = turns_.add(Turns::from_q(mpq_class(1, 2)));
    } else {
        c.rat_ = -rat_;
    }
    return c;
}

Coefficient Coefficient::add(const Coefficient& o) const {
    require_same_backend(backend_, o.backend_);
    if (zero_) return o;
    if (o.zero_) return *this;
    if (backend_.field == Field::Padic) {
        mpq_class s = rat_ + o.rat_;
        s.canonicalize();
        return from_rational(backend_, s);
    }
    // colinear fast paths keep rational polar data exact
    if (turns_.exact && o.turns_.exact) {
        if (turns_.q == o.turns_.q) {
            Coefficient c = *this;
            PosReal sum;
            sum.approx = abs_.approx + o.abs_.approx;
            if (abs_.exact && o.abs_.exact) {
                sum.exact = true;
                sum.q = abs_.q + o.abs_.q;
                sum.q.canonicalize();
                sum.approx = BigFloat::from_q(sum.q, abs_.approx.prec());
            }
            c.abs_ = sum;
            return c;
        }
        if (mpq_mod1(turns_.q - o.turns_.q) == mpq_class(1, 2)) {
            // antiparallel: subtract moduli, keep the direction of the larger
            int cmp;
            if (abs_.exact && o.abs_.exact) {
                cmp = ::cmp(abs_.q, o.abs_.q);
            } else {
                cmp = abs_.approx.cmp(o.abs_.approx);
            }
            if (cmp == 0 && abs_.exact && o.abs_.exact) return zero(backend_);
            if (cmp == 0) return zero(backend_);
            const Coefficient& big = (cmp > 0) ? *this : o;
            const Coefficient& small = (cmp > 0) ? o : *this;
            Coefficient c = big;
            PosReal diff;
            diff.approx = big.abs_.approx - small.abs_.approx;
            if (big.abs_.exact && small.abs_.exact) {
                diff.exact = true;
                diff.q = big.abs_.q - small.abs_.q;
                diff.q.canonicalize();
                diff.approx = BigFloat::from_q(diff.q, big.abs_.approx.prec());
            }
            c.abs_ = diff;
            return c;
        }
    }
    // generic path through cartesian coordinates
    BigFloat re1, im1, re2, im2;
    to_cartesian(re1, im1);
    o.to_cartesian(re2, im2);
    BigFloat scale = (abs_.approx.cmp(o.abs_.approx) >= 0) ? abs_.approx : o.abs_.approx;
    return from_cartesian(backend_, re1 + re2, im1 + im2, scale);
}

Coefficient Coefficient::sub(const Coefficient& o) const { return add(o.negated()); }

Coefficient Coefficient::mul(const Coefficient& o) const {
    require_same_backend(backend_, o.backend_);
    if (zero_ || o.zero_) return zero(backend_);
    Coefficient c;
    c.backend_ = backend_;
    c.zero_ = false;
    if (backend_.field == Field::Complex) {
        c.abs_ = abs_.mul(o.abs_);
        c.turns_ = turns_.add(o.turns_);
    } else {
        c.rat_ = rat_ * o.rat_;
        c.rat_.canonicalize();
    }
    return c;
}

Coefficient Coefficient::mul(const Scalar& s) const { return mul(from_scalar(s)); }

Coefficient Coefficient::div(const Scalar& s) const { return mul(from_scalar(s.inv())); }

BigFloat Coefficient::norm() const {
    if (zero_) return BigFloat(backend_.prec);
    if (backend_.field == Field::Complex) return abs_.approx;
    return log_norm().exp();
}

BigFloat Coefficient::log_norm() const {
    BigFloat r(backend_.prec);
    if (zero_) {
        mpfr_set_inf(r.raw(), -1);
        return r;
    }
    if (backend_.field == Field::Complex) return abs_.approx.log();
    long v = mpq_valuation(rat_, backend_.prime);
    BigFloat logp = BigFloat::from_si(backend_.prime, backend_.prec).log();
    return BigFloat::from_si(-v, backend_.prec) * logp;
}

long Coefficient::padic_valuation() const {
    if (backend_.field != Field::Padic) throw std::invalid_argument("valuation is p-adic only");
    if (zero_) throw std::domain_error("valuation of zero");
    return mpq_valuation(rat_, backend_.prime);
}

bool Coefficient::eq(const Coefficient& o, double rel_tol) const {
    if (backend_ != o.backend_) return false;
    if (backend_.field == Field::Padic) {
        if (rat_ == o.rat_) return true;
        return dist(*this, o).to_double() <= rel_tol;
    }
    if (zero_ && o.zero_) return true;
    if (!zero_ && !o.zero_ && abs_.exact && o.abs_.exact && turns_.exact && o.turns_.exact &&
        abs_.q == o.abs_.q && turns_.q == o.turns_.q)
        return true;
    BigFloat d = dist(*this, o);
    BigFloat m = (norm().cmp(o.norm()) >= 0) ? norm() : o.norm();
    if (m.is_zero()) return d.is_zero();
    return (d / m).to_double() <= rel_tol;
}

bool Coefficient::is_zero_within(double tol) const {
    if (zero_) return true;
    return norm().to_double() <= tol;
}

std::optional<Scalar> Coefficient::to_scalar() const {
    if (zero_) return std::nullopt;
    if (backend_.field == Field::Complex) return Scalar::from_polar(backend_, abs_, turns_);
    return Scalar::from_rational(backend_, rat_);
}

void Coefficient::to_cartesian(BigFloat& re, BigFloat& im) const {
    if (backend_.field != Field::Complex) throw std::invalid_argument("cartesian form is complex only");
    if (zero_) {
        re = BigFloat(backend_.prec);
        im = BigFloat(backend_.prec);
        return;
    }
    mpfr_prec_t p = abs_.approx.prec();
    BigFloat s(p), c(p);
    BigFloat t = turns_.to_f(p);
    BigFloat::sincos_turns(t, s, c);
    re = abs_.approx * c;
    im = abs_.approx * s;
}

Coefficient Coefficient::from_cartesian(const Backend& b, const BigFloat& re, const BigFloat& im,
                                        const BigFloat& cancellation_scale) {
    if (b.field != Field::Complex) throw std::invalid_argument("cartesian form is complex only");
    // results are normalized to the backend precision so the noise floor does
    // not drift when guard bits accumulate through repeated conversions
    mpfr_prec_t p = b.prec;
    BigFloat mag = BigFloat::hypot(re, im);
    BigFloat noise = cancellation_scale * two_pow(-(static_cast<long>(p) - 24), p);
    if (mag.cmp(noise) <= 0) return zero(b);
    BigFloat angle = BigFloat::atan2(im, re);
    BigFloat twopi = BigFloat::pi(p + 32) * BigFloat::from_si(2, p + 32);
    BigFloat mag_p(p), turns_p(p);
    mpfr_set(mag_p.raw(), mag.raw(), MPFR_RNDN);
    BigFloat t = angle / twopi;
    mpfr_set(turns_p.raw(), t.raw(), MPFR_RNDN);
    Coefficient c;
    c.backend_ = b;
    c.zero_ = false;
    c.abs_ = PosReal::from_f(std::move(mag_p));
    c.turns_ = Turns::from_f(turns_p);
    return c;
}

BigFloat Coefficient::dist(const Coefficient& a, const Coefficient& b) {
    require_same_backend(a.backend_, b.backend_);
    if (a.backend_.field == Field::Padic) {
        mpq_class d = a.rat_ - b.rat_;
        d.canonicalize();
        if (sgn(d) == 0) return BigFloat(a.backend_.prec);
        long v = mpq_valuation(d, a.backend_.prime);
        BigFloat logp = BigFloat::from_si(a.backend_.prime, a.backend_.prec).log();
        return (BigFloat::from_si(-v, a.backend_.prec) * logp).exp();
    }
    Coefficient d = a.sub(b);
    return d.norm();
}

}  // namespace qtheta
