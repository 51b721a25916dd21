#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cstdlib>
#include <string>
#include <utility>

namespace qtheta {

// Thin RAII value type over mpfr_t. Every value carries its own precision;
// binary operations round to the larger of the two operand precisions.
class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t prec = 256) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    BigFloat(const BigFloat& o) {
        mpfr_init2(v_, o.prec());
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& o) noexcept {
        mpfr_init2(v_, 64);
        mpfr_swap(v_, o.v_);
    }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) {
            mpfr_set_prec(v_, o.prec());
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    static BigFloat from_si(long x, mpfr_prec_t prec) {
        BigFloat r(prec);
        mpfr_set_si(r.v_, x, MPFR_RNDN);
        return r;
    }
    static BigFloat from_double(double x, mpfr_prec_t prec) {
        BigFloat r(prec);
        mpfr_set_d(r.v_, x, MPFR_RNDN);
        return r;
    }
    static BigFloat from_q(const mpq_class& q, mpfr_prec_t prec) {
        BigFloat r(prec);
        mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
        return r;
    }
    // Accepts plain decimal/scientific literals; returns false on garbage.
    static bool parse(const std::string& s, mpfr_prec_t prec, BigFloat& out) {
        BigFloat r(prec);
        const char* c = s.c_str();
        char* end = nullptr;
        int rc = mpfr_strtofr(r.v_, c, &end, 10, MPFR_RNDN);
        (void)rc;
        if (end == c || *end != '\0') return false;
        out = std::move(r);
        return true;
    }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    const mpfr_t& raw() const { return v_; }
    mpfr_t& raw() { return v_; }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

    int cmp(const BigFloat& o) const { return mpfr_cmp(v_, o.v_); }
    bool operator==(const BigFloat& o) const { return mpfr_equal_p(v_, o.v_) != 0; }
    bool operator<(const BigFloat& o) const { return mpfr_less_p(v_, o.v_) != 0; }
    bool operator<=(const BigFloat& o) const { return mpfr_lessequal_p(v_, o.v_) != 0; }

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
        BigFloat r(std::max(a.prec(), b.prec()));
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
        BigFloat r(std::max(a.prec(), b.prec()));
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
        BigFloat r(std::max(a.prec(), b.prec()));
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
        BigFloat r(std::max(a.prec(), b.prec()));
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    BigFloat operator-() const {
        BigFloat r(prec());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }

    BigFloat abs() const {
        BigFloat r(prec());
        mpfr_abs(r.v_, v_, MPFR_RNDN);
        return r;
    }
    BigFloat sqrt() const {
        BigFloat r(prec());
        mpfr_sqrt(r.v_, v_, MPFR_RNDN);
        return r;
    }
    BigFloat rootn(unsigned long k) const {
        BigFloat r(prec());
        mpfr_rootn_ui(r.v_, v_, k, MPFR_RNDN);
        return r;
    }
    BigFloat log() const {
        BigFloat r(prec());
        mpfr_log(r.v_, v_, MPFR_RNDN);
        return r;
    }
    BigFloat exp() const {
        BigFloat r(prec());
        mpfr_exp(r.v_, v_, MPFR_RNDN);
        return r;
    }
    BigFloat pow_si(long e) const {
        BigFloat r(prec());
        mpfr_pow_si(r.v_, v_, e, MPFR_RNDN);
        return r;
    }
    // fractional part in [0,1)
    BigFloat mod1() const {
        BigFloat f(prec());
        mpfr_floor(f.v_, v_);
        BigFloat r = *this - f;
        if (mpfr_sgn(r.v_) < 0) {  // can happen only through rounding at the edge
            mpfr_add_ui(r.v_, r.v_, 1, MPFR_RNDN);
        }
        if (mpfr_cmp_ui(r.v_, 1) >= 0) mpfr_set_zero(r.v_, 1);
        return r;
    }

    static BigFloat pi(mpfr_prec_t prec) {
        BigFloat r(prec);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }
    static BigFloat hypot(const BigFloat& x, const BigFloat& y) {
        BigFloat r(std::max(x.prec(), y.prec()));
        mpfr_hypot(r.v_, x.v_, y.v_, MPFR_RNDN);
        return r;
    }
    static BigFloat atan2(const BigFloat& y, const BigFloat& x) {
        BigFloat r(std::max(x.prec(), y.prec()));
        mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
        return r;
    }
    // sin(2*pi*t), cos(2*pi*t) at the precision of t plus guard bits
    static void sincos_turns(const BigFloat& t, BigFloat& s, BigFloat& c) {
        mpfr_prec_t p = t.prec() + 32;
        BigFloat angle(p);
        mpfr_const_pi(angle.v_, MPFR_RNDN);
        mpfr_mul_2ui(angle.v_, angle.v_, 1, MPFR_RNDN);
        mpfr_mul(angle.v_, angle.v_, t.v_, MPFR_RNDN);
        BigFloat ss(t.prec()), cc(t.prec());
        mpfr_sin_cos(ss.v_, cc.v_, angle.v_, MPFR_RNDN);
        s = std::move(ss);
        c = std::move(cc);
    }

    // Deterministic decimal rendering with enough digits to reproduce the
    // binary value on re-parse at the same precision.
    std::string to_string() const {
        size_t digits = static_cast<size_t>(static_cast<double>(prec()) * 0.30103) + 3;
        return to_string(digits);
    }
    std::string to_string(size_t digits) const {
        if (mpfr_nan_p(v_)) return "nan";
        if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
        if (mpfr_zero_p(v_)) return "0";
        mpfr_exp_t e;
        char* raw = mpfr_get_str(nullptr, &e, 10, digits, v_, MPFR_RNDN);
        std::string mant(raw);
        mpfr_free_str(raw);
        std::string sign;
        if (!mant.empty() && mant[0] == '-') {
            sign = "-";
            mant = mant.substr(1);
        }
        // strip trailing zeros but keep at least one digit
        size_t last = mant.find_last_not_of('0');
        mant = mant.substr(0, std::max<size_t>(last + 1, 1));
        return sign + "0." + mant + "e" + std::to_string(static_cast<long>(e));
    }

private:
    mpfr_t v_;
};

}  // namespace qtheta
