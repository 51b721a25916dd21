#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "qtheta/backend.hpp"
#include "qtheta/bigfloat.hpp"

namespace qtheta {

enum class Branch { Principal, Other };

// Positive real number; remembers an exact rational representation when the
// value was produced by rational operations only.
struct PosReal {
    BigFloat approx;
    bool exact = false;
    mpq_class q;

    static PosReal from_q(const mpq_class& value, mpfr_prec_t prec);
    static PosReal from_f(BigFloat value);
    PosReal mul(const PosReal& o) const;
    PosReal inv() const;
    PosReal pow(long e) const;
    PosReal root(unsigned long k) const;
};

// Angle measured in full turns, canonicalized to [0,1). Rational turns are
// exact; anything else degrades to a BigFloat.
struct Turns {
    bool exact = true;
    mpq_class q;  // valid iff exact
    BigFloat f;   // valid iff !exact

    static Turns zero();
    static Turns from_q(mpq_class value);
    static Turns from_f(const BigFloat& value);
    Turns add(const Turns& o) const;
    Turns neg() const;
    Turns scale(long e) const;
    Turns root(unsigned long k, unsigned long branch) const;  // (t + branch)/k
    BigFloat to_f(mpfr_prec_t prec) const;
    bool is_zero() const;
    bool is_half() const;
};

class Coefficient;

// Element of K* for the configured backend. Complex values are stored in
// polar form (abs, turns) so that products of roots of unity and powers of q
// stay exact; the p-adic backend stores a plain nonzero rational.
class Scalar {
public:
    static Scalar one(const Backend& b);
    static Scalar minus_one(const Backend& b);
    // complex: positive rational modulus, rational turns
    static Scalar from_polar_q(const Backend& b, const mpq_class& abs, const mpq_class& turns);
    static Scalar from_polar(const Backend& b, PosReal abs, Turns turns);
    // p-adic: nonzero rational
    static Scalar from_rational(const Backend& b, const mpq_class& value);

    const Backend& backend() const { return backend_; }
    const PosReal& abs_part() const { return abs_; }
    const Turns& turns_part() const { return turns_; }
    const mpq_class& rat() const { return rat_; }

    Scalar mul(const Scalar& o) const;
    Scalar inv() const;
    Scalar pow(long e) const;
    // k-th root; branch index in [0,k). For p-adic inputs the represented
    // rational must admit an exact rational root.
    Scalar root(unsigned long k, unsigned long branch = 0) const;
    Scalar sqrt(Branch branch = Branch::Principal) const;
    Scalar negated() const;

    // log |x|: complex log(abs); p-adic -v_p(x) log p
    BigFloat log_norm() const;
    BigFloat norm() const;
    long padic_valuation() const;

    bool eq(const Scalar& o, double rel_tol = kDefaultTol) const;
    // true only when both sides carry exact representations and they match
    bool exact_eq(const Scalar& o) const;
    bool is_one(double rel_tol = kDefaultTol) const;
    bool is_pm_one(double rel_tol, int& sign_out) const;

    Coefficient to_coefficient() const;

    friend Scalar operator*(const Scalar& a, const Scalar& b) { return a.mul(b); }

private:
    friend class Coefficient;
    Scalar() = default;
    Backend backend_;
    PosReal abs_;   // complex
    Turns turns_;   // complex
    mpq_class rat_; // p-adic
};

// Element of K (zero allowed); the coefficient type of group-ring elements
// and theta series.
class Coefficient {
public:
    static Coefficient zero(const Backend& b);
    static Coefficient one(const Backend& b);
    static Coefficient from_scalar(const Scalar& s);
    static Coefficient from_polar(const Backend& b, PosReal abs, Turns turns);
    static Coefficient from_rational(const Backend& b, const mpq_class& value);

    const Backend& backend() const { return backend_; }
    bool is_zero() const { return zero_; }
    const PosReal& abs_part() const { return abs_; }
    const Turns& turns_part() const { return turns_; }
    const mpq_class& rat() const { return rat_; }

    Coefficient add(const Coefficient& o) const;
    Coefficient sub(const Coefficient& o) const;
    Coefficient mul(const Coefficient& o) const;
    Coefficient mul(const Scalar& s) const;
    Coefficient div(const Scalar& s) const;
    Coefficient negated() const;

    BigFloat norm() const;      // |x|; zero -> 0
    BigFloat log_norm() const;  // -inf on zero
    long padic_valuation() const;

    bool eq(const Coefficient& o, double rel_tol = kDefaultTol) const;
    bool is_zero_within(double tol) const;
    std::optional<Scalar> to_scalar() const;  // nullopt on zero

    // complex backend helpers
    void to_cartesian(BigFloat& re, BigFloat& im) const;
    static Coefficient from_cartesian(const Backend& b, const BigFloat& re, const BigFloat& im,
                                      const BigFloat& cancellation_scale);

    // |a - b| as a BigFloat (p-adic: p-adic norm of the difference)
    static BigFloat dist(const Coefficient& a, const Coefficient& b);

    friend Coefficient operator*(const Coefficient& a, const Coefficient& b) { return a.mul(b); }
    friend Coefficient operator+(const Coefficient& a, const Coefficient& b) { return a.add(b); }
    friend Coefficient operator-(const Coefficient& a, const Coefficient& b) { return a.sub(b); }

private:
    Coefficient() = default;
    Backend backend_;
    bool zero_ = true;
    PosReal abs_;
    Turns turns_;
    mpq_class rat_;
};

}  // namespace qtheta
