#pragma once

#include <mpfr.h>

#include <stdexcept>

namespace qtheta {

enum class Field { Complex, Padic };

// Which complete normed field the computation lives in, together with the
// working precision for inexact complex data. Fixed at context creation;
// every value carries a copy so mixed-backend arithmetic can be rejected.
struct Backend {
    Field field = Field::Complex;
    mpfr_prec_t prec = 256;
    long prime = 0;  // p-adic only

    static Backend complex_field(mpfr_prec_t prec = 256) {
        if (prec < 64) throw std::invalid_argument("precision must be at least 64 bits");
        return Backend{Field::Complex, prec, 0};
    }
    static Backend padic_field(long p, mpfr_prec_t prec = 256) {
        if (p < 2) throw std::invalid_argument("p-adic prime must be >= 2");
        return Backend{Field::Padic, prec, p};
    }

    bool operator==(const Backend& o) const {
        if (field != o.field) return false;
        if (field == Field::Padic) return prime == o.prime;
        return true;  // complex backends are compatible across precisions
    }
    bool operator!=(const Backend& o) const { return !(*this == o); }
};

inline void require_same_backend(const Backend& a, const Backend& b) {
    if (a != b) throw std::invalid_argument("backend mismatch");
}

// Default relative tolerance for approximate equality at 256-bit precision.
inline constexpr double kDefaultTol = 1e-30;

}  // namespace qtheta
