#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

// Partial order on the complex plane used throughout the library:
//
//   z1 <= z2  iff  Re(z1) <= Re(z2)  and  Im(z1) <= Im(z2)
//
// together with its two strict refinements and the induced cone of
// "nonnegative" elements { z : 0 <= z }.  Every comparison accepts an
// OrderConfig whose eq_tolerance widens the non-strict comparisons; the
// default is exact.

namespace cvfix {

namespace detail {

inline void require(bool condition, const std::string& message) {
    if (!condition) throw std::invalid_argument(message);
}

/// Shortest-faithful decimal rendering (17 significant digits round-trips).
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Complex value with finiteness enforced at construction.
///
/// The arithmetic mirrors std::complex<double>; the extra type exists so that
/// NaN/Inf can never enter an order comparison or a metric unnoticed.
struct ComplexScalar {
    double re = 0.0;
    double im = 0.0;

    constexpr ComplexScalar() = default;

    ComplexScalar(double real, double imag) : re(real), im(imag) {
        detail::require(std::isfinite(real) && std::isfinite(imag),
                        "ComplexScalar: components must be finite");
    }

    explicit ComplexScalar(const std::complex<double>& z)
        : ComplexScalar(z.real(), z.imag()) {}

    std::complex<double> std() const { return {re, im}; }

    /// Modulus sqrt(re^2 + im^2).
    double modulus() const { return std::hypot(re, im); }

    /// Largest absolute component; the divergence guard works off this.
    double max_abs_component() const {
        return std::max(std::fabs(re), std::fabs(im));
    }

    friend ComplexScalar operator+(const ComplexScalar& a, const ComplexScalar& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend ComplexScalar operator-(const ComplexScalar& a, const ComplexScalar& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend ComplexScalar operator-(const ComplexScalar& a) { return {-a.re, -a.im}; }
    friend ComplexScalar operator*(const ComplexScalar& a, const ComplexScalar& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend ComplexScalar operator*(double c, const ComplexScalar& z) {
        return {c * z.re, c * z.im};
    }
    friend ComplexScalar operator*(const ComplexScalar& z, double c) { return c * z; }
    friend ComplexScalar operator/(const ComplexScalar& z, double c) {
        return {z.re / c, z.im / c};
    }

    friend bool operator==(const ComplexScalar& a, const ComplexScalar& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const ComplexScalar& a, const ComplexScalar& b) {
        return !(a == b);
    }

    friend std::ostream& operator<<(std::ostream& os, const ComplexScalar& z) {
        return os << "(" << z.re << ", " << z.im << ")";
    }
};

inline double modulus(const ComplexScalar& z) { return z.modulus(); }

inline double max_abs_component(const ComplexScalar& z) { return z.max_abs_component(); }

/// Literal form "a+bi" / "a-bi" with full-precision decimal components.
inline std::string format_complex(const ComplexScalar& z) {
    std::string out = detail::format_double(z.re);
    out += std::signbit(z.im) ? "-" : "+";
    out += detail::format_double(std::fabs(z.im));
    out += "i";
    return out;
}

/// Widening for the non-strict comparisons.  eq_tolerance must be >= 0.
struct OrderConfig {
    double eq_tolerance = 0.0;
};

/// z1 precedes-or-equals z2: both components ordered (within tolerance).
inline bool precsim(const ComplexScalar& z1, const ComplexScalar& z2,
                    const OrderConfig& cfg = {}) {
    detail::require(cfg.eq_tolerance >= 0.0, "OrderConfig: eq_tolerance must be >= 0");
    return z1.re <= z2.re + cfg.eq_tolerance && z1.im <= z2.im + cfg.eq_tolerance;
}

/// Strictly-less variant: precsim and not equal.
///
/// Note the asymmetry with prec(): one component may tie here, but not both.
inline bool precnsim(const ComplexScalar& z1, const ComplexScalar& z2,
                     const OrderConfig& cfg = {}) {
    return precsim(z1, z2, cfg) && !(z1 == z2);
}

/// Doubly-strict variant: strict inequality in both components.
inline bool prec(const ComplexScalar& z1, const ComplexScalar& z2) {
    return z1.re < z2.re && z1.im < z2.im;
}

/// Membership in the cone S = { z : 0 precsim z }, with zero tolerance.
inline bool in_cone(const ComplexScalar& z) {
    return 0.0 <= z.re && 0.0 <= z.im;
}

}  // namespace cvfix
