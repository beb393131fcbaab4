#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>

#include "cvfix/check_report.hpp"
#include "cvfix/complex_order.hpp"
#include "cvfix/grid_function.hpp"
#include "cvfix/rng.hpp"

// Complex-valued metrics: d(x,y) lives in the cone, vanishes exactly on the
// diagonal, is symmetric, and satisfies the triangle inequality under the
// componentwise order.  Four families are provided:
//
//   d1          |z1 - z2|                        (complex points)
//   d2(k)       e^{ik} |z1 - z2|                 (complex points)
//   d3          |x1 - x2| + i |y1 - y2|          (complex points)
//   scaled_sup  (sup-norm of u - v) * scale      (grid functions)
//
// d2 leaves the cone when k is outside [0, pi/2]; construction only flags
// this (cone_safe) — the axiom checker is the arbiter.

namespace cvfix {

enum class MetricKind { d1, d2, d3, scaled_sup };

/// Which point type a metric (or a sampler) works on.
struct PointDomain {
    enum class Kind { complex_point, grid_function };
    Kind kind = Kind::complex_point;
    GridSpec grid;  // meaningful only for grid_function
};

class ComplexMetric {
public:
    static ComplexMetric d1() { return ComplexMetric(MetricKind::d1); }

    static ComplexMetric d2(double k) {
        detail::require(std::isfinite(k), "d2: rotation angle must be finite");
        ComplexMetric m(MetricKind::d2);
        m.rotation_ = k;
        m.cone_safe_ = std::cos(k) >= 0.0 && std::sin(k) >= 0.0;
        return m;
    }

    static ComplexMetric d3() { return ComplexMetric(MetricKind::d3); }

    /// Sup-norm metric on a grid domain, scaled by a nonzero cone element.
    static ComplexMetric scaled_sup(const ComplexScalar& scale, const GridSpec& grid) {
        grid.validate();
        detail::require(in_cone(scale) && scale.modulus() > 0.0,
                        "scaled_sup: scale must be a nonzero cone element");
        ComplexMetric m(MetricKind::scaled_sup);
        m.scale_ = scale;
        m.domain_ = {PointDomain::Kind::grid_function, grid};
        return m;
    }

    MetricKind kind() const { return kind_; }
    const PointDomain& domain() const { return domain_; }
    double rotation() const { return rotation_; }
    const ComplexScalar& scale() const { return scale_; }

    /// False for d2 angles whose image leaves the cone; axiom checks will fail.
    bool cone_safe() const { return cone_safe_; }

    ComplexScalar operator()(const ComplexScalar& p, const ComplexScalar& q) const {
        detail::require(domain_.kind == PointDomain::Kind::complex_point,
                        "distance: metric domain is grid functions, got complex points");
        switch (kind_) {
            case MetricKind::d1:
                return {(p - q).modulus(), 0.0};
            case MetricKind::d2: {
                double m = (p - q).modulus();
                return {m * std::cos(rotation_), m * std::sin(rotation_)};
            }
            case MetricKind::d3:
                return {std::fabs(p.re - q.re), std::fabs(p.im - q.im)};
            default:
                throw std::invalid_argument("distance: unsupported metric kind");
        }
    }

    ComplexScalar operator()(const GridFunction& p, const GridFunction& q) const {
        detail::require(domain_.kind == PointDomain::Kind::grid_function &&
                            kind_ == MetricKind::scaled_sup,
                        "distance: metric domain is complex points, got grid functions");
        detail::require(p.spec() == domain_.grid && q.spec() == domain_.grid,
                        "distance: grid function does not match metric domain");
        return sup_diff(p, q) * scale_;
    }

    std::string describe() const {
        std::ostringstream os;
        switch (kind_) {
            case MetricKind::d1: os << "d1"; break;
            case MetricKind::d2: os << "d2:k=" << rotation_; break;
            case MetricKind::d3: os << "d3"; break;
            case MetricKind::scaled_sup:
                os << "scaled_sup:scale=" << scale_ << ",interval=[" << domain_.grid.a
                   << "," << domain_.grid.b << "],nodes=" << domain_.grid.nodes
                   << ",dim=" << domain_.grid.dim;
                break;
        }
        return os.str();
    }

private:
    explicit ComplexMetric(MetricKind kind) : kind_(kind) {}

    MetricKind kind_;
    double rotation_ = 0.0;
    ComplexScalar scale_{1.0, 0.0};
    PointDomain domain_{PointDomain::Kind::complex_point, {}};
    bool cone_safe_ = true;
};

/// Convenience aliases for the free-function style used in the checkers.
inline ComplexScalar distance(const ComplexMetric& m, const ComplexScalar& p,
                              const ComplexScalar& q) {
    return m(p, q);
}
inline ComplexScalar distance(const ComplexMetric& m, const GridFunction& p,
                              const GridFunction& q) {
    return m(p, q);
}

// ---------------------------------------------------------------------------
// Axiom checker
// ---------------------------------------------------------------------------

namespace detail {

template <class P>
std::string render_point(const P& p);

template <>
inline std::string render_point<ComplexScalar>(const ComplexScalar& p) {
    std::ostringstream os;
    os << p;
    return os.str();
}

template <>
inline std::string render_point<GridFunction>(const GridFunction& p) {
    std::ostringstream os;
    os << "grid[" << p.spec().a << "," << p.spec().b << "]x" << p.nodes() << " (|u|="
       << max_abs_component(p) << ")";
    return os.str();
}

template <class P, class Dist, class Sampler>
CheckReport check_metric_axioms_core(Dist&& d, Sampler&& next_point, long long samples,
                                     const OrderConfig& ord) {
    require(samples >= 1, "check_metric_axioms: sample_count must be >= 1");
    const ComplexScalar zero{0.0, 0.0};
    for (long long n = 0; n < samples; ++n) {
        P x = next_point();
        P y = next_point();
        P z = next_point();

        auto witness2 = [&](const char* clause, const ComplexScalar& value) {
            std::ostringstream os;
            os << "x=" << render_point<P>(x) << " y=" << render_point<P>(y)
               << " d(x,y)=" << value;
            return CheckReport::fail(n + 1, clause, os.str());
        };

        // (i) nonnegativity + identity of indiscernibles.
        ComplexScalar dxy = d(x, y);
        if (!in_cone(dxy)) return witness2("(i) nonnegativity", dxy);
        ComplexScalar dxx = d(x, x);
        if (dxx.modulus() > ord.eq_tolerance)
            return CheckReport::fail(n + 1, "(i) identity",
                                     "d(x,x)=" + render_point<ComplexScalar>(dxx) +
                                         " at x=" + render_point<P>(x));
        if (!(x == y) && dxy.modulus() <= ord.eq_tolerance)
            return witness2("(i) separation", dxy);

        // (ii) symmetry.
        ComplexScalar dyx = d(y, x);
        ComplexScalar diff = dxy - dyx;
        if (std::fabs(diff.re) > ord.eq_tolerance || std::fabs(diff.im) > ord.eq_tolerance) {
            std::ostringstream os;
            os << "d(x,y)=" << dxy << " d(y,x)=" << dyx << " at x=" << render_point<P>(x)
               << " y=" << render_point<P>(y);
            return CheckReport::fail(n + 1, "(ii) symmetry", os.str());
        }

        // (iii) triangle inequality under the componentwise order.
        ComplexScalar dxz = d(x, z);
        ComplexScalar dzy = d(z, y);
        if (!precsim(dxy, dxz + dzy, ord)) {
            std::ostringstream os;
            os << "d(x,y)=" << dxy << " exceeds d(x,z)+d(z,y)=" << dxz + dzy
               << " at x=" << render_point<P>(x) << " y=" << render_point<P>(y)
               << " z=" << render_point<P>(z);
            return CheckReport::fail(n + 1, "(iii) triangle", os.str());
        }
        (void)zero;
    }
    return CheckReport::pass(samples);
}

}  // namespace detail

/// Order tolerance used by the axiom checker: distances on the default
/// sampling boxes sit around 1e1, so 1e-12 absorbs last-ulp rounding in the
/// triangle comparison without masking genuine violations.
inline constexpr double kMetricCheckTolerance = 1e-12;

/// Samples triples from the metric's own domain and verifies the three metric
/// axioms; returns the first counterexample on failure.
inline CheckReport check_metric_axioms(const ComplexMetric& m, long long sample_count,
                                       std::uint64_t seed) {
    SampleRng rng(seed);
    OrderConfig ord{kMetricCheckTolerance};
    if (m.domain().kind == PointDomain::Kind::complex_point) {
        auto sample = [&rng]() { return rng.complex_in_box(); };
        auto dist = [&m](const ComplexScalar& a, const ComplexScalar& b) { return m(a, b); };
        return detail::check_metric_axioms_core<ComplexScalar>(dist, sample, sample_count,
                                                               ord);
    }
    GridSpec spec = m.domain().grid;
    auto sample = [&rng, &spec]() { return random_grid_function(rng, spec); };
    auto dist = [&m](const GridFunction& a, const GridFunction& b) { return m(a, b); };
    return detail::check_metric_axioms_core<GridFunction>(dist, sample, sample_count, ord);
}

/// Same check for an arbitrary candidate distance on complex points (used to
/// vet would-be metrics supplied as plain callables).
inline CheckReport check_metric_axioms(
    const std::function<ComplexScalar(const ComplexScalar&, const ComplexScalar&)>& d,
    long long sample_count, std::uint64_t seed) {
    SampleRng rng(seed);
    auto sample = [&rng]() { return rng.complex_in_box(); };
    return detail::check_metric_axioms_core<ComplexScalar>(
        d, sample, sample_count, OrderConfig{kMetricCheckTolerance});
}

// ---------------------------------------------------------------------------
// Cauchy-tail test
// ---------------------------------------------------------------------------

/// True iff deltas has at least `window` entries and the last `window` of them
/// are all <= tol.  deltas must be nonempty, tol > 0, window >= 1.
inline bool cauchy_tail(std::span<const double> deltas, double tol, int window) {
    detail::require(!deltas.empty(), "cauchy_tail: deltas must be nonempty");
    detail::require(tol > 0.0, "cauchy_tail: tol must be > 0");
    detail::require(window >= 1, "cauchy_tail: window must be >= 1");
    if (std::cmp_less(deltas.size(), window)) return false;
    for (std::size_t i = deltas.size() - static_cast<std::size_t>(window);
         i < deltas.size(); ++i)
        if (!(deltas[i] <= tol)) return false;
    return true;
}

/// Compact convergence summary (derived from an iteration run).
struct ConvergenceReport {
    bool converged = false;
    long long iterations = 0;
    double final_delta = 0.0;
};

}  // namespace cvfix
