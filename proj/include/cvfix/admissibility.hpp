#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cvfix/check_report.hpp"
#include "cvfix/complex_order.hpp"
#include "cvfix/metrics.hpp"
#include "cvfix/rng.hpp"
#include "cvfix/simulation.hpp"

// Admissibility weights and the sampled contraction checkers.
//
// An alpha map assigns a cone value to each ordered point pair; "the weight is
// active at (x,y)" means 1 precedes alpha(x,y).  The checkers below verify, by
// deterministic sampling, the hypotheses the iteration engine relies on:
// activity propagation under a pair of maps (plain / orbital / triangular
// flavours), a regularity surrogate along traces, and the simulation-function
// contraction conditions in plain, M-type and N-type forms.

namespace cvfix {

using ComplexMap = std::function<ComplexScalar(const ComplexScalar&)>;

/// Cone-valued weight on ordered pairs of complex points.
class AlphaMap {
public:
    using Fn = std::function<ComplexScalar(const ComplexScalar&, const ComplexScalar&)>;

    /// alpha == 1 everywhere: recovers the unweighted theory.
    static AlphaMap one() {
        return AlphaMap("one", [](const ComplexScalar&, const ComplexScalar&) {
            return ComplexScalar{1.0, 0.0};
        });
    }

    /// 1 when pred(x,y), else 0.
    static AlphaMap indicator(std::string name, std::function<bool(const ComplexScalar&,
                                                                   const ComplexScalar&)>
                                                    pred) {
        return AlphaMap(std::move(name),
                        [pred = std::move(pred)](const ComplexScalar& x,
                                                 const ComplexScalar& y) {
                            return pred(x, y) ? ComplexScalar{1.0, 0.0}
                                              : ComplexScalar{0.0, 0.0};
                        });
    }

    /// Active iff both points lie in the closed upper half-plane.
    static AlphaMap upper_half() {
        return indicator("upper_half", [](const ComplexScalar& x, const ComplexScalar& y) {
            return x.im >= 0.0 && y.im >= 0.0;
        });
    }

    /// Active iff |x| <= |y|.
    static AlphaMap modulus_ordered() {
        return indicator("mod_le", [](const ComplexScalar& x, const ComplexScalar& y) {
            return x.modulus() <= y.modulus();
        });
    }

    static AlphaMap custom(std::string name, Fn fn) {
        return AlphaMap(std::move(name), std::move(fn));
    }

    /// Evaluates the weight; the result must lie in the cone.
    ComplexScalar operator()(const ComplexScalar& x, const ComplexScalar& y) const {
        ComplexScalar v = fn_(x, y);
        detail::require(in_cone(v), "AlphaMap: value left the cone at " + name_);
        return v;
    }

    /// The activity predicate 1 precsim alpha(x,y).
    bool active(const ComplexScalar& x, const ComplexScalar& y) const {
        return precsim(ComplexScalar{1.0, 0.0}, (*this)(x, y));
    }

    const std::string& name() const { return name_; }

private:
    AlphaMap(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

    std::string name_;
    Fn fn_;
};

// ---------------------------------------------------------------------------
// Comparison values for the generalized contractions
// ---------------------------------------------------------------------------

/// M-type comparison value:
/// lambda * max{ |d(x,y)|, |d(x,Sx)|, |d(y,Ty)|, (|d(x,Ty)| + |d(y,Sx)|)/2 }.
template <class P, class MapS, class MapT, class Dist>
double m_value(const P& x, const P& y, MapS&& S, MapT&& T, Dist&& d, double lambda) {
    detail::require(0.0 < lambda && lambda < 1.0, "m_value: lambda must lie in (0,1)");
    P sx = S(x);
    P ty = T(y);
    double dxy = modulus(d(x, y));
    double dxsx = modulus(d(x, sx));
    double dyty = modulus(d(y, ty));
    double cross = 0.5 * (modulus(d(x, ty)) + modulus(d(y, sx)));
    return lambda * std::max(std::max(dxy, dxsx), std::max(dyty, cross));
}

/// N-type comparison value:
/// max{ |d(x,y)|, (|d(x,Sx)||d(y,Ty)| + |d(x,Ty)||d(y,Sx)|) / (1 + |d(x,y)|) }.
template <class P, class MapS, class MapT, class Dist>
double n_value(const P& x, const P& y, MapS&& S, MapT&& T, Dist&& d) {
    P sx = S(x);
    P ty = T(y);
    double dxy = modulus(d(x, y));
    double ratio = (modulus(d(x, sx)) * modulus(d(y, ty)) +
                    modulus(d(x, ty)) * modulus(d(y, sx))) /
                   (1.0 + dxy);
    return std::max(dxy, ratio);
}

// ---------------------------------------------------------------------------
// Contraction checker
// ---------------------------------------------------------------------------

enum class ContractionVariant { plain, m_type, n_type };

/// Everything needed to state a sampled contraction hypothesis over complex
/// points.  `lambda` is the M-type comparison parameter (ignored otherwise).
struct ContractionSpec {
    ContractionVariant variant = ContractionVariant::plain;
    double lambda = 0.5;
    SimulationFn xi = SimulationFn::linear(0.5);
    AlphaMap alpha = AlphaMap::one();
    ComplexMetric metric = ComplexMetric::d1();
};

namespace detail {

template <class P, class MapS, class MapT, class Dist, class Alpha, class Sampler>
CheckReport check_contraction_core(ContractionVariant variant, double lambda,
                                   const SimulationFn& xi, Alpha&& alpha, Dist&& d,
                                   MapS&& S, MapT&& T, Sampler&& next_point,
                                   long long samples) {
    require(samples >= 1, "check_contraction: sample_count must be >= 1");
    for (long long n = 0; n < samples; ++n) {
        P x = next_point();
        // Every 16th pair is diagonal: the hypotheses quantify over all pairs
        // including x = y, where all distances vanish and xi(0,0)=0 must hold.
        P y = (n % 16 == 15) ? x : next_point();

        ComplexScalar a = alpha(x, y);
        ComplexScalar d_new = d(S(x), T(y));
        ComplexScalar weighted = a * d_new;

        auto fail = [&](const char* clause, const ComplexScalar& value) {
            std::ostringstream os;
            os << "x=" << render_point<P>(x) << " y=" << render_point<P>(y)
               << " alpha=" << a << " d(Sx,Ty)=" << d_new << " value=" << value;
            return CheckReport::fail(n + 1, clause, os.str());
        };

        // (i) the weighted displacement stays in the cone.
        if (!in_cone(weighted)) return fail("(i) cone", weighted);

        // Comparison argument for this variant (real values are embedded on
        // the real axis before xi sees them).
        ComplexScalar comparison{0.0, 0.0};
        switch (variant) {
            case ContractionVariant::plain: comparison = d(x, y); break;
            case ContractionVariant::m_type:
                comparison = {m_value(x, y, S, T, d, lambda), 0.0};
                break;
            case ContractionVariant::n_type:
                comparison = {n_value(x, y, S, T, d), 0.0};
                break;
        }

        // (ii) order form of the contraction condition.
        ComplexScalar v2 = xi(weighted, comparison);
        if (!in_cone(v2)) return fail("(ii) xi order", v2);

        // (iii) modulus form: first argument replaced by its modulus; the
        // comparison collapses to its modulus as well in the plain variant.
        ComplexScalar mod_arg{weighted.modulus(), 0.0};
        ComplexScalar mod_cmp = variant == ContractionVariant::plain
                                    ? ComplexScalar{comparison.modulus(), 0.0}
                                    : comparison;
        ComplexScalar v3 = xi(mod_arg, mod_cmp);
        if (!in_cone(v3)) return fail("(iii) xi modulus", v3);
    }
    return CheckReport::pass(samples);
}

}  // namespace detail

/// Samples point pairs from the default box and checks the contraction
/// hypothesis described by `spec` for the pair of maps (S, T).
inline CheckReport check_contraction(const ContractionSpec& spec, const ComplexMap& S,
                                     const ComplexMap& T, long long sample_count,
                                     std::uint64_t seed) {
    detail::require(spec.metric.domain().kind == PointDomain::Kind::complex_point,
                    "check_contraction: spec.metric must act on complex points");
    SampleRng rng(seed);
    auto sample = [&rng]() { return rng.complex_in_box(); };
    auto dist = [&spec](const ComplexScalar& a, const ComplexScalar& b) {
        return spec.metric(a, b);
    };
    auto alpha = [&spec](const ComplexScalar& a, const ComplexScalar& b) {
        return spec.alpha(a, b);
    };
    return detail::check_contraction_core<ComplexScalar>(
        spec.variant, spec.lambda, spec.xi, alpha, dist, S, T, sample, sample_count);
}

// ---------------------------------------------------------------------------
// Admissibility checkers
// ---------------------------------------------------------------------------

/// Pair admissibility: whenever alpha is active at (x,y), it stays active at
/// (Sx,Ty) and at (Tx,Sy).
inline CheckReport check_pair_admissible(const AlphaMap& alpha, const ComplexMap& S,
                                         const ComplexMap& T, long long sample_count,
                                         std::uint64_t seed) {
    detail::require(sample_count >= 1, "check_pair_admissible: sample_count must be >= 1");
    SampleRng rng(seed);
    for (long long n = 0; n < sample_count; ++n) {
        ComplexScalar x = rng.complex_in_box();
        ComplexScalar y = rng.complex_in_box();
        if (!alpha.active(x, y)) continue;  // premise empty: vacuous sample
        ComplexScalar sx = S(x), ty = T(y), tx = T(x), sy = S(y);
        const char* clause = nullptr;
        if (!alpha.active(sx, ty)) clause = "activity at (Sx,Ty)";
        else if (!alpha.active(tx, sy)) clause = "activity at (Tx,Sy)";
        if (clause) {
            std::ostringstream os;
            os << "x=" << x << " y=" << y << " alpha(x,y)=" << alpha(x, y);
            return CheckReport::fail(n + 1, clause, os.str());
        }
    }
    return CheckReport::pass(sample_count);
}

/// Orbital + triangular admissibility for the pair (S,T):
///   orbital     active(x,Sx)  =>  active(Sx,TSx) and active(Tx,SSx)
///               active(x,Tx)  =>  active(Sx,TTx) and active(Tx,STx)
///   triangular  active(x,y) and active(y,Sy)  =>  active(x,Sy)
///               active(x,y) and active(y,Ty)  =>  active(x,Ty)
/// Samples with no satisfied premise pass vacuously.
inline CheckReport check_triangular_orbital(const AlphaMap& alpha, const ComplexMap& S,
                                            const ComplexMap& T, long long sample_count,
                                            std::uint64_t seed) {
    detail::require(sample_count >= 1,
                    "check_triangular_orbital: sample_count must be >= 1");
    SampleRng rng(seed);
    for (long long n = 0; n < sample_count; ++n) {
        ComplexScalar x = rng.complex_in_box();
        ComplexScalar y = rng.complex_in_box();
        ComplexScalar sx = S(x), tx = T(x);

        auto fail = [&](const char* clause) {
            std::ostringstream os;
            os << "x=" << x << " y=" << y;
            return CheckReport::fail(n + 1, clause, os.str());
        };

        if (alpha.active(x, sx)) {
            if (!alpha.active(sx, T(sx))) return fail("orbital (Sx,TSx)");
            if (!alpha.active(tx, S(sx))) return fail("orbital (Tx,SSx)");
        }
        if (alpha.active(x, tx)) {
            if (!alpha.active(sx, T(tx))) return fail("orbital (Sx,TTx)");
            if (!alpha.active(tx, S(tx))) return fail("orbital (Tx,STx)");
        }
        if (alpha.active(x, y)) {
            if (alpha.active(y, S(y)) && !alpha.active(x, S(y)))
                return fail("triangular via S");
            if (alpha.active(y, T(y)) && !alpha.active(x, T(y)))
                return fail("triangular via T");
        }
    }
    return CheckReport::pass(sample_count);
}

/// Regularity surrogate: along a trace converging to `limit`, at least
/// ceil(min_fraction * len) indices must have alpha active in both directions
/// between the trace point and the limit.
inline CheckReport check_regularity(const AlphaMap& alpha,
                                    const std::vector<ComplexScalar>& trace,
                                    const ComplexScalar& limit,
                                    double min_fraction = 0.5) {
    detail::require(!trace.empty(), "check_regularity: trace must be nonempty");
    detail::require(0.0 < min_fraction && min_fraction <= 1.0,
                    "check_regularity: min_fraction must lie in (0,1]");
    long long qualifying = 0;
    for (const ComplexScalar& p : trace)
        if (alpha.active(p, limit) && alpha.active(limit, p)) ++qualifying;
    long long needed = static_cast<long long>(
        std::ceil(min_fraction * static_cast<double>(trace.size())));
    if (qualifying >= needed) return CheckReport::pass(static_cast<long long>(trace.size()));
    std::ostringstream os;
    os << "only " << qualifying << " of " << trace.size()
       << " trace points kept alpha active with the limit (needed " << needed << ")";
    return CheckReport::fail(static_cast<long long>(trace.size()), "regular subsequence",
                             os.str());
}

}  // namespace cvfix
