#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "cvfix/check_report.hpp"
#include "cvfix/complex_order.hpp"
#include "cvfix/grid_function.hpp"
#include "cvfix/metrics.hpp"
#include "cvfix/rng.hpp"

// Alternating Picard engine for a pair of self-maps (S, T):
//
//   x_{2n+1} = S x_{2n},   x_{2n+2} = T x_{2n+1}
//
// with a windowed Cauchy-tail stopping rule on the modulus deltas
// |d(x_n, x_{n+1})| and residual confirmation at the final point.  The engine
// is a template over the point type; anything with a distance callable, a
// max_abs_component overload and a point_gap overload works.

namespace cvfix {

template <class P>
using MapFn = std::function<P(const P&)>;

/// Separation of two points, ignoring metric scaling: complex modulus of the
/// difference resp. sup-norm difference.  Used by equality-style comparisons
/// (commuting checks), not by the stopping rule.
inline double point_gap(const ComplexScalar& a, const ComplexScalar& b) {
    return (a - b).modulus();
}
inline double point_gap(const GridFunction& a, const GridFunction& b) {
    return sup_diff(a, b);
}

/// Iteration controls.  tol > 0, max_iter >= 1, cauchy_window >= 1.
struct SolverConfig {
    double tol = 1e-10;
    int max_iter = 1000;
    int cauchy_window = 1;

    void validate() const {
        detail::require(std::isfinite(tol) && tol > 0.0, "SolverConfig: tol must be > 0");
        detail::require(max_iter >= 1, "SolverConfig: max_iter must be >= 1");
        detail::require(cauchy_window >= 1, "SolverConfig: cauchy_window must be >= 1");
    }
};

/// Every visited point plus the per-step modulus deltas
/// (deltas[k] = |d(points[k], points[k+1])|).
template <class P>
struct IterationTrace {
    std::vector<P> points;
    std::vector<double> deltas;
};

template <class P>
struct FixpointResult {
    P point;
    IterationTrace<P> trace;
    bool converged = false;
    double residual_s = 0.0;
    double residual_t = 0.0;

    /// Number of map applications performed.
    long long iterations() const { return static_cast<long long>(trace.deltas.size()); }

    double final_delta() const {
        return trace.deltas.empty() ? 0.0 : trace.deltas.back();
    }
};

/// Iteration left the admissible region: a value went non-finite or a
/// component magnitude passed the divergence limit.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, long long applications)
        : std::runtime_error(what), applications_(applications) {}

    long long applications() const { return applications_; }

private:
    long long applications_;
};

/// Divergence error that keeps the partial trace for post-mortems.
template <class P>
class DivergenceErrorWith : public DivergenceError {
public:
    DivergenceErrorWith(const std::string& what, IterationTrace<P> trace)
        : DivergenceError(what, static_cast<long long>(trace.deltas.size())),
          trace_(std::move(trace)) {}

    const IterationTrace<P>& trace() const { return trace_; }

private:
    IterationTrace<P> trace_;
};

/// Component-magnitude ceiling beyond which an orbit counts as divergent.
inline constexpr double kDivergenceLimit = 1e12;

/// Runs the alternating iteration until the last `cauchy_window` deltas drop
/// to tol or max_iter applications are spent.  `converged` additionally
/// requires both residuals |d(Su,u)|, |d(Tu,u)| <= 10*tol at the final point.
///
/// Throws DivergenceErrorWith<P> when an iterate goes non-finite or exceeds
/// the divergence limit; the exception carries the trace so far.
template <class P, class MapS, class MapT, class Dist>
FixpointResult<P> iterate_pair(MapS&& S, MapT&& T, const P& x0, Dist&& d,
                               const SolverConfig& cfg) {
    cfg.validate();
    detail::require(max_abs_component(x0) <= kDivergenceLimit,
                    "iterate_pair: start point exceeds the divergence limit");

    IterationTrace<P> trace;
    trace.points.push_back(x0);
    bool tail_ok = false;

    for (int step = 0; step < cfg.max_iter; ++step) {
        const P& current = trace.points.back();
        std::optional<P> next;
        try {
            next = (step % 2 == 0) ? S(current) : T(current);
        } catch (const std::invalid_argument&) {
            // Maps over checked value types signal overflow-to-non-finite by
            // throwing from the value constructor.
            throw DivergenceErrorWith<P>(
                "iteration diverged: non-finite value produced at application " +
                    std::to_string(step + 1),
                std::move(trace));
        }
        double delta = modulus(d(current, *next));
        trace.points.push_back(std::move(*next));
        trace.deltas.push_back(delta);
        if (max_abs_component(trace.points.back()) > kDivergenceLimit)
            throw DivergenceErrorWith<P>(
                "iteration diverged: component magnitude exceeded " +
                    detail::format_double(kDivergenceLimit) + " at application " +
                    std::to_string(step + 1),
                std::move(trace));
        if (cauchy_tail(trace.deltas, cfg.tol, cfg.cauchy_window)) {
            tail_ok = true;
            break;
        }
    }

    FixpointResult<P> result{trace.points.back(), std::move(trace), false, 0.0, 0.0};
    result.residual_s = modulus(d(S(result.point), result.point));
    result.residual_t = modulus(d(T(result.point), result.point));
    result.converged = tail_ok && result.residual_s <= 10.0 * cfg.tol &&
                       result.residual_t <= 10.0 * cfg.tol;
    return result;
}

/// Single-map Picard iteration: iterate_pair with S = T.
template <class P, class MapT, class Dist>
FixpointResult<P> iterate_single(MapT&& T, const P& x0, Dist&& d, const SolverConfig& cfg) {
    return iterate_pair(T, T, x0, d, cfg);
}

inline ConvergenceReport to_convergence_report(const auto& result) {
    return {result.converged, result.iterations(), result.final_delta()};
}

// ---------------------------------------------------------------------------
// Uniqueness probe
// ---------------------------------------------------------------------------

/// Reruns the iteration from every start and passes iff all runs that
/// converged agree within 10*tol under |d|.  Divergence or non-convergence
/// from a start is recorded, not rethrown; at least one start must converge.
template <class P, class MapS, class MapT, class Dist>
CheckReport uniqueness_probe(MapS&& S, MapT&& T, const std::vector<P>& starts, Dist&& d,
                             const SolverConfig& cfg) {
    detail::require(!starts.empty(), "uniqueness_probe: starts must be nonempty");
    std::vector<P> limits;
    long long failed_runs = 0;
    for (const P& x0 : starts) {
        try {
            FixpointResult<P> r = iterate_pair(S, T, x0, d, cfg);
            if (r.converged)
                limits.push_back(r.point);
            else
                ++failed_runs;
        } catch (const DivergenceError&) {
            ++failed_runs;
        }
    }
    long long total = static_cast<long long>(starts.size());
    if (limits.empty())
        return CheckReport::fail(total, "no convergent start",
                                 "none of the " + std::to_string(total) +
                                     " starts produced a converged run");
    for (std::size_t i = 0; i < limits.size(); ++i)
        for (std::size_t j = i + 1; j < limits.size(); ++j) {
            double gap = modulus(d(limits[i], limits[j]));
            if (gap > 10.0 * cfg.tol) {
                std::ostringstream os;
                os << "limits from starts " << i << " and " << j << " differ by |d|="
                   << gap << " > " << 10.0 * cfg.tol;
                return CheckReport::fail(total, "limit agreement", os.str());
            }
        }
    // Agreement among converged runs is the pass condition; runs that failed
    // to converge were recorded, not rethrown.
    (void)failed_runs;
    return CheckReport::pass(total);
}

// ---------------------------------------------------------------------------
// Finite families
// ---------------------------------------------------------------------------

/// Left-to-right composite: compose_family({f1, f2, ..., fn}) applies fn
/// first, so the composite is f1 ∘ f2 ∘ ... ∘ fn.
template <class P>
MapFn<P> compose_family(std::vector<MapFn<P>> family) {
    detail::require(!family.empty(), "compose_family: family must be nonempty");
    return [family = std::move(family)](const P& x) {
        P value = x;
        for (auto it = family.rbegin(); it != family.rend(); ++it) value = (*it)(value);
        return value;
    };
}

/// Verifies, on sampled points, that the two families commute pairwise:
/// within the S family, within the T family, and across families.
template <class P, class Sampler>
CheckReport check_pairwise_commuting_core(const std::vector<MapFn<P>>& family_s,
                                          const std::vector<MapFn<P>>& family_t,
                                          Sampler&& next_point, long long sample_count,
                                          double eq_tolerance = 1e-9) {
    detail::require(!family_s.empty() && !family_t.empty(),
                    "check_pairwise_commuting: families must be nonempty");
    detail::require(sample_count >= 1,
                    "check_pairwise_commuting: sample_count must be >= 1");

    auto close = [eq_tolerance](const P& a, const P& b) {
        return point_gap(a, b) <=
               eq_tolerance * (1.0 + max_abs_component(a) + max_abs_component(b));
    };

    for (long long n = 0; n < sample_count; ++n) {
        P x = next_point();
        auto fail = [&](const std::string& which, std::size_t i, std::size_t j) {
            std::ostringstream os;
            os << which << " maps " << i << " and " << j << " disagree at x="
               << detail::render_point<P>(x);
            return CheckReport::fail(n + 1, which + " commuting", os.str());
        };
        for (std::size_t i = 0; i < family_s.size(); ++i)
            for (std::size_t j = i + 1; j < family_s.size(); ++j)
                if (!close(family_s[i](family_s[j](x)), family_s[j](family_s[i](x))))
                    return fail("S-family", i, j);
        for (std::size_t i = 0; i < family_t.size(); ++i)
            for (std::size_t j = i + 1; j < family_t.size(); ++j)
                if (!close(family_t[i](family_t[j](x)), family_t[j](family_t[i](x))))
                    return fail("T-family", i, j);
        for (std::size_t i = 0; i < family_s.size(); ++i)
            for (std::size_t j = 0; j < family_t.size(); ++j)
                if (!close(family_s[i](family_t[j](x)), family_t[j](family_s[i](x))))
                    return fail("cross-family", i, j);
    }
    return CheckReport::pass(sample_count);
}

/// Complex-point convenience: samples from the default box.
inline CheckReport check_pairwise_commuting(const std::vector<MapFn<ComplexScalar>>& family_s,
                                            const std::vector<MapFn<ComplexScalar>>& family_t,
                                            long long sample_count, std::uint64_t seed) {
    SampleRng rng(seed);
    auto sample = [&rng]() { return rng.complex_in_box(); };
    return check_pairwise_commuting_core<ComplexScalar>(family_s, family_t, sample,
                                                        sample_count);
}

template <class P>
struct FamilyFixpointResult {
    FixpointResult<P> result;
    /// |d(S_i u, u)| and |d(T_j u, u)| at the final point, one per member.
    std::vector<double> residual_s;
    std::vector<double> residual_t;
    /// Commuting advisory (filled where a point sampler is available); a
    /// failed advisory does not stop the computation, it flags the premise.
    std::optional<CheckReport> commuting;
};

/// Runs the alternating iteration on the family composites and reports a
/// residual per family member at the final point.  Constrained away from
/// ComplexMetric so a passed metric always reaches the advisory overload
/// below instead of binding to Dist&&.
template <class P, class Dist>
    requires(!std::is_same_v<std::remove_cvref_t<Dist>, ComplexMetric>)
FamilyFixpointResult<P> family_fixed_point(const std::vector<MapFn<P>>& family_s,
                                           const std::vector<MapFn<P>>& family_t,
                                           const P& x0, Dist&& d, const SolverConfig& cfg) {
    MapFn<P> S = compose_family(family_s);
    MapFn<P> T = compose_family(family_t);
    FamilyFixpointResult<P> out{iterate_pair(S, T, x0, d, cfg), {}, {}, std::nullopt};
    for (const MapFn<P>& f : family_s)
        out.residual_s.push_back(modulus(d(f(out.result.point), out.result.point)));
    for (const MapFn<P>& f : family_t)
        out.residual_t.push_back(modulus(d(f(out.result.point), out.result.point)));
    return out;
}

/// Complex-point convenience: additionally runs the commuting advisory on
/// sampled points (deterministic in `advisory_seed`).
inline FamilyFixpointResult<ComplexScalar> family_fixed_point(
    const std::vector<MapFn<ComplexScalar>>& family_s,
    const std::vector<MapFn<ComplexScalar>>& family_t, const ComplexScalar& x0,
    const ComplexMetric& metric, const SolverConfig& cfg,
    long long advisory_samples = 256, std::uint64_t advisory_seed = 1u) {
    auto d = [&metric](const ComplexScalar& a, const ComplexScalar& b) {
        return metric(a, b);
    };
    FamilyFixpointResult<ComplexScalar> out =
        family_fixed_point<ComplexScalar>(family_s, family_t, x0, d, cfg);
    out.commuting = check_pairwise_commuting(family_s, family_t, advisory_samples,
                                             advisory_seed);
    return out;
}

// ---------------------------------------------------------------------------
// Trace export
// ---------------------------------------------------------------------------

/// Complex traces: "iter,delta,point" with point in a+bi literal form.
inline void write_trace_csv(std::ostream& os, const IterationTrace<ComplexScalar>& trace) {
    os << "iter,delta,point\n";
    for (std::size_t k = 0; k < trace.deltas.size(); ++k)
        os << k + 1 << "," << detail::format_double(trace.deltas[k]) << ","
           << format_complex(trace.points[k + 1]) << "\n";
}

/// Grid traces: "iter,delta" (the full functions go through write_csv).
inline void write_trace_csv(std::ostream& os, const IterationTrace<GridFunction>& trace) {
    os << "iter,delta\n";
    for (std::size_t k = 0; k < trace.deltas.size(); ++k)
        os << k + 1 << "," << detail::format_double(trace.deltas[k]) << "\n";
}

}  // namespace cvfix
