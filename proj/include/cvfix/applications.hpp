#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cvfix/complex_order.hpp"
#include "cvfix/fixpoint.hpp"
#include "cvfix/grid_function.hpp"
#include "cvfix/metrics.hpp"
#include "cvfix/rng.hpp"

// Two integral-equation applications driven by the Picard engine:
//
//  * a Volterra equation  x(t) = 2 + ∫_a^t (x(s) + s^3) e^{1-2s} ds  on [a,b],
//    discretized by cumulative trapezoid on a uniform grid, solved under the
//    scaled sup-metric with contraction estimate lambda = (b-a) e^{1-2a};
//
//  * the periodic boundary-value problem u' = f(t,u), u(0) = u(a), recast as
//    u = T u with (T u)(t) = ∫_0^a H(t,s) [f(s,u(s)) + eta u(s)] ds through
//    the periodic Green kernel H, whose mass ∫_0^a H(t,s) ds = 1/eta makes T
//    a 1/eta-Lipschitz average of f + eta id.
//
// All quadrature is trapezoid with integrals split at the kernel crease
// s = t, each smooth branch evaluated on its own closed piece.

namespace cvfix {

// ---------------------------------------------------------------------------
// Volterra equation
// ---------------------------------------------------------------------------

/// Contraction estimate for the Volterra operator on [a,b]:
/// lambda = (b-a) / e^{2a-1}.
inline double volterra_lambda(double a, double b) {
    detail::require(std::isfinite(a) && std::isfinite(b) && a < b,
                    "volterra_lambda: need finite a < b");
    return (b - a) * std::exp(1.0 - 2.0 * a);
}

/// Sup-metric scale for the Volterra setting,
/// (sqrt(a^2+b^2)/a) e^{i arctan(b/a)}, which simplifies exactly to 1 + (b/a)i.
inline ComplexMetric volterra_metric(double a, double b, int nodes) {
    detail::require(a > 0.0 && b > a, "volterra_metric: need 0 < a < b");
    return ComplexMetric::scaled_sup(ComplexScalar{1.0, b / a}, GridSpec{a, b, nodes, 1});
}

/// One application of the Volterra operator:
/// (T x)(t) = 2 + ∫_a^t (x(s) + s^3) e^{1-2s} ds, cumulative trapezoid.
/// x must be scalar-valued on a uniform grid over [a,b]; (T x)(a) = 2 exactly.
inline GridFunction volterra_operator(const GridFunction& x, double a, double b) {
    const GridSpec& spec = x.spec();
    detail::require(spec.a == a && spec.b == b,
                    "volterra_operator: grid interval does not match [a,b]");
    detail::require(spec.dim == 1, "volterra_operator: x must be scalar-valued");

    const int n = spec.nodes;
    const double h = spec.step();
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        double s = spec.node(j);
        g[j] = (x.at(j) + s * s * s) * std::exp(1.0 - 2.0 * s);
    }
    GridFunction out(spec);
    double integral = 0.0;
    out.at(0) = 2.0;
    for (int j = 1; j < n; ++j) {
        integral += 0.5 * h * (g[j - 1] + g[j]);
        out.at(j) = 2.0 + integral;
    }
    return out;
}

template <class P>
struct ContractiveSolveResult {
    FixpointResult<P> fixpoint;
    /// A-priori contraction estimate for the operator that was iterated.
    double lambda = 0.0;
    /// lambda < 1; when false the iteration ran anyway and this is the warning.
    bool contractive = false;
};

/// Solves the Volterra equation on [a,b] with `nodes` grid points, starting
/// from x ≡ 2, under the scaled sup-metric.  Reports the contraction estimate
/// instead of rejecting non-contractive intervals.
inline ContractiveSolveResult<GridFunction> solve_integral_equation(
    double a, double b, int nodes, const SolverConfig& cfg) {
    detail::require(a > 0.0 && b > a, "solve_integral_equation: need 0 < a < b");
    GridSpec spec{a, b, nodes, 1};
    spec.validate();
    ComplexMetric metric = volterra_metric(a, b, nodes);
    auto op = [a, b](const GridFunction& x) { return volterra_operator(x, a, b); };
    auto dist = [&metric](const GridFunction& u, const GridFunction& v) {
        return metric(u, v);
    };
    ContractiveSolveResult<GridFunction> out{
        iterate_single(op, GridFunction::constant(spec, 2.0), dist, cfg), 0.0, false};
    out.lambda = volterra_lambda(a, b);
    out.contractive = out.lambda < 1.0;
    return out;
}

// ---------------------------------------------------------------------------
// Periodic problem
// ---------------------------------------------------------------------------

/// Periodic Green kernel on [0,a]^2 (pointwise value; ties at s = t resolve
/// to the first branch):
///   H(t,s) = e^{eta(a+s-t)} / (e^{eta a} - 1)   for 0 <= s <= t <= a
///   H(t,s) = e^{eta(s-t)}   / (e^{eta a} - 1)   for 0 <= t < s <= a
inline double green_kernel(double t, double s, double a, double eta) {
    detail::require(a > 0.0 && eta > 0.0, "green_kernel: need a > 0 and eta > 0");
    detail::require(0.0 <= t && t <= a && 0.0 <= s && s <= a,
                    "green_kernel: t and s must lie in [0,a]");
    double denom = std::expm1(eta * a);
    double exponent = s <= t ? eta * (a + s - t) : eta * (s - t);
    return std::exp(exponent) / denom;
}

/// ∫_0^a H(t,s) ds by split trapezoid: each smooth branch is integrated on
/// its own piece with step ~ a/(nodes-1).  Exact value is 1/eta.
inline double kernel_mass(double t, double a, double eta, int nodes) {
    detail::require(a > 0.0 && eta > 0.0, "kernel_mass: need a > 0 and eta > 0");
    detail::require(0.0 <= t && t <= a, "kernel_mass: t must lie in [0,a]");
    detail::require(nodes >= 3, "kernel_mass: nodes must be >= 3");

    const double h_target = a / static_cast<double>(nodes - 1);
    const double denom = std::expm1(eta * a);

    // Composite trapezoid of e^{eta(c + s - t)}/denom over [lo,hi].
    auto piece = [&](double lo, double hi, double c) {
        if (hi <= lo) return 0.0;
        int m = std::max(1, static_cast<int>(std::llround((hi - lo) / h_target)));
        double h = (hi - lo) / static_cast<double>(m);
        auto value = [&](double s) { return std::exp(eta * (c + s - t)) / denom; };
        double sum = 0.5 * (value(lo) + value(hi));
        for (int k = 1; k < m; ++k) sum += value(lo + static_cast<double>(k) * h);
        return h * sum;
    };

    return piece(0.0, t, a) + piece(t, a, 0.0);
}

/// Right-hand side family for u' = f(t,u), periodic with period `period`.
/// f writes its value into `out` (dim components); eta is the shift that
/// makes f + eta id nonexpansive-friendly (the solver contracts at 1/eta·L
/// with L the Lipschitz bound of f + eta id, so eta > 1 is required).
struct PeriodicProblem {
    using Rhs = std::function<void(double, std::span<const double>, std::span<double>)>;

    std::string name;
    Rhs f;
    double period = 1.0;
    double eta = 1.5;
    int dim = 1;

    void validate() const {
        detail::require(bool(f), "PeriodicProblem: missing right-hand side");
        detail::require(std::isfinite(period) && period > 0.0,
                        "PeriodicProblem: period must be > 0");
        detail::require(std::isfinite(eta) && eta > 1.0,
                        "PeriodicProblem: eta must be > 1");
        detail::require(dim >= 1, "PeriodicProblem: dim must be >= 1");
    }

    /// f_i(t,u) = t - u_i on [0,a].  Known closed-form periodic solution
    /// u_i(t) = t - 1 + a e^{-t}/(1 - e^{-a}).
    static PeriodicProblem linear_drift(double eta = 1.5, double period = 1.0,
                                        int dim = 1) {
        PeriodicProblem p{"example32",
                          [](double t, std::span<const double> u, std::span<double> out) {
                              for (std::size_t c = 0; c < u.size(); ++c) out[c] = t - u[c];
                          },
                          period, eta, dim};
        p.validate();
        return p;
    }

    /// f(t,u) = -ln(10+t^2) u on [0,2]; the only periodic solution is u ≡ 0.
    /// The default eta = 2 satisfies |eta - ln(10+t^2)| <= 1 on [0,2].
    static PeriodicProblem log_decay(double eta = 2.0, int dim = 1) {
        PeriodicProblem p{"example33",
                          [](double t, std::span<const double> u, std::span<double> out) {
                              double k = -std::log(10.0 + t * t);
                              for (std::size_t c = 0; c < u.size(); ++c) out[c] = k * u[c];
                          },
                          2.0, eta, dim};
        p.validate();
        return p;
    }

    static PeriodicProblem zero_rhs(double eta, double period, int dim = 1) {
        PeriodicProblem p{"zero",
                          [](double, std::span<const double>, std::span<double> out) {
                              for (double& v : out) v = 0.0;
                          },
                          period, eta, dim};
        p.validate();
        return p;
    }

    static PeriodicProblem custom(std::string name, Rhs f, double eta, double period,
                                  int dim = 1) {
        PeriodicProblem p{std::move(name), std::move(f), period, eta, dim};
        p.validate();
        return p;
    }
};

/// Sup-metric scale for the periodic setting, sqrt(1+a^2) e^{i arctan a},
/// which simplifies exactly to 1 + a i.
inline ComplexMetric periodic_metric(double period, int nodes, int dim) {
    return ComplexMetric::scaled_sup(ComplexScalar{1.0, period},
                                     GridSpec{0.0, period, nodes, dim});
}

/// One application of the periodic integral operator
///   (T u)(t) = ∫_0^a H(t,s) [f(s,u(s)) + eta u(s)] ds
/// with the integral split at s = t and each kernel branch integrated on its
/// own piece.  Implemented in O(nodes·dim) via prefix/suffix sums of the
/// shared factor e^{eta(s-a)} [f + eta u]; exponents are kept <= 0 so large
/// eta·a cannot overflow.
inline GridFunction periodic_operator(const GridFunction& u, const PeriodicProblem& p) {
    p.validate();
    const GridSpec& spec = u.spec();
    detail::require(spec.a == 0.0 && spec.b == p.period,
                    "periodic_operator: grid must cover [0, period]");
    detail::require(spec.dim == p.dim, "periodic_operator: dimension mismatch");

    const int n = spec.nodes;
    const int dim = spec.dim;
    const double h = spec.step();
    const double eta = p.eta;
    const double a = p.period;
    const double c2 = 1.0 / std::expm1(eta * a);  // 1/(e^{eta a} - 1)
    const double c1 = std::exp(eta * a) * c2;     // e^{eta a}/(e^{eta a} - 1)

    // term[j] = e^{eta(s_j - a)} (f(s_j, u_j) + eta u_j), componentwise.
    std::vector<double> term(static_cast<std::size_t>(n) * dim);
    std::vector<double> fval(static_cast<std::size_t>(dim));
    for (int j = 0; j < n; ++j) {
        double s = spec.node(j);
        p.f(s, u.node_values(j), std::span<double>(fval));
        double damp = std::exp(eta * (s - a));
        for (int c = 0; c < dim; ++c) {
            double v = fval[c] + eta * u.at(j, c);
            detail::require(std::isfinite(v), "periodic_operator: f produced non-finite value");
            term[static_cast<std::size_t>(j) * dim + c] = damp * v;
        }
    }

    std::vector<double> prefix(term.size());
    std::vector<double> suffix(term.size());
    for (int c = 0; c < dim; ++c) {
        prefix[c] = term[c];
        for (int j = 1; j < n; ++j)
            prefix[static_cast<std::size_t>(j) * dim + c] =
                prefix[static_cast<std::size_t>(j - 1) * dim + c] +
                term[static_cast<std::size_t>(j) * dim + c];
        suffix[static_cast<std::size_t>(n - 1) * dim + c] =
            term[static_cast<std::size_t>(n - 1) * dim + c];
        for (int j = n - 2; j >= 0; --j)
            suffix[static_cast<std::size_t>(j) * dim + c] =
                suffix[static_cast<std::size_t>(j + 1) * dim + c] +
                term[static_cast<std::size_t>(j) * dim + c];
    }

    GridFunction out(spec);
    for (int i = 0; i < n; ++i) {
        double lift = std::exp(eta * (a - spec.node(i)));
        for (int c = 0; c < dim; ++c) {
            std::size_t ic = static_cast<std::size_t>(i) * dim + c;
            // Branch values differ at s = t: the [0,t] piece uses the lifted
            // branch (factor c1), the [t,a] piece the plain one (factor c2).
            double piece1 =
                i == 0 ? 0.0 : h * (prefix[ic] - 0.5 * (term[c] + term[ic]));
            double piece2 =
                i == n - 1
                    ? 0.0
                    : h * (suffix[ic] -
                           0.5 * (term[ic] +
                                  term[static_cast<std::size_t>(n - 1) * dim + c]));
            out.at(i, c) = lift * (c1 * piece1 + c2 * piece2);
        }
    }
    return out;
}

/// Solves u = T u from start (default u ≡ 0) on an `nodes`-point grid under
/// the periodic sup-metric.
inline FixpointResult<GridFunction> solve_periodic(const PeriodicProblem& p, int nodes,
                                                   const SolverConfig& cfg,
                                                   const GridFunction* start = nullptr) {
    p.validate();
    GridSpec spec{0.0, p.period, nodes, p.dim};
    spec.validate();
    ComplexMetric metric = periodic_metric(p.period, nodes, p.dim);
    auto op = [&p](const GridFunction& u) { return periodic_operator(u, p); };
    auto dist = [&metric](const GridFunction& u, const GridFunction& v) {
        return metric(u, v);
    };
    GridFunction x0 = start ? *start : GridFunction(spec);
    detail::require(x0.spec() == spec, "solve_periodic: start grid mismatch");
    return iterate_single(op, x0, dist, cfg);
}

/// Defect of u as a periodic solution of u' = f(t,u): max over interior nodes
/// of the centered-difference residual (sup over components) plus the
/// periodicity gap |u(0) - u(a)|.
inline double residual_periodic(const GridFunction& u, const PeriodicProblem& p) {
    p.validate();
    const GridSpec& spec = u.spec();
    detail::require(spec.a == 0.0 && spec.b == p.period && spec.dim == p.dim,
                    "residual_periodic: grid/problem mismatch");
    const int n = spec.nodes;
    const double h = spec.step();
    std::vector<double> fval(static_cast<std::size_t>(spec.dim));
    double worst = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
        p.f(spec.node(i), u.node_values(i), std::span<double>(fval));
        for (int c = 0; c < spec.dim; ++c) {
            double du = (u.at(i + 1, c) - u.at(i - 1, c)) / (2.0 * h);
            worst = std::max(worst, std::fabs(du - fval[c]));
        }
    }
    double gap = 0.0;
    for (int c = 0; c < spec.dim; ++c)
        gap = std::max(gap, std::fabs(u.at(0, c) - u.at(n - 1, c)));
    return worst + gap;
}

/// Largest sampled ratio ||f(t,u)+eta u - f(t,v)-eta v|| / ||u-v|| (sup
/// norms).  The periodic solver contracts when this stays <= 1, i.e. at rate
/// <= 1/eta; use it to vet an eta choice numerically.
inline double periodic_lipschitz_margin(const PeriodicProblem& p, long long samples,
                                        std::uint64_t seed) {
    p.validate();
    detail::require(samples >= 1, "periodic_lipschitz_margin: samples must be >= 1");
    SampleRng rng(seed);
    std::vector<double> u(static_cast<std::size_t>(p.dim));
    std::vector<double> v(static_cast<std::size_t>(p.dim));
    std::vector<double> fu(u.size()), fv(v.size());
    double worst = 0.0;
    for (long long k = 0; k < samples; ++k) {
        double t = rng.uniform(0.0, p.period);
        double gap = 0.0;
        for (std::size_t c = 0; c < u.size(); ++c) {
            u[c] = rng.uniform(-10.0, 10.0);
            v[c] = rng.uniform(-10.0, 10.0);
            gap = std::max(gap, std::fabs(u[c] - v[c]));
        }
        if (gap < 1e-9) continue;
        p.f(t, u, std::span<double>(fu));
        p.f(t, v, std::span<double>(fv));
        double diff = 0.0;
        for (std::size_t c = 0; c < u.size(); ++c)
            diff = std::max(diff,
                            std::fabs(fu[c] + p.eta * u[c] - (fv[c] + p.eta * v[c])));
        worst = std::max(worst, diff / gap);
    }
    return worst;
}

}  // namespace cvfix
