// Acceptance gate: eleven end-to-end criteria, one [PASS]/[FAIL] line each,
// nonzero exit when any criterion fails.  Every tolerance is pinned here, next
// to the criterion that owns it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cvfix/cvfix.hpp"
#include "oracles.hpp"

using namespace cvfix;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

int g_failures = 0;

void run(const char* id, const char* title, const std::function<Outcome()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = fn();
    } catch (const std::exception& e) {
        outcome = {false, std::string("exception: ") + e.what()};
    }
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    if (!outcome.ok) ++g_failures;
    std::printf("[%s] %s %s (%s; %.1f ms)\n", outcome.ok ? "PASS" : "FAIL", id, title,
                outcome.detail.c_str(), ms);
}

std::string witness_text(const CheckReport& r) {
    if (!r.witness) return "no witness";
    return r.witness->clause;
}

const MapFn<ComplexScalar> kHalfshift = [](const ComplexScalar& z) {
    return (z + ComplexScalar{0.0, 1.0}) / 2.0;
};
const MapFn<ComplexScalar> kThirdshift = [](const ComplexScalar& z) {
    return (z + ComplexScalar{0.0, 2.0}) / 3.0;
};

auto d1_fn() {
    return [m = ComplexMetric::d1()](const ComplexScalar& a, const ComplexScalar& b) {
        return m(a, b);
    };
}

// C01: the halfshift pair iteration reaches its fixed point i at the
// geometric rate, within budget and fast.
Outcome c01() {
    constexpr double kTol = 1e-10;        // stopping tolerance
    constexpr double kFinalGap = 1e-9;    // |limit - i| bound
    constexpr double kRateSlack = 1e-9;   // per-step factor slack on 2^-n
    constexpr int kMaxApplications = 40;  // 2^-34 < 1e-10 needs 34
    constexpr double kMaxMillis = 10.0;

    auto t0 = std::chrono::steady_clock::now();
    FixpointResult<ComplexScalar> r = iterate_pair(
        kHalfshift, kHalfshift, ComplexScalar{0.0, 0.0}, d1_fn(), SolverConfig{kTol, 1000, 1});
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();

    const ComplexScalar star{0.0, 1.0};
    if (!r.converged) return {false, "did not converge"};
    if (r.iterations() > kMaxApplications)
        return {false, "needed " + std::to_string(r.iterations()) + " applications"};
    double gap = (r.point - star).modulus();
    if (gap > kFinalGap) return {false, "final gap " + detail::format_double(gap)};
    for (std::size_t n = 0; n < r.trace.points.size(); ++n) {
        double bound = std::pow(0.5, static_cast<double>(n)) * (1.0 + kRateSlack);
        if ((r.trace.points[n] - star).modulus() > bound)
            return {false, "rate violated at step " + std::to_string(n)};
    }
    if (ms > kMaxMillis) return {false, "took " + detail::format_double(ms) + " ms"};
    std::ostringstream os;
    os << "iterations=" << r.iterations() << " gap=" << gap;
    return {true, os.str()};
}

// C02: the Volterra solve on [1,2] agrees with an independent RK4 reference
// at every grid node.
Outcome c02() {
    constexpr int kNodes = 2001;
    constexpr double kTol = 1e-10;       // stopping tolerance
    constexpr double kSupError = 1e-5;   // vs RK4 with h = 1e-5
    constexpr double kLambdaTol = 1e-12; // contraction estimate vs e^{-1}
    constexpr double kMaxSeconds = 10.0;

    auto t0 = std::chrono::steady_clock::now();
    ContractiveSolveResult<GridFunction> r =
        solve_integral_equation(1.0, 2.0, kNodes, SolverConfig{kTol, 200, 1});
    if (!r.fixpoint.converged) return {false, "did not converge"};
    if (std::fabs(r.lambda - std::exp(-1.0)) > kLambdaTol)
        return {false, "lambda " + detail::format_double(r.lambda)};
    if (!r.contractive) return {false, "estimate not contractive"};

    // RK4 sweep of x' = (x + t^3) e^{1-2t}, x(1) = 2, sampled at the nodes.
    const int kSteps = 100000;  // h = 1e-5; divisible by nodes-1
    const double h = 1.0 / kSteps;
    const int per = kSteps / (kNodes - 1);
    auto f = [](double t, double x) { return (x + t * t * t) * std::exp(1.0 - 2.0 * t); };
    std::vector<double> ref(kNodes);
    double t = 1.0, x = 2.0;
    ref[0] = x;
    for (int k = 1; k <= kSteps; ++k) {
        double k1 = f(t, x);
        double k2 = f(t + h / 2, x + h / 2 * k1);
        double k3 = f(t + h / 2, x + h / 2 * k2);
        double k4 = f(t + h, x + h * k3);
        x += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        t += h;
        if (k % per == 0) ref[k / per] = x;
    }
    double sup = 0.0;
    for (int i = 0; i < kNodes; ++i)
        sup = std::max(sup, std::fabs(r.fixpoint.point.at(i) - ref[i]));
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                      .count();
    if (sup > kSupError) return {false, "sup error " + detail::format_double(sup)};
    if (secs > kMaxSeconds) return {false, "took " + detail::format_double(secs) + " s"};
    std::ostringstream os;
    os << "sup error=" << sup << " iterations=" << r.fixpoint.iterations();
    return {true, os.str()};
}

// C03: the periodic drift problem reproduces its closed-form solution and
// leaves a small ODE defect.
Outcome c03() {
    constexpr int kNodes = 2001;
    constexpr double kTol = 1e-10;      // stopping tolerance
    constexpr double kSupError = 1e-5;  // vs closed form at the nodes
    constexpr double kDefect = 1e-4;    // centered-difference + periodicity

    PeriodicProblem p = PeriodicProblem::linear_drift(1.5, 1.0, 1);
    FixpointResult<GridFunction> r = solve_periodic(p, kNodes, SolverConfig{kTol, 200, 1});
    if (!r.converged) return {false, "did not converge"};
    double sup = 0.0;
    for (int i = 0; i < kNodes; ++i)
        sup = std::max(sup, std::fabs(r.point.at(i) -
                                      oracle::linear_drift_exact(r.point.node(i), 1.0)));
    if (sup > kSupError) return {false, "sup error " + detail::format_double(sup)};
    double defect = residual_periodic(r.point, p);
    if (defect > kDefect) return {false, "defect " + detail::format_double(defect)};
    std::ostringstream os;
    os << "sup error=" << sup << " defect=" << defect;
    return {true, os.str()};
}

// C04: the Green kernel mass matches 1/eta across etas, periods and sampled
// evaluation points, and the quadrature error scales as h^2.
Outcome c04() {
    constexpr int kNodes = 2001;
    constexpr double kMassTol = 1e-6;
    constexpr double kRatioLo = 3.5;  // doubling the grid should divide the
    constexpr double kRatioHi = 4.5;  // error by ~4 (second-order rule)

    SampleRng rng(4242);
    double worst = 0.0;
    for (double eta : {1.0, 1.5, 2.0, 5.0})
        for (double a : {1.0, 2.0}) {
            for (int k = 0; k < 10; ++k) {
                double t = rng.uniform(0.0, a);
                double err = std::fabs(kernel_mass(t, a, eta, kNodes) - 1.0 / eta);
                worst = std::max(worst, err);
                if (err > kMassTol) {
                    std::ostringstream os;
                    os << "mass error " << err << " at t=" << t << " a=" << a
                       << " eta=" << eta;
                    return {false, os.str()};
                }
            }
            double coarse = std::fabs(kernel_mass(0.37 * a, a, eta, kNodes) - 1.0 / eta);
            double fine =
                std::fabs(kernel_mass(0.37 * a, a, eta, 2 * kNodes - 1) - 1.0 / eta);
            double ratio = coarse / fine;
            if (ratio < kRatioLo || ratio > kRatioHi) {
                std::ostringstream os;
                os << "refinement ratio " << ratio << " at a=" << a << " eta=" << eta;
                return {false, os.str()};
            }
        }
    std::ostringstream os;
    os << "worst mass error=" << worst;
    return {true, os.str()};
}

// C05: the log-decay problem contracts to the zero solution from both the
// zero start and a displaced one.
Outcome c05() {
    constexpr int kNodes = 501;
    constexpr double kTol = 1e-10;
    constexpr double kSupNorm = 1e-8;

    PeriodicProblem p = PeriodicProblem::log_decay(2.0, 1);
    SolverConfig cfg{kTol, 200, 1};
    FixpointResult<GridFunction> from_zero = solve_periodic(p, kNodes, cfg);
    if (!from_zero.converged) return {false, "zero start did not converge"};
    if (max_abs_component(from_zero.point) > kSupNorm)
        return {false, "zero start limit not zero"};

    GridFunction ones(GridSpec{0.0, 2.0, kNodes, 1}, 1.0);
    FixpointResult<GridFunction> from_ones = solve_periodic(p, kNodes, cfg, &ones);
    if (!from_ones.converged) return {false, "displaced start did not converge"};
    double sup = max_abs_component(from_ones.point);
    if (sup > kSupNorm) return {false, "displaced limit " + detail::format_double(sup)};
    std::ostringstream os;
    os << "displaced limit sup=" << sup
       << " iterations=" << from_ones.iterations();
    return {true, os.str()};
}

// C06: the metric axiom checker accepts all shipped metrics and pins a
// counterexample witness on a broken candidate.
Outcome c06() {
    constexpr long long kComplexSamples = 10000;
    constexpr long long kGridSamples = 2000;
    constexpr std::uint64_t kSeed = 42;

    struct Named {
        const char* name;
        ComplexMetric metric;
        long long samples;
    };
    const Named metrics[] = {
        {"d1", ComplexMetric::d1(), kComplexSamples},
        {"d2(0.3)", ComplexMetric::d2(0.3), kComplexSamples},
        {"d3", ComplexMetric::d3(), kComplexSamples},
        {"volterra(1,2)", volterra_metric(1.0, 2.0, 101), kGridSamples},
        {"periodic(1)", periodic_metric(1.0, 101, 1), kGridSamples},
    };
    for (const Named& m : metrics) {
        CheckReport r = check_metric_axioms(m.metric, m.samples, kSeed);
        if (!r.passed)
            return {false, std::string(m.name) + " rejected: " + witness_text(r)};
    }

    auto broken = [](const ComplexScalar& x, const ComplexScalar& y) {
        return ComplexScalar{x.modulus() - y.modulus(), 0.0};
    };
    CheckReport r = check_metric_axioms(broken, kComplexSamples, kSeed);
    if (r.passed) return {false, "broken candidate was accepted"};
    if (!r.witness || r.witness->clause.empty() || r.witness->detail.empty())
        return {false, "broken candidate lacks a witness"};
    return {true, "5 metrics accepted; broken candidate rejected at " +
                      witness_text(r)};
}

// C07: the simulation-function axiom checker accepts the three genuine
// instances and rejects the plain difference at the limit clause.
Outcome c07() {
    constexpr long long kSamples = 10000;
    constexpr int kTail = 1000;
    constexpr std::uint64_t kSeed = 42;

    struct Named {
        const char* name;
        SimulationFn fn;
    };
    const Named fns[] = {
        {"xi1(0.5)", SimulationFn::linear(0.5)},
        {"xi2(0.5,id)", SimulationFn::psi_phi(ConeMap::scale(0.5), ConeMap::identity())},
        {"xi3", SimulationFn::imag_penalty()},
    };
    for (const Named& f : fns) {
        CheckReport r = check_simulation_axioms(f.fn, kSamples, kTail, kSeed);
        if (!r.passed)
            return {false, std::string(f.name) + " rejected: " + witness_text(r)};
    }
    CheckReport diff =
        check_simulation_axioms(SimulationFn::difference(), kSamples, kTail, kSeed);
    if (diff.passed) return {false, "difference was accepted"};
    if (witness_text(diff) != "(iii) limit condition")
        return {false, "difference rejected at " + witness_text(diff)};
    return {true, "3 instances accepted; difference rejected at the limit clause"};
}

// C08: the contraction checkers accept the halfshift under all three variants
// and reject doubling with a witness.
Outcome c08() {
    constexpr long long kSamples = 10000;
    constexpr std::uint64_t kSeed = 42;

    ContractionSpec plain;
    plain.xi = SimulationFn::linear(0.6);
    if (!check_contraction(plain, kHalfshift, kHalfshift, kSamples, kSeed).passed)
        return {false, "plain variant rejected the halfshift"};

    CheckReport doubled = check_contraction(
        plain, [](const ComplexScalar& z) { return 2.0 * z; },
        [](const ComplexScalar& z) { return 2.0 * z; }, kSamples, kSeed);
    if (doubled.passed) return {false, "doubling was accepted"};
    if (!doubled.witness) return {false, "doubling lacks a witness"};

    // M-type: lambda_xi * lambda_M must clear the halfshift's 1/2 rate, so
    // 0.9 * 0.6 = 0.54 works where 0.6 * 0.6 would genuinely fail.
    ContractionSpec m_type;
    m_type.variant = ContractionVariant::m_type;
    m_type.lambda = 0.6;
    m_type.xi = SimulationFn::linear(0.9);
    if (!check_contraction(m_type, kHalfshift, kHalfshift, kSamples, kSeed).passed)
        return {false, "M-type rejected the halfshift"};

    ContractionSpec n_type;
    n_type.variant = ContractionVariant::n_type;
    n_type.xi = SimulationFn::linear(0.6);
    if (!check_contraction(n_type, kHalfshift, kHalfshift, kSamples, kSeed).passed)
        return {false, "N-type rejected the halfshift"};

    return {true, "halfshift accepted by plain/M/N; doubling rejected at " +
                      doubled.witness->clause};
}

// C09: delta sequences from the three convergence runs are monotone
// non-increasing within rounding slack.
Outcome c09() {
    constexpr double kSlack = 1e-12;

    auto monotone = [](const std::vector<double>& deltas) {
        for (std::size_t k = 1; k < deltas.size(); ++k)
            if (deltas[k] > deltas[k - 1] + kSlack) return false;
        return true;
    };

    FixpointResult<ComplexScalar> shift = iterate_pair(
        kHalfshift, kHalfshift, ComplexScalar{0.0, 0.0}, d1_fn(), SolverConfig{});
    if (!monotone(shift.trace.deltas)) return {false, "halfshift deltas not monotone"};

    ContractiveSolveResult<GridFunction> volterra =
        solve_integral_equation(1.0, 2.0, 501, SolverConfig{});
    if (!monotone(volterra.fixpoint.trace.deltas))
        return {false, "volterra deltas not monotone"};

    FixpointResult<GridFunction> periodic = solve_periodic(
        PeriodicProblem::linear_drift(1.5, 1.0, 1), 501, SolverConfig{});
    if (!monotone(periodic.trace.deltas)) return {false, "periodic deltas not monotone"};

    std::ostringstream os;
    os << "3 delta sequences monotone (lengths " << shift.trace.deltas.size() << ", "
       << volterra.fixpoint.trace.deltas.size() << ", " << periodic.trace.deltas.size()
       << ")";
    return {true, os.str()};
}

// C10: the uniqueness probe agrees across 32 seeded starts for the
// contraction and flags the identity's start-dependent limits.
Outcome c10() {
    constexpr double kTol = 1e-10;  // probe gate is 10*kTol
    constexpr int kStarts = 32;
    constexpr std::uint64_t kSeed = 10;

    SampleRng rng(kSeed);
    std::vector<ComplexScalar> starts;
    for (int k = 0; k < kStarts; ++k) starts.push_back(rng.complex_in_box());
    SolverConfig cfg{kTol, 1000, 1};

    CheckReport agree = uniqueness_probe(kHalfshift, kHalfshift, starts, d1_fn(), cfg);
    if (!agree.passed) return {false, "contraction probe failed: " + witness_text(agree)};

    std::vector<ComplexScalar> two{ComplexScalar{0.0, 0.0}, ComplexScalar{1.0, 1.0}};
    const MapFn<ComplexScalar> identity = [](const ComplexScalar& z) { return z; };
    CheckReport spread = uniqueness_probe(identity, identity, two, d1_fn(), cfg);
    if (spread.passed) return {false, "identity probe passed unexpectedly"};
    if (witness_text(spread) != "limit agreement")
        return {false, "identity probe failed at " + witness_text(spread)};
    return {true, "32 starts agree for the contraction; identity flagged"};
}

// C11: the family runner drives commuting families to a common fixed point
// with per-member residuals, and its advisory flags non-commuting input.
Outcome c11() {
    constexpr double kResidual = 1e-8;

    FamilyFixpointResult<ComplexScalar> out =
        family_fixed_point({kHalfshift, kThirdshift}, {kThirdshift},
                           ComplexScalar{5.0, -5.0}, ComplexMetric::d1(), SolverConfig{});
    if (!out.result.converged) return {false, "family iteration did not converge"};
    for (double r : out.residual_s)
        if (r > kResidual) return {false, "S residual " + detail::format_double(r)};
    for (double r : out.residual_t)
        if (r > kResidual) return {false, "T residual " + detail::format_double(r)};
    if (!out.commuting || !out.commuting->passed)
        return {false, "commuting advisory rejected a commuting family"};

    CheckReport clash = check_pairwise_commuting(
        {[](const ComplexScalar& z) { return z * z; }},
        {[](const ComplexScalar& z) { return z + ComplexScalar{1.0, 0.0}; }}, 256, 1);
    if (clash.passed) return {false, "non-commuting family was accepted"};

    std::ostringstream os;
    os << "limit=" << format_complex(out.result.point)
       << " worst residual=" << detail::format_double(std::max(
              *std::max_element(out.residual_s.begin(), out.residual_s.end()),
              *std::max_element(out.residual_t.begin(), out.residual_t.end())));
    return {true, os.str()};
}

}  // namespace

int main() {
    run("C01", "halfshift pair converges geometrically", c01);
    run("C02", "volterra solve matches RK4 reference", c02);
    run("C03", "periodic drift matches closed form", c03);
    run("C04", "green kernel mass is 1/eta at second order", c04);
    run("C05", "log-decay contracts to zero", c05);
    run("C06", "metric axiom checker separates good from broken", c06);
    run("C07", "simulation axiom checker separates good from broken", c07);
    run("C08", "contraction checkers separate good from broken", c08);
    run("C09", "delta sequences are monotone", c09);
    run("C10", "uniqueness probe", c10);
    run("C11", "family fixed point with commuting advisory", c11);

    if (g_failures == 0)
        std::printf("acceptance: all 11 criteria passed\n");
    else
        std::printf("acceptance: %d of 11 criteria FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
