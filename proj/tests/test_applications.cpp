#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <span>
#include <vector>

#include "cvfix/applications.hpp"
#include "oracles.hpp"

using namespace cvfix;

namespace {

/// Direct O(nodes^2) evaluation of the periodic integral operator: the kernel
/// is evaluated pointwise per (t, s) pair, with the same split-trapezoid
/// convention but none of the prefix-sum structure of the library version.
GridFunction naive_periodic_operator(const GridFunction& u, const PeriodicProblem& p) {
    const GridSpec& spec = u.spec();
    const int n = spec.nodes;
    const int dim = p.dim;
    const double h = spec.step();
    const double a = p.period;
    const double eta = p.eta;
    const double denom = std::expm1(eta * a);

    std::vector<double> g(static_cast<std::size_t>(n) * dim);
    std::vector<double> fv(static_cast<std::size_t>(dim));
    for (int j = 0; j < n; ++j) {
        p.f(spec.node(j), u.node_values(j), std::span<double>(fv));
        for (int c = 0; c < dim; ++c)
            g[static_cast<std::size_t>(j) * dim + c] = fv[c] + eta * u.at(j, c);
    }

    GridFunction out(spec);
    for (int i = 0; i < n; ++i) {
        double t = spec.node(i);
        for (int c = 0; c < dim; ++c) {
            auto weighted = [&](int j, double shift) {
                return std::exp(eta * (shift + spec.node(j) - t)) / denom *
                       g[static_cast<std::size_t>(j) * dim + c];
            };
            double lower = 0.0;
            if (i > 0) {
                lower = 0.5 * (weighted(0, a) + weighted(i, a));
                for (int j = 1; j < i; ++j) lower += weighted(j, a);
                lower *= h;
            }
            double upper = 0.0;
            if (i < n - 1) {
                upper = 0.5 * (weighted(i, 0.0) + weighted(n - 1, 0.0));
                for (int j = i + 1; j < n - 1; ++j) upper += weighted(j, 0.0);
                upper *= h;
            }
            out.at(i, c) = lower + upper;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("volterra contraction estimate") {
    CHECK(volterra_lambda(1.0, 2.0) == std::exp(-1.0));
    CHECK(volterra_lambda(1.0, 1.5) == 0.5 * std::exp(-1.0));
    CHECK_THROWS_AS(volterra_lambda(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(volterra_lambda(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("volterra metric carries the interval-derived scale") {
    ComplexMetric m = volterra_metric(1.0, 2.0, 101);
    CHECK(m.scale().re == 1.0);
    CHECK(m.scale().im == 2.0);
    CHECK(m.domain().grid.nodes == 101);
    CHECK(check_metric_axioms(m, 300, 21).passed);
    CHECK_THROWS_AS(volterra_metric(0.0, 1.0, 101), std::invalid_argument);
}

TEST_CASE("volterra operator quadrature") {
    GridSpec spec{1.0, 2.0, 2001, 1};

    SECTION("left endpoint is pinned to 2 and the zero input integrates the cubic") {
        GridFunction zero(spec, 0.0);
        GridFunction out = volterra_operator(zero, 1.0, 2.0);
        CHECK(out.at(0) == 2.0);
        // Closed form: 2 + integral of s^3 e^{1-2s} over [1,2].
        double full = oracle::volterra_antiderivative(2.0) -
                      oracle::volterra_antiderivative(1.0);
        CHECK(full == Catch::Approx(0.43185344101738299).margin(1e-15));
        CHECK(out.at(2000) == Catch::Approx(2.0 + full).margin(1e-7));
        double half = oracle::volterra_antiderivative(1.5) -
                      oracle::volterra_antiderivative(1.0);
        CHECK(out.at(1000) == Catch::Approx(2.0 + half).margin(1e-7));
    }

    SECTION("the integrand cancels exactly for x = -s^3") {
        GridFunction x(spec);
        for (int i = 0; i < x.nodes(); ++i) {
            double s = x.node(i);
            x.at(i) = -(s * s * s);
        }
        GridFunction out = volterra_operator(x, 1.0, 2.0);
        CHECK(sup_diff(out, GridFunction::constant(spec, 2.0)) == 0.0);
    }

    SECTION("geometry mismatches are rejected") {
        GridFunction wrong_interval(GridSpec{0.0, 1.0, 101, 1});
        CHECK_THROWS_AS(volterra_operator(wrong_interval, 1.0, 2.0),
                        std::invalid_argument);
        GridFunction wrong_dim(GridSpec{1.0, 2.0, 101, 2});
        CHECK_THROWS_AS(volterra_operator(wrong_dim, 1.0, 2.0), std::invalid_argument);
    }
}

TEST_CASE("volterra equation solves against an independent ODE reference") {
    SolverConfig cfg{1e-10, 200, 1};
    ContractiveSolveResult<GridFunction> r = solve_integral_equation(1.0, 2.0, 2001, cfg);
    REQUIRE(r.fixpoint.converged);
    CHECK(r.lambda == std::exp(-1.0));
    CHECK(r.contractive);
    CHECK(r.fixpoint.iterations() <= 60);

    const GridFunction& x = r.fixpoint.point;
    CHECK(x.at(0) == 2.0);
    // The fixed point solves x' = (x + t^3) e^{1-2t}, x(1) = 2; compare the
    // right endpoint against RK4 with h = 1e-5.
    CHECK(x.at(2000) == Catch::Approx(oracle::volterra_reference(1.0, 2.0)).margin(1e-5));
    CHECK(x.at(1000) == Catch::Approx(oracle::volterra_reference(1.0, 1.5)).margin(1e-5));

    SECTION("a non-contractive interval is reported, not hidden") {
        ContractiveSolveResult<GridFunction> loose =
            solve_integral_equation(0.1, 1.2, 101, SolverConfig{1e-8, 50, 1});
        CHECK_FALSE(loose.contractive);
        CHECK(loose.lambda == Catch::Approx(1.1 * std::exp(0.8)).margin(1e-12));
    }
}

TEST_CASE("periodic Green kernel") {
    SECTION("closed-form values") {
        // Margin covers the one-ulp gap between the compiler's constant-folded
        // exp/expm1 and the runtime libm calls inside green_kernel.
        CHECK(green_kernel(0.0, 0.0, 1.0, 1.0) ==
              Catch::Approx(std::exp(1.0) / std::expm1(1.0)).margin(1e-15));
        // 1.58197670686932645 to full precision.
        CHECK(green_kernel(0.0, 0.0, 1.0, 1.0) ==
              Catch::Approx(1.5819767068693265).margin(1e-14));
    }

    SECTION("the kernel jumps by exactly one across s = t") {
        double below = green_kernel(0.5, 0.5, 1.0, 2.0);       // s <= t branch
        double above = green_kernel(0.5, 0.5 + 1e-12, 1.0, 2.0);  // s > t branch
        CHECK(below == Catch::Approx(std::exp(2.0) / std::expm1(2.0)).margin(1e-14));
        CHECK(below - above == Catch::Approx(1.0).margin(1e-6));
    }

    SECTION("domain is validated") {
        CHECK_THROWS_AS(green_kernel(1.5, 0.0, 1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(green_kernel(0.5, -0.1, 1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(green_kernel(0.0, 0.0, 1.0, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(green_kernel(0.0, 0.0, -1.0, 1.0), std::invalid_argument);
    }
}

TEST_CASE("kernel mass equals 1/eta up to quadrature error") {
    CHECK(kernel_mass(0.5, 1.0, 2.0, 2001) == Catch::Approx(0.5).margin(1e-6));
    CHECK(kernel_mass(0.3, 2.0, 1.5, 2001) == Catch::Approx(1.0 / 1.5).margin(1e-6));

    SECTION("endpoints see the same single-branch integral") {
        double at0 = kernel_mass(0.0, 1.0, 2.0, 2001);
        double at_a = kernel_mass(1.0, 1.0, 2.0, 2001);
        CHECK(at0 == Catch::Approx(at_a).margin(1e-12));
    }

    SECTION("refinement shrinks the error") {
        double coarse = std::fabs(kernel_mass(0.4, 1.0, 2.0, 501) - 0.5);
        double fine = std::fabs(kernel_mass(0.4, 1.0, 2.0, 1001) - 0.5);
        CHECK(fine < coarse);
    }

    SECTION("domain is validated") {
        CHECK_THROWS_AS(kernel_mass(1.5, 1.0, 2.0, 101), std::invalid_argument);
        CHECK_THROWS_AS(kernel_mass(0.5, 1.0, 2.0, 2), std::invalid_argument);
    }
}

TEST_CASE("periodic problem validation") {
    CHECK(PeriodicProblem::linear_drift().name == "example32");
    CHECK(PeriodicProblem::log_decay().period == 2.0);
    CHECK_THROWS_AS(PeriodicProblem::linear_drift(1.0), std::invalid_argument);
    CHECK_THROWS_AS(PeriodicProblem::log_decay(0.5), std::invalid_argument);
    CHECK_THROWS_AS(PeriodicProblem::zero_rhs(2.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(PeriodicProblem::custom("nofn", nullptr, 2.0, 1.0),
                    std::invalid_argument);

    ComplexMetric m = periodic_metric(1.0, 101, 1);
    CHECK(m.scale().re == 1.0);
    CHECK(m.scale().im == 1.0);
}

TEST_CASE("periodic operator matches a direct O(n^2) evaluation") {
    PeriodicProblem p = PeriodicProblem::linear_drift(1.5, 1.0, 2);
    GridSpec spec{0.0, 1.0, 201, 2};
    SampleRng rng(31);
    GridFunction u = random_grid_function(rng, spec);

    GridFunction fast = periodic_operator(u, p);
    GridFunction slow = naive_periodic_operator(u, p);
    CHECK(sup_diff(fast, slow) <= 1e-10);
}

TEST_CASE("periodic operator against adaptive Simpson on the zero input") {
    PeriodicProblem p = PeriodicProblem::linear_drift(1.5, 1.0, 1);
    GridSpec spec{0.0, 1.0, 2001, 1};
    GridFunction out = periodic_operator(GridFunction(spec), p);

    // f(s, 0) = s, so (T 0)(t) integrates H(t,s)*s; reference values from an
    // independent adaptive Simpson rule.
    CHECK(out.at(0) == Catch::Approx(0.41370016674813437).margin(1e-6));
    CHECK(out.at(500) == Catch::Approx(0.31201581314712901).margin(1e-6));
    CHECK(out.at(1000) == Catch::Approx(0.2942477006312057).margin(1e-6));
    CHECK(out.at(2000) == Catch::Approx(0.41370016674813437).margin(1e-6));
    for (int i : {0, 500, 1000, 2000})
        CHECK(out.at(i) ==
              Catch::Approx(oracle::linear_drift_op_zero(spec.node(i), 1.0, 1.5))
                  .margin(1e-6));

    SECTION("the image is periodic to rounding error") {
        CHECK(std::fabs(out.at(0) - out.at(2000)) <= 1e-12);
    }

    SECTION("geometry and finiteness are enforced") {
        GridFunction wrong(GridSpec{0.0, 2.0, 101, 1});
        CHECK_THROWS_AS(periodic_operator(wrong, p), std::invalid_argument);
        GridFunction wrong_dim(GridSpec{0.0, 1.0, 101, 2});
        CHECK_THROWS_AS(periodic_operator(wrong_dim, p), std::invalid_argument);

        PeriodicProblem bad = PeriodicProblem::custom(
            "overflow",
            [](double, std::span<const double>, std::span<double> out) {
                for (double& v : out) v = std::exp(800.0);
            },
            2.0, 1.0);
        CHECK_THROWS_AS(periodic_operator(GridFunction(GridSpec{0.0, 1.0, 101, 1}), bad),
                        std::invalid_argument);
    }
}

TEST_CASE("periodic solver reproduces the closed-form drift solution") {
    PeriodicProblem p = PeriodicProblem::linear_drift(1.5, 1.0, 1);
    SolverConfig cfg{1e-10, 200, 1};
    FixpointResult<GridFunction> r = solve_periodic(p, 2001, cfg);
    REQUIRE(r.converged);
    CHECK(r.iterations() <= 100);

    double worst = 0.0;
    for (int i = 0; i < r.point.nodes(); ++i)
        worst = std::max(worst,
                         std::fabs(r.point.at(i) -
                                   oracle::linear_drift_exact(r.point.node(i), 1.0)));
    CHECK(worst <= 1e-5);
    CHECK(residual_periodic(r.point, p) <= 1e-4);

    SECTION("vector-valued components decouple into identical copies") {
        PeriodicProblem p3 = PeriodicProblem::linear_drift(1.5, 1.0, 3);
        FixpointResult<GridFunction> r3 = solve_periodic(p3, 201, cfg);
        REQUIRE(r3.converged);
        for (int i : {0, 50, 100, 200}) {
            CHECK(r3.point.at(i, 0) == r3.point.at(i, 1));
            CHECK(r3.point.at(i, 0) == r3.point.at(i, 2));
        }
    }
}

TEST_CASE("log-decay problem contracts to the zero solution") {
    PeriodicProblem p = PeriodicProblem::log_decay(2.0, 1);
    SolverConfig cfg{1e-10, 200, 1};

    SECTION("the zero start is already the fixed point") {
        FixpointResult<GridFunction> r = solve_periodic(p, 501, cfg);
        REQUIRE(r.converged);
        CHECK(r.iterations() == 1);
        CHECK(max_abs_component(r.point) == 0.0);
    }

    SECTION("a nonzero start is pulled in") {
        GridSpec spec{0.0, 2.0, 501, 1};
        GridFunction start(spec, 1.0);
        FixpointResult<GridFunction> r = solve_periodic(p, 501, cfg, &start);
        REQUIRE(r.converged);
        CHECK(r.iterations() <= 40);
        CHECK(max_abs_component(r.point) <= 1e-8);
    }
}

TEST_CASE("sampled Lipschitz margins certify the eta choices") {
    // f + eta id has slope eta - 1 = 0.5 for the drift problem ...
    double drift = periodic_lipschitz_margin(PeriodicProblem::linear_drift(1.5, 1.0, 1),
                                             20000, 7);
    CHECK(drift == Catch::Approx(0.5).margin(1e-9));
    // ... and slope |eta - ln(10+t^2)| <= ln(14) - 2 for the log-decay one.
    double decay = periodic_lipschitz_margin(PeriodicProblem::log_decay(2.0, 1), 20000, 7);
    CHECK(decay == Catch::Approx(0.63903575244376798).margin(1e-9));
    CHECK(decay <= std::log(14.0) - 2.0 + 1e-9);
    // Both stay below 1: the periodic operator contracts at rate margin/eta.
    CHECK(drift < 1.0);
    CHECK(decay < 1.0);
}
