// Command-line driver for the cvfix library.
//
// Verbs: check-metric, check-simulation, check-contraction, iterate,
// solve-integral, solve-periodic, kernel-mass.  Every verb prints a JSON
// report on stdout whose config echo allows exact re-execution; reruns with
// identical flags produce byte-identical reports.
//
// Exit codes: 0 check passed / iteration converged, 1 check failed or not
// converged, 2 malformed flags or config.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "cvfix/cvfix.hpp"

namespace {

using nlohmann::ordered_json;
using namespace cvfix;

ordered_json witness_json(const CheckReport& report) {
    if (!report.witness) return nullptr;
    return ordered_json{{"clause", report.witness->clause},
                        {"detail", report.witness->detail}};
}

ordered_json check_json(const CheckReport& report) {
    return ordered_json{{"passed", report.passed},
                        {"samples_tested", report.samples_tested},
                        {"witness", witness_json(report)}};
}

template <class P>
ordered_json fixpoint_json(const FixpointResult<P>& r) {
    return ordered_json{{"converged", r.converged},
                        {"iterations", r.iterations()},
                        {"final_delta", r.final_delta()},
                        {"residual_s", r.residual_s},
                        {"residual_t", r.residual_t}};
}

void emit(const ordered_json& report) { std::cout << report.dump(2) << "\n"; }

/// Re-throws invalid_argument with the offending CLI flag prepended.
template <class Fn>
auto named(const std::string& flag, Fn&& fn) {
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(flag + ": " + e.what());
    }
}

struct CheckMetricArgs {
    std::string metric = "d1";
    long long samples = 10000;
    std::uint64_t seed = 42;
};

int run_check_metric(const CheckMetricArgs& args) {
    ComplexMetric metric = named("--metric", [&] { return parse_metric(args.metric); });
    if (!metric.cone_safe())
        std::cerr << "warning: metric " << args.metric
                  << " can leave the cone; expect axiom failures\n";
    CheckReport report = check_metric_axioms(metric, args.samples, args.seed);
    ordered_json doc{{"schema", 1},
                     {"verb", "check-metric"},
                     {"seed", args.seed},
                     {"config", {{"metric", args.metric}, {"samples", args.samples}}},
                     {"result", check_json(report)}};
    emit(doc);
    return report.passed ? 0 : 1;
}

struct CheckSimulationArgs {
    std::string xi = "xi1:lambda=0.5";
    long long samples = 10000;
    int tail = 1000;
    std::uint64_t seed = 42;
};

int run_check_simulation(const CheckSimulationArgs& args) {
    SimulationFn xi = named("--xi", [&] { return parse_simulation(args.xi); });
    CheckReport report = check_simulation_axioms(xi, args.samples, args.tail, args.seed);
    ordered_json doc{
        {"schema", 1},
        {"verb", "check-simulation"},
        {"seed", args.seed},
        {"config", {{"xi", args.xi}, {"samples", args.samples}, {"tail", args.tail}}},
        {"result", check_json(report)}};
    emit(doc);
    return report.passed ? 0 : 1;
}

struct CheckContractionArgs {
    std::string config_path;
    std::string map_s;
    std::string map_t;
    long long samples = 10000;
    std::uint64_t seed = 42;
};

int run_check_contraction(const CheckContractionArgs& args) {
    ordered_json cfg = ordered_json::object();
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw std::invalid_argument("--config: cannot open " + args.config_path);
        try {
            cfg = ordered_json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::invalid_argument("--config: " + std::string(e.what()));
        }
    }
    auto field = [&cfg](const char* key, const std::string& fallback) {
        return cfg.contains(key) ? cfg.at(key).get<std::string>() : fallback;
    };

    ContractionSpec spec;
    spec.variant = named("--config variant",
                         [&] { return parse_variant(field("variant", "plain")); });
    if (cfg.contains("lambda")) spec.lambda = cfg.at("lambda").get<double>();
    spec.xi = named("--config xi", [&] { return parse_simulation(field("xi", "xi1:lambda=0.5")); });
    spec.alpha = named("--config alpha", [&] { return parse_alpha(field("alpha", "one")); });
    spec.metric = named("--config metric", [&] { return parse_metric(field("metric", "d1")); });

    std::string map_s_text = !args.map_s.empty() ? args.map_s : field("map_s", "halfshift");
    std::string map_t_text = !args.map_t.empty() ? args.map_t : field("map_t", map_s_text);
    ComplexMap S = named("--map-s", [&] { return parse_map(map_s_text); });
    ComplexMap T = named("--map-t", [&] { return parse_map(map_t_text); });

    if (spec.variant == ContractionVariant::m_type)
        named("--config lambda", [&] {
            detail::require(0.0 < spec.lambda && spec.lambda < 1.0,
                            "m_type lambda must lie in (0,1)");
            return 0;
        });

    CheckReport report = check_contraction(spec, S, T, args.samples, args.seed);
    ordered_json doc{{"schema", 1},
                     {"verb", "check-contraction"},
                     {"seed", args.seed},
                     {"config",
                      {{"variant", field("variant", "plain")},
                       {"lambda", spec.lambda},
                       {"xi", spec.xi.describe()},
                       {"alpha", spec.alpha.name()},
                       {"metric", spec.metric.describe()},
                       {"map_s", map_s_text},
                       {"map_t", map_t_text},
                       {"samples", args.samples}}},
                     {"result", check_json(report)}};
    emit(doc);
    return report.passed ? 0 : 1;
}

struct IterateArgs {
    std::string map_s = "halfshift";
    std::string map_t;
    std::string start = "0+0i";
    std::string metric = "d1";
    double tol = 1e-10;
    int max_iter = 1000;
    int window = 1;
    std::string trace_path;
};

int run_iterate(const IterateArgs& args) {
    ComplexMap S = named("--map", [&] { return parse_map(args.map_s); });
    ComplexMap T = args.map_t.empty() ? S : named("--map-t", [&] { return parse_map(args.map_t); });
    ComplexScalar x0 = named("--start", [&] { return parse_complex(args.start); });
    ComplexMetric metric = named("--metric", [&] { return parse_metric(args.metric); });
    named("--metric", [&] {
        detail::require(metric.domain().kind == PointDomain::Kind::complex_point,
                        "iterate needs a complex-point metric");
        return 0;
    });
    SolverConfig cfg{args.tol, args.max_iter, args.window};
    named("--tol/--max-iter/--window", [&] {
        cfg.validate();
        return 0;
    });

    ordered_json config{{"map_s", args.map_s},
                        {"map_t", args.map_t.empty() ? args.map_s : args.map_t},
                        {"start", args.start},
                        {"metric", args.metric},
                        {"tol", args.tol},
                        {"max_iter", args.max_iter},
                        {"window", args.window}};
    auto dist = [&metric](const ComplexScalar& a, const ComplexScalar& b) {
        return metric(a, b);
    };

    try {
        FixpointResult<ComplexScalar> r = iterate_pair(S, T, x0, dist, cfg);
        if (!args.trace_path.empty()) {
            std::ofstream os(args.trace_path);
            if (!os) throw std::invalid_argument("--trace: cannot open " + args.trace_path);
            write_trace_csv(os, r.trace);
        }
        ordered_json result = fixpoint_json(r);
        result["point"] = format_complex(r.point);
        ordered_json doc{{"schema", 1},
                         {"verb", "iterate"},
                         {"config", config},
                         {"result", result}};
        emit(doc);
        return r.converged ? 0 : 1;
    } catch (const DivergenceErrorWith<ComplexScalar>& e) {
        if (!args.trace_path.empty()) {
            std::ofstream os(args.trace_path);
            if (os) write_trace_csv(os, e.trace());
        }
        ordered_json doc{{"schema", 1},
                         {"verb", "iterate"},
                         {"config", config},
                         {"result",
                          {{"diverged", true},
                           {"applications", e.applications()},
                           {"message", e.what()}}}};
        emit(doc);
        return 1;
    }
}

struct SolveIntegralArgs {
    double a = 1.0;
    double b = 2.0;
    int grid = 2001;
    double tol = 1e-10;
    int max_iter = 200;
    int window = 1;
    std::string output_path;
    std::string trace_path;
};

ordered_json grid_summary(const GridFunction& u) {
    return ordered_json{{"interval", {u.spec().a, u.spec().b}},
                        {"nodes", u.nodes()},
                        {"dim", u.dim()},
                        {"max_abs", max_abs_component(u)},
                        {"value_at_left", u.at(0)},
                        {"value_at_right", u.at(u.nodes() - 1)}};
}

int run_solve_integral(const SolveIntegralArgs& args) {
    SolverConfig cfg{args.tol, args.max_iter, args.window};
    ContractiveSolveResult<GridFunction> r = named("--a/--b/--grid", [&] {
        cfg.validate();
        return solve_integral_equation(args.a, args.b, args.grid, cfg);
    });
    if (!r.contractive)
        std::cerr << "warning: contraction estimate lambda=" << r.lambda
                  << " is not < 1; convergence is not guaranteed\n";
    if (!args.output_path.empty()) write_csv(args.output_path, r.fixpoint.point);
    if (!args.trace_path.empty()) {
        std::ofstream os(args.trace_path);
        if (!os) throw std::invalid_argument("--trace: cannot open " + args.trace_path);
        write_trace_csv(os, r.fixpoint.trace);
    }
    ordered_json result = fixpoint_json(r.fixpoint);
    result["lambda"] = r.lambda;
    result["contractive"] = r.contractive;
    result["solution"] = grid_summary(r.fixpoint.point);
    ordered_json doc{{"schema", 1},
                     {"verb", "solve-integral"},
                     {"config",
                      {{"a", args.a},
                       {"b", args.b},
                       {"grid", args.grid},
                       {"tol", args.tol},
                       {"max_iter", args.max_iter},
                       {"window", args.window}}},
                     {"result", result}};
    emit(doc);
    return r.fixpoint.converged ? 0 : 1;
}

struct SolvePeriodicArgs {
    std::string config_path;
    std::string f = "example32";
    double eta = 1.5;
    double period = 1.0;
    int dim = 1;
    int grid = 2001;
    double tol = 1e-10;
    int max_iter = 200;
    int window = 1;
    std::string output_path;
    std::string trace_path;
};

PeriodicProblem make_problem(const std::string& f, double eta, double period, int dim) {
    if (f == "example32") return PeriodicProblem::linear_drift(eta, period, dim);
    if (f == "example33") {
        detail::require(period == 2.0, "example33 is posed on [0,2] (use a=2)");
        return PeriodicProblem::log_decay(eta, dim);
    }
    if (f == "zero") return PeriodicProblem::zero_rhs(eta, period, dim);
    throw std::invalid_argument("unknown problem function '" + f +
                                "' (expected example32, example33 or zero)");
}

int run_solve_periodic(SolvePeriodicArgs args, const CLI::App* cmd) {
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw std::invalid_argument("--config: cannot open " + args.config_path);
        ordered_json cfg;
        try {
            cfg = ordered_json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::invalid_argument("--config: " + std::string(e.what()));
        }
        if (cfg.contains("problem") && cfg.at("problem").get<std::string>() != "periodic")
            throw std::invalid_argument("--config: \"problem\" must be \"periodic\"");
        // Config file supplies defaults; explicitly passed flags win.
        auto overlay = [&](const char* key, const std::string& flag, auto& slot) {
            using V = std::decay_t<decltype(slot)>;
            if (cfg.contains(key) && cmd->count(flag) == 0) slot = cfg.at(key).get<V>();
        };
        overlay("f", "--f", args.f);
        overlay("eta", "--eta", args.eta);
        overlay("a", "--a", args.period);
        overlay("n", "--dim", args.dim);
        overlay("grid", "--grid", args.grid);
        overlay("tol", "--tol", args.tol);
    }

    PeriodicProblem problem =
        named("--f/--eta/--a/--dim", [&] { return make_problem(args.f, args.eta, args.period, args.dim); });
    SolverConfig cfg{args.tol, args.max_iter, args.window};
    named("--tol/--max-iter/--window", [&] {
        cfg.validate();
        return 0;
    });

    FixpointResult<GridFunction> r =
        named("--grid", [&] { return solve_periodic(problem, args.grid, cfg); });
    if (!args.output_path.empty()) write_csv(args.output_path, r.point);
    if (!args.trace_path.empty()) {
        std::ofstream os(args.trace_path);
        if (!os) throw std::invalid_argument("--trace: cannot open " + args.trace_path);
        write_trace_csv(os, r.trace);
    }

    ordered_json result = fixpoint_json(r);
    result["defect"] = residual_periodic(r.point, problem);
    result["contraction_rate"] = 1.0 / problem.eta;
    result["lipschitz_margin"] = periodic_lipschitz_margin(problem, 2000, 42);
    result["solution"] = grid_summary(r.point);
    ordered_json doc{{"schema", 1},
                     {"verb", "solve-periodic"},
                     {"config",
                      {{"f", args.f},
                       {"eta", args.eta},
                       {"a", args.period},
                       {"n", args.dim},
                       {"grid", args.grid},
                       {"tol", args.tol},
                       {"max_iter", args.max_iter},
                       {"window", args.window}}},
                     {"result", result}};
    emit(doc);
    return r.converged ? 0 : 1;
}

struct KernelMassArgs {
    double t = 0.5;
    double a = 1.0;
    double eta = 2.0;
    int grid = 2001;
};

int run_kernel_mass(const KernelMassArgs& args) {
    double value = named("--t/--a/--eta/--grid",
                         [&] { return kernel_mass(args.t, args.a, args.eta, args.grid); });
    double exact = 1.0 / args.eta;
    ordered_json doc{{"schema", 1},
                     {"verb", "kernel-mass"},
                     {"config",
                      {{"t", args.t}, {"a", args.a}, {"eta", args.eta}, {"grid", args.grid}}},
                     {"result",
                      {{"value", value},
                       {"exact", exact},
                       {"abs_error", std::fabs(value - exact)}}}};
    emit(doc);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"complex-valued metric fixed-point toolkit"};
    app.require_subcommand(1);

    CheckMetricArgs metric_args;
    CLI::App* cmd_metric = app.add_subcommand("check-metric", "sampled metric axiom check");
    cmd_metric->add_option("--metric", metric_args.metric, "metric spec (d1 | d2:k=.. | d3 | volterra:.. | periodic:..)");
    cmd_metric->add_option("--samples", metric_args.samples, "sample triples");
    cmd_metric->add_option("--seed", metric_args.seed, "rng seed");

    CheckSimulationArgs sim_args;
    CLI::App* cmd_sim = app.add_subcommand("check-simulation", "simulation-function axiom check");
    cmd_sim->add_option("--xi", sim_args.xi, "simulation fn spec (xi1:lambda=.. | xi2:.. | xi3 | diff)");
    cmd_sim->add_option("--samples", sim_args.samples, "sample pairs");
    cmd_sim->add_option("--tail", sim_args.tail, "tail length for the limit clause");
    cmd_sim->add_option("--seed", sim_args.seed, "rng seed");

    CheckContractionArgs contraction_args;
    CLI::App* cmd_contraction =
        app.add_subcommand("check-contraction", "sampled contraction hypothesis check");
    cmd_contraction->add_option("--config", contraction_args.config_path, "JSON contraction spec");
    cmd_contraction->add_option("--map-s", contraction_args.map_s, "override S map");
    cmd_contraction->add_option("--map-t", contraction_args.map_t, "override T map");
    cmd_contraction->add_option("--samples", contraction_args.samples, "sample pairs");
    cmd_contraction->add_option("--seed", contraction_args.seed, "rng seed");

    IterateArgs iterate_args;
    CLI::App* cmd_iterate = app.add_subcommand("iterate", "alternating Picard iteration on complex points");
    cmd_iterate->add_option("--map", iterate_args.map_s, "S map (also T unless --map-t)");
    cmd_iterate->add_option("--map-t", iterate_args.map_t, "T map");
    cmd_iterate->add_option("--start", iterate_args.start, "start point a+bi");
    cmd_iterate->add_option("--metric", iterate_args.metric, "complex-point metric");
    cmd_iterate->add_option("--tol", iterate_args.tol, "delta tolerance");
    cmd_iterate->add_option("--max-iter", iterate_args.max_iter, "application budget");
    cmd_iterate->add_option("--window", iterate_args.window, "Cauchy tail window");
    cmd_iterate->add_option("--trace", iterate_args.trace_path, "write trace CSV here");

    SolveIntegralArgs integral_args;
    CLI::App* cmd_integral = app.add_subcommand("solve-integral", "Volterra integral equation on [a,b]");
    cmd_integral->add_option("--a", integral_args.a, "left endpoint");
    cmd_integral->add_option("--b", integral_args.b, "right endpoint");
    cmd_integral->add_option("--grid", integral_args.grid, "grid nodes");
    cmd_integral->add_option("--tol", integral_args.tol, "delta tolerance");
    cmd_integral->add_option("--max-iter", integral_args.max_iter, "application budget");
    cmd_integral->add_option("--window", integral_args.window, "Cauchy tail window");
    cmd_integral->add_option("--output", integral_args.output_path, "write solution CSV here");
    cmd_integral->add_option("--trace", integral_args.trace_path, "write trace CSV here");

    SolvePeriodicArgs periodic_args;
    CLI::App* cmd_periodic = app.add_subcommand("solve-periodic", "periodic problem u' = f(t,u), u(0)=u(a)");
    cmd_periodic->add_option("--config", periodic_args.config_path, "JSON problem config");
    cmd_periodic->add_option("--f", periodic_args.f, "rhs name (example32 | example33 | zero)");
    cmd_periodic->add_option("--eta", periodic_args.eta, "kernel shift (> 1)");
    cmd_periodic->add_option("--a", periodic_args.period, "period");
    cmd_periodic->add_option("--dim", periodic_args.dim, "state dimension");
    cmd_periodic->add_option("--grid", periodic_args.grid, "grid nodes");
    cmd_periodic->add_option("--tol", periodic_args.tol, "delta tolerance");
    cmd_periodic->add_option("--max-iter", periodic_args.max_iter, "application budget");
    cmd_periodic->add_option("--window", periodic_args.window, "Cauchy tail window");
    cmd_periodic->add_option("--output", periodic_args.output_path, "write solution CSV here");
    cmd_periodic->add_option("--trace", periodic_args.trace_path, "write trace CSV here");

    KernelMassArgs kernel_args;
    CLI::App* cmd_kernel = app.add_subcommand("kernel-mass", "integrate the periodic Green kernel over [0,a]");
    cmd_kernel->add_option("--t", kernel_args.t, "evaluation point");
    cmd_kernel->add_option("--a", kernel_args.a, "period");
    cmd_kernel->add_option("--eta", kernel_args.eta, "kernel shift (> 0)");
    cmd_kernel->add_option("--grid", kernel_args.grid, "quadrature budget");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(cmd_metric)) return run_check_metric(metric_args);
        if (app.got_subcommand(cmd_sim)) return run_check_simulation(sim_args);
        if (app.got_subcommand(cmd_contraction)) return run_check_contraction(contraction_args);
        if (app.got_subcommand(cmd_iterate)) return run_iterate(iterate_args);
        if (app.got_subcommand(cmd_integral)) return run_solve_integral(integral_args);
        if (app.got_subcommand(cmd_periodic)) return run_solve_periodic(periodic_args, cmd_periodic);
        if (app.got_subcommand(cmd_kernel)) return run_kernel_mass(kernel_args);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cvfix::DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
