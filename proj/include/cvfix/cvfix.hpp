#pragma once

// Umbrella header: complex-order predicates, complex-valued metrics with
// sampled axiom checks, simulation functions, admissibility/contraction
// checkers, the alternating Picard engine, and the two integral-equation
// applications.

#include "cvfix/admissibility.hpp"
#include "cvfix/applications.hpp"
#include "cvfix/check_report.hpp"
#include "cvfix/complex_order.hpp"
#include "cvfix/fixpoint.hpp"
#include "cvfix/grid_function.hpp"
#include "cvfix/metrics.hpp"
#include "cvfix/parse.hpp"
#include "cvfix/rng.hpp"
#include "cvfix/simulation.hpp"
