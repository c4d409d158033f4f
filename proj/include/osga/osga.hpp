#pragma once

// Umbrella header for the solver library.

#include "osga/baselines.hpp"
#include "osga/core.hpp"
#include "osga/solver.hpp"
#include "osga/subproblem_exact.hpp"
#include "osga/subproblem_inexact.hpp"
#include "osga/trace.hpp"

#include "osga/problems/imaging.hpp"
#include "osga/problems/instance.hpp"
#include "osga/problems/metrics.hpp"
#include "osga/problems/operators.hpp"
#include "osga/problems/rng.hpp"
#include "osga/problems/tv.hpp"
