#pragma once

// Umbrella header for the semdep library: propositional denotation systems,
// their dependency graphs, acceptable-valuation solvers, dangerousness
// sweeps, and the generators for the named Yablo-style structures.

#include "semdep/danger.hpp"
#include "semdep/errors.hpp"
#include "semdep/formula.hpp"
#include "semdep/generators.hpp"
#include "semdep/graph.hpp"
#include "semdep/solve.hpp"
#include "semdep/system.hpp"
#include "semdep/varid.hpp"
#include "semdep/version.hpp"
