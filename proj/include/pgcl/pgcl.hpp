#pragma once

// Umbrella header for the pGCL toolkit.

#include "pgcl/ast.hpp"
#include "pgcl/errors.hpp"
#include "pgcl/expectation.hpp"
#include "pgcl/expr.hpp"
#include "pgcl/healthiness.hpp"
#include "pgcl/oracle.hpp"
#include "pgcl/parser.hpp"
#include "pgcl/rational.hpp"
#include "pgcl/refinement.hpp"
#include "pgcl/sampling.hpp"
#include "pgcl/state_space.hpp"
#include "pgcl/transformer.hpp"
#include "pgcl/vcg.hpp"
