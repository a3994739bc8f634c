#pragma once

// Sparse Gaussian graphical model estimation with a clustered-lasso penalty
// and linear equality constraints, solved by sGS-ADMM warm start plus a
// proximal augmented Lagrangian method with semismooth Newton inner solves.

#include "cggm/admm.hpp"
#include "cggm/clustered_lasso.hpp"
#include "cggm/constraints.hpp"
#include "cggm/datagen.hpp"
#include "cggm/diagnostics.hpp"
#include "cggm/errors.hpp"
#include "cggm/logdet_prox.hpp"
#include "cggm/metrics.hpp"
#include "cggm/palm.hpp"
#include "cggm/penalty_q.hpp"
#include "cggm/problem.hpp"
#include "cggm/rng.hpp"
#include "cggm/sym_mat.hpp"
