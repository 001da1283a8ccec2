#pragma once

// Umbrella header for the bipartite mean-field model toolkit.

#include "bimf/critical_points.hpp"
#include "bimf/errors.hpp"
#include "bimf/finite_n.hpp"
#include "bimf/model.hpp"
#include "bimf/parallel.hpp"
#include "bimf/pressure.hpp"
#include "bimf/roots.hpp"
#include "bimf/tolerances.hpp"
