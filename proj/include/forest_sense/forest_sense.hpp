#pragma once

#include "forest_sense/analytic.hpp"
#include "forest_sense/errors.hpp"
#include "forest_sense/experiments.hpp"
#include "forest_sense/geometry.hpp"
#include "forest_sense/montecarlo.hpp"
#include "forest_sense/quadrature.hpp"
#include "forest_sense/rng.hpp"
#include "forest_sense/table.hpp"
