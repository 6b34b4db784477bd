#pragma once

#include "hhd/adapt_solver.hpp"
#include "hhd/coefficient_io.hpp"
#include "hhd/constraints.hpp"
#include "hhd/io.hpp"
#include "hhd/metrics.hpp"
#include "hhd/objective.hpp"
#include "hhd/spectral_core.hpp"
#include "hhd/testfields.hpp"
