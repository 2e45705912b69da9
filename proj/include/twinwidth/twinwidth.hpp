#pragma once

#include "bitset.hpp"
#include "contraction.hpp"
#include "experiment.hpp"
#include "numerics.hpp"
#include "quotient_tracker.hpp"
#include "random.hpp"
#include "solver.hpp"
#include "strategy.hpp"
#include "trigraph.hpp"
