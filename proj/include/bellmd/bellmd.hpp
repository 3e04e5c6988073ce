#pragma once

// Umbrella header for the measurement-dependence toolkit.

#include "bellmd/bigint.hpp"
#include "bellmd/bounds.hpp"
#include "bellmd/errors.hpp"
#include "bellmd/fine.hpp"
#include "bellmd/io.hpp"
#include "bellmd/lp.hpp"
#include "bellmd/rational.hpp"
#include "bellmd/scalar.hpp"
#include "bellmd/scenario.hpp"
#include "bellmd/simplex.hpp"
#include "bellmd/simulate.hpp"
#include "bellmd/sources.hpp"
#include "bellmd/strategies.hpp"
