#pragma once

// Umbrella header for the simulation library. The command-line layer lives in
// satdyn/cli.hpp and is not pulled in here.

#include "satdyn/errors.hpp"
#include "satdyn/models.hpp"
#include "satdyn/montecarlo.hpp"
#include "satdyn/pricing.hpp"
#include "satdyn/quadrature.hpp"
#include "satdyn/rng.hpp"
#include "satdyn/special_functions.hpp"
#include "satdyn/tdist.hpp"
#include "satdyn/version.hpp"
