#ifndef HRC_HRC_HPP
#define HRC_HRC_HPP

// Umbrella header: simulation, risk evaluation and the coupled grid solver
// for two-level risk-averse control of diffusions.

#include "hrc/common.hpp"
#include "hrc/rng.hpp"
#include "hrc/parallel.hpp"
#include "hrc/controls.hpp"
#include "hrc/generator.hpp"
#include "hrc/presets.hpp"
#include "hrc/problem.hpp"
#include "hrc/validate.hpp"
#include "hrc/grid.hpp"
#include "hrc/fields.hpp"
#include "hrc/policy.hpp"
#include "hrc/path_bundle.hpp"
#include "hrc/simulate.hpp"
#include "hrc/regression.hpp"
#include "hrc/bsde.hpp"
#include "hrc/risk_value.hpp"
#include "hrc/hjb.hpp"
#include "hrc/cross_validate.hpp"
#include "hrc/riskcheck.hpp"
#include "hrc/io.hpp"

#endif  // HRC_HRC_HPP
