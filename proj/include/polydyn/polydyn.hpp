#pragma once

#include "polydyn/classification.hpp"
#include "polydyn/coefficient_modes.hpp"
#include "polydyn/identities.hpp"
#include "polydyn/newtonian_dynamics.hpp"
#include "polydyn/pipeline.hpp"
#include "polydyn/root_finding.hpp"
#include "polydyn/root_tracking.hpp"
#include "polydyn/scenario.hpp"
#include "polydyn/symmetric_functions.hpp"
#include "polydyn/trajectory.hpp"
#include "polydyn/types.hpp"
