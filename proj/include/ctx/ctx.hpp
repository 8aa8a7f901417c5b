#pragma once

// Umbrella header: scenarios, behaviors, couplings, extensions, LP kernel,
// global-model decisions, quantifiers, cycle closed forms, sampling, JSON.

#include "ctx/rational.hpp"
#include "ctx/scenario.hpp"
#include "ctx/behavior.hpp"
#include "ctx/lp.hpp"
#include "ctx/coupling.hpp"
#include "ctx/extension.hpp"
#include "ctx/polytope.hpp"
#include "ctx/ncycle.hpp"
#include "ctx/quantifiers.hpp"
#include "ctx/sampling.hpp"
#include "ctx/json_io.hpp"
