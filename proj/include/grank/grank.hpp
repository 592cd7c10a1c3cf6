#pragma once

#include "grank/closeness_sigmoid.hpp"
#include "grank/error.hpp"
#include "grank/estimate.hpp"
#include "grank/exact.hpp"
#include "grank/experiment.hpp"
#include "grank/graph.hpp"
#include "grank/power_law.hpp"
#include "grank/sampling.hpp"
