#pragma once

#include "icerank/error.hpp"
#include "icerank/numeric.hpp"
#include "icerank/term_structure.hpp"
#include "icerank/cashflow.hpp"
#include "icerank/parallel.hpp"
#include "icerank/metrics.hpp"
#include "icerank/distribution.hpp"
#include "icerank/radr.hpp"
#include "icerank/philox.hpp"
#include "icerank/scenario_engine.hpp"
#include "icerank/ranking.hpp"
