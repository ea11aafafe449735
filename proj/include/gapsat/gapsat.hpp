#pragma once

#include "gapsat/bench.hpp"
#include "gapsat/cdcl.hpp"
#include "gapsat/cnf.hpp"
#include "gapsat/generator.hpp"
#include "gapsat/oracle.hpp"
#include "gapsat/orchestrator.hpp"
#include "gapsat/random.hpp"
#include "gapsat/resolution.hpp"
#include "gapsat/sls.hpp"
#include "gapsat/stats.hpp"
