#pragma once

// Umbrella header for the rackopt library: order/rack allocation and picker
// rack sequencing for mobile-rack fulfilment, on top of a bundled
// deterministic branch-and-bound solver.

#include "rackopt/allocation/build.hpp"
#include "rackopt/allocation/restrict.hpp"
#include "rackopt/allocation/solve.hpp"
#include "rackopt/allocation/verify.hpp"
#include "rackopt/bench/bench.hpp"
#include "rackopt/core/instance.hpp"
#include "rackopt/core/verify_report.hpp"
#include "rackopt/gen/generator.hpp"
#include "rackopt/gen/rng.hpp"
#include "rackopt/heuristics/pio.hpp"
#include "rackopt/heuristics/portfolio.hpp"
#include "rackopt/heuristics/spb.hpp"
#include "rackopt/io/json_io.hpp"
#include "rackopt/io/results_csv.hpp"
#include "rackopt/milp/model.hpp"
#include "rackopt/milp/simplex.hpp"
#include "rackopt/milp/solve.hpp"
#include "rackopt/oracles/allocation_oracle.hpp"
#include "rackopt/oracles/sequence_oracle.hpp"
#include "rackopt/sequencing/build.hpp"
#include "rackopt/sequencing/instance.hpp"
#include "rackopt/sequencing/plan.hpp"
#include "rackopt/sequencing/pool_greedy.hpp"
#include "rackopt/sequencing/solve.hpp"
#include "rackopt/sequencing/verify.hpp"
