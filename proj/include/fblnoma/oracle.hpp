#pragma once

#include <vector>

#include "fblnoma/noma.hpp"
#include "fblnoma/oma.hpp"
#include "fblnoma/system.hpp"

namespace fblnoma::oracle {

// Inclusive arithmetic grid lo, lo+step, ..., up to hi. lo == hi is a
// singleton regardless of step.
struct GridRange {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;
};

struct GridSpec {
  GridRange r1;
  GridRange r2;
  GridRange p2;
  std::vector<int> n1_values;  // OMA only
};

// Grid-search maximizers, independent of the fast solvers: the SINR model and
// objective are restated here from the channel primitives, and no solver code
// beyond those primitives is called. Used to validate every stationarity root
// before trusting it. Returned solutions have feasible == false when no grid
// point satisfies the throughput floor.
noma::NomaSolution brute_force_noma(const ChannelPair& ch, const SystemBudget& budget,
                                    const GridSpec& grid);
oma::OmaSolution brute_force_oma(const ChannelPair& ch, const SystemBudget& budget,
                                 const GridSpec& grid);

}  // namespace fblnoma::oracle
