#pragma once

#include <optional>
#include <vector>

#include "fblnoma/noma.hpp"
#include "fblnoma/oma.hpp"
#include "fblnoma/system.hpp"

namespace fblnoma::experiments {

enum class SweepKind {
  rate_sweep,         // T1 versus r1 with the floor-pinning solve held fixed
  t2_sweep,           // best T1 versus the throughput floor
  blocklength_sweep,  // best T1 versus the total blocklength
  min_blocklength,    // smallest blocklength reaching a T1 target
};

enum class Scheme { noma, oma };

struct SweepSpec {
  SweepKind kind;
  ChannelPair channel;
  SystemBudget budget;
  std::vector<double> values;  // swept variable, strictly increasing
  bool run_noma = true;
  bool run_oma = true;
  int n_cap = 10000;  // search ceiling for min_blocklength
};

// One sweep point. A missing scheme cell means the scheme was not requested;
// a present cell with feasible == false records an infeasible point. For the
// min_blocklength kind, *_min_n holds the found blocklength (empty when the
// target is unattainable below the cap) and the solution cell holds the solve
// at that blocklength.
struct SweepRow {
  double value = 0.0;
  std::optional<noma::NomaSolution> noma;
  std::optional<oma::OmaSolution> oma;
  std::optional<int> noma_min_n;
  std::optional<int> oma_min_n;
};

// Evaluate the sweep. Rows are independent (evaluated concurrently) and come
// back in input order; identical specs produce identical rows.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// Smallest blocklength N >= 2 whose best T1 reaches t1_target, or empty if
// none up to n_cap does. Bisection plus a local verification scan, since T1*
// versus N is not assumed monotone.
std::optional<int> min_blocklength(const ChannelPair& ch, double p_avg, double t2_floor,
                                   double t1_target, Scheme scheme, int n_cap = 10000);

}  // namespace fblnoma::experiments
