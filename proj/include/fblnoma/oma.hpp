#pragma once

#include <optional>

#include "fblnoma/fbl_core.hpp"
#include "fblnoma/system.hpp"

namespace fblnoma::oma {

struct SlotAllocation {
  double p1 = 0.0;
  double p2 = 0.0;
  double r2 = 0.0;
  bool near_boundary = false;
};

struct OmaSolution {
  double r1 = 0.0;
  double r2 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  int n1 = 0;
  int n2 = 0;
  double t1 = 0.0;
  double t2 = 0.0;
  bool feasible = false;
  bool near_boundary = false;
};

// Interference-free slot SNR p * h^2 / noise.
double oma_snr(double p, double h_gain, double noise);

// For a fixed slot split (n1, n_total - n1): smallest p2 whose best-case slot-2
// throughput reaches t2_floor, r2 its inner maximizer, and p1 from the energy
// equality n1*p1 + n2*p2 = n_total*p_avg. Empty when the whole energy budget
// on slot 2 cannot reach the floor.
std::optional<SlotAllocation> solve_slot_allocation(const ChannelPair& ch,
                                                    const SystemBudget& budget, int n1);

// Optimal single-slot rate: unique root of the stationarity condition
// Q((c-R)/d) + R*phi((c-R)/d)/d = 1 with c = log2(1+gamma1),
// d = sqrt(V1/n1)/ln2; coincides with the argmax of (n1/N)*R*(1-G).
double optimal_r1(double gamma1, int n1);

// Exhaustive search over integer slot splits n1 in 1..n_total-1 (ties toward
// smaller n1). t2_floor == 0 skips u2's slot entirely (n2 = 0) so the
// degenerate case matches the non-orthogonal solver exactly.
OmaSolution maximize_t1_oma(const ChannelPair& ch, const SystemBudget& budget);

}  // namespace fblnoma::oma
