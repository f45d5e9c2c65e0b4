#pragma once

#include <optional>

#include "fblnoma/fbl_core.hpp"
#include "fblnoma/system.hpp"

namespace fblnoma::noma {

// The four ratios of the superposition-coding model with SIC at user 1:
//   g21      SINR of x2 at u1 (decoded first, x1 treated as interference)
//   g1_prime SINR of x1 at u1 when SIC failed (x2 still present)
//   g1       SNR of x1 at u1 after successful SIC
//   g2       SINR of x2 at u2 (decoded directly under x1 interference)
struct NomaSinrs {
  double g21 = 0.0;
  double g1_prime = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
};

struct PowerSplit {
  double p1 = 0.0;
  double p2 = 0.0;
  double r2 = 0.0;
  bool near_boundary = false;  // t2_floor sits at the edge of what full power delivers
};

struct NomaSolution {
  double r1 = 0.0;
  double r2 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  Probability eff_err1{};
  Probability err2{};
  bool feasible = false;
  bool near_boundary = false;
  bool rate_bracket_capped = false;
};

NomaSinrs noma_sinrs(double p1, double p2, const ChannelPair& ch);

// Mixture of user-1's error over the SIC success/failure branches:
// (1 - eps21)*eps1 + eps21*eps1_prime.
Probability effective_error_u1(Probability eps1, Probability eps1_prime, Probability eps21);

// User-1 effective throughput as a function of its rate, with the power
// split and r2 held fixed (full block, N1 = N2 = n).
double t1_of_r1(double r1, const NomaSinrs& sinrs, double r2, int n);

// Power allocation and r2 pinning the weaker user's throughput to the floor:
// p1 = p_avg - p2 with the smallest p2 whose best-case T2 reaches t2_floor,
// and r2 the inner maximizer of T2. Empty when even p2 = p_avg cannot reach
// the floor. t2_floor == 0 degenerates to (p_avg, 0, 0).
std::optional<PowerSplit> solve_power_and_r2(const ChannelPair& ch, const SystemBudget& budget);

// Stationary rate of t1_of_r1: unique root of its derivative on the concave
// stretch starting at 0. If the derivative stays positive over the whole
// (doubling-expanded) bracket, returns the bracket end and sets *bracket_capped.
double optimal_r1(const NomaSinrs& sinrs, double r2, int n, bool* bracket_capped = nullptr);

// Same root with the SIC-failure probability supplied directly instead of
// being derived from r2. eps21 = 0 reduces to the single-link condition.
double optimal_r1_given_sic_failure(double g1, double g1_prime, Probability eps21, int n,
                                    bool* bracket_capped = nullptr);

// Full solve: power split and r2 pinning T2 to the floor, then the optimal
// r1. Uses the whole block for both users.
NomaSolution maximize_t1_noma(const ChannelPair& ch, const SystemBudget& budget);

}  // namespace fblnoma::noma
