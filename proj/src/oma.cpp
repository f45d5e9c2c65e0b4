#include "fblnoma/oma.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "parallel.hpp"
#include "rootfind.hpp"

namespace fblnoma::oma {

namespace {

// Best slot-2 throughput (n2/n_total) * r2 * (1 - G) over r2 at power p2,
// together with the maximizing r2.
std::pair<double, double> best_slot2_t2(const ChannelPair& ch, int n_total, int n2, double p2) {
  const double g2 = oma_snr(p2, ch.h2_gain, ch.noise2);
  if (g2 <= 0.0) return {0.0, 0.0};
  const double r2 = optimal_r1(g2, n2);
  const double t2 =
      effective_throughput(n2, n_total, r2, error_probability(g2, n2, r2));
  return {t2, r2};
}

}  // namespace

double oma_snr(double p, double h_gain, double noise) {
  if (!(noise > 0.0) || !std::isfinite(noise)) {
    throw std::domain_error("oma_snr: noise must be finite and positive");
  }
  if (!(p >= 0.0) || !std::isfinite(p)) {
    throw std::domain_error("oma_snr: power must be finite and >= 0");
  }
  return p * h_gain * h_gain / noise;
}

double optimal_r1(double gamma1, int n1) {
  if (!(gamma1 > 0.0)) throw std::domain_error("optimal_r1: gamma1 must be positive");
  if (n1 < 1) throw std::domain_error("optimal_r1: n1 must be >= 1");
  const double c = capacity(gamma1);
  const double d = std::sqrt(dispersion(gamma1) / n1) / std::numbers::ln2;
  // Stationarity of R*(1 - Q((c-R)/d)); written as its residual, positive
  // below the root.
  auto residual = [&](double r) {
    const double z = (c - r) / d;
    return 1.0 - (q_function(z).value() + r * normal_pdf(z) / d);
  };
  const auto br = detail::expand_bracket(residual, c);
  if (br.capped) return br.hi;
  return detail::bisect(residual, br.lo, br.hi, 1e-13 * std::max(1.0, br.hi));
}

std::optional<SlotAllocation> solve_slot_allocation(const ChannelPair& ch,
                                                    const SystemBudget& budget, int n1) {
  const int n_total = budget.n_total;
  if (n1 < 1 || n1 > n_total - 1) {
    throw std::domain_error("solve_slot_allocation: n1 must lie in [1, n_total-1]");
  }
  const int n2 = n_total - n1;
  const double energy = static_cast<double>(n_total) * budget.p_avg;
  if (budget.t2_floor == 0.0) {
    return SlotAllocation{energy / n1, 0.0, 0.0, false};
  }
  const double p2_max = energy / n2;
  auto max_t2 = [&](double p2) { return best_slot2_t2(ch, n_total, n2, p2).first; };
  if (max_t2(p2_max) < budget.t2_floor) {
    return std::nullopt;
  }
  const double p2 =
      detail::bisect_threshold(max_t2, 0.0, p2_max, budget.t2_floor, 1e-10 * p2_max);
  SlotAllocation out;
  out.p2 = p2;
  out.r2 = best_slot2_t2(ch, n_total, n2, p2).second;
  out.p1 = (energy - n2 * p2) / n1;
  if (out.p1 < 0.0) out.p1 = 0.0;  // roundoff at the boundary
  out.near_boundary = (p2_max - p2) <= 1e-6 * p2_max;
  return out;
}

OmaSolution maximize_t1_oma(const ChannelPair& ch, const SystemBudget& budget) {
  OmaSolution best;
  const int n_total = budget.n_total;

  if (budget.t2_floor == 0.0) {
    // u2's slot is skipped entirely; the whole block and power go to u1.
    const double g1 = oma_snr(budget.p_avg, ch.h1_gain, ch.noise1);
    best.feasible = true;
    best.n1 = n_total;
    best.n2 = 0;
    best.p1 = budget.p_avg;
    best.r1 = optimal_r1(g1, n_total);
    best.t1 = effective_throughput(n_total, n_total, best.r1,
                                   error_probability(g1, n_total, best.r1));
    return best;
  }

  struct SplitResult {
    bool feasible = false;
    double t1 = 0.0;
    double r1 = 0.0;
    SlotAllocation alloc;
  };
  std::vector<SplitResult> scan(n_total - 1);
  detail::parallel_for_index(scan.size(), [&](std::size_t idx) {
    const int n1 = static_cast<int>(idx) + 1;
    const auto alloc = solve_slot_allocation(ch, budget, n1);
    if (!alloc) return;
    SplitResult& r = scan[idx];
    r.feasible = true;
    r.alloc = *alloc;
    const double g1 = oma_snr(alloc->p1, ch.h1_gain, ch.noise1);
    if (g1 > 0.0) r.r1 = optimal_r1(g1, n1);
    r.t1 = effective_throughput(n1, n_total, r.r1, error_probability(g1, n1, r.r1));
  });

  int best_n1 = -1;
  for (int n1 = 1; n1 <= n_total - 1; ++n1) {
    const SplitResult& r = scan[n1 - 1];
    if (!r.feasible) continue;
    if (best_n1 < 0 || r.t1 > best.t1) {
      best_n1 = n1;
      best.t1 = r.t1;
      best.r1 = r.r1;
      best.p1 = r.alloc.p1;
      best.p2 = r.alloc.p2;
      best.r2 = r.alloc.r2;
      best.near_boundary = r.alloc.near_boundary;
    }
  }
  if (best_n1 < 0) return best;  // no split can carry the floor
  best.feasible = true;
  best.n1 = best_n1;
  best.n2 = n_total - best_n1;
  const double g2 = oma_snr(best.p2, ch.h2_gain, ch.noise2);
  best.t2 = effective_throughput(best.n2, n_total, best.r2,
                                 error_probability(g2, best.n2, best.r2));
  return best;
}

}  // namespace fblnoma::oma
