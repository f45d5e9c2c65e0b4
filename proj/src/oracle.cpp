#include "fblnoma/oracle.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "parallel.hpp"

namespace fblnoma::oracle {

namespace {

std::vector<double> grid_values(const GridRange& r) {
  if (!(r.step > 0.0) || !std::isfinite(r.step)) {
    throw std::invalid_argument("GridRange: step must be finite and positive");
  }
  if (!(r.lo <= r.hi) || !std::isfinite(r.lo) || !std::isfinite(r.hi)) {
    throw std::invalid_argument("GridRange: requires finite lo <= hi");
  }
  std::vector<double> v;
  const double limit = r.hi + 1e-9 * r.step;
  for (std::size_t k = 0;; ++k) {
    const double x = r.lo + static_cast<double>(k) * r.step;
    if (x > limit) break;
    v.push_back(x);
  }
  return v;
}

// Smallest grid r2 whose T2 reaches the floor, given the slot/SINR context.
// T2 values beyond any r2 are bounded by r2_max * (1 - G(r2)) since G is
// nondecreasing in the rate, so the ascending scan can stop early.
struct FloorHit {
  bool found = false;
  double r2 = 0.0;
  double err2 = 1.0;
  double t2 = 0.0;
};

FloorHit smallest_pinning_r2(const std::vector<double>& r2s, double gamma2, int n2,
                             double slot_fraction, double floor) {
  FloorHit hit;
  if (r2s.empty()) return hit;
  const double r2_max = r2s.back();
  for (const double r2 : r2s) {
    const double e = error_probability(gamma2, n2, r2).value();
    const double t2 = slot_fraction * r2 * (1.0 - e);
    if (t2 >= floor) {
      hit.found = true;
      hit.r2 = r2;
      hit.err2 = e;
      hit.t2 = t2;
      return hit;
    }
    if (slot_fraction * r2_max * (1.0 - e) < floor) break;
  }
  return hit;
}

}  // namespace

noma::NomaSolution brute_force_noma(const ChannelPair& ch, const SystemBudget& budget,
                                    const GridSpec& grid) {
  const auto r1s = grid_values(grid.r1);
  const auto r2s = grid_values(grid.r2);
  const auto p2s = grid_values(grid.p2);
  const double pbar = budget.p_avg;
  const int n = budget.n_total;
  const double h1sq = ch.h1_gain * ch.h1_gain;
  const double h2sq = ch.h2_gain * ch.h2_gain;

  struct PerP2 {
    bool found = false;
    double t1 = -1.0;
    double r1 = 0.0;
    FloorHit pin;
    double eff_err1 = 1.0;
  };
  std::vector<PerP2> best_at(p2s.size());

  detail::parallel_for_index(p2s.size(), [&](std::size_t ip) {
    const double p2 = p2s[ip];
    if (p2 < 0.0 || p2 > pbar * (1.0 + 1e-12)) return;
    const double p1 = std::max(0.0, pbar - p2);
    const double g21 = p2 * h1sq / (p1 * h1sq + ch.noise1);
    const double g1 = p1 * h1sq / ch.noise1;
    const double g1p = p1 * h1sq / (p2 * h1sq + ch.noise1);
    const double g2 = p2 * h2sq / (p1 * h2sq + ch.noise2);

    // For any r1 the objective is nonincreasing in eps21, and eps21 is
    // nondecreasing in r2, so only the smallest floor-pinning r2 matters.
    const FloorHit pin = smallest_pinning_r2(r2s, g2, n, 1.0, budget.t2_floor);
    if (!pin.found) return;
    const double e21 = error_probability(g21, n, pin.r2).value();

    PerP2& out = best_at[ip];
    out.found = true;
    out.pin = pin;
    const double r1_max = r1s.empty() ? 0.0 : r1s.back();
    for (const double r1 : r1s) {
      const double e1 = error_probability(g1, n, r1).value();
      const double e1p = error_probability(g1p, n, r1).value();
      const double success = (1.0 - e1) * (1.0 - e21) + (1.0 - e1p) * e21;
      const double t1 = r1 * success;
      if (t1 > out.t1) {
        out.t1 = t1;
        out.r1 = r1;
        out.eff_err1 = 1.0 - success;
      }
      // success is nonincreasing in r1, so this bounds every later t1.
      if (r1_max * success < out.t1) break;
    }
  });

  noma::NomaSolution best;
  std::size_t best_ip = p2s.size();
  for (std::size_t ip = 0; ip < p2s.size(); ++ip) {
    if (best_at[ip].found && (best_ip == p2s.size() || best_at[ip].t1 > best.t1)) {
      best_ip = ip;
      best.t1 = best_at[ip].t1;
    }
  }
  if (best_ip == p2s.size()) return best;
  const PerP2& win = best_at[best_ip];
  best.feasible = true;
  best.r1 = win.r1;
  best.r2 = win.pin.r2;
  best.p2 = p2s[best_ip];
  best.p1 = std::max(0.0, pbar - best.p2);
  best.t2 = win.pin.t2;
  best.eff_err1 = Probability(std::min(1.0, std::max(0.0, win.eff_err1)));
  best.err2 = Probability(win.pin.err2);
  return best;
}

oma::OmaSolution brute_force_oma(const ChannelPair& ch, const SystemBudget& budget,
                                 const GridSpec& grid) {
  const auto r1s = grid_values(grid.r1);
  const auto r2s = grid_values(grid.r2);
  const auto p2s = grid_values(grid.p2);
  const int n_total = budget.n_total;
  for (int n1 : grid.n1_values) {
    if (n1 < 1 || n1 > n_total - 1) {
      throw std::invalid_argument("GridSpec: n1_values must lie in [1, n_total-1]");
    }
  }
  const double energy = static_cast<double>(n_total) * budget.p_avg;
  const double h1sq = ch.h1_gain * ch.h1_gain;

  struct PerN1 {
    bool found = false;
    double t1 = -1.0;
    double r1 = 0.0;
    double p1 = 0.0, p2 = 0.0;
    FloorHit pin;
  };
  std::vector<PerN1> best_at(grid.n1_values.size());

  detail::parallel_for_index(grid.n1_values.size(), [&](std::size_t in1) {
    const int n1 = grid.n1_values[in1];
    const int n2 = n_total - n1;
    const double p2_cap = energy / n2;
    const double frac2 = static_cast<double>(n2) / n_total;

    auto pin_at = [&](std::size_t ip) {
      const double g2 = p2s[ip] * ch.h2_gain * ch.h2_gain / ch.noise2;
      return smallest_pinning_r2(r2s, g2, n2, frac2, budget.t2_floor);
    };

    // Usable p2 prefix: p1 must stay nonnegative.
    std::size_t usable = 0;
    while (usable < p2s.size() && p2s[usable] <= p2_cap * (1.0 + 1e-12)) ++usable;
    if (usable == 0) return;

    // Slot-2 throughput at fixed r2 grows with p2, so grid feasibility is
    // monotone in p2: binary-search the first feasible index. T1 shrinks as
    // p2 grows (p1 falls pointwise in r1), so that index is the only one
    // worth scanning for r1.
    if (!pin_at(usable - 1).found) return;
    std::size_t lo = 0, hi = usable - 1;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (pin_at(mid).found) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    const FloorHit pin = pin_at(hi);
    if (!pin.found) return;

    PerN1& out = best_at[in1];
    out.found = true;
    out.pin = pin;
    out.p2 = p2s[hi];
    out.p1 = std::max(0.0, (energy - n2 * out.p2) / n1);
    const double g1 = out.p1 * h1sq / ch.noise1;
    const double frac1 = static_cast<double>(n1) / n_total;
    const double r1_max = r1s.empty() ? 0.0 : r1s.back();
    for (const double r1 : r1s) {
      const double succ = 1.0 - error_probability(g1, n1, r1).value();
      const double t1 = frac1 * r1 * succ;
      if (t1 > out.t1) {
        out.t1 = t1;
        out.r1 = r1;
      }
      if (frac1 * r1_max * succ < out.t1) break;
    }
  });

  oma::OmaSolution best;
  std::size_t best_i = grid.n1_values.size();
  for (std::size_t i = 0; i < grid.n1_values.size(); ++i) {
    if (best_at[i].found && (best_i == grid.n1_values.size() || best_at[i].t1 > best.t1)) {
      best_i = i;
      best.t1 = best_at[i].t1;
    }
  }
  if (best_i == grid.n1_values.size()) return best;
  const PerN1& win = best_at[best_i];
  best.feasible = true;
  best.n1 = grid.n1_values[best_i];
  best.n2 = n_total - best.n1;
  best.r1 = win.r1;
  best.r2 = win.pin.r2;
  best.p1 = win.p1;
  best.p2 = win.p2;
  best.t2 = win.pin.t2;
  return best;
}

}  // namespace fblnoma::oracle
