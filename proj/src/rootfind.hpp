#pragma once

#include <algorithm>

namespace fblnoma::detail {

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  bool capped = false;
};

// Expand [0, hi0] rightward by doubling until f(hi) <= 0, assuming f(0) > 0.
// Gives up (capped = true) after max_doublings.
template <typename F>
Bracket expand_bracket(F&& f, double hi0, int max_doublings = 60) {
  double lo = 0.0, hi = hi0;
  for (int i = 0; i < max_doublings; ++i) {
    if (f(hi) <= 0.0) return {lo, hi, false};
    lo = hi;
    hi *= 2.0;
  }
  return {lo, hi, true};
}

// Bisection on [lo, hi] with f(lo) > 0 >= f(hi).
template <typename F>
double bisect(F&& f, double lo, double hi, double atol, int max_iter = 200) {
  for (int i = 0; i < max_iter && (hi - lo) > atol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Smallest x in [lo, hi] with g(x) >= target, for nondecreasing g with
// g(hi) >= target. Returns the feasible endpoint of the final interval.
template <typename G>
double bisect_threshold(G&& g, double lo, double hi, double target, double atol,
                        int max_iter = 200) {
  for (int i = 0; i < max_iter && (hi - lo) > atol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace fblnoma::detail
