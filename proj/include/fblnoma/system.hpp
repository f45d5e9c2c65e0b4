#pragma once

#include <cmath>
#include <stdexcept>

namespace fblnoma {

// Downlink two-user channel state: amplitude gains and linear noise powers.
// User 1 is the stronger user (h1_gain >= h2_gain).
struct ChannelPair {
  double h1_gain;
  double h2_gain;
  double noise1;
  double noise2;

  ChannelPair(double h1, double h2, double n1 = 1.0, double n2 = 1.0)
      : h1_gain(h1), h2_gain(h2), noise1(n1), noise2(n2) {
    if (!(h1 > 0.0 && h2 > 0.0) || !std::isfinite(h1) || !std::isfinite(h2)) {
      throw std::invalid_argument("ChannelPair: channel gains must be finite and positive");
    }
    if (h1 < h2) {
      throw std::invalid_argument("ChannelPair: requires h1_gain >= h2_gain (user-1 ordering)");
    }
    if (!(n1 > 0.0 && n2 > 0.0) || !std::isfinite(n1) || !std::isfinite(n2)) {
      throw std::invalid_argument("ChannelPair: noise powers must be finite and positive");
    }
  }
};

// Resource budget: total blocklength, average power, and the throughput
// floor guaranteed to the weaker user.
struct SystemBudget {
  int n_total;
  double p_avg;
  double t2_floor;

  SystemBudget(int n, double p, double t2) : n_total(n), p_avg(p), t2_floor(t2) {
    if (n < 2) throw std::invalid_argument("SystemBudget: n_total must be >= 2");
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("SystemBudget: p_avg must be finite and positive");
    }
    if (!(t2 >= 0.0) || !std::isfinite(t2)) {
      throw std::invalid_argument("SystemBudget: t2_floor must be finite and >= 0");
    }
  }
};

}  // namespace fblnoma
