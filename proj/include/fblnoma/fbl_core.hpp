#pragma once

#include "fblnoma/special_math.hpp"

namespace fblnoma {

// One point-to-point link: linear SNR (or SINR), blocklength in channel
// uses, and coding rate in bits per channel use.
struct LinkRealization {
  double gamma;
  int n;
  double rate;

  LinkRealization(double gamma, int n, double rate);
};

// log2(1 + gamma). All capacity terms go through here so that rate-vs-capacity
// comparisons cancel exactly.
double capacity(double gamma);

// Channel dispersion 1 - (1+gamma)^-2, evaluated cancellation-free as
// gamma*(gamma+2)/(1+gamma)^2. Result in [0, 1).
double dispersion(double gamma);

// Normal-approximation achievable rate at blocklength n and target error
// epsilon: log2(1+gamma) - sqrt(V/n) * Qinv(epsilon) / ln 2.
// May be negative for small n and small epsilon; callers decide policy
// (the solvers treat negative-rate regions as zero throughput).
double achievable_rate(double gamma, int n, Probability epsilon);

// Decoding error probability at rate R over blocklength n:
//   Q( sqrt(n/V) * ln2 * (log2(1+gamma) - R) ).
// Convention at gamma == 0 (zero dispersion): 1 for any positive rate,
// 0.5 at rate 0 (the gamma -> 0+ limit).
Probability error_probability(double gamma, int n, double rate);
Probability error_probability(const LinkRealization& link);

// Effective throughput (n_i / n_total) * rate * (1 - eff_error), bits per
// channel use of the whole block.
double effective_throughput(int n_i, int n_total, double rate, Probability eff_error);

}  // namespace fblnoma
