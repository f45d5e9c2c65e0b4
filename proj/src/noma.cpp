#include "fblnoma/noma.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "rootfind.hpp"

namespace fblnoma::noma {

namespace {

// d/dr of r * (1 - Q((cap - r)/beta)): one branch of the stationarity
// condition, with beta = sqrt(V/n)/ln2.
double branch_derivative(double cap_bits, double beta, double r) {
  const double z = (cap_bits - r) / beta;
  return 1.0 - q_function(z).value() - r * normal_pdf(z) / beta;
}

double rate_scale(double gamma, int n) {
  return std::sqrt(dispersion(gamma) / n) / std::numbers::ln2;
}

double stationary_rate(double g1, double g1_prime, double eps21, int n, bool* bracket_capped) {
  const double a = capacity(g1);
  const double b = rate_scale(g1, n);
  const double w = eps21;
  // Second branch only matters when SIC can fail; g1_prime > 0 is implied by
  // g1 > 0 (both vanish only with p1).
  double ap = 0.0, bp = 0.0;
  const bool mixed = w > 0.0 && g1_prime > 0.0;
  if (mixed) {
    ap = capacity(g1_prime);
    bp = rate_scale(g1_prime, n);
  }
  auto deriv = [&](double r) {
    double t = (1.0 - w) * branch_derivative(a, b, r);
    if (mixed) t += w * branch_derivative(ap, bp, r);
    return t;
  };
  // deriv(0) > 0 always (each branch is 1 - Q(cap/beta) >= 0.5 at r = 0);
  // bracket up from the capacity and expand right if needed.
  const auto br = detail::expand_bracket(deriv, a);
  if (br.capped) {
    if (bracket_capped) *bracket_capped = true;
    return br.hi;
  }
  return detail::bisect(deriv, br.lo, br.hi, 1e-13 * std::max(1.0, br.hi));
}

// Best single-link throughput r*(1 - G(gamma, n, r)) over r, and its
// maximizer: the stationarity machinery with the SIC-failure weight at zero.
std::pair<double, double> best_single_link_t2(double gamma, int n) {
  if (gamma <= 0.0) return {0.0, 0.0};
  const double r = stationary_rate(gamma, gamma, 0.0, n, nullptr);
  const double t = r * (1.0 - error_probability(gamma, n, r).value());
  return {t, r};
}

}  // namespace

NomaSinrs noma_sinrs(double p1, double p2, const ChannelPair& ch) {
  if (!(p1 >= 0.0) || !(p2 >= 0.0) || !std::isfinite(p1) || !std::isfinite(p2)) {
    throw std::domain_error("noma_sinrs: powers must be finite and >= 0");
  }
  const double h1sq = ch.h1_gain * ch.h1_gain;
  const double h2sq = ch.h2_gain * ch.h2_gain;
  NomaSinrs s;
  s.g21 = p2 * h1sq / (p1 * h1sq + ch.noise1);
  s.g1_prime = p1 * h1sq / (p2 * h1sq + ch.noise1);
  s.g1 = p1 * h1sq / ch.noise1;
  s.g2 = p2 * h2sq / (p1 * h2sq + ch.noise2);
  return s;
}

Probability effective_error_u1(Probability eps1, Probability eps1_prime, Probability eps21) {
  const double w = eps21.value();
  return Probability((1.0 - w) * eps1.value() + w * eps1_prime.value());
}

double t1_of_r1(double r1, const NomaSinrs& sinrs, double r2, int n) {
  if (!(r1 >= 0.0) || !std::isfinite(r1)) {
    throw std::domain_error("t1_of_r1: r1 must be finite and >= 0");
  }
  const double e21 = error_probability(sinrs.g21, n, r2).value();
  const double e1 = error_probability(sinrs.g1, n, r1).value();
  const double e1p = error_probability(sinrs.g1_prime, n, r1).value();
  return r1 * ((1.0 - e1) * (1.0 - e21) + (1.0 - e1p) * e21);
}

std::optional<PowerSplit> solve_power_and_r2(const ChannelPair& ch, const SystemBudget& budget) {
  const double pbar = budget.p_avg;
  const int n = budget.n_total;
  if (budget.t2_floor == 0.0) {
    // No floor: the base station does not transmit to u2 at all.
    return PowerSplit{pbar, 0.0, 0.0, false};
  }
  auto max_t2 = [&](double p2) {
    return best_single_link_t2(noma_sinrs(pbar - p2, p2, ch).g2, n);
  };
  if (max_t2(pbar).first < budget.t2_floor) {
    return std::nullopt;  // floor unreachable even with all power on u2
  }
  // Best-case T2 is nondecreasing in p2, so the smallest pinning p2 is the
  // unique threshold crossing.
  const double p2 = detail::bisect_threshold(
      [&](double p) { return max_t2(p).first; }, 0.0, pbar, budget.t2_floor, 1e-10 * pbar);
  PowerSplit out;
  out.p2 = p2;
  out.p1 = pbar - p2;
  out.r2 = max_t2(p2).second;
  out.near_boundary = out.p1 <= 1e-6 * pbar;
  return out;
}

double optimal_r1_given_sic_failure(double g1, double g1_prime, Probability eps21, int n,
                                    bool* bracket_capped) {
  if (!(g1 > 0.0)) throw std::domain_error("optimal_r1: g1 must be positive");
  if (n < 1) throw std::domain_error("optimal_r1: n must be >= 1");
  return stationary_rate(g1, g1_prime, eps21.value(), n, bracket_capped);
}

double optimal_r1(const NomaSinrs& sinrs, double r2, int n, bool* bracket_capped) {
  const Probability eps21 = error_probability(sinrs.g21, n, r2);
  return optimal_r1_given_sic_failure(sinrs.g1, sinrs.g1_prime, eps21, n, bracket_capped);
}

NomaSolution maximize_t1_noma(const ChannelPair& ch, const SystemBudget& budget) {
  NomaSolution out;
  const auto split = solve_power_and_r2(ch, budget);
  if (!split) return out;
  out.feasible = true;
  out.near_boundary = split->near_boundary;
  out.p1 = split->p1;
  out.p2 = split->p2;
  out.r2 = split->r2;
  const int n = budget.n_total;
  const NomaSinrs s = noma_sinrs(out.p1, out.p2, ch);
  if (s.g1 > 0.0) {
    const Probability eps21 = error_probability(s.g21, n, out.r2);
    out.r1 = optimal_r1_given_sic_failure(s.g1, s.g1_prime, eps21, n, &out.rate_bracket_capped);
  }
  // r1 stays 0 when all power went to u2 (boundary split).
  const Probability eps1 = error_probability(s.g1, n, out.r1);
  const Probability eps1p = error_probability(s.g1_prime, n, out.r1);
  const Probability eps21 = error_probability(s.g21, n, out.r2);
  out.eff_err1 = effective_error_u1(eps1, eps1p, eps21);
  out.err2 = error_probability(s.g2, n, out.r2);
  out.t1 = t1_of_r1(out.r1, s, out.r2, n);
  out.t2 = effective_throughput(n, n, out.r2, out.err2);
  return out;
}

}  // namespace fblnoma::noma
