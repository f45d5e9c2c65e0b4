#include "fblnoma/fbl_core.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fblnoma {

namespace {

void check_gamma(double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::domain_error("gamma must be finite and >= 0");
  }
}

void check_blocklength(int n) {
  if (n < 1) throw std::domain_error("blocklength must be >= 1");
}

}  // namespace

LinkRealization::LinkRealization(double gamma_, int n_, double rate_)
    : gamma(gamma_), n(n_), rate(rate_) {
  check_gamma(gamma);
  check_blocklength(n);
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw std::domain_error("rate must be finite and >= 0");
  }
}

double capacity(double gamma) {
  check_gamma(gamma);
  return std::log1p(gamma) / std::numbers::ln2;
}

double dispersion(double gamma) {
  check_gamma(gamma);
  const double onep = 1.0 + gamma;
  double v = gamma * (gamma + 2.0) / (onep * onep);
  // Mathematically < 1 for any finite gamma; keep it that way after rounding.
  if (v >= 1.0) v = std::nextafter(1.0, 0.0);
  return v;
}

double achievable_rate(double gamma, int n, Probability epsilon) {
  check_gamma(gamma);
  check_blocklength(n);
  const double eps = epsilon.value();
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::domain_error("achievable_rate: epsilon must lie in (0, 1)");
  }
  const double v = dispersion(gamma);
  return capacity(gamma) - std::sqrt(v / n) * q_inverse(epsilon) / std::numbers::ln2;
}

Probability error_probability(double gamma, int n, double rate) {
  check_gamma(gamma);
  check_blocklength(n);
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw std::domain_error("error_probability: rate must be finite and >= 0");
  }
  if (gamma == 0.0) {
    return Probability(rate > 0.0 ? 1.0 : 0.5);
  }
  const double v = dispersion(gamma);
  // Difference taken in bits so rate == capacity(gamma) gives exactly Q(0).
  const double z = (capacity(gamma) - rate) * (std::numbers::ln2 * std::sqrt(n / v));
  return q_function(z);
}

Probability error_probability(const LinkRealization& link) {
  return error_probability(link.gamma, link.n, link.rate);
}

double effective_throughput(int n_i, int n_total, double rate, Probability eff_error) {
  if (n_i < 1) throw std::domain_error("effective_throughput: n_i must be >= 1");
  if (n_i > n_total) throw std::domain_error("effective_throughput: n_i must not exceed n_total");
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw std::domain_error("effective_throughput: rate must be finite and >= 0");
  }
  return (static_cast<double>(n_i) / n_total) * rate * (1.0 - eff_error.value());
}

}  // namespace fblnoma
