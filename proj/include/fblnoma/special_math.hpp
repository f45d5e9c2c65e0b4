#pragma once

namespace fblnoma {

// A probability value, validated to lie in [0, 1] on construction.
class Probability {
 public:
  Probability() = default;
  explicit Probability(double v);
  double value() const { return v_; }
  operator double() const { return v_; }

 private:
  double v_ = 0.0;
};

// Standard Gaussian upper-tail probability Q(x) = P[Z > x], Z ~ N(0,1).
Probability q_function(double x);

// Inverse of q_function on (0, 1). Throws std::domain_error at the endpoints
// (the preimage is infinite).
double q_inverse(Probability p);

// Standard normal density.
double normal_pdf(double z);

}  // namespace fblnoma
