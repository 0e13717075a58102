#pragma once

#include <stdexcept>
#include <string>

namespace censorsense {

/// Floor used when taking logs of vanishing probabilities so that weighted
/// sums in log space never produce -inf arithmetic.
inline constexpr double k_log_prob_floor = -690.77552789821368;  // ln(1e-300)

/// Upper-tail probability Q(x) = Pr(Z > x) of a standard normal variable,
/// computed through the complementary error function.  Absolute error is
/// below 1e-14 everywhere; Q(-x) + Q(x) == 1 up to rounding.
double gaussian_q(double x);

/// Regularized lower incomplete gamma function P(a, x) for a > 0, x >= 0.
/// Uses the power series for x < a + 1 and the continued fraction otherwise,
/// both iterated to relative tolerance 1e-14 (tighter than the 1e-12
/// contract).  Throws std::domain_error outside the domain.
double reg_lower_gamma(double a, double x);

/// Natural log of the trinomial coefficient m! / (n! c! (m - n - c)!),
/// evaluated with lgamma.  Throws std::domain_error unless
/// 0 <= n, 0 <= c and n + c <= m.
double log_multinomial(int m, int n, int c);

/// A probability value pinned to [0, 1].  Closed-form expressions may leave
/// the unit interval by a few ulps; construction absorbs residue up to
/// 1e-12 on either side and throws std::domain_error for anything larger,
/// which would indicate a real defect rather than rounding noise.
class Probability {
 public:
  Probability() = default;

  Probability(double value) {  // NOLINT: implicit by design
    constexpr double slack = 1e-12;
    if (!(value >= -slack && value <= 1.0 + slack)) {
      throw std::domain_error("Probability out of range: " +
                              std::to_string(value));
    }
    value_ = value < 0.0 ? 0.0 : (value > 1.0 ? 1.0 : value);
  }

  double value() const { return value_; }
  operator double() const { return value_; }

 private:
  double value_ = 0.0;
};

}  // namespace censorsense
