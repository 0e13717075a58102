#include "censorsense/mathkit.hpp"

#include <cmath>
#include <numbers>

namespace censorsense {

double gaussian_q(double x) {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

namespace {

constexpr int k_max_iter = 500;
constexpr double k_rel_tol = 1e-14;

// Power series P(a, x) = x^a e^-x / Gamma(a) * sum_{n>=0} x^n / (a(a+1)...(a+n)).
double lower_gamma_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < k_max_iter; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * k_rel_tol) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("reg_lower_gamma: series failed to converge");
}

// Modified Lentz continued fraction for the upper tail Q(a, x); returns P = 1 - Q.
double lower_gamma_cont_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= k_max_iter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < k_rel_tol) {
      return 1.0 - h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("reg_lower_gamma: continued fraction failed to converge");
}

}  // namespace

double reg_lower_gamma(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw std::domain_error("reg_lower_gamma requires a > 0 and x >= 0");
  }
  if (x == 0.0) return 0.0;
  return x < a + 1.0 ? lower_gamma_series(a, x) : lower_gamma_cont_fraction(a, x);
}

double log_multinomial(int m, int n, int c) {
  if (n < 0 || c < 0 || n + c > m) {
    throw std::domain_error("log_multinomial requires 0 <= n, 0 <= c, n + c <= m");
  }
  return std::lgamma(m + 1.0) - std::lgamma(n + 1.0) - std::lgamma(c + 1.0) -
         std::lgamma(m - n - c + 1.0);
}

}  // namespace censorsense
