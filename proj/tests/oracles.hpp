#pragma once

// Independent reference implementations used only by tests.  Each one takes
// a deliberately different route than the library code so agreement is
// evidence, not tautology.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

/// Adaptive Simpson integration (helper for the Gaussian tail oracle).
inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double fa, double fm, double fb,
                               double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

/// Gaussian upper tail by numerical integration of the density.
inline double gaussian_q(double x) {
  const auto density = [](double t) {
    return std::exp(-0.5 * t * t) * 0.3989422804014326779;  // 1/sqrt(2 pi)
  };
  if (x < 0.0) return 1.0 - gaussian_q(-x);
  // Mass beyond x + 40 is far below double resolution.
  return integrate(density, x, x + 40.0, 1e-14);
}

/// Regularized lower incomplete gamma by plain term-by-term series
/// summation (no series/continued-fraction split).
inline double reg_lower_gamma_series(double a, double x) {
  if (x == 0.0) return 0.0;
  double log_term = a * std::log(x) - x - std::lgamma(a + 1.0);
  double term = std::exp(log_term);
  double sum = 0.0;
  for (int n = 0; n < 10000; ++n) {
    sum += term;
    if (term < sum * 1e-17) return sum;
    term *= x / (a + n + 1.0);
  }
  throw std::runtime_error("oracle gamma series did not converge");
}

/// Exact trinomial coefficient m! / (n! c! (m-n-c)!) in 128-bit integers.
/// Fits comfortably for m <= 51 (the largest value used in tests is below
/// 2^72... well below the 2^127 limit).
inline unsigned __int128 exact_multinomial(int m, int n, int c) {
  // C(m, n) * C(m - n, c), each built with the overflow-safe running
  // product C(a, b) = prod_i (a - b + i) / i.
  const auto binom = [](int a, int b) {
    unsigned __int128 r = 1;
    for (int i = 1; i <= b; ++i) {
      r = r * static_cast<unsigned>(a - b + i) / static_cast<unsigned>(i);
    }
    return r;
  };
  return binom(m, n) * binom(m - n, c);
}

inline double log_exact_multinomial(int m, int n, int c) {
  return std::log(static_cast<long double>(exact_multinomial(m, n, c)));
}

/// Pr(all nodes decide busy) at p = 1 by direct trinomial enumeration:
/// with certain links every node sees the same signed vote sum s, so the
/// network is unanimous and the decision is the tie-policy indicator on s.
inline double all_busy_at_full_connectivity(int m, double p_busy,
                                            double p_censor, double p_free,
                                            bool busy_on_tie) {
  double total = 0.0;
  for (int n = 0; n <= m; ++n) {
    for (int c = 0; c + n <= m; ++c) {
      const int r = m - n - c;
      const int s = n - r;
      const bool busy = busy_on_tie ? s >= 0 : s > 0;
      if (!busy) continue;
      total += static_cast<double>(exact_multinomial(m, n, c)) *
               std::pow(p_busy, n) * std::pow(p_censor, c) * std::pow(p_free, r);
    }
  }
  return total;
}

}  // namespace oracle
