#pragma once

// Test-only oracles, independent of the library code paths they check.

#include <cmath>
#include <cstddef>
#include <vector>

namespace sifbm::oracle {

/// Characteristic polynomial coefficients c_0..c_n of det(xI - A), c_n = 1,
/// by Faddeev-LeVerrier.
inline std::vector<double> characteristic_polynomial(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I
    std::vector<std::vector<double>> next(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += a[i][l] * m[l][j];
        next[i][j] = s + (i == j ? c[n - k + 1] : 0.0);
      }
    m = next;
    double tr = 0.0;  // trace(A M_k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += a[i][l] * m[l][i];
    c[n - k] = -tr / static_cast<double>(k);
  }
  return c;
}

inline double evaluate_polynomial(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
  return v;
}

/// Smallest real root of a polynomial with only real roots inside [lo, hi]:
/// scan for the first sign change, then bisect.
inline double smallest_root(const std::vector<double>& c, double lo, double hi, std::size_t scan = 200000) {
  const double step = (hi - lo) / static_cast<double>(scan);
  double a = lo;
  double fa = evaluate_polynomial(c, a);
  for (std::size_t i = 1; i <= scan; ++i) {
    double b = lo + step * static_cast<double>(i);
    const double fb = evaluate_polynomial(c, b);
    if (fa == 0.0) return a;
    if ((fa < 0.0) != (fb < 0.0)) {
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = evaluate_polynomial(c, mid);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      return 0.5 * (a + b);
    }
    a = b;
    fa = fb;
  }
  return NAN;
}

/// Lebesgue measure of [0,u] \ ∪_i [0,v_i] in R^2 by counting cell centres
/// of a uniform grid with spacing `h`. The counting error for a union of
/// axis-aligned rectangles anchored at 0 is at most h/2 per unit of boundary.
inline double rasterized_difference_2d(const std::vector<double>& u, const std::vector<std::vector<double>>& minus,
                                       double h) {
  const std::size_t nx = static_cast<std::size_t>(std::ceil(u[0] / h));
  const std::size_t ny = static_cast<std::size_t>(std::ceil(u[1] / h));
  std::size_t count = 0;
  for (std::size_t ix = 0; ix < nx; ++ix) {
    const double x = (static_cast<double>(ix) + 0.5) * h;
    if (x > u[0]) continue;
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const double y = (static_cast<double>(iy) + 0.5) * h;
      if (y > u[1]) continue;
      bool covered = false;
      for (const auto& v : minus)
        if (x <= v[0] && y <= v[1]) {
          covered = true;
          break;
        }
      if (!covered) ++count;
    }
  }
  return static_cast<double>(count) * h * h;
}

}  // namespace sifbm::oracle
