#pragma once

// Symmetric-matrix numerics for Gram matrices: eigenvalues by cyclic Jacobi,
// PSD verdicts, a jittered Cholesky for sampling, and the scan over H that
// locates where Phi^H stops being positive semidefinite.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sifbm/covariance.hpp"
#include "sifbm/error.hpp"
#include "sifbm/matrix.hpp"
#include "sifbm/parallel.hpp"

namespace sifbm {

inline constexpr int kJacobiMaxSweeps = 50;
inline constexpr double kJacobiRelativeOffDiagonal = 1e-13;
inline constexpr double kDefaultPsdRelativeTolerance = 1e-9;

/// All eigenvalues of a symmetric matrix, ascending. Cyclic Jacobi with a
/// fixed row-by-row sweep order, so the result is deterministic.
inline std::vector<double> eigenvalues_symmetric(const Matrix& g) {
  if (g.rows() != g.cols()) throw Error(ErrorCode::PreconditionViolated, "eigenvalues need a square matrix");
  const std::size_t n = g.rows();
  Matrix a = g;
  const double norm = frobenius_norm(g);
  const double target = kJacobiRelativeOffDiagonal * norm;

  auto off_diagonal = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  bool converged = off_diagonal() <= target;
  for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        // The rotation annihilates (p, q) analytically.
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
    converged = off_diagonal() <= target;
  }
  if (!converged)
    throw Error(ErrorCode::NoConvergence, "Jacobi did not converge within " + std::to_string(kJacobiMaxSweeps) + " sweeps");

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

inline std::vector<double> eigenvalues_symmetric(const GramMatrix& g) { return eigenvalues_symmetric(g.entries); }

struct PsdVerdict {
  double min_eigenvalue = 0.0;
  double tolerance = 0.0;
  bool is_psd = false;
};

/// 1e-9 ||G||_F, floored at the smallest normal double so it stays positive
/// for the zero matrix.
inline double default_psd_tolerance(const Matrix& g) {
  return std::max(kDefaultPsdRelativeTolerance * frobenius_norm(g), std::numeric_limits<double>::min());
}

inline PsdVerdict is_psd(const Matrix& g, std::optional<double> tol = std::nullopt) {
  const double t = tol.value_or(default_psd_tolerance(g));
  if (!(t > 0.0)) throw Error(ErrorCode::PreconditionViolated, "PSD tolerance must be positive");
  const auto eig = eigenvalues_symmetric(g);
  const double lo = eig.empty() ? 0.0 : eig.front();
  return {lo, t, lo >= -t};
}

inline PsdVerdict is_psd(const GramMatrix& g, std::optional<double> tol = std::nullopt) {
  return is_psd(g.entries, tol);
}

/// Diagonal shifts tried in order, as multiples of trace(G)/n.
struct JitterPolicy {
  std::vector<double> ladder{0.0, 1e-14, 1e-12, 1e-10};
  double reconstruction_tolerance = 1e-10;  // relative to ||G||_F, max-entry
};

struct CholeskyFactor {
  Matrix lower;
  double jitter = 0.0;
};

namespace detail {

// Plain Cholesky of a + shift*I. A zero pivot is accepted only when its whole
// remaining column is exactly zero (a measure-zero point), giving a zero
// column in L.
inline std::optional<Matrix> try_cholesky(const Matrix& a, double shift) {
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j) + shift;
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    std::vector<double> residual(n - j - 1);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      residual[i - j - 1] = s;
    }
    if (d > 0.0) {
      const double root = std::sqrt(d);
      l(j, j) = root;
      for (std::size_t i = j + 1; i < n; ++i) l(i, j) = residual[i - j - 1] / root;
    } else if (d == 0.0 && std::all_of(residual.begin(), residual.end(), [](double r) { return r == 0.0; })) {
      continue;
    } else {
      return std::nullopt;
    }
  }
  return l;
}

}  // namespace detail

/// L with L L^T = G + eps I for the smallest eps on the jitter ladder.
inline CholeskyFactor cholesky_psd(const Matrix& g, const JitterPolicy& policy = {}) {
  const auto verdict = is_psd(g);
  if (!verdict.is_psd)
    throw Error(ErrorCode::NotPsd, "matrix is not positive semidefinite (min eigenvalue " +
                                       detail::format_number(verdict.min_eigenvalue) + ")");
  const std::size_t n = g.rows();
  const double norm = frobenius_norm(g);
  const double unit = n ? trace(g) / static_cast<double>(n) : 0.0;
  for (double rung : policy.ladder) {
    const double eps = rung * unit;
    auto l = detail::try_cholesky(g, eps);
    if (!l) continue;
    Matrix target = g;
    for (std::size_t i = 0; i < n; ++i) target(i, i) += eps;
    if (max_abs_difference(multiply_lower_transpose(*l), target) <= policy.reconstruction_tolerance * norm)
      return {std::move(*l), eps};
  }
  throw Error(ErrorCode::NotPsd, "Cholesky failed on every rung of the jitter ladder");
}

inline CholeskyFactor cholesky_psd(const GramMatrix& g, const JitterPolicy& policy = {}) {
  return cholesky_psd(g.entries, policy);
}

struct HScanPoint {
  double h = 0.0;
  double min_eigenvalue = 0.0;
  bool is_psd = false;
};

struct CriticalHReport {
  std::vector<HScanPoint> grid;
  std::optional<std::pair<double, double>> bracket;          // grid-adjacent
  std::optional<std::pair<double, double>> refined_bracket;  // after bisection
  std::optional<double> refined_critical_h;
};

inline constexpr double kCriticalHWidth = 1e-4;

/// Scans min-eigenvalue of gram(points; H) over an ascending H grid and
/// refines the first PSD -> not-PSD transition by bisection on the verdict.
/// `relative_tol` multiplies ||G(H)||_F at every H. Monotonicity in H is not
/// assumed; only the first bracket is reported.
inline CriticalHReport critical_h_scan(const IndexingCollection& coll, std::span<const IndexSet> points,
                                       std::span<const double> h_grid,
                                       double relative_tol = kDefaultPsdRelativeTolerance) {
  if (h_grid.size() < 2) throw Error(ErrorCode::PreconditionViolated, "H grid needs at least two values");
  for (std::size_t i = 0; i < h_grid.size(); ++i) {
    static_cast<void>(HurstParam{h_grid[i]});
    if (i && !(h_grid[i] > h_grid[i - 1]))
      throw Error(ErrorCode::PreconditionViolated, "H grid must be strictly increasing");
  }
  if (!(relative_tol > 0.0)) throw Error(ErrorCode::PreconditionViolated, "tolerance must be positive");

  auto evaluate = [&](double h) {
    const auto g = gram(coll, HurstParam{h}, points);
    const double tol = std::max(relative_tol * frobenius_norm(g.entries), std::numeric_limits<double>::min());
    const auto v = is_psd(g, tol);
    return HScanPoint{h, v.min_eigenvalue, v.is_psd};
  };

  CriticalHReport report;
  report.grid.resize(h_grid.size());
  parallel_for(h_grid.size(), [&](std::size_t i) { report.grid[i] = evaluate(h_grid[i]); });

  for (std::size_t i = 0; i + 1 < report.grid.size(); ++i) {
    if (report.grid[i].is_psd && !report.grid[i + 1].is_psd) {
      double lo = report.grid[i].h;
      double hi = report.grid[i + 1].h;
      report.bracket = {lo, hi};
      while (hi - lo > kCriticalHWidth) {
        const double mid = 0.5 * (lo + hi);
        (evaluate(mid).is_psd ? lo : hi) = mid;
      }
      report.refined_bracket = {lo, hi};
      report.refined_critical_h = 0.5 * (lo + hi);
      break;
    }
  }
  return report;
}

}  // namespace sifbm
