#pragma once

// The sifBm covariance
//
//   Phi^H(U, V) = 1/2 [ m(U)^{2H} + m(V)^{2H} - m(U △ V)^{2H} ]
//
// and Gram matrices built from it.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "sifbm/error.hpp"
#include "sifbm/index_collection.hpp"
#include "sifbm/matrix.hpp"
#include "sifbm/parallel.hpp"

namespace sifbm {

/// Hurst exponent, 0 < H < 1. Existence on an arbitrary collection is only
/// guaranteed for H <= 1/2; above that it depends on the collection.
class HurstParam {
 public:
  explicit HurstParam(double h) : h_(h) {
    if (!(h > 0.0 && h < 1.0)) throw Error(ErrorCode::InvalidH, "H must lie in (0, 1), got " + detail::format_number(h));
  }

  double value() const noexcept { return h_; }
  bool well_posed_general() const noexcept { return h_ <= 0.5; }

  /// x^{2H} as exp(2H ln x), with 0^{2H} = 0.
  double pow2h(double x) const {
    if (x <= 0.0) return 0.0;
    return std::exp(2.0 * h_ * std::log(x));
  }

  bool operator==(const HurstParam&) const = default;

 private:
  double h_;
};

struct GramMatrix {
  Matrix entries;
  HurstParam h;
  std::vector<IndexSet> labels;

  std::size_t size() const noexcept { return entries.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return entries(i, j); }
};

inline double phi(const IndexingCollection& coll, const HurstParam& h, const IndexSet& u, const IndexSet& v) {
  const double mu = h.pow2h(measure(coll, u));
  const double mv = h.pow2h(measure(coll, v));
  const double md = h.pow2h(measure_symdiff(coll, u, v));
  return 0.5 * (mu + mv - md);
}

/// Var(X_U - X_V) under the sifBm law, expanded through phi. Equals
/// m(U △ V)^{2H} up to rounding.
inline double variance_of_difference(const IndexingCollection& coll, const HurstParam& h, const IndexSet& u,
                                     const IndexSet& v) {
  return phi(coll, h, u, u) + phi(coll, h, v, v) - 2.0 * phi(coll, h, u, v);
}

/// Gram matrix of the sifBm at `points`. The strict upper triangle is computed
/// once and mirrored, so the result is exactly symmetric.
inline GramMatrix gram(const IndexingCollection& coll, const HurstParam& h, std::span<const IndexSet> points) {
  if (points.empty()) throw Error(ErrorCode::PreconditionViolated, "gram needs at least one point");
  for (const auto& p : points) validate(coll, p);
  const std::size_t n = points.size();
  GramMatrix g{Matrix(n, n), h, std::vector<IndexSet>(points.begin(), points.end())};
  parallel_for(n, [&](std::size_t i) {
    g.entries(i, i) = h.pow2h(measure(coll, points[i]));
    for (std::size_t j = i + 1; j < n; ++j) g.entries(i, j) = phi(coll, h, points[i], points[j]);
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g.entries(j, i) = g.entries(i, j);
  return g;
}

/// Covariance of one-parameter fBm, 1/2 (s^{2H} + t^{2H} - |s - t|^{2H}).
inline double fbm_covariance(const HurstParam& h, double s, double t) {
  return 0.5 * (h.pow2h(s) + h.pow2h(t) - h.pow2h(std::abs(s - t)));
}

inline Matrix fbm_gram(const HurstParam& h, std::span<const double> clock) {
  const std::size_t n = clock.size();
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    g(i, i) = h.pow2h(clock[i]);
    for (std::size_t j = i + 1; j < n; ++j) g(i, j) = g(j, i) = fbm_covariance(h, clock[i], clock[j]);
  }
  return g;
}

}  // namespace sifbm
