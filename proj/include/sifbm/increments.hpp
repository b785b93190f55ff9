#pragma once

// Increments over left-neighbourhoods C = U \ (U_1 ∪ ... ∪ U_n), expanded by
// inclusion-exclusion into signed evaluations on members of the collection:
//
//   ΔX_C = X_U - Σ_i X_{U∩U_i} + Σ_{i<j} X_{U∩U_i∩U_j} - ...

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sifbm/covariance.hpp"
#include "sifbm/error.hpp"
#include "sifbm/index_collection.hpp"

namespace sifbm {

inline constexpr std::size_t kMaxSubtracted = 20;

struct IncrementTerm {
  int coefficient = 1;  // ±1
  IndexSet set;
};

struct IncrementExpr {
  IndexSet base;
  std::vector<IndexSet> subtracted;
  /// 2^n terms: (+1, U) first, then one term per non-empty subset S of the
  /// subtracted sets in bitmask order, with sign (-1)^{|S|}.
  std::vector<IncrementTerm> expansion;
};

inline IncrementExpr increment_expand(const IndexingCollection& coll, const IndexSet& base,
                                      std::span<const IndexSet> subtracted) {
  if (subtracted.size() > kMaxSubtracted)
    throw Error(ErrorCode::TooManySubtracted, std::to_string(subtracted.size()) + " subtracted sets exceed the cap of " +
                                                  std::to_string(kMaxSubtracted));
  validate(coll, base);
  for (const auto& s : subtracted) validate(coll, s);

  IncrementExpr expr{base, std::vector<IndexSet>(subtracted.begin(), subtracted.end()), {}};
  const std::uint32_t n = static_cast<std::uint32_t>(subtracted.size());
  expr.expansion.reserve(std::size_t{1} << n);
  expr.expansion.push_back({1, base});
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    IndexSet acc = base;
    int sign = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (mask & (std::uint32_t{1} << i)) {
        acc = intersect(coll, acc, subtracted[i]);
        sign = -sign;
      }
    }
    expr.expansion.push_back({sign, std::move(acc)});
  }
  return expr;
}

/// E[ΔX_C ΔX_C'] for the sifBm, by bilinear expansion over the two term
/// lists. Summation runs in term-index order.
inline double increment_covariance(const IndexingCollection& coll, const HurstParam& h, const IncrementExpr& c,
                                   const IncrementExpr& c2) {
  double total = 0.0;
  for (const auto& a : c.expansion)
    for (const auto& b : c2.expansion) total += a.coefficient * b.coefficient * phi(coll, h, a.set, b.set);
  return total;
}

/// Set function on the collection, returning nullopt where it is undefined.
using SetFunction = std::function<std::optional<double>(const IndexSet&)>;

/// psi(C) = Σ coeff * psi(term), extended from a set function on the
/// collection by inclusion-exclusion. An undefined term is an error; no
/// extrapolation is attempted.
inline double premeasure_psi(const IncrementExpr& c, const SetFunction& base_fn) {
  double total = 0.0;
  for (const auto& term : c.expansion) {
    const auto value = base_fn(term.set);
    if (!value) throw Error(ErrorCode::MissingPoint, "set function undefined at " + describe(term.set));
    total += term.coefficient * *value;
  }
  return total;
}

inline double premeasure_psi(const IndexingCollection& coll, const IncrementExpr& c, const SetFunction& base_fn) {
  for (const auto& term : c.expansion) validate(coll, term.set);
  return premeasure_psi(c, base_fn);
}

/// Evaluator over left-neighbourhoods built from a set function.
class Premeasure {
 public:
  explicit Premeasure(SetFunction base_fn) : base_fn_(std::move(base_fn)) {}

  double operator()(const IncrementExpr& c) const { return premeasure_psi(c, base_fn_); }

  /// The measure m itself as the base function.
  static Premeasure lebesgue(const IndexingCollection& coll) {
    return Premeasure([coll](const IndexSet& u) -> std::optional<double> { return measure(coll, u); });
  }

  /// (E[X_U^2])^{1/(2H)} read off the diagonal of a Gram matrix; defined only
  /// at its labelled points (and at the empty set, where X vanishes).
  static Premeasure from_gram_variances(const GramMatrix& g) {
    return Premeasure([g](const IndexSet& u) -> std::optional<double> {
      if (std::holds_alternative<Empty>(u)) return 0.0;
      for (std::size_t i = 0; i < g.labels.size(); ++i) {
        if (g.labels[i] == u) {
          const double var = g(i, i);
          return var <= 0.0 ? 0.0 : std::pow(var, 1.0 / (2.0 * g.h.value()));
        }
      }
      return std::nullopt;
    });
  }

 private:
  SetFunction base_fn_;
};

}  // namespace sifbm
