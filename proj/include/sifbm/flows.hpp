#pragma once

// Elementary flows: inclusion-increasing paths t -> f(t) through a collection,
// their measure clock theta(t) = m[f(t)], and the m-standard projection
// s -> f(theta^{-1}(s)).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

#include "sifbm/covariance.hpp"
#include "sifbm/error.hpp"
#include "sifbm/index_collection.hpp"

namespace sifbm {

struct FlowKnot {
  double t = 0.0;
  IndexSet set;
};

/// Piecewise interpolated path through weakly increasing knot sets. Between
/// knots, rectangles move their corner linearly, arcs their angle, chain
/// points their parameter; all three rules preserve inclusion.
class ElementaryFlow {
 public:
  ElementaryFlow(IndexingCollection coll, std::vector<FlowKnot> knots) : coll_(coll), knots_(std::move(knots)) {
    if (coll_.kind() == CollectionKind::CircleShortestArcs)
      throw Error(ErrorCode::UnsupportedCollection, "shortest arcs admit no inclusion-monotone interpolation across O");
    if (knots_.empty()) throw Error(ErrorCode::PreconditionViolated, "a flow needs at least one knot");
    for (std::size_t k = 0; k < knots_.size(); ++k) {
      validate(coll_, knots_[k].set);
      if (!std::isfinite(knots_[k].t)) throw Error(ErrorCode::PreconditionViolated, "knot times must be finite");
      if (k == 0) continue;
      if (!(knots_[k].t > knots_[k - 1].t))
        throw Error(ErrorCode::PreconditionViolated, "knot times must be strictly increasing");
      if (!contains(coll_, knots_[k - 1].set, knots_[k].set))
        throw Error(ErrorCode::NotIncreasing,
                    describe(knots_[k - 1].set) + " is not contained in " + describe(knots_[k].set));
    }
  }

  const IndexingCollection& collection() const noexcept { return coll_; }
  const std::vector<FlowKnot>& knots() const noexcept { return knots_; }
  double start() const noexcept { return knots_.front().t; }
  double end() const noexcept { return knots_.back().t; }

  /// f(t).
  IndexSet at(double t) const {
    if (!(t >= start() && t <= end()))
      throw Error(ErrorCode::OutOfDomain, "t = " + detail::format_number(t) + " lies outside the flow domain");
    auto upper = std::lower_bound(knots_.begin(), knots_.end(), t,
                                  [](const FlowKnot& k, double value) { return k.t < value; });
    if (upper->t == t) return upper->set;
    const auto& lo = *(upper - 1);
    const auto& hi = *upper;
    return interpolate(lo.set, hi.set, (t - lo.t) / (hi.t - lo.t));
  }

  /// theta(t) = m[f(t)].
  double theta(double t) const { return measure(coll_, at(t)); }

  double theta_min() const { return measure(coll_, knots_.front().set); }
  double theta_max() const { return measure(coll_, knots_.back().set); }

  /// inf{t : theta(t) >= s}. Segment located from the knot clocks, then
  /// bisected down to adjacent doubles.
  double theta_inverse(double s) const {
    if (!(s >= theta_min() && s <= theta_max()))
      throw Error(ErrorCode::OutOfRange, "clock value " + detail::format_number(s) + " outside [" +
                                             detail::format_number(theta_min()) + ", " +
                                             detail::format_number(theta_max()) + "]");
    std::size_t k = 0;
    while (measure(coll_, knots_[k].set) < s) ++k;
    if (k == 0) return knots_.front().t;
    double lo = knots_[k - 1].t;  // theta(lo) < s
    double hi = knots_[k].t;      // theta(hi) >= s
    for (int iter = 0; iter < 2000; ++iter) {
      const double mid = lo + 0.5 * (hi - lo);
      if (!(mid > lo && mid < hi)) break;
      (theta(mid) >= s ? hi : lo) = mid;
    }
    return hi;
  }

 private:
  IndexSet interpolate(const IndexSet& a, const IndexSet& b, double lambda) const {
    if (std::holds_alternative<Empty>(a) && std::holds_alternative<Empty>(b)) return Empty{};
    auto lerp = [lambda](double x, double y) { return std::clamp(x + lambda * (y - x), x, y); };
    switch (coll_.kind()) {
      case CollectionKind::RectanglesRN: {
        const std::vector<double> zero(coll_.dimension(), 0.0);
        const auto& ca = std::holds_alternative<Empty>(a) ? zero : std::get<Rectangle>(a).corner;
        const auto& cb = std::get<Rectangle>(b).corner;
        Rectangle r;
        r.corner.resize(ca.size());
        for (std::size_t i = 0; i < ca.size(); ++i) r.corner[i] = lerp(ca[i], cb[i]);
        return r;
      }
      case CollectionKind::CircleOrientedArcs: {
        const double x = std::holds_alternative<Empty>(a) ? 0.0 : std::get<OrientedArc>(a).angle;
        return OrientedArc{lerp(x, std::get<OrientedArc>(b).angle)};
      }
      case CollectionKind::TotallyOrderedChain: {
        const double x = std::holds_alternative<Empty>(a) ? 0.0 : std::get<ChainPoint>(a).t;
        return ChainPoint{lerp(x, std::get<ChainPoint>(b).t)};
      }
      case CollectionKind::CircleShortestArcs: break;
    }
    throw Error(ErrorCode::UnsupportedCollection, "no interpolation rule for " + describe(coll_));
  }

  IndexingCollection coll_;
  std::vector<FlowKnot> knots_;
};

/// Flow with f(k) = chain[k] at integer times k = 0..n-1.
inline ElementaryFlow flow_through(const IndexingCollection& coll, std::span<const IndexSet> chain) {
  if (chain.empty()) throw Error(ErrorCode::PreconditionViolated, "flow_through needs a non-empty chain");
  std::vector<FlowKnot> knots;
  knots.reserve(chain.size());
  for (std::size_t k = 0; k < chain.size(); ++k) knots.push_back({static_cast<double>(k), chain[k]});
  return ElementaryFlow(coll, std::move(knots));
}

inline double theta(const ElementaryFlow& flow, double t) { return flow.theta(t); }
inline double theta_inverse(const ElementaryFlow& flow, double s) { return flow.theta_inverse(s); }

/// f(theta^{-1}(s_j)) for an ascending clock grid.
inline std::vector<IndexSet> project_points(const ElementaryFlow& flow, std::span<const double> grid) {
  std::vector<IndexSet> out;
  out.reserve(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (j && !(grid[j] > grid[j - 1]))
      throw Error(ErrorCode::PreconditionViolated, "projection grid must be strictly increasing");
    out.push_back(flow.at(flow.theta_inverse(grid[j])));
  }
  return out;
}

/// Gram of the projected sets; for the sifBm this is the one-parameter fBm
/// Gram at the clock values.
inline GramMatrix projected_gram(const IndexingCollection& coll, const HurstParam& h, const ElementaryFlow& flow,
                                 std::span<const double> grid) {
  if (!(coll == flow.collection()))
    throw Error(ErrorCode::KindMismatch, "flow lives on " + describe(flow.collection()) + ", not " + describe(coll));
  const auto sets = project_points(flow, grid);
  return gram(coll, h, sets);
}

}  // namespace sifbm
