#pragma once

// Concrete indexing collections and their measure geometry.
//
// Every set is a closed-form object (a rectangle [0, corner] in R^N_+, an
// arc of the unit circle starting at the base point O, or a point of a
// totally ordered chain), so all measures below are exact products or
// minima; nothing is integrated numerically.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "sifbm/error.hpp"

namespace sifbm {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Empty {
  bool operator==(const Empty&) const = default;
};

/// [0, corner] in R^N_+.
struct Rectangle {
  std::vector<double> corner;
  bool operator==(const Rectangle&) const = default;
};

/// Positively oriented arc from O to the point at `angle`, angle in [0, 2pi].
struct OrientedArc {
  double angle = 0.0;
  bool operator==(const OrientedArc&) const = default;
};

/// Smallest arc from O to a point. The signed angle lives in (-pi, pi]; the
/// sign says on which side of O the arc lies.
struct ShortestArc {
  double angle = 0.0;
  bool operator==(const ShortestArc&) const = default;
};

/// Element of a totally ordered chain, identified by its parameter t >= 0.
struct ChainPoint {
  double t = 0.0;
  bool operator==(const ChainPoint&) const = default;
};

using IndexSet = std::variant<Empty, Rectangle, OrientedArc, ShortestArc, ChainPoint>;

enum class CollectionKind { RectanglesRN, CircleOrientedArcs, CircleShortestArcs, TotallyOrderedChain };

/// Measure clock of a chain, t -> m(chain(t)). All maps are non-decreasing
/// and vanish at 0.
enum class ChainMap { Identity, Square, Sqrt };

class IndexingCollection {
 public:
  static IndexingCollection rectangles(std::size_t dimension) {
    if (dimension < 1) throw Error(ErrorCode::InvalidSet, "rectangle dimension must be >= 1");
    return IndexingCollection(CollectionKind::RectanglesRN, dimension, ChainMap::Identity);
  }
  static IndexingCollection oriented_arcs() {
    return IndexingCollection(CollectionKind::CircleOrientedArcs, 1, ChainMap::Identity);
  }
  static IndexingCollection shortest_arcs() {
    return IndexingCollection(CollectionKind::CircleShortestArcs, 1, ChainMap::Identity);
  }
  static IndexingCollection chain(ChainMap map = ChainMap::Identity) {
    return IndexingCollection(CollectionKind::TotallyOrderedChain, 1, map);
  }

  CollectionKind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return dimension_; }
  ChainMap chain_map() const noexcept { return chain_map_; }

  bool totally_ordered() const noexcept {
    return kind_ == CollectionKind::TotallyOrderedChain || kind_ == CollectionKind::CircleOrientedArcs;
  }

  bool operator==(const IndexingCollection&) const = default;

 private:
  IndexingCollection(CollectionKind kind, std::size_t dimension, ChainMap map)
      : kind_(kind), dimension_(dimension), chain_map_(map) {}

  CollectionKind kind_;
  std::size_t dimension_;
  ChainMap chain_map_;
};

inline std::string describe(const IndexingCollection& coll) {
  switch (coll.kind()) {
    case CollectionKind::RectanglesRN: return "rect:" + std::to_string(coll.dimension());
    case CollectionKind::CircleOrientedArcs: return "circle:oriented";
    case CollectionKind::CircleShortestArcs: return "circle:shortest";
    case CollectionKind::TotallyOrderedChain:
      switch (coll.chain_map()) {
        case ChainMap::Identity: return "chain";
        case ChainMap::Square: return "chain:square";
        case ChainMap::Sqrt: return "chain:sqrt";
      }
  }
  return "unknown";
}

namespace detail {

// Shortest text that reads back to the same double.
inline std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double chain_measure(ChainMap map, double t) {
  switch (map) {
    case ChainMap::Identity: return t;
    case ChainMap::Square: return t * t;
    case ChainMap::Sqrt: return std::sqrt(t);
  }
  return t;
}

// Parameter multiplier that scales the chain measure by a.
inline double chain_parameter_scale(ChainMap map, double a) {
  switch (map) {
    case ChainMap::Identity: return a;
    case ChainMap::Square: return std::sqrt(a);
    case ChainMap::Sqrt: return a * a;
  }
  return a;
}

template <class T>
constexpr bool is_variant_for(CollectionKind kind) {
  if constexpr (std::is_same_v<T, Rectangle>) return kind == CollectionKind::RectanglesRN;
  if constexpr (std::is_same_v<T, OrientedArc>) return kind == CollectionKind::CircleOrientedArcs;
  if constexpr (std::is_same_v<T, ShortestArc>) return kind == CollectionKind::CircleShortestArcs;
  if constexpr (std::is_same_v<T, ChainPoint>) return kind == CollectionKind::TotallyOrderedChain;
  return true;  // Empty belongs to every collection
}

}  // namespace detail

inline std::string describe(const IndexSet& u) {
  using detail::format_number;
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Empty>) {
          return "empty";
        } else if constexpr (std::is_same_v<T, Rectangle>) {
          std::string out = "rect(";
          for (std::size_t i = 0; i < s.corner.size(); ++i) {
            if (i) out += ",";
            out += format_number(s.corner[i]);
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, OrientedArc>) {
          return "oriented_arc(" + format_number(s.angle) + ")";
        } else if constexpr (std::is_same_v<T, ShortestArc>) {
          return "shortest_arc(" + format_number(s.angle) + ")";
        } else {
          return "chain(" + format_number(s.t) + ")";
        }
      },
      u);
}

/// Throws KindMismatch when the variant does not belong to the collection and
/// InvalidSet when its payload breaks the type invariants.
inline void validate(const IndexingCollection& coll, const IndexSet& u) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if (!detail::is_variant_for<T>(coll.kind()))
          throw Error(ErrorCode::KindMismatch, describe(u) + " is not a member of " + describe(coll));
        if constexpr (std::is_same_v<T, Rectangle>) {
          if (s.corner.size() != coll.dimension())
            throw Error(ErrorCode::InvalidSet, describe(u) + " has the wrong dimension for " + describe(coll));
          for (double c : s.corner)
            if (!std::isfinite(c) || c < 0.0)
              throw Error(ErrorCode::InvalidSet, describe(u) + " corner must be finite and >= 0");
        } else if constexpr (std::is_same_v<T, OrientedArc>) {
          if (!(s.angle >= 0.0 && s.angle <= kTwoPi))
            throw Error(ErrorCode::InvalidSet, describe(u) + " angle must lie in [0, 2pi]");
        } else if constexpr (std::is_same_v<T, ShortestArc>) {
          if (!(s.angle > -std::numbers::pi && s.angle <= std::numbers::pi))
            throw Error(ErrorCode::InvalidSet, describe(u) + " signed angle must lie in (-pi, pi]");
        } else if constexpr (std::is_same_v<T, ChainPoint>) {
          if (!std::isfinite(s.t) || s.t < 0.0)
            throw Error(ErrorCode::InvalidSet, describe(u) + " parameter must be finite and >= 0");
        }
      },
      u);
}

/// Maps any angle onto the shortest-arc representation in (-pi, pi].
inline ShortestArc shortest_arc_at(double angle) {
  double a = std::remainder(angle, kTwoPi);  // [-pi, pi]
  if (a <= -std::numbers::pi) a += kTwoPi;
  return ShortestArc{a};
}

/// m(U). Empty and degenerate sets have measure 0.
inline double measure(const IndexingCollection& coll, const IndexSet& u) {
  validate(coll, u);
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Empty>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, Rectangle>) {
          double v = 1.0;
          for (double c : s.corner) v *= c;
          return v;
        } else if constexpr (std::is_same_v<T, OrientedArc>) {
          return s.angle;
        } else if constexpr (std::is_same_v<T, ShortestArc>) {
          return std::abs(s.angle);
        } else {
          return detail::chain_measure(coll.chain_map(), s.t);
        }
      },
      u);
}

/// U ∩ V as a member of the collection. Opposite-side shortest arcs meet only
/// at O, which is returned as the zero-length arc.
inline IndexSet intersect(const IndexingCollection& coll, const IndexSet& u, const IndexSet& v) {
  validate(coll, u);
  validate(coll, v);
  if (std::holds_alternative<Empty>(u) || std::holds_alternative<Empty>(v)) return Empty{};
  switch (coll.kind()) {
    case CollectionKind::RectanglesRN: {
      const auto& a = std::get<Rectangle>(u).corner;
      const auto& b = std::get<Rectangle>(v).corner;
      Rectangle r;
      r.corner.resize(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) r.corner[i] = std::min(a[i], b[i]);
      return r;
    }
    case CollectionKind::CircleOrientedArcs:
      return OrientedArc{std::min(std::get<OrientedArc>(u).angle, std::get<OrientedArc>(v).angle)};
    case CollectionKind::CircleShortestArcs: {
      double a = std::get<ShortestArc>(u).angle;
      double b = std::get<ShortestArc>(v).angle;
      if ((a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0)) return ShortestArc{0.0};
      return std::abs(a) <= std::abs(b) ? ShortestArc{a} : ShortestArc{b};
    }
    case CollectionKind::TotallyOrderedChain:
      return ChainPoint{std::min(std::get<ChainPoint>(u).t, std::get<ChainPoint>(v).t)};
  }
  return Empty{};
}

inline double measure_intersection(const IndexingCollection& coll, const IndexSet& u, const IndexSet& v) {
  return measure(coll, intersect(coll, u, v));
}

/// m(U △ V) = m(U) + m(V) - 2 m(U ∩ V).
inline double measure_symdiff(const IndexingCollection& coll, const IndexSet& u, const IndexSet& v) {
  const double d = measure(coll, u) + measure(coll, v) - 2.0 * measure_intersection(coll, u, v);
  return d > 0.0 ? d : 0.0;
}

/// Structural inclusion U ⊆ V.
inline bool contains(const IndexingCollection& coll, const IndexSet& u, const IndexSet& v) {
  validate(coll, u);
  validate(coll, v);
  if (std::holds_alternative<Empty>(u)) return true;
  if (std::holds_alternative<Empty>(v)) return false;
  switch (coll.kind()) {
    case CollectionKind::RectanglesRN: {
      const auto& a = std::get<Rectangle>(u).corner;
      const auto& b = std::get<Rectangle>(v).corner;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
      return true;
    }
    case CollectionKind::CircleOrientedArcs:
      return std::get<OrientedArc>(u).angle <= std::get<OrientedArc>(v).angle;
    case CollectionKind::CircleShortestArcs: {
      double a = std::get<ShortestArc>(u).angle;
      double b = std::get<ShortestArc>(v).angle;
      if (a == 0.0) return true;
      return ((a > 0.0) == (b > 0.0)) && b != 0.0 && std::abs(a) <= std::abs(b);
    }
    case CollectionKind::TotallyOrderedChain:
      return std::get<ChainPoint>(u).t <= std::get<ChainPoint>(v).t;
  }
  return false;
}

/// U ∪ V when it is a member of the collection, i.e. when U and V are nested.
inline std::optional<IndexSet> union_if_nested(const IndexingCollection& coll, const IndexSet& u,
                                               const IndexSet& v) {
  if (contains(coll, u, v)) return v;
  if (contains(coll, v, u)) return u;
  return std::nullopt;
}

/// μ(a) in m(a.U) = μ(a) m(U).
inline double scale_factor(const IndexingCollection& coll, double a) {
  switch (coll.kind()) {
    case CollectionKind::RectanglesRN: return std::pow(a, static_cast<double>(coll.dimension()));
    case CollectionKind::CircleOrientedArcs:
    case CollectionKind::TotallyOrderedChain: return a;
    case CollectionKind::CircleShortestArcs: break;
  }
  throw Error(ErrorCode::UnsupportedAction, "shortest arcs carry no scaling action");
}

/// Group action a.U of the positive reals on the collection.
inline IndexSet scale(const IndexingCollection& coll, double a, const IndexSet& u) {
  validate(coll, u);
  if (coll.kind() == CollectionKind::CircleShortestArcs)
    throw Error(ErrorCode::UnsupportedAction, "shortest arcs carry no scaling action");
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorCode::OutOfRange, "scale factor must be positive");
  if (a == 1.0) return u;
  return std::visit(
      [&](const auto& s) -> IndexSet {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Rectangle>) {
          Rectangle r = s;
          for (double& c : r.corner) c *= a;
          return r;
        } else if constexpr (std::is_same_v<T, OrientedArc>) {
          const double angle = a * s.angle;
          if (angle > kTwoPi)
            throw Error(ErrorCode::OutOfRange, describe(u) + " scaled by " + detail::format_number(a) +
                                                   " would exceed the full circle");
          return OrientedArc{angle};
        } else if constexpr (std::is_same_v<T, ChainPoint>) {
          return ChainPoint{s.t * detail::chain_parameter_scale(coll.chain_map(), a)};
        } else {
          return s;
        }
      },
      u);
}

}  // namespace sifbm
