#pragma once

// Seeded Gaussian sampling of the sifBm at a finite point set.
//
// Each path p draws its standard normals from its own Philox4x32-10 stream
// (key = seed, counter = (p, block)), so a path's values depend only on
// (seed, p, points, H) and never on how paths are spread over threads.
// Uniforms are mapped to normals by inverse CDF: Acklam's rational
// approximation followed by one Halley step against erfc, consuming exactly
// one 64-bit draw per normal.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sifbm/covariance.hpp"
#include "sifbm/error.hpp"
#include "sifbm/increments.hpp"
#include "sifbm/matrix.hpp"
#include "sifbm/parallel.hpp"
#include "sifbm/spectra.hpp"

namespace sifbm {

inline constexpr std::string_view kGeneratorName = "philox4x32-10/acklam-halley";

/// Counter-based Philox4x32 with 10 rounds.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round) {
        key[0] += kW0;
        key[1] += kW1;
      }
      const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;
};

/// Stream of 64-bit words for one (seed, stream index) pair.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream) {}

  std::uint64_t next() {
    if (slot_ == 2) {
      const auto out = Philox4x32::block({static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32),
                                          static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32)},
                                         key_);
      words_[0] = (std::uint64_t{out[0]} << 32) | out[1];
      words_[1] = (std::uint64_t{out[2]} << 32) | out[3];
      ++block_;
      slot_ = 0;
    }
    return words_[slot_++];
  }

  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> words_{};
  int slot_ = 2;
};

/// Standard normal quantile for p in (0, 1).
inline double normal_quantile(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01, -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

struct SampleField {
  std::vector<IndexSet> points;
  HurstParam h;
  std::uint64_t seed = 0;
  std::size_t n_paths = 0;
  Matrix values;  // n_paths x points.size()
  double jitter = 0.0;
  std::string_view generator = kGeneratorName;
};

inline SampleField sample_field(const IndexingCollection& coll, const HurstParam& h, std::span<const IndexSet> points,
                                std::uint64_t seed, std::size_t n_paths) {
  if (n_paths < 1) throw Error(ErrorCode::PreconditionViolated, "n_paths must be >= 1");
  const auto g = gram(coll, h, points);
  const auto factor = cholesky_psd(g);
  const std::size_t n = points.size();

  SampleField field{g.labels, h, seed, n_paths, Matrix(n_paths, n), factor.jitter};
  parallel_for(n_paths, [&](std::size_t p) {
    PhiloxStream stream(seed, p);
    std::vector<double> z(n);
    for (auto& zi : z) zi = normal_quantile(stream.uniform());
    auto row = field.values.row(p);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k <= i; ++k) s += factor.lower(i, k) * z[k];
      row[i] = s;
    }
  });
  return field;
}

/// (1/n) Σ_p x_p x_p^T. No mean is subtracted: the field is centred.
inline GramMatrix empirical_gram(const SampleField& field) {
  if (field.n_paths < 2) throw Error(ErrorCode::PreconditionViolated, "empirical_gram needs at least two paths");
  const std::size_t n = field.points.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < field.n_paths; ++p) s += field.values(p, i) * field.values(p, j);
      m(i, j) = m(j, i) = s / static_cast<double>(field.n_paths);
    }
  }
  return {std::move(m), field.h, field.points};
}

/// Pathwise ΔX_C for each increment; column k holds increment k. Terms equal
/// to the empty set contribute 0, every other term must be a sampled point.
inline Matrix sample_increments(const SampleField& field, std::span<const IncrementExpr> increments) {
  std::vector<std::vector<std::pair<int, std::size_t>>> plan(increments.size());
  for (std::size_t k = 0; k < increments.size(); ++k) {
    for (const auto& term : increments[k].expansion) {
      if (std::holds_alternative<Empty>(term.set)) continue;
      std::optional<std::size_t> idx;
      for (std::size_t i = 0; i < field.points.size() && !idx; ++i)
        if (field.points[i] == term.set) idx = i;
      if (!idx) throw Error(ErrorCode::MissingPoint, describe(term.set) + " was not sampled");
      plan[k].push_back({term.coefficient, *idx});
    }
  }
  Matrix out(field.n_paths, increments.size());
  for (std::size_t p = 0; p < field.n_paths; ++p) {
    for (std::size_t k = 0; k < plan.size(); ++k) {
      double s = 0.0;
      for (auto [coef, idx] : plan[k]) s += coef * field.values(p, idx);
      out(p, k) = s;
    }
  }
  return out;
}

}  // namespace sifbm
