#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sifbm/sampling.hpp"
#include "sifbm/validation.hpp"
#include "test_support.hpp"

namespace sifbm {
namespace {

constexpr double pi = std::numbers::pi;
const auto rect2 = IndexingCollection::rectangles(2);
const auto chain = IndexingCollection::chain();

ElementaryFlow diagonal_from_empty() {
  return ElementaryFlow(rect2, {{0.0, Empty{}}, {1.0, Rectangle{{1, 1}}}, {2.0, Rectangle{{2, 2}}}});
}

TEST(ProjectionCheck, DiagonalFlowPasses) {
  std::vector<double> grid;
  for (int k = 1; k <= 10; ++k) grid.push_back(0.4 * k);
  const auto r = check_projection_is_fbm(rect2, HurstParam{0.4}, diagonal_from_empty(), grid);
  EXPECT_TRUE(r.passed) << r.max_abs_error;
  EXPECT_EQ(r.details.size(), 55u);
  EXPECT_EQ(r.check, "projection");
  EXPECT_FALSE(r.reduction.empty());
}

TEST(ProjectionCheck, ChainIdentityFlowPassesForAnyH) {
  const ElementaryFlow line(chain, {{0.0, ChainPoint{0.0}}, {5.0, ChainPoint{5.0}}});
  const std::vector<double> grid{0.5, 1.0, 2.5, 4.0};
  for (double h : {0.05, 0.5, 0.75, 0.95}) EXPECT_TRUE(check_projection_is_fbm(chain, HurstParam{h}, line, grid).passed);
}

TEST(ProjectionCheck, SinglePoint) {
  const std::vector<double> grid{3.0};
  const auto r = check_projection_is_fbm(rect2, HurstParam{0.3}, diagonal_from_empty(), grid);
  ASSERT_EQ(r.details.size(), 1u);
  EXPECT_NEAR(r.details[0].value, std::pow(3.0, 0.6), 1e-12);
  EXPECT_TRUE(r.passed);
}

// Hand expansion: V = (1,1), U = (2,1), A = (1,1): both sides reduce to 1^{2H}.
TEST(StationarityCheck, RectangleHandOracle) {
  const std::vector<IndexSet> u{Rectangle{{2, 1}}};
  const std::vector<IndexSet> a{Rectangle{{1, 1}}};
  for (double h : {0.2, 0.5}) {
    const auto r = check_stationarity(rect2, HurstParam{h}, Rectangle{{1, 1}}, u, a);
    EXPECT_TRUE(r.passed);
    ASSERT_EQ(r.details.size(), 1u);
    EXPECT_NEAR(r.details[0].value, 1.0, 1e-14);
  }
}

TEST(StationarityCheck, ChainReducesToFbmGram) {
  const double t0 = 0.7;
  const std::vector<double> incr{0.3, 1.1, 2.0};
  std::vector<IndexSet> u, a;
  for (double x : incr) {
    u.push_back(ChainPoint{t0 + x});
    a.push_back(ChainPoint{t0 + x - t0});
  }
  const HurstParam h{0.8};
  const auto r = check_stationarity(chain, h, ChainPoint{t0}, u, a);
  EXPECT_TRUE(r.passed);
  const auto fbm = fbm_gram(h, incr);
  EXPECT_NEAR(r.details[1].value, fbm(0, 1), 1e-12);
}

TEST(StationarityCheck, Preconditions) {
  const std::vector<IndexSet> u{Rectangle{{2, 1}}};
  const std::vector<IndexSet> bad{Rectangle{{2, 1}}};
  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ParseError;
  };
  EXPECT_EQ(code_of([&] { check_stationarity(rect2, HurstParam{0.3}, Rectangle{{1, 1}}, u, bad); }),
            ErrorCode::PreconditionViolated);
  const std::vector<IndexSet> outside{Rectangle{{0.5, 3}}};
  EXPECT_EQ(code_of([&] { check_stationarity(rect2, HurstParam{0.3}, Rectangle{{1, 1}}, outside, u); }),
            ErrorCode::PreconditionViolated);
  EXPECT_EQ(code_of([&] { check_stationarity(rect2, HurstParam{0.3}, Rectangle{{1, 1}}, u, {}); }),
            ErrorCode::PreconditionViolated);
}

TEST(SelfSimilarityCheck, Examples) {
  const std::vector<IndexSet> pts{Rectangle{{1, 1}}, Rectangle{{2, 2}}};
  const auto r = check_self_similarity(rect2, HurstParam{0.5}, 2.0, pts);
  EXPECT_TRUE(r.passed);
  EXPECT_NEAR(r.details[0].value, 4.0, 1e-13);  // gram of (2,2): m = 4

  EXPECT_TRUE(check_self_similarity(rect2, HurstParam{0.3}, 1.0, pts).passed);

  const auto arcs = IndexingCollection::oriented_arcs();
  const std::vector<IndexSet> angles{OrientedArc{pi / 4}, OrientedArc{pi / 2}};
  for (double h : {0.1, 0.3, 0.5}) {
    const HurstParam hp{h};
    const auto rr = check_self_similarity(arcs, hp, 2.0, angles);
    EXPECT_TRUE(rr.passed);
    EXPECT_NEAR(rr.details[1].value, std::pow(2.0, 2 * h) * phi(arcs, hp, angles[0], angles[1]), 1e-13);
  }

  EXPECT_THROW(check_self_similarity(IndexingCollection::shortest_arcs(), HurstParam{0.3}, 2.0,
                                     std::vector<IndexSet>{ShortestArc{0.1}}),
               Error);
}

TEST(OuterContinuity, ClosedFormAtThreeTenths) {
  std::vector<IndexSet> seq;
  for (int n = 1; n <= 100; ++n) seq.push_back(Rectangle{{1.0 + 1.0 / n, 1.0}});
  seq.push_back(Rectangle{{1.0, 1.0}});
  const auto r = check_outer_continuity(rect2, HurstParam{0.3}, seq, 1e-2);
  ASSERT_EQ(r.details.size(), 100u);
  for (int n = 1; n <= 100; ++n) EXPECT_NEAR(r.details[n - 1].value, std::pow(1.0 / n, 0.6), 1e-14) << n;
  for (int n = 1; n < 100; ++n) EXPECT_LT(r.details[n].value, r.details[n - 1].value);
  // (1/100)^{0.6} ≈ 0.063 is above 1e-2, so the curve threshold is not met at n = 100.
  EXPECT_NEAR(r.max_abs_error, std::pow(0.01, 0.6), 1e-14);
  EXPECT_FALSE(r.passed);
  EXPECT_TRUE(check_outer_continuity(rect2, HurstParam{0.3}, seq, 0.07).passed);
}

TEST(OuterContinuity, BrownianAndConstantChains) {
  std::vector<IndexSet> seq;
  for (int n = 1; n <= 20; ++n) seq.push_back(Rectangle{{1.0 + 1.0 / n, 1.0}});
  seq.push_back(Rectangle{{1.0, 1.0}});
  const auto r = check_outer_continuity(rect2, HurstParam{0.5}, seq, 1.0);
  for (int n = 1; n <= 20; ++n) EXPECT_NEAR(r.details[n - 1].value, 1.0 / n, 1e-14);

  const std::vector<IndexSet> flat(5, Rectangle{{2, 3}});
  const auto c = check_outer_continuity(rect2, HurstParam{0.3}, flat, 1e-12);
  for (const auto& d : c.details) EXPECT_EQ(d.value, 0.0);
  EXPECT_TRUE(c.passed);
}

TEST(OuterContinuity, RejectsIncreasingChain) {
  const std::vector<IndexSet> up{Rectangle{{1, 1}}, Rectangle{{2, 2}}};
  try {
    check_outer_continuity(rect2, HurstParam{0.3}, up, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotDecreasing);
  }
}

TEST(Circle, HalfCircleCoincidence) {
  const std::vector<std::pair<double, double>> pairs{{pi / 4, pi / 2}, {pi / 3, pi / 3}, {0.0, pi}, {pi, 0.1}};
  for (double h : {0.2, 0.35, 0.5}) {
    const auto r = circle_triple_compare(HurstParam{h}, pairs);
    EXPECT_TRUE(r.passed) << r.max_abs_error;
    EXPECT_EQ(r.details.size(), pairs.size() + 1);
  }
}

TEST(Circle, EqualAnglesGiveEqualVariances) {
  for (double a : {0.3, 1.0, 2.9}) {
    const auto c = circle_covariances(HurstParam{0.3}, a, a);
    EXPECT_NEAR(c.oriented, std::pow(a, 0.6), 1e-14);
    EXPECT_NEAR(c.shortest, c.oriented, 1e-14);
    EXPECT_NEAR(c.periodic, c.oriented, 1e-14);
  }
}

// Oriented symdiff of (π/4, 3π/2) is 5π/4 while the circle distance is 3π/4.
TEST(Circle, OffHalfCirclePairDiffers) {
  const HurstParam h{0.4};
  const double a = pi / 4, b = 3 * pi / 2;
  const auto c = circle_covariances(h, a, b);
  EXPECT_NEAR(c.oriented, 0.5 * (std::pow(a, 0.8) + std::pow(b, 0.8) - std::pow(5 * pi / 4, 0.8)), 1e-13);
  EXPECT_NEAR(c.periodic, 0.5 * (std::pow(a, 0.8) + std::pow(pi / 2, 0.8) - std::pow(3 * pi / 4, 0.8)), 1e-13);
  EXPECT_GT(std::abs(c.oriented - c.periodic), 0.1);
  EXPECT_GT(circle_counterexample(h).oriented_vs_periodic, 0.1);
}

TEST(Circle, RandomHalfCirclePairs) {
  testing::Rng rng(89);
  std::vector<std::pair<double, double>> pairs;
  for (int k = 0; k < 100; ++k) pairs.push_back({testing::uniform(rng, 0.0, pi), testing::uniform(rng, 0.0, pi)});
  for (double h : {0.2, 0.35, 0.5}) EXPECT_TRUE(circle_triple_compare(HurstParam{h}, pairs).passed);
}

TEST(Circle, OutOfRangePair) {
  const std::vector<std::pair<double, double>> pairs{{0.5, 4.0}};
  try {
    circle_triple_compare(HurstParam{0.3}, pairs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfRange);
  }
}

const std::vector<IndexSet> kSixPoints{Rectangle{{0.5, 0.5}}, Rectangle{{1, 1}},   Rectangle{{2, 2}},
                                       Rectangle{{1, 0.5}},   Rectangle{{2, 1}}, Rectangle{{3, 1.5}}};
const std::vector<std::vector<IndexSet>> kTwoFlows{{kSixPoints[0], kSixPoints[1], kSixPoints[2]},
                                                   {kSixPoints[3], kSixPoints[4], kSixPoints[5]}};

TEST(Characterization, SixChainedPointsPass) {
  const auto r = characterization_crosscheck(rect2, HurstParam{0.5}, kSixPoints, kTwoFlows);
  EXPECT_TRUE(r.passed) << r.max_abs_error;
  EXPECT_EQ(r.details.size(), 4u);
}

TEST(Characterization, PerturbedOffDiagonalFails) {
  auto g = gram(rect2, HurstParam{0.5}, kSixPoints);
  g.entries(1, 4) += 0.1;
  g.entries(4, 1) += 0.1;
  const auto r = characterization_crosscheck(rect2, g, kTwoFlows);
  EXPECT_FALSE(r.passed);
  EXPECT_GE(r.max_abs_error, 0.1);
}

TEST(Characterization, SinglePointOnlyChecksPsi) {
  const std::vector<IndexSet> one{Rectangle{{2, 1.5}}};
  const auto r = characterization_crosscheck(rect2, HurstParam{0.3}, one, {});
  ASSERT_EQ(r.details.size(), 1u);
  EXPECT_EQ(r.details[0].label, "psi equals m");
  EXPECT_TRUE(r.passed);
}

TEST(Characterization, ChainThatIsNotAFlowIsRejected) {
  const std::vector<std::vector<IndexSet>> bad{{kSixPoints[2], kSixPoints[1]}};
  EXPECT_THROW(characterization_crosscheck(rect2, HurstParam{0.5}, kSixPoints, bad), Error);
}

TEST(RandomizedChecks, StationarityAndSelfSimilarityHoldForTheKernel) {
  testing::Rng rng(97);
  struct Case {
    IndexingCollection coll;
    double hmax;
  };
  for (const auto& c : {Case{rect2, 0.5}, Case{chain, 0.99}}) {
    for (int trial = 0; trial < 100; ++trial) {
      const HurstParam h{testing::uniform(rng, 0.01, c.hmax)};
      const auto inst = testing::random_stationarity_instance(rng, c.coll, 1 + trial % 5);
      const auto st = check_stationarity(c.coll, h, inst.v, inst.u_chain, inst.a_chain);
      EXPECT_TRUE(st.passed) << st.instance << " err=" << st.max_abs_error;
      const auto pts = testing::random_points(rng, c.coll, 1 + trial % 8);
      const auto ss = check_self_similarity(c.coll, h, testing::uniform(rng, 0.2, 3.0), pts);
      EXPECT_TRUE(ss.passed) << ss.instance << " err=" << ss.max_abs_error;
    }
  }
}

TEST(RandomizedChecks, ReportsArePureFunctionsOfInputs) {
  testing::Rng rng(101);
  const auto pts = testing::random_points(rng, rect2, 5);
  const auto a = check_self_similarity(rect2, HurstParam{0.3}, 1.7, pts);
  const auto b = check_self_similarity(rect2, HurstParam{0.3}, 1.7, pts);
  EXPECT_EQ(a.max_abs_error, b.max_abs_error);
  EXPECT_EQ(a.instance, b.instance);
}

// Monte Carlo: increments over U_i \ V sampled pathwise carry the covariance
// of X over A_i, at the statistical tolerance 5·√(2/n)·max diag.
TEST(MonteCarlo, StationarityFromSamples) {
  const IndexSet v = Rectangle{{1, 1}};
  const std::vector<IndexSet> u{Rectangle{{2, 1}}, Rectangle{{2, 2}}, Rectangle{{3, 2}}};
  const std::vector<IndexSet> a{Rectangle{{1, 1}}, Rectangle{{3, 1}}, Rectangle{{5, 1}}};
  const HurstParam h{0.4};
  const std::size_t n = 100000;
  std::vector<IndexSet> pts{v};
  pts.insert(pts.end(), u.begin(), u.end());
  const auto field = sample_field(rect2, h, pts, 42, n);
  std::vector<IncrementExpr> incs;
  const IndexSet vs[] = {v};
  for (const auto& ui : u) incs.push_back(increment_expand(rect2, ui, vs));
  const auto x = sample_increments(field, incs);
  const auto target = gram(rect2, h, a);
  double max_diag = 0.0;
  for (std::size_t i = 0; i < 3; ++i) max_diag = std::max(max_diag, target(i, i));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < n; ++p) s += x(p, i) * x(p, j);
      EXPECT_NEAR(s / n, target(i, j), 5 * std::sqrt(2.0 / n) * max_diag);
    }
}

TEST(MonteCarlo, SelfSimilarityFromSamples) {
  const std::vector<IndexSet> pts{Rectangle{{1, 1}}, Rectangle{{2, 1}}, Rectangle{{1.5, 2}}};
  const HurstParam h{0.35};
  const double a = 1.5;
  std::vector<IndexSet> scaled;
  for (const auto& p : pts) scaled.push_back(scale(rect2, a, p));
  const std::size_t n = 100000;
  const auto emp = empirical_gram(sample_field(rect2, h, scaled, 7, n));
  auto target = gram(rect2, h, pts).entries;
  const double factor = h.pow2h(scale_factor(rect2, a));
  double max_diag = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      target(i, j) *= factor;
      if (i == j) max_diag = std::max(max_diag, target(i, i));
    }
  EXPECT_LE(max_abs_difference(emp.entries, target), 5 * std::sqrt(2.0 / n) * max_diag);
}

TEST(MonteCarlo, CharacterizationPsiFromSamples) {
  const std::size_t n = 100000;
  const auto emp = empirical_gram(sample_field(rect2, HurstParam{0.5}, kSixPoints, 11, n));
  const auto r = characterization_crosscheck(rect2, emp, kTwoFlows, 5 * std::sqrt(2.0 / n) * 4.5);
  EXPECT_TRUE(r.passed) << r.max_abs_error;
}

}  // namespace
}  // namespace sifbm
