#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sifbm/io.hpp"
#include "test_support.hpp"

namespace sifbm {
namespace {

using io::json;

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::KindMismatch;
}

TEST(ParseCollection, Grammar) {
  EXPECT_EQ(io::parse_collection("rect:2"), IndexingCollection::rectangles(2));
  EXPECT_EQ(io::parse_collection("rect:5").dimension(), 5u);
  EXPECT_EQ(io::parse_collection("circle:oriented"), IndexingCollection::oriented_arcs());
  EXPECT_EQ(io::parse_collection("circle:shortest"), IndexingCollection::shortest_arcs());
  EXPECT_EQ(io::parse_collection("chain"), IndexingCollection::chain());
  EXPECT_EQ(io::parse_collection("chain:square"), IndexingCollection::chain(ChainMap::Square));
  EXPECT_EQ(io::parse_collection("chain:sqrt"), IndexingCollection::chain(ChainMap::Sqrt));
  for (const char* bad : {"rect:", "rect:0", "rect:2x", "circle", "chain:cube", ""})
    EXPECT_EQ(code_of([&] { io::parse_collection(bad); }), ErrorCode::ParseError) << bad;
}

TEST(ParseCollection, DescribeRoundTrip) {
  for (const auto& c : {IndexingCollection::rectangles(3), IndexingCollection::oriented_arcs(),
                        IndexingCollection::shortest_arcs(), IndexingCollection::chain(),
                        IndexingCollection::chain(ChainMap::Square), IndexingCollection::chain(ChainMap::Sqrt)})
    EXPECT_EQ(io::parse_collection(describe(c)), c);
}

TEST(ParseGrid, InclusiveRange) {
  const auto g = io::parse_grid("0.05:0.95:0.05");
  ASSERT_EQ(g.size(), 19u);
  EXPECT_EQ(g.front(), 0.05);
  EXPECT_EQ(g.back(), 0.95);
  EXPECT_EQ(g[5], 0.3);
  EXPECT_EQ(io::parse_grid("0.5:0.75:0.05").size(), 6u);
  EXPECT_EQ(io::parse_grid("0.05:0.95:0.01").size(), 91u);
  EXPECT_EQ(io::parse_grid("0.3:0.3:0.1"), std::vector<double>{0.3});
}

TEST(ParseGrid, JsonArray) {
  EXPECT_EQ(io::parse_grid("[0.1, 0.4, 0.7]"), (std::vector<double>{0.1, 0.4, 0.7}));
}

TEST(ParseGrid, Errors) {
  for (const char* bad : {"", "0.5:0.4:0.1", "0.1:0.9", "0.1:0.9:0", "0.1:0.9:-0.1", "a:b:c", "[]", "[1,", "0.1:0.9:0.1:3"})
    EXPECT_EQ(code_of([&] { io::parse_grid(bad); }), ErrorCode::ParseError) << bad;
}

TEST(SetJson, RoundTripEveryKind) {
  testing::Rng rng(131);
  for (const auto& coll : {IndexingCollection::rectangles(1), IndexingCollection::rectangles(3),
                           IndexingCollection::oriented_arcs(), IndexingCollection::shortest_arcs(),
                           IndexingCollection::chain()}) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto u = testing::random_set(rng, coll);
      EXPECT_EQ(io::set_from_json(json::parse(io::to_json(u).dump())), u);
    }
  }
  EXPECT_EQ(io::set_from_json(io::to_json(Empty{})), IndexSet{Empty{}});
}

TEST(SetJson, Errors) {
  EXPECT_EQ(code_of([] { io::set_from_json(json{{"kind", "disc"}}); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::set_from_json(json{{"kind", "rect"}}); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::set_from_json(json{{"kind", "chain"}, {"t", "x"}}); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::points_from_json(json{{"kind", "empty"}}); }), ErrorCode::ParseError);
}

TEST(PointsFromScalars, Examples) {
  const auto pts = io::points_from_scalars(IndexingCollection::chain(), "{0.25,1}");
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0], IndexSet{ChainPoint{0.25}});
  EXPECT_EQ(pts[1], IndexSet{ChainPoint{1.0}});
  EXPECT_EQ(io::points_from_scalars(IndexingCollection::oriented_arcs(), "{1.5}")[0], IndexSet{OrientedArc{1.5}});
  EXPECT_EQ(code_of([] { io::points_from_scalars(IndexingCollection::chain(), "0.25,1"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::points_from_scalars(IndexingCollection::chain(), "{a}"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::points_from_scalars(IndexingCollection::rectangles(2), "{1}"); }), ErrorCode::ParseError);
}

TEST(FlowJson, RoundTrip) {
  const ElementaryFlow f(IndexingCollection::rectangles(2),
                         {{0.0, Empty{}}, {1.0, Rectangle{{1, 1}}}, {2.5, Rectangle{{2, 3}}}});
  const auto back = io::flow_from_json(json::parse(io::to_json(f).dump()));
  EXPECT_EQ(back.collection(), f.collection());
  ASSERT_EQ(back.knots().size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(back.knots()[k].t, f.knots()[k].t);
    EXPECT_EQ(back.knots()[k].set, f.knots()[k].set);
  }
  EXPECT_EQ(code_of([] { io::flow_from_json(json{{"collection", "rect:2"}}); }), ErrorCode::ParseError);
}

TEST(IncrementJson, Parse) {
  const auto rect2 = IndexingCollection::rectangles(2);
  const auto j = json::parse(R"({"base": {"kind": "rect", "corner": [3, 3]},
                                 "minus": [{"kind": "rect", "corner": [2, 1]}, {"kind": "rect", "corner": [1, 2]}]})");
  EXPECT_EQ(io::increment_from_json(rect2, j).expansion.size(), 4u);
  EXPECT_EQ(io::increment_from_json(rect2, json{{"base", io::to_json(Rectangle{{1, 1}})}}).expansion.size(), 1u);
}

TEST(Formatting, DoublesRoundTrip) {
  testing::Rng rng(137);
  for (int k = 0; k < 1000; ++k) {
    const double v = testing::uniform(rng, -1e3, 1e3) * std::pow(10.0, testing::uniform(rng, -20, 20));
    EXPECT_EQ(std::stod(io::format_double(v)), v);
  }
  EXPECT_EQ(io::format_double(0.25), "0.25");
}

TEST(Formatting, CsvLayout) {
  Matrix m(2, 2);
  m(0, 0) = 1;
  m(0, 1) = m(1, 0) = 0.5;
  m(1, 1) = 4;
  EXPECT_EQ(io::matrix_to_csv(m), "1,0.5\n0.5,4\n");
}

TEST(Formatting, GramAndScanJson) {
  const auto coll = IndexingCollection::chain();
  const std::vector<IndexSet> pts{ChainPoint{0.25}, ChainPoint{1.0}};
  const auto j = io::to_json(gram(coll, HurstParam{0.5}, pts));
  EXPECT_EQ(j.at("entries")[0][1].get<double>(), 0.25);
  EXPECT_EQ(j.at("labels").size(), 2u);

  const auto report = critical_h_scan(coll, pts, std::vector<double>{0.2, 0.8});
  const auto s = io::to_json(report, "pts.json");
  EXPECT_TRUE(s.at("bracket").is_null());
  EXPECT_TRUE(s.at("refined_critical_h").is_null());
  EXPECT_EQ(s.at("grid").size(), 2u);
  EXPECT_TRUE(s.at("grid")[0].contains("min_eig"));
}

TEST(Formatting, SamplesCarrySeedAndGenerator) {
  const std::vector<IndexSet> pts{ChainPoint{1.0}};
  const auto f = sample_field(IndexingCollection::chain(), HurstParam{0.5}, pts, 42, 3);
  const auto csv = io::samples_to_csv(f);
  EXPECT_EQ(csv.rfind("# seed=42 generator=philox4x32-10/acklam-halley", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  const auto summary = io::sample_summary(f, gram(IndexingCollection::chain(), HurstParam{0.5}, pts));
  EXPECT_EQ(summary.at("seed").get<std::uint64_t>(), 42u);
  EXPECT_EQ(summary.at("generator").get<std::string>(), std::string(kGeneratorName));
}

}  // namespace
}  // namespace sifbm
