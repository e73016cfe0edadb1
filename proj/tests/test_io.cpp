#include <gtest/gtest.h>

#include <sstream>

#include "mixgp/doe.hpp"
#include "mixgp/io.hpp"

using namespace mixgp;

namespace {

const char* kSpaceJson = R"({"variables": [
  {"name": "x", "kind": "continuous", "lower": -1, "upper": 1},
  {"name": "shape", "kind": "categorical", "levels": ["square", "circle", "tri"]},
  {"name": "n", "kind": "integer", "lower": 1, "upper": 4},
  {"name": "c", "kind": "categorical", "count": 2}
]})";

DesignSpace space() { return io::design_space_from_json(io::parse_json(kSpaceJson, "test")); }

}  // namespace

TEST(DesignSpaceJson, ParsesAndRoundTrips) {
  const auto s = space();
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s.categorical(0).levels[1], "circle");
  EXPECT_EQ(s.categorical(1).levels[1], "2");
  const auto again = io::design_space_from_json(io::to_json(s));
  EXPECT_EQ(io::to_json(again), io::to_json(s));
}

TEST(DesignSpaceJson, Errors) {
  EXPECT_THROW(io::parse_json("{", "x"), ParseError);
  EXPECT_THROW(io::design_space_from_json(io::parse_json(R"({"vars": []})", "x")), ParseError);
  EXPECT_THROW(io::design_space_from_json(io::parse_json(R"({"variables": [{"name": "a", "kind": "real"}]})", "x")),
               ParseError);
  EXPECT_THROW(io::design_space_from_json(
                   io::parse_json(R"({"variables": [{"name": "a", "kind": "continuous", "lower": 1, "upper": 0}]})", "x")),
               ParseError);
  EXPECT_THROW(io::read_design_space("/nonexistent/space.json"), ParseError);
}

TEST(Points, WriteReadRoundTrip) {
  const auto s = space();
  const auto pts = lhs(s, 12, 3);
  std::vector<double> y;
  for (std::size_t i = 0; i < pts.size(); ++i) y.push_back(0.1 * static_cast<double>(i) - 1.0 / 3.0);
  std::stringstream ss;
  io::write_points(ss, s, pts, &y);
  const auto text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "x,shape,n,c,y");
  const auto rows = io::read_rows(ss, s, true);
  EXPECT_EQ(rows.points, pts);
  EXPECT_EQ(rows.targets, y);
}

TEST(Points, LevelsByNameOrIndex) {
  const auto s = space();
  std::stringstream ss("x,shape,n,c\n0.5,circle,2,1\n-1,3,4,2\n");
  const auto rows = io::read_rows(ss, s, false);
  ASSERT_EQ(rows.points.size(), 2u);
  EXPECT_EQ(rows.points[0].categorical, (std::vector<int>{2, 1}));
  EXPECT_EQ(rows.points[1].categorical, (std::vector<int>{3, 2}));
}

TEST(Points, Errors) {
  const auto s = space();
  {
    std::stringstream ss("x,shape,n\n");
    EXPECT_THROW(io::read_rows(ss, s, false), ParseError);
  }
  {
    std::stringstream ss("x,shape,n,c\n0.5,circle,2\n");
    EXPECT_THROW(io::read_rows(ss, s, false), ParseError);
  }
  {
    std::stringstream ss("x,shape,n,c\nabc,circle,2,1\n");
    EXPECT_THROW(io::read_rows(ss, s, false), ParseError);
  }
  {
    std::stringstream ss("x,shape,n,c\n5,circle,2,1\n");
    EXPECT_THROW(io::read_rows(ss, s, false), OutOfBounds);
  }
  {
    std::stringstream ss("x,shape,n,c\n0,hexagon,2,1\n");
    EXPECT_ANY_THROW(io::read_rows(ss, s, false));
  }
  {
    std::stringstream ss("x,shape,n,c\n");
    EXPECT_THROW(io::read_rows(ss, s, true), ParseError);
  }
}

TEST(Model, JsonRoundTripIsBitIdentical) {
  const auto s = space();
  auto pts = lhs(s, 15, 4);
  std::vector<double> y;
  for (const auto& p : pts) y.push_back(p.continuous[0] * p.integer[0] + p.categorical[0] - 0.7 * p.categorical[1]);
  const Dataset data(s, pts, y);
  FitConfig cfg;
  cfg.n_starts = 1;
  for (auto kind : kAllKinds) {
    const auto model = fit(data, kind, ExponentPower::Absolute, cfg);
    const auto text = io::to_json(model).dump();
    const auto back = io::model_from_json(io::parse_json(text, "model"));
    EXPECT_EQ(back.hyperparameters().flat(), model.hyperparameters().flat());
    EXPECT_EQ(back.log_likelihood(), model.log_likelihood());
    for (const auto& w : lhs(s, 10, 99)) {
      EXPECT_EQ(back.predict(w), model.predict(w)) << to_string(kind);
    }
  }
}

TEST(Model, RejectsForeignDocuments) {
  EXPECT_THROW(io::model_from_json(io::parse_json(R"({"format": "other"})", "m")), ParseError);
  EXPECT_THROW(io::model_from_json(io::parse_json(R"({"format": "mixgp-model"})", "m")), ParseError);
}

TEST(LevelMatrix, HeaderAndRows) {
  const Categorical cat{{"a", "b"}};
  Eigen::MatrixXd R(2, 2);
  R << 1.0, 0.25, 0.25, 1.0;
  std::ostringstream os;
  io::write_level_matrix(os, cat, R);
  EXPECT_EQ(os.str(), "level,a,b\na,1,0.25\nb,0.25,1\n");
}
