#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "goh_atlas/io.hpp"
#include "goh_atlas/normalform.hpp"

using namespace goh_atlas;
using io::json;

TEST_CASE("doubles print with seventeen significant digits") {
  json j = {{"a", 0.1}, {"b", 1.0}, {"c", -2.5e-300}, {"d", NAN}, {"e", 3}};
  const std::string s = io::dump(j);
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  CHECK(s.find("\"b\": 1.0") != std::string::npos);
  CHECK(s.find("e-300") != std::string::npos);
  CHECK(s.find("\"d\": null") != std::string::npos);
  CHECK(s.find("\"e\": 3") != std::string::npos);
  // reparses to the same bits
  const auto back = json::parse(s);
  CHECK(back["a"].get<double>() == 0.1);
  CHECK(back["c"].get<double>() == -2.5e-300);
  CHECK(io::dump(back) == s);
}

TEST_CASE("schema tag") {
  const json doc = io::document({{"x", 1}});
  CHECK(doc.begin().key() == "schema");
  CHECK_NOTHROW(io::check_schema(doc));
  CHECK_THROWS_AS(io::check_schema(json{{"x", 1}}), InvalidArgument);
  CHECK_THROWS_AS(io::check_schema(json{{"schema", "goh-atlas/0"}}), InvalidArgument);
}

TEST_CASE("frame round trip") {
  for (int step : {2, 3, 4}) {
    const Frame f = realize_frame(generate_basis(2, step), false).frame;
    const Frame g = io::frame_from_json(json::parse(io::dump(io::to_json(f))));
    CHECK(g.n == f.n);
    CHECK(g.r == f.r);
    CHECK(g.fields == f.fields);
    CHECK(g.completion == f.completion);
    CHECK(g.weights == f.weights);
    CHECK(g.labels == f.labels);
    CHECK(g.brackets == f.brackets);
    CHECK(g.normal_form);
  }
  const json j = io::to_json(fixtures::f23_closed_form());
  CHECK(j["fields"][1][3][0]["coef"] == "1/2");
  CHECK(j["fields"][1][3][0]["exp"] == json({2, 0, 0, 0, 0}));
}

TEST_CASE("frame json errors") {
  json j = io::to_json(heisenberg_frame());
  j["fields"][0][0][0]["exp"] = {1, 0};
  CHECK_THROWS_AS(io::frame_from_json(j), InvalidArgument);
  json k = io::to_json(heisenberg_frame());
  k["n"] = 4;
  CHECK_THROWS(io::frame_from_json(k));
}

TEST_CASE("curve and control round trip") {
  SampledCurve c;
  c.points.resize(2, 4);
  for (int i = 0; i < 4; ++i) {
    c.t.push_back(i / 3.0);
    c.points.col(i) << std::sin(i), std::cos(i);
  }
  const auto d = io::curve_from_json(json::parse(io::dump(io::to_json(c))));
  CHECK(d.t == c.t);
  CHECK(d.points == c.points);

  Eigen::MatrixXd v(2, 5);
  v.setRandom();
  const Control u(0.0, 1.0, v);
  const auto w = io::control_from_json(json::parse(io::dump(io::to_json(u))));
  CHECK(w.values() == u.values());
  CHECK(w.dt() == doctest::Approx(u.dt()));
}

TEST_CASE("goh and verdict documents") {
  const auto sys = goh_polynomials(realize_frame(generate_basis(2, 3)).frame,
                                   std::vector<Rational>{0, 0, Rational(1, 2), 1, 0});
  const json j = io::to_json(sys);
  CHECK(j["lambda"][2] == "1/2");
  CHECK(io::poly_from_json(j["polys"]["1,2"], 2) == sys.at(1, 2));

  const auto v = is_metabelian(realize_frame(generate_basis(2, 5), false).frame, 5);
  const json vj = io::to_json(v);
  CHECK(vj["metabelian"] == false);
  CHECK(vj["witness"]["I"] == json({1, 2}));
  CHECK(vj["witness"]["J"] == json({1, 1, 2}));
}

TEST_CASE("polyline csv") {
  VarietyTrace t;
  t.polylines = {{Eigen::Vector2d(0, 0), Eigen::Vector2d(0.5, 1)}, {Eigen::Vector2d(-1, 0.25)}};
  CHECK(io::polylines_csv(t) == "x1,x2,branch_id\n0,0,0\n0.5,1,0\n-1,0.25,1\n");
}
