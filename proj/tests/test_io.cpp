#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "walker/catalog.hpp"
#include "walker/io.hpp"

using namespace walker;

TEST(Json, RationalsAreStrings) {
  EXPECT_EQ(io::to_json(Rational(-6, 4)), "-3/2");
  EXPECT_EQ(io::to_json(Rational(7)), "7");
  EXPECT_EQ(io::to_json(UPoly::power(2)).dump(), R"(["0","0","1"])");
  EXPECT_EQ(io::to_json(Complex(0.5, -1)).dump(), "[0.5,-1.0]");
}

TEST(Json, MetricRoundTrip) {
  WalkerMetric m = make_metric("m", "a*x1^2 + x3*x4", "x2 - 1/3", "0", {{"a", Rational(5, 2)}});
  io::Json j = io::to_json(m);
  EXPECT_EQ(j["parameters"]["a"], "5/2");
  WalkerMetric back = io::metric_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.psi33, m.psi33);
  EXPECT_EQ(back.psi34, m.psi34);
  EXPECT_EQ(back.psi44, m.psi44);
  EXPECT_EQ(back.label, "m");
}

TEST(Json, MetricErrors) {
  EXPECT_THROW(io::metric_from_json(nlohmann::json::parse(R"({"psi33": "x1"})")), InvalidOptions);
  EXPECT_THROW(io::metric_from_json(nlohmann::json::parse(R"({"psi33": "b", "psi34": "0", "psi44": "0"})")),
               UnboundParameter);
  EXPECT_THROW(io::metric_from_json(nlohmann::json::parse(R"({"psi33": 3, "psi34": "0", "psi44": "0"})")),
               InvalidOptions);
  EXPECT_THROW(io::load_metric_file("/nonexistent/metric.json"), InvalidOptions);
}

TEST(Json, MetricFile) {
  std::string path = ::testing::TempDir() + "walker_metric.json";
  {
    std::ofstream out(path);
    out << R"({"label": "k", "parameters": {"k": 2}, "psi33": "k*x3^2", "psi34": "0", "psi44": "0"})";
  }
  WalkerMetric m = io::load_metric_file(path);
  EXPECT_EQ(m.psi33.eval_exact(Point4<Rational>{0, 0, 3, 0}), Rational(18));
  std::remove(path.c_str());
}

TEST(Json, CurvatureReport) {
  const CatalogEntry& e = catalog_entry("thm61-2d");
  io::Json j = io::to_json(curvature_report(e.metric, Point4<Rational>{0, 0, 1, 1}));
  EXPECT_EQ(j["ricci"][2][2], "-1/2");
  EXPECT_EQ(j["metric"][0][2], "1");
  EXPECT_EQ(j["point"].dump(), R"(["0","0","1","1"])");
  for (const auto& [key, value] : j["riemann"].items()) {
    EXPECT_EQ(key.size(), 4U);
    EXPECT_NE(value, "0");
  }
}

TEST(Csv, HeaderAndRows) {
  CurvatureField field(make_metric("flat", "0", "0", "0"));
  GeodesicSystem sys(field);
  IntegrationOptions opts;
  opts.horizon = 1;
  GeodesicRun run = integrate_geodesic(sys, {0, {0, 0, 0, 0}, {1, 0, 0, 0}}, opts);
  std::ostringstream os;
  io::write_csv(os, run.trajectory);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,x1,x2,x3,x4,v1,v2,v3,v4,energy");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 9);
  }
  EXPECT_EQ(rows, run.trajectory.samples.size());
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
}

TEST(Json, IntegrationOutcome) {
  const CatalogEntry& e = catalog_entry("thm51-k1");
  CurvatureField field(e.metric);
  GeodesicSystem sys(field);
  IntegrationOptions opts;
  opts.horizon = 10;
  GeodesicRun run = integrate_geodesic(sys, {0, e.witness->start.x, e.witness->start.v}, opts);
  io::Json j = io::to_json(run.outcome);
  EXPECT_EQ(j["verdict"], "Blowup");
  EXPECT_NEAR(j["t_star"].get<double>(), 1.0, 1e-2);
}
