#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "evac/building_graph.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace evac;
using evac::testing::three_floor;

namespace {

std::string validation_message(const std::string& text) {
  try {
    load_graph_text(text);
  } catch (const GraphValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(BuildingGraph, LoadsLineGraph) {
  const BuildingGraph g = evac::testing::line_graph();
  EXPECT_EQ(g.vertex_count(), 3u);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.sensor_count(), 2u);
  EXPECT_DOUBLE_EQ(g.edge(0).length, 500.0);
  EXPECT_EQ(g.exits().size(), 1u);
  EXPECT_EQ(g.vertex(g.exits()[0]).id, 3);
  const SensorNode& s = g.sensor(g.sensor_index(100));
  EXPECT_EQ(s.position, (Vec3{250, 0, 0}));
}

TEST(BuildingGraph, EuclideanEdgeLength) {
  const BuildingGraph g = load_graph_text(
      "V 1 100 200 300 0\nV 2 400 600 300 1\nE 1 1 2\nS 1 1 0.5\n");
  EXPECT_DOUBLE_EQ(g.edge(0).length, 500.0);
}

TEST(BuildingGraph, CommentsAndBlankLines) {
  const BuildingGraph g = load_graph_text(
      "# header\n\nV 1 0 0 0 0   # start\nV 2 10 0 0 1\nE 5 1 2\nS 9 5 0\n");
  EXPECT_EQ(g.edge(0).id, 5);
}

TEST(BuildingGraph, ParseErrorsCarryLineNumbers) {
  try {
    load_graph_text("V 1 0 0 0 0\nV 2 x 0 0 1\n");
    FAIL() << "expected a parse error";
  } catch (const GraphParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(load_graph_text("V 1 0 0 0\n"), GraphParseError);
  EXPECT_THROW(load_graph_text("Q 1\n"), GraphParseError);
  EXPECT_THROW(load_graph_text("V 1 0 0 0 2\n"), GraphParseError);
}

TEST(BuildingGraph, ValidationErrorsNameTheInvariant) {
  const std::string ok_tail = "E 1 1 2\nS 1 1 0.5\n";
  EXPECT_NE(validation_message("V 1 0 0 0 0\nV 1 5 0 0 1\n" + ok_tail).find("duplicate vertex id"),
            std::string::npos);
  EXPECT_NE(validation_message("V 1 0 0 0 0\nV 2 5 0 0 0\n" + ok_tail).find("no exit"),
            std::string::npos);
  EXPECT_NE(validation_message("V 1 0 0 0 0\nV 2 5 0 0 1\nE 1 1 3\nS 1 1 0.5\n")
                .find("unknown vertex"),
            std::string::npos);
  EXPECT_NE(validation_message("V 1 0 0 0 0\nV 2 5 0 0 1\nE 1 1 1\nS 1 1 0.5\n")
                .find("identical endpoints"),
            std::string::npos);
  EXPECT_NE(validation_message("V 1 0 0 0 0\nV 2 0 0 0 1\n" + ok_tail).find("zero length"),
            std::string::npos);
  EXPECT_NE(validation_message("V 1 0 0 0 0\nV 2 5 0 0 1\nE 1 1 2\nE 2 2 1\nS 1 1 0.5\nS 2 2 0.5\n")
                .find("parallel"),
            std::string::npos);
  EXPECT_NE(validation_message("V 1 0 0 0 0\nV 2 5 0 0 1\nE 1 1 2\n").find("carries no sensor"),
            std::string::npos);
  EXPECT_NE(validation_message("V 1 0 0 0 0\nV 2 5 0 0 1\nE 1 1 2\nS 1 1 1.5\n").find("[0,1]"),
            std::string::npos);
  EXPECT_NE(validation_message("V 1 0 0 0 0\nV 2 5 0 0 1\nE 1 1 2\nS 1 7 0.5\n").find("unknown edge"),
            std::string::npos);
  EXPECT_NE(validation_message("V 1 0 0 0 0\nV 2 5 0 0 1\nE 1 1 2\nS 1 1 0.5\nS 1 1 0.2\n")
                .find("duplicate sensor id"),
            std::string::npos);
}

TEST(BuildingGraph, IsolatedExitRejected) {
  const std::string msg = validation_message(
      "V 1 0 0 0 0\nV 2 5 0 0 0\nV 3 50 0 0 1\nE 1 1 2\nS 1 1 0.5\n");
  EXPECT_NE(msg.find("not connected"), std::string::npos) << msg;
}

TEST(BuildingGraph, UnknownIdsThrow) {
  const BuildingGraph g = evac::testing::line_graph();
  EXPECT_THROW(g.vertex_index(42), std::out_of_range);
  EXPECT_THROW(g.edge_index(42), std::out_of_range);
  EXPECT_THROW(g.sensor_index(42), std::out_of_range);
}

TEST(BuildingGraph, AdjacencyIsSymmetric) {
  const BuildingGraph& g = three_floor();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    for (const Adjacent& a : g.neighbors(v)) {
      EXPECT_EQ(g.edge_between(a.vertex, v), a.edge);
    }
  }
}

TEST(BuildingGraph, TextRoundTrip) {
  const BuildingGraph& g = three_floor();
  const BuildingGraph again = load_graph_text(g.to_text());
  EXPECT_EQ(again.to_text(), g.to_text());
}

TEST(BuildingGraph, LoadGraphReportsMissingFile) {
  EXPECT_THROW(load_graph("/nonexistent/building.graph"), std::runtime_error);
}

TEST(ThreeFloorFixture, Shape) {
  const BuildingGraph& g = three_floor();
  EXPECT_EQ(g.vertex_count(), 60u);
  ASSERT_EQ(g.exits().size(), 2u);
  for (std::size_t x : g.exits()) EXPECT_EQ(g.vertex(x).position.z, 0.0);
}

TEST(ThreeFloorFixture, HubIncidentEdgesSorted) {
  const BuildingGraph& g = three_floor();
  const auto edges = incident_edges(g, 200);
  ASSERT_EQ(edges.size(), 4u);
  EXPECT_TRUE(std::is_sorted(edges.begin(), edges.end()));
}

TEST(SpatialSet, InclusiveBoundary) {
  // Vertex at the origin, a 1000 cm edge along x, sensors at 100, 299, 300, 301 cm.
  const BuildingGraph g = load_graph_text(
      "V 1 0 0 0 0\nV 2 1000 0 0 1\nE 1 1 2\n"
      "S 1 1 0.1\nS 2 1 0.299\nS 3 1 0.3\nS 4 1 0.301\n");
  EXPECT_EQ(spatial_set(g, 1, 300), (std::vector<SensorId>{1, 2, 3}));
  EXPECT_EQ(spatial_set(g, 1, 0), std::vector<SensorId>{});
  EXPECT_EQ(spatial_set(g, 1, kAllSensors).size(), 4u);
  EXPECT_THROW(spatial_set(g, 1, -1), std::invalid_argument);
}

TEST(ShortestPaths, MatchDenseOracle) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const BuildingGraph g = load_graph_text(evac::testing::random_graph_text(seed, 18, 10));
    std::vector<double> lengths;
    for (const Edge& e : g.edges()) lengths.push_back(e.length);
    const auto tree = shortest_paths_to(g, g.exits(), lengths);
    const auto oracle = evac::testing::exit_costs_by_length(g, 1.0);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      EXPECT_NEAR(tree.cost[v], oracle[v], 1e-9 * oracle[v] + 1e-9);
    }
    const auto paths = static_exit_paths(g);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      const auto& p = paths[v];
      ASSERT_FALSE(p.empty());
      EXPECT_EQ(p.front(), v);
      EXPECT_TRUE(g.vertex(p.back()).is_exit);
      double total = 0.0;
      for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        const std::size_t e = g.edge_between(p[i], p[i + 1]);
        ASSERT_NE(e, BuildingGraph::npos);
        total += g.edge(e).length;
      }
      EXPECT_NEAR(total, oracle[v], 1e-9 * oracle[v] + 1e-9);
    }
  }
}
