#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "evac/geometry.hpp"

namespace evac {

using VertexId = int;
using EdgeId = int;
using SensorId = int;

/// Radius sentinel meaning "every sensor in the building".
inline constexpr double kAllSensors = std::numeric_limits<double>::infinity();

/// Malformed graph text. `line()` is 1-based.
class GraphParseError : public std::runtime_error {
 public:
  GraphParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Structurally invalid graph (the message names the violated invariant).
class GraphValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Vertex {
  VertexId id = 0;
  Vec3 position;
  bool is_exit = false;
};

struct Edge {
  EdgeId id = 0;
  VertexId v1 = 0;
  VertexId v2 = 0;
  double length = 0.0;             // cm, from endpoint geometry
  std::vector<SensorId> sensors;   // in file order
};

struct SensorNode {
  SensorId id = 0;
  EdgeId edge = 0;
  double t = 0.0;  // parameter along the edge, 0 at v1
  Vec3 position;
};

/// Neighbour of a vertex, by dense index.
struct Adjacent {
  std::size_t vertex = 0;
  std::size_t edge = 0;
};

/// Raw records as they appear in a graph file.
struct EdgeRecord {
  EdgeId id;
  VertexId v1;
  VertexId v2;
};
struct SensorRecord {
  SensorId id;
  EdgeId edge;
  double t;
};

/// Immutable, validated building graph. Decision nodes sit on vertices and
/// sensor nodes along edges. Records keep their file order; each kind also
/// has a dense index used by the hot paths of the simulator.
class BuildingGraph {
 public:
  static BuildingGraph build(std::vector<Vertex> vertices, std::vector<EdgeRecord> edges,
                             std::vector<SensorRecord> sensors);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t sensor_count() const { return sensors_.size(); }

  const Vertex& vertex(std::size_t index) const { return vertices_[index]; }
  const Edge& edge(std::size_t index) const { return edges_[index]; }
  const SensorNode& sensor(std::size_t index) const { return sensors_[index]; }
  std::span<const Vertex> vertices() const { return vertices_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const SensorNode> sensors() const { return sensors_; }

  /// Throws std::out_of_range for unknown ids.
  std::size_t vertex_index(VertexId id) const;
  std::size_t edge_index(EdgeId id) const;
  std::size_t sensor_index(SensorId id) const;
  bool has_vertex(VertexId id) const { return vertex_lookup_.contains(id); }

  /// Sorted by neighbour vertex id.
  std::span<const Adjacent> neighbors(std::size_t vertex) const { return adjacency_[vertex]; }
  std::size_t edge_source(std::size_t edge) const { return endpoints_[edge].first; }
  std::size_t edge_target(std::size_t edge) const { return endpoints_[edge].second; }
  /// Edge index between two vertices, or npos.
  std::size_t edge_between(std::size_t a, std::size_t b) const;
  std::span<const std::size_t> edge_sensors(std::size_t edge) const { return edge_sensors_[edge]; }
  std::span<const std::size_t> exits() const { return exits_; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Canonical text form; load_graph_text(to_text()) reproduces the graph.
  std::string to_text() const;

 private:
  BuildingGraph() = default;

  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<SensorNode> sensors_;
  std::unordered_map<VertexId, std::size_t> vertex_lookup_;
  std::unordered_map<EdgeId, std::size_t> edge_lookup_;
  std::unordered_map<SensorId, std::size_t> sensor_lookup_;
  std::vector<std::vector<Adjacent>> adjacency_;
  std::vector<std::pair<std::size_t, std::size_t>> endpoints_;
  std::vector<std::vector<std::size_t>> edge_sensors_;
  std::vector<std::size_t> exits_;
};

BuildingGraph load_graph(const std::filesystem::path& path);
BuildingGraph load_graph_text(std::string_view text);

/// Sensors within distance R (inclusive) of the decision node, sorted by id.
std::vector<SensorId> spatial_set(const BuildingGraph& graph, VertexId dn, double radius);
/// Index form of spatial_set, sorted by sensor index.
std::vector<std::size_t> spatial_set_indices(const BuildingGraph& graph, std::size_t vertex,
                                             double radius);

/// Edges touching the vertex, ascending id.
std::vector<EdgeId> incident_edges(const BuildingGraph& graph, VertexId dn);

/// Single-source or multi-source Dijkstra over non-negative edge weights.
struct ShortestPathTree {
  std::vector<double> cost;            // infinity when unreachable
  std::vector<std::size_t> next_hop;   // toward the nearest source; npos at sources
};
ShortestPathTree shortest_paths_to(const BuildingGraph& graph, std::span<const std::size_t> sources,
                                   std::span<const double> edge_weight);

/// For every vertex, the physically shortest path to its nearest exit, as
/// vertex indices starting at the vertex itself.
std::vector<std::vector<std::size_t>> static_exit_paths(const BuildingGraph& graph);

}  // namespace evac
