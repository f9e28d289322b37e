#include "evac/building_graph.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include "evac/text.hpp"

namespace evac {

namespace {

template <typename Map, typename Key>
std::size_t lookup(const Map& map, Key key, const char* what) {
  auto it = map.find(key);
  if (it == map.end()) {
    throw std::out_of_range(std::string("unknown ") + what + " id " + std::to_string(key));
  }
  return it->second;
}

}  // namespace

BuildingGraph BuildingGraph::build(std::vector<Vertex> vertices, std::vector<EdgeRecord> edges,
                                   std::vector<SensorRecord> sensors) {
  BuildingGraph g;
  g.vertices_ = std::move(vertices);

  for (std::size_t i = 0; i < g.vertices_.size(); ++i) {
    const Vertex& v = g.vertices_[i];
    if (!is_finite(v.position)) {
      throw GraphValidationError("vertex " + std::to_string(v.id) + " has a non-finite position");
    }
    if (!g.vertex_lookup_.emplace(v.id, i).second) {
      throw GraphValidationError("duplicate vertex id " + std::to_string(v.id));
    }
    if (v.is_exit) g.exits_.push_back(i);
  }
  if (g.vertices_.empty()) throw GraphValidationError("graph has no vertices");
  if (g.exits_.empty()) throw GraphValidationError("no exit vertex");

  g.adjacency_.resize(g.vertices_.size());
  std::map<std::pair<std::size_t, std::size_t>, EdgeId> seen_pairs;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const EdgeRecord& rec = edges[i];
    const std::string label = "edge " + std::to_string(rec.id);
    if (!g.edge_lookup_.emplace(rec.id, i).second) {
      throw GraphValidationError("duplicate edge id " + std::to_string(rec.id));
    }
    auto a = g.vertex_lookup_.find(rec.v1);
    auto b = g.vertex_lookup_.find(rec.v2);
    if (a == g.vertex_lookup_.end() || b == g.vertex_lookup_.end()) {
      throw GraphValidationError(label + " references an unknown vertex");
    }
    if (rec.v1 == rec.v2) throw GraphValidationError(label + " has identical endpoints");
    const double length = euclid(g.vertices_[a->second].position, g.vertices_[b->second].position);
    if (!(length > 0.0)) throw GraphValidationError(label + " has zero length");
    auto key = std::minmax(a->second, b->second);
    if (auto [it, inserted] = seen_pairs.emplace(key, rec.id); !inserted) {
      throw GraphValidationError(label + " duplicates edge " + std::to_string(it->second) +
                                 " (parallel edges)");
    }
    g.edges_.push_back(Edge{rec.id, rec.v1, rec.v2, length, {}});
    g.endpoints_.emplace_back(a->second, b->second);
    g.adjacency_[a->second].push_back({b->second, i});
    g.adjacency_[b->second].push_back({a->second, i});
  }
  g.edge_sensors_.resize(g.edges_.size());

  for (std::size_t i = 0; i < sensors.size(); ++i) {
    const SensorRecord& rec = sensors[i];
    const std::string label = "sensor " + std::to_string(rec.id);
    if (!g.sensor_lookup_.emplace(rec.id, i).second) {
      throw GraphValidationError("duplicate sensor id " + std::to_string(rec.id));
    }
    auto e = g.edge_lookup_.find(rec.edge);
    if (e == g.edge_lookup_.end()) throw GraphValidationError(label + " references an unknown edge");
    if (!(rec.t >= 0.0 && rec.t <= 1.0)) {
      throw GraphValidationError(label + " position parameter outside [0,1]");
    }
    const auto [ia, ib] = g.endpoints_[e->second];
    const Vec3 pos = lerp(g.vertices_[ia].position, g.vertices_[ib].position, rec.t);
    g.sensors_.push_back(SensorNode{rec.id, rec.edge, rec.t, pos});
    g.edges_[e->second].sensors.push_back(rec.id);
    g.edge_sensors_[e->second].push_back(i);
  }
  for (const Edge& e : g.edges_) {
    if (e.sensors.empty()) {
      throw GraphValidationError("edge " + std::to_string(e.id) + " carries no sensor");
    }
  }

  for (auto& adj : g.adjacency_) {
    std::sort(adj.begin(), adj.end(), [&](const Adjacent& x, const Adjacent& y) {
      return g.vertices_[x.vertex].id < g.vertices_[y.vertex].id;
    });
  }

  // An undirected graph where some vertex reaches an exit is connected iff a
  // search from that exit touches every vertex.
  std::vector<bool> reached(g.vertices_.size(), false);
  std::queue<std::size_t> frontier;
  frontier.push(g.exits_.front());
  reached[g.exits_.front()] = true;
  while (!frontier.empty()) {
    const std::size_t v = frontier.front();
    frontier.pop();
    for (const Adjacent& n : g.adjacency_[v]) {
      if (!reached[n.vertex]) {
        reached[n.vertex] = true;
        frontier.push(n.vertex);
      }
    }
  }
  for (std::size_t i = 0; i < reached.size(); ++i) {
    if (!reached[i]) {
      throw GraphValidationError("graph is not connected: vertex " +
                                 std::to_string(g.vertices_[i].id) + " cannot reach an exit");
    }
  }
  return g;
}

std::size_t BuildingGraph::vertex_index(VertexId id) const {
  return lookup(vertex_lookup_, id, "vertex");
}
std::size_t BuildingGraph::edge_index(EdgeId id) const { return lookup(edge_lookup_, id, "edge"); }
std::size_t BuildingGraph::sensor_index(SensorId id) const {
  return lookup(sensor_lookup_, id, "sensor");
}

std::size_t BuildingGraph::edge_between(std::size_t a, std::size_t b) const {
  for (const Adjacent& n : adjacency_[a]) {
    if (n.vertex == b) return n.edge;
  }
  return npos;
}

std::string BuildingGraph::to_text() const {
  std::string out;
  for (const Vertex& v : vertices_) {
    out += "V " + std::to_string(v.id) + ' ' + format_number(v.position.x) + ' ' +
           format_number(v.position.y) + ' ' + format_number(v.position.z) + ' ' +
           (v.is_exit ? '1' : '0') + '\n';
  }
  for (const Edge& e : edges_) {
    out += "E " + std::to_string(e.id) + ' ' + std::to_string(e.v1) + ' ' + std::to_string(e.v2) +
           '\n';
  }
  for (const SensorNode& s : sensors_) {
    out += "S " + std::to_string(s.id) + ' ' + std::to_string(s.edge) + ' ' + format_number(s.t) +
           '\n';
  }
  return out;
}

BuildingGraph load_graph_text(std::string_view text) {
  std::vector<Vertex> vertices;
  std::vector<EdgeRecord> edges;
  std::vector<SensorRecord> sensors;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = split_whitespace(line);
    if (tok.empty()) {
      if (eol == text.size()) break;
      continue;
    }

    auto integer = [&](std::string_view s, const char* field) {
      long long v = 0;
      if (!parse_integer(s, v)) {
        throw GraphParseError(line_no, std::string("invalid ") + field + " '" + std::string(s) + "'");
      }
      return static_cast<int>(v);
    };
    auto number = [&](std::string_view s, const char* field) {
      double v = 0;
      if (!parse_number(s, v)) {
        throw GraphParseError(line_no, std::string("invalid ") + field + " '" + std::string(s) + "'");
      }
      return v;
    };
    auto expect_fields = [&](std::size_t n, const char* shape) {
      if (tok.size() != n) {
        throw GraphParseError(line_no, std::string("expected '") + shape + "'");
      }
    };

    if (tok[0] == "V") {
      expect_fields(6, "V <id> <x> <y> <z> <exit:0|1>");
      const int exit = integer(tok[5], "exit flag");
      if (exit != 0 && exit != 1) throw GraphParseError(line_no, "exit flag must be 0 or 1");
      vertices.push_back(Vertex{integer(tok[1], "vertex id"),
                                {number(tok[2], "x"), number(tok[3], "y"), number(tok[4], "z")},
                                exit == 1});
    } else if (tok[0] == "E") {
      expect_fields(4, "E <id> <v1> <v2>");
      edges.push_back({integer(tok[1], "edge id"), integer(tok[2], "vertex id"),
                       integer(tok[3], "vertex id")});
    } else if (tok[0] == "S") {
      expect_fields(4, "S <id> <edge-id> <t>");
      sensors.push_back(
          {integer(tok[1], "sensor id"), integer(tok[2], "edge id"), number(tok[3], "parameter")});
    } else {
      throw GraphParseError(line_no, "unknown record '" + std::string(tok[0]) + "'");
    }
    if (eol == text.size()) break;
  }
  return BuildingGraph::build(std::move(vertices), std::move(edges), std::move(sensors));
}

BuildingGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open graph file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_graph_text(buffer.str());
}

std::vector<std::size_t> spatial_set_indices(const BuildingGraph& graph, std::size_t vertex,
                                             double radius) {
  std::vector<std::size_t> out;
  const Vec3& p = graph.vertex(vertex).position;
  for (std::size_t s = 0; s < graph.sensor_count(); ++s) {
    if (euclid(p, graph.sensor(s).position) <= radius) out.push_back(s);
  }
  return out;
}

std::vector<SensorId> spatial_set(const BuildingGraph& graph, VertexId dn, double radius) {
  if (radius < 0.0) throw std::invalid_argument("spatial radius must be non-negative");
  std::vector<SensorId> out;
  for (std::size_t s : spatial_set_indices(graph, graph.vertex_index(dn), radius)) {
    out.push_back(graph.sensor(s).id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EdgeId> incident_edges(const BuildingGraph& graph, VertexId dn) {
  std::vector<EdgeId> out;
  for (const Adjacent& n : graph.neighbors(graph.vertex_index(dn))) {
    out.push_back(graph.edge(n.edge).id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ShortestPathTree shortest_paths_to(const BuildingGraph& graph, std::span<const std::size_t> sources,
                                   std::span<const double> edge_weight) {
  const std::size_t n = graph.vertex_count();
  ShortestPathTree tree{std::vector<double>(n, std::numeric_limits<double>::infinity()),
                        std::vector<std::size_t>(n, BuildingGraph::npos)};
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (std::size_t s : sources) {
    tree.cost[s] = 0.0;
    heap.push({0.0, s});
  }
  std::vector<bool> done(n, false);
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (done[v]) continue;
    done[v] = true;
    for (const Adjacent& nb : graph.neighbors(v)) {
      const double cand = d + edge_weight[nb.edge];
      if (cand < tree.cost[nb.vertex]) {
        tree.cost[nb.vertex] = cand;
        tree.next_hop[nb.vertex] = v;
        heap.push({cand, nb.vertex});
      }
    }
  }
  return tree;
}

std::vector<std::vector<std::size_t>> static_exit_paths(const BuildingGraph& graph) {
  std::vector<double> lengths;
  lengths.reserve(graph.edge_count());
  for (const Edge& e : graph.edges()) lengths.push_back(e.length);
  const ShortestPathTree tree = shortest_paths_to(graph, graph.exits(), lengths);

  std::vector<std::vector<std::size_t>> paths(graph.vertex_count());
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    std::size_t cur = v;
    paths[v].push_back(cur);
    while (tree.next_hop[cur] != BuildingGraph::npos) {
      cur = tree.next_hop[cur];
      paths[v].push_back(cur);
    }
  }
  return paths;
}

}  // namespace evac
