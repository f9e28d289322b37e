#include "fixtures.hpp"

namespace evac::testing {

std::string data_path(const std::string& name) { return std::string(EVAC_DATA_DIR) + "/" + name; }

std::string test_data_path(const std::string& name) {
  return std::string(EVAC_TEST_DATA_DIR) + "/" + name;
}

const BuildingGraph& three_floor() {
  static const BuildingGraph graph = load_graph(data_path("three_floor.graph"));
  return graph;
}

BuildingGraph line_graph() {
  return load_graph_text(
      "V 1 0 0 0 0\n"
      "V 2 500 0 0 0\n"
      "V 3 1000 0 0 1\n"
      "E 10 1 2\n"
      "E 11 2 3\n"
      "S 100 10 0.5\n"
      "S 101 11 0.5\n");
}

BuildingGraph diamond_graph() {
  return load_graph_text(
      "V 1 0 0 0 0\n"
      "V 2 600 0 0 0\n"
      "V 3 0 600 0 0\n"
      "V 4 600 600 0 1\n"
      "E 1 1 2\n"
      "E 2 1 3\n"
      "E 3 2 4\n"
      "E 4 3 4\n"
      "S 1 1 0.5\n"
      "S 2 2 0.5\n"
      "S 3 3 0.5\n"
      "S 4 4 0.5\n");
}

}  // namespace evac::testing
