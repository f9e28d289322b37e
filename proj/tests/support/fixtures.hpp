#pragma once

#include <string>

#include "evac/building_graph.hpp"

namespace evac::testing {

std::string data_path(const std::string& name);
std::string test_data_path(const std::string& name);

/// The bundled three-floor building.
const BuildingGraph& three_floor();

/// A(1) - B(2) - C(3, exit), 500 cm apart along x, one sensor mid-edge.
BuildingGraph line_graph();

/// Square 1-2-4-3 with exit 4: two routes of equal length from vertex 1.
BuildingGraph diamond_graph();

}  // namespace evac::testing
