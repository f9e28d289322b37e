#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "evac/building_graph.hpp"
#include "evac/cpn.hpp"
#include "evac/hazard.hpp"

namespace evac {

enum class AgentClass { ClassOne, ClassTwo };
enum class Group { TimeGroup, SafetyGroup, CongestionEase };
enum class Status { Moving, Queued, Exited, Perished };

const char* to_string(AgentClass c);
const char* to_string(Group g);
const char* to_string(Status s);

struct AgentParams {
  double class_one_speed = 130.0;  // cm/s
  double class_two_speed = 80.0;
  double class_one_fatigue = 0.02;  // health/s
  double class_two_fatigue = 0.05;
  double class_one_damage = 1.0;    // health/s per hazard level
  double class_two_damage = 2.0;
  double initial_health = 100.0;
  double health_threshold = 50.0;   // below: half speed, class one demoted
  std::size_t congestion_threshold = 4;
  int movement_depth = 3;
};

struct Evacuee {
  int id = 0;
  AgentClass agent_class = AgentClass::ClassOne;
  Group group = Group::TimeGroup;
  Group base_group = Group::TimeGroup;  // group to return to after congestion easing
  double health = 100.0;
  double base_speed = 0.0;
  double current_speed = 0.0;
  Status status = Status::Queued;

  std::size_t vertex = 0;                     // current or last visited vertex
  std::size_t edge = BuildingGraph::npos;     // edge being walked, npos at a vertex
  double progress = 0.0;                      // cm along `edge`
  std::vector<std::size_t> path;              // assigned route, vertex indices
  std::size_t path_pos = 0;                   // index of `vertex` in `path`
  int depth_remaining = 0;

  double queued_time = 0.0;
  double outcome_time = 0.0;
  int path_requests = 0;
  int group_switches = 0;
  bool demoted = false;

  bool absorbed() const { return status == Status::Exited || status == Status::Perished; }
};

Evacuee make_evacuee(int id, AgentClass agent_class, std::size_t vertex, const AgentParams& params);

/// Linear fatigue plus hazard damage scaled by the local level (intensity
/// above 1 means burning). Health never rises; crossing the threshold halves
/// the speed at once and reaching zero makes the evacuee perish.
void update_health(Evacuee& e, double dt, double local_intensity, const AgentParams& params);

/// Class-one evacuee below the health threshold joins the safety group for
/// good. Returns true when the switch happens now.
bool regroup_health(Evacuee& e, const AgentParams& params);

/// Newly arrived evacuee facing a queue of at least the threshold is routed
/// for one request by the congestion-ease policy. Returns true on switch.
bool regroup_congestion(Evacuee& e, std::size_t queue_length, const AgentParams& params);

/// Metric the evacuee's own (non-transient) group routes by.
cpn::MetricClass group_metric(Group base);

/// Gives the evacuee at the head of a decision node's queue its next route:
/// the best mailbox entry for `metric`, or the congestion-easing entry when
/// `congestion_ease` is set, or `fallback` when the mailbox is empty.
void serve_evacuee(Evacuee& e, const cpn::Mailbox& mailbox, bool congestion_ease, double alpha,
                   std::span<const std::size_t> fallback, const BuildingGraph& graph,
                   const AgentParams& params);

enum class Arrival { None, Exited, PassThrough, NeedsService };

/// Moves a Moving evacuee along its route for dt seconds. Reaching a vertex
/// ends the movement for this step; leftover distance is dropped.
Arrival advance(Evacuee& e, double dt, const BuildingGraph& graph);

/// Intensity the evacuee is exposed to: the nearest sensor on its edge, or
/// at a vertex the nearest sensor on any incident edge.
double local_intensity(const Evacuee& e, const BuildingGraph& graph, const HazardState& hazard);

}  // namespace evac
