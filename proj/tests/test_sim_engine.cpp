#include <gtest/gtest.h>

#include "evac/experiment.hpp"
#include "evac/sim_engine.hpp"
#include "fixtures.hpp"
#include "scenarios.hpp"

using namespace evac;
using evac::testing::five_in_a_row;
using evac::testing::quiet_params;

TEST(Simulation, GoldenTrace) {
  const BuildingGraph g = five_in_a_row();
  Simulation sim(g, quiet_params(MetricMode::TM), 1);
  sim.add_evacuee(AgentClass::ClassOne, 1);
  sim.add_evacuee(AgentClass::ClassOne, 1);
  sim.add_evacuee(AgentClass::ClassOne, 3);
  const std::vector<std::string> expected{
      "t=0 p4 serve agent 0 at 1 by time route 1-2-3-4-5",
      "t=0 p4 serve agent 2 at 3 by time route 3-4-5",
      "t=1 p4 serve agent 1 at 1 by time route 1-2-3-4-5",
      "t=1 p5 agent 0 passes 2",
      "t=1 p5 agent 2 passes 4",
      "t=2 p5 agent 1 passes 2",
      "t=3 p5 agent 0 passes 3",
      "t=3 p5 agent 2 exited at 5",
      "t=4 p5 agent 1 passes 3",
      "t=5 p5 agent 0 passes 4",
      "t=6 p5 agent 1 passes 4",
      "t=7 p5 agent 0 exited at 5",
      "t=8 p5 agent 1 exited at 5",
  };
  EXPECT_EQ(evac::testing::trace_lines(sim), expected);
  const SimResult r = sim.result();
  EXPECT_EQ(r.end_time, 9.0);
  EXPECT_EQ(r.exited, 3u);
  EXPECT_EQ(r.agents[0].time, 8.0);
  EXPECT_EQ(r.agents[1].time, 9.0);
  EXPECT_EQ(r.agents[2].time, 4.0);
  EXPECT_EQ(r.agents[1].queued_time, 1.0);
  EXPECT_EQ(r.total_congestion_time, 1.0);
  EXPECT_EQ(sim.queue_occupancy_time(), 1.0);
}

TEST(Simulation, NeighbourOfExitLeavesOnceTheEdgeIsWalked) {
  // 200 cm at 130 cm/s takes two ticks.
  const BuildingGraph g = five_in_a_row();
  Simulation sim(g, quiet_params(MetricMode::CM), 1);
  sim.add_evacuee(AgentClass::ClassOne, 4);
  sim.step();
  EXPECT_EQ(sim.now(), 1.0);
  EXPECT_EQ(sim.evacuees()[0].status, Status::Moving);
  EXPECT_FALSE(sim.finished());
  sim.step();
  EXPECT_EQ(sim.evacuees()[0].status, Status::Exited);
  EXPECT_EQ(sim.evacuees()[0].outcome_time, 2.0);
  EXPECT_TRUE(sim.finished());
  EXPECT_THROW(sim.step(), std::logic_error);
}

TEST(Simulation, EngulfedEvacueePerishes) {
  std::string text = "V 0 0 0 0 0\n";
  for (int i = 1; i <= 10; ++i) {
    text += "V " + std::to_string(i) + " " + std::to_string(i * 1000) + " 0 0 " +
            (i == 10 ? "1" : "0") + "\n";
    text += "E " + std::to_string(i) + " " + std::to_string(i - 1) + " " + std::to_string(i) + "\n";
    text += "S " + std::to_string(i) + " " + std::to_string(i) + " 0.5\n";
  }
  const BuildingGraph g = load_graph_text(text);
  SimParams p;
  p.hazard.origin = {0, 0, 0};
  p.hazard.spread_rate = 1e6;
  Simulation sim(g, p, 1);
  sim.add_evacuee(AgentClass::ClassTwo, 0);
  while (!sim.finished()) sim.step();
  sim.finalize();
  const SimResult r = sim.result();
  EXPECT_EQ(r.perished, 1u);
  EXPECT_EQ(r.survival_rate, 0.0);
  EXPECT_EQ(sim.evacuees()[0].health, 0.0);
  // 2.05/s at level 1 for 30 s, then 4.05/s at level 2.
  EXPECT_LT(r.agents[0].time, 60.0);
}

TEST(Simulation, EmptyRun) {
  SimParams p = quiet_params(MetricMode::CM);
  const SimResult r = run(evac::testing::three_floor(), p, 1);
  EXPECT_EQ(r.survival_rate, 1.0);
  EXPECT_TRUE(r.agents.empty());
}

TEST(Simulation, LateHazardEveryoneSurvives) {
  SimParams p = quiet_params(MetricMode::CM);
  p.occupancy = 60;
  const SimResult r = run(evac::testing::three_floor(), p, 4);
  EXPECT_EQ(r.survival_rate, 1.0);
  EXPECT_EQ(r.exited, 60u);
}

TEST(Simulation, MaxTimeMarksRemainingAsPerished) {
  SimParams p = quiet_params(MetricMode::CM);
  p.occupancy = 40;
  p.max_time = 5;
  const SimResult r = run(evac::testing::three_floor(), p, 2);
  EXPECT_EQ(r.end_time, 5.0);
  EXPECT_EQ(r.exited + r.perished, 40u);
  EXPECT_GT(r.perished, 0u);
}

TEST(Simulation, Deterministic) {
  SimParams p;
  p.occupancy = 30;
  p.mode = MetricMode::SM;
  p.hazard.origin = {2700, 400, 0};
  const BuildingGraph& g = evac::testing::three_floor();
  const RunRecord a{0, {}, 42, run(g, p, 42)};
  const RunRecord b{0, {}, 42, run(g, p, 42)};
  EXPECT_EQ(runs_csv({&a, 1}), runs_csv({&b, 1}));
  EXPECT_EQ(agents_csv({&a, 1}), agents_csv({&b, 1}));
}

TEST(Simulation, CongestionAccumulatorsAgree) {
  const BuildingGraph& g = evac::testing::three_floor();
  for (MetricMode mode : {MetricMode::SM, MetricMode::TM, MetricMode::CM}) {
    SimParams p;
    p.occupancy = 120;
    p.mode = mode;
    p.hazard.origin = {2700, 400, 0};
    p.hazard.start_time = -60;
    Simulation sim(g, p, 7);
    sim.populate();
    while (!sim.finished()) sim.step();
    sim.finalize();
    const SimResult r = sim.result();
    double per_agent = 0.0;
    for (const Evacuee& e : sim.evacuees()) per_agent += e.queued_time;
    EXPECT_EQ(r.total_congestion_time, per_agent);
    EXPECT_EQ(r.total_congestion_time, sim.queue_occupancy_time());
    EXPECT_EQ(r.exited + r.perished, 120u);
  }
}

TEST(Simulation, PlacementOnlyBeforeStart) {
  const BuildingGraph g = five_in_a_row();
  Simulation sim(g, quiet_params(MetricMode::CM), 1);
  EXPECT_THROW(sim.add_evacuee(AgentClass::ClassOne, 5), std::invalid_argument);
  sim.add_evacuee(AgentClass::ClassOne, 1);
  sim.step();
  EXPECT_THROW(sim.add_evacuee(AgentClass::ClassOne, 1), std::logic_error);
}

TEST(Simulation, ModesUseTheirMetricClasses) {
  const BuildingGraph g = five_in_a_row();
  for (MetricMode mode : {MetricMode::SM, MetricMode::TM}) {
    Simulation sim(g, quiet_params(mode), 1);
    sim.add_evacuee(AgentClass::ClassOne, 1);
    sim.add_evacuee(AgentClass::ClassTwo, 2);
    const auto lines = evac::testing::trace_lines(sim);
    const std::string want = mode == MetricMode::SM ? " by safety " : " by time ";
    for (const auto& l : lines) {
      if (l.find("serve agent") != std::string::npos) {
        EXPECT_NE(l.find(want), std::string::npos) << l;
      }
    }
  }
}

TEST(Simulation, HealthTriggerScenario) {
  const auto outcome = evac::testing::health_trigger_scenario();
  EXPECT_TRUE(outcome.ok) << outcome.detail;
}

TEST(Simulation, CongestionTriggerScenario) {
  const auto outcome = evac::testing::congestion_trigger_scenario();
  EXPECT_TRUE(outcome.ok) << outcome.detail;
}

TEST(Simulation, NoRegroupingWithoutDynamicGrouping) {
  const BuildingGraph g = five_in_a_row();
  SimParams p = quiet_params(MetricMode::CM);
  p.dynamic_grouping = false;
  p.agents.movement_depth = 0;
  Simulation sim(g, p, 5);
  sim.add_evacuee(AgentClass::ClassOne, 1);
  for (int i = 0; i < 8; ++i) sim.add_evacuee(AgentClass::ClassOne, 2);
  sim.evacuee(0).health = 50.01;
  for (const auto& l : evac::testing::trace_lines(sim)) {
    EXPECT_EQ(l.find("congestion-ease"), std::string::npos) << l;
    EXPECT_EQ(l.find("demoted"), std::string::npos) << l;
  }
}

TEST(SimParams, Validation) {
  SimParams p;
  EXPECT_NO_THROW(validate(p));
  p.radius = -1;
  EXPECT_THROW(validate(p), std::invalid_argument);
  p = {};
  p.alpha = 0.5;
  EXPECT_THROW(validate(p), std::invalid_argument);
  p = {};
  p.occupancy = -1;
  EXPECT_THROW(validate(p), std::invalid_argument);
}
