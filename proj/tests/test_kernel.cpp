#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace eagpsim;

namespace {

ProtocolFactory inert()
{
    return [](NodeId) { return std::make_unique<support::Inert>(); };
}

const support::Inert& as_inert(const Simulator& sim, NodeId v)
{
    return dynamic_cast<const support::Inert&>(sim.protocol(v));
}

DataMessage probe(NodeId origin)
{
    DataMessage m;
    m.id = {origin, 99};
    m.ttl = 1;
    return m;
}

}  // namespace

TEST(EventQueue, OrdersByTimeThenInsertion)
{
    EventQueue q;
    q.push({2.0, 0, EventKind::Timer, 1, {}, {}});
    q.push({1.0, 0, EventKind::Timer, 2, {}, {}});
    q.push({1.0, 0, EventKind::Timer, 3, {}, {}});
    EXPECT_EQ(q.pop().node, 2u);
    EXPECT_EQ(q.pop().node, 3u);
    EXPECT_EQ(q.pop().node, 1u);
    EXPECT_TRUE(q.empty());
    q.push({0.5, 0, EventKind::Timer, 4, {}, {}});
    EXPECT_THROW(q.pop(), SimulationError);
}

TEST(Kernel, SingleHopArrivesAfterHopDelay)
{
    const auto topo = from_links(support::graph(2, {{0, 1}}));
    Simulator sim(support::quiet(topo, 10), [](NodeId) { return std::make_unique<GossipNode>(); });
    sim.set_traffic_enabled(false);
    sim.inject_datum(1, 3);
    const auto r = sim.run();
    EXPECT_EQ(r.delivered_unique, 1u);
    EXPECT_NEAR(r.last_delivery_s, 3.005, 1e-12);
}

TEST(Kernel, BroadcastIsOneTxAndOneRxPerNeighbor)
{
    const auto topo = from_links(support::graph(4, {{0, 1}, {0, 2}, {0, 3}}));
    Simulator sim(support::quiet(topo, 10), inert());
    sim.set_traffic_enabled(false);
    sim.run_until(1);
    sim.broadcast(0, probe(0), 1);
    sim.run_until(2);
    const EnergyModel m;
    EXPECT_EQ(sim.energy(0).tx_count(), 1u);
    EXPECT_EQ(sim.energy(0).rx_count(), 0u);
    for (NodeId v = 1; v < 4; ++v) {
        EXPECT_EQ(sim.energy(v).rx_count(), 1u);
        EXPECT_EQ(as_inert(sim, v).received.size(), 1u);
    }
    const auto r = sim.finish(2);
    const double idle = 4 * 2 * m.idle_watts();
    EXPECT_NEAR(r.total_energy_j, idle + m.tx_joules() + 3 * m.rx_joules(), 1e-12);
}

TEST(Kernel, UnicastChargesOnlyTheAddressee)
{
    const auto topo = from_links(support::graph(3, {{0, 1}, {0, 2}}));
    Simulator sim(support::quiet(topo, 10), inert());
    sim.set_traffic_enabled(false);
    sim.run_until(1);
    sim.unicast(0, 2, probe(0), 1);
    sim.run_until(2);
    EXPECT_EQ(sim.energy(0).tx_count(), 1u);
    EXPECT_EQ(sim.energy(1).rx_count(), 0u);
    EXPECT_EQ(sim.energy(2).rx_count(), 1u);
}

TEST(Kernel, UnicastOutOfRangeStillCostsTheSender)
{
    const auto topo = from_links(support::graph(3, {{0, 1}, {1, 2}}));
    Simulator sim(support::quiet(topo, 10), inert());
    sim.set_traffic_enabled(false);
    sim.run_until(1);
    sim.unicast(0, 2, probe(0), 1);
    sim.run_until(2);
    EXPECT_EQ(sim.energy(0).tx_count(), 1u);
    EXPECT_EQ(sim.energy(2).rx_count(), 0u);
}

TEST(Kernel, UnicastToSelfAborts)
{
    const auto topo = from_links(support::graph(2, {{0, 1}}));
    Simulator sim(support::quiet(topo, 10), inert());
    EXPECT_THROW(sim.unicast(1, 1, probe(1), 0), SimulationError);
    EXPECT_THROW(sim.unicast(1, 7, probe(1), 0), SimulationError);
}

TEST(Kernel, DeadReceiversAreSkipped)
{
    const auto topo = from_links(support::graph(3, {{0, 1}, {0, 2}}));
    SimConfig c = support::quiet(topo, 10);
    c.scenario.battery.initial_j = {400, 400, 0.01};  // node 2 idles out after ~0.33 s
    Simulator sim(std::move(c), inert());
    sim.set_traffic_enabled(false);
    sim.run_until(1);
    EXPECT_FALSE(sim.alive(2, 1));
    EXPECT_EQ(sim.neighbors(0, 1), std::vector<NodeId>{1});
    sim.broadcast(0, probe(0), 1);
    sim.run_until(2);
    EXPECT_EQ(sim.energy(1).rx_count(), 1u);
    EXPECT_EQ(sim.energy(2).rx_count(), 0u);
    const auto r = sim.finish(2);
    EXPECT_NEAR(r.per_node[2].death_s, 0.01 / EnergyModel{}.idle_watts(), 1e-9);
    EXPECT_NEAR(r.first_death_s, r.per_node[2].death_s, 1e-12);
}

TEST(Kernel, ViewMarksUnheardNeighborsUnknown)
{
    const auto topo = from_links(support::graph(3, {{0, 1}, {0, 2}}));
    Simulator sim(support::quiet(topo, 10), inert());
    sim.set_traffic_enabled(false);
    sim.run_until(1);
    sim.broadcast(1, probe(1), 1);
    sim.run_until(2);
    const auto view = sim.view_of(0, 2);
    ASSERT_EQ(view.size(), 2u);
    EXPECT_TRUE(view.entries.at(1).known);
    EXPECT_NEAR(view.entries.at(1).energy, 80, 1e-2);
    EXPECT_FALSE(view.entries.at(2).known);
}

TEST(Kernel, DisconnectedTopologyIsRejected)
{
    const auto topo = from_links(support::graph(3, {{0, 1}}));
    EXPECT_THROW(Simulator(support::quiet(topo), inert()), TopologyError);
    SimConfig c = support::quiet(topo);
    c.allow_disconnected = true;
    EXPECT_NO_THROW(Simulator(std::move(c), inert()));
}

TEST(Kernel, DefaultTtlIsTwiceTheDiameter)
{
    const auto topo = from_links(support::graph(4, {{0, 1}, {1, 2}, {2, 3}}));
    Simulator sim(support::quiet(topo), inert());
    EXPECT_EQ(sim.ttl(), 6);
}

TEST(Kernel, StartupPhaseEndsAfterSinkEccentricity)
{
    const auto topo = build_asymmetrical(9, 3, 100);
    EXPECT_NEAR(startup_phase_end(topo, EnergyModel{}), 9 * 5e-3 + 5, 1e-12);
}

namespace {

class BadTimer final : public Protocol {
public:
    std::string name() const override { return "bad_timer"; }
    Actions start(const NodeContext&) override { return {action::ScheduleTimer{-1, {}}}; }
    Actions on_originate(const DataMessage&, const NodeContext&) override { return {}; }
    Actions on_data(const DataMessage&, const NodeContext&) override { return {}; }
};

class DoubleDeliver final : public Protocol {
public:
    std::string name() const override { return "double_deliver"; }
    Actions on_originate(const DataMessage& m, const NodeContext&) override { return {action::Broadcast{m}}; }
    Actions on_data(const DataMessage& m, const NodeContext&) override
    {
        return {action::Deliver{m.id}, action::Deliver{m.id}};
    }
};

}  // namespace

TEST(Kernel, TimerInThePastAborts)
{
    const auto topo = from_links(support::graph(2, {{0, 1}}));
    Simulator sim(support::quiet(topo), [](NodeId) { return std::make_unique<BadTimer>(); });
    EXPECT_THROW(sim.run(), SimulationError);
}

TEST(Kernel, SecondDeliveryOfAnIdAborts)
{
    const auto topo = from_links(support::graph(2, {{0, 1}}));
    Simulator sim(support::quiet(topo), [](NodeId) { return std::make_unique<DoubleDeliver>(); });
    sim.set_traffic_enabled(false);
    sim.inject_datum(1, 1);
    EXPECT_THROW(sim.run(), SimulationError);
}

TEST(Kernel, TimerTagFiredOnProtocolWithoutTimersAborts)
{
    GossipNode g;
    support::Stage s(1);
    EXPECT_THROW(g.on_timer({}, s.ctx), SimulationError);
}

TEST(Kernel, RunsAreDeterministicPerSeed)
{
    Experiment x;
    x.topology.kind = TopologyKind::Random;
    x.scenario.duration = 300;
    for (auto p : {ProtocolKind::Eagp, ProtocolKind::GossipFo}) {
        const auto topo = build_topology(x.topology);
        std::ostringstream t1, t2;
        const auto a = run_one(x, topo, p, 3, &t1);
        const auto b = run_one(x, topo, p, 3, &t2);
        EXPECT_EQ(summary_row(x, {p, 3, a, {}}), summary_row(x, {p, 3, b, {}}));
        EXPECT_EQ(t1.str(), t2.str());
        const auto c = run_one(x, topo, p, 4);
        EXPECT_NE(summary_row(x, {p, 3, a, {}}), summary_row(x, {p, 3, c, {}}));
    }
}

TEST(Kernel, SinkOriginatedDataIsNotCounted)
{
    const auto topo = from_links(support::graph(2, {{0, 1}}));
    Simulator sim(support::quiet(topo, 10), [](NodeId) { return std::make_unique<GossipNode>(); });
    sim.set_traffic_enabled(false);
    sim.inject_datum(0, 1);
    const auto r = sim.run();
    EXPECT_EQ(r.created, 0u);
    EXPECT_TRUE(sim.delivered_at(1).contains({0, 0}));
}

TEST(Kernel, TrafficStopsBeforeCooldown)
{
    Experiment x;
    x.topology.kind = TopologyKind::Asymmetrical;
    x.scenario.duration = 400;
    const auto topo = build_topology(x.topology);
    std::ostringstream trace;
    run_one(x, topo, ProtocolKind::Gossip, 1, &trace);
    std::istringstream in(trace.str());
    std::string line;
    double first = 1e9, last = 0;
    while (std::getline(in, line)) {
        if (line.find(",originate,") == std::string::npos) continue;
        const double t = std::stod(line.substr(0, line.find(',')));
        first = std::min(first, t);
        last = std::max(last, t);
    }
    EXPECT_GE(first, startup_phase_end(topo, EnergyModel{}) + 15);
    EXPECT_LT(last, 400 - 60);
}
