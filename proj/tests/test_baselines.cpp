#include <gtest/gtest.h>

#include <map>

#include "support.hpp"

using namespace eagpsim;
using support::datum;
using support::only;
using support::Stage;

TEST(Gossip, FloodDeliversOnceAndBroadcasts)
{
    GossipNode g;
    Stage s(1, 50);
    s.with(2, 50).with(3, 50);
    auto out = g.on_data(datum(9, 0, 2, 4), s.ctx);
    ASSERT_EQ(only<action::Deliver>(out).size(), 1u);
    const auto b = only<action::Broadcast>(out);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(std::get<DataMessage>(b[0].packet).ttl, 3);
    EXPECT_EQ(std::get<DataMessage>(b[0].packet).sender, 1u);
    EXPECT_TRUE(g.on_data(datum(9, 0, 3, 4), s.ctx).empty());
}

TEST(Gossip, ExpiredTtlStopsRelay)
{
    GossipNode g;
    Stage s(1);
    const auto out = g.on_data(datum(9, 0, 2, 0), s.ctx);
    EXPECT_EQ(only<action::Deliver>(out).size(), 1u);
    EXPECT_TRUE(only<action::Broadcast>(out).empty());
}

TEST(Gossip, OriginateBroadcasts)
{
    GossipNode g;
    Stage s(4);
    const auto out = g.on_originate(datum(4, 0, 4), s.ctx);
    EXPECT_EQ(only<action::Broadcast>(out).size(), 1u);
    EXPECT_TRUE(only<action::Deliver>(out).empty());
    EXPECT_TRUE(g.seen().contains({4, 0}));
}

TEST(GossipFanout, ThreeOfFiveExcludingSender)
{
    GossipNode g(3);
    Stage s(1);
    for (NodeId n = 2; n <= 7; ++n) s.with(n, 50);  // sender 2 plus five others
    const auto u = only<action::Unicast>(g.on_data(datum(9, 0, 2), s.ctx));
    ASSERT_EQ(u.size(), 3u);
    std::set<NodeId> dests;
    for (const auto& x : u) {
        EXPECT_NE(x.dest, 2u);
        dests.insert(x.dest);
    }
    EXPECT_EQ(dests.size(), 3u);
}

TEST(GossipFanout, ClampsToAvailableNeighbors)
{
    GossipNode g(3);
    Stage s(1);
    s.with(2, 50).with(3, 50).with(4, 50);
    EXPECT_EQ(only<action::Unicast>(g.on_data(datum(9, 0, 2), s.ctx)).size(), 2u);
    GossipNode lone(3);
    Stage t(1);
    t.with(2, 50);
    EXPECT_TRUE(only<action::Unicast>(lone.on_data(datum(9, 0, 2), t.ctx)).empty());
    EXPECT_THROW(GossipNode(0), std::invalid_argument);
}

TEST(GossipFanout, SelectionIsUniform)
{
    Stage s(1, 50, 0, 0, 99);
    for (NodeId n = 2; n <= 6; ++n) s.with(n, 50);
    std::map<NodeId, int> hits;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        GossipNode g(3);
        for (const auto& x : only<action::Unicast>(g.on_originate(datum(1, 0, 1), s.ctx))) ++hits[x.dest];
    }
    ASSERT_EQ(hits.size(), 5u);
    for (const auto& [n, k] : hits) EXPECT_NEAR(k / double(trials), 0.6, 0.02) << "neighbor " << n;
}

TEST(Mcfa, SinkStartsCostFieldAndNodesAdoptMinimum)
{
    McfaNode sink;
    Stage ss(0);
    const auto b = only<action::Broadcast>(sink.start(ss.ctx));
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(std::get<ControlMessage>(b[0].packet).cost, 0);
    EXPECT_EQ(sink.cost(), 0);

    McfaNode n;
    Stage s(3);
    EXPECT_FALSE(n.setup_done());
    ControlMessage adv;
    adv.kind = ControlKind::CostAdvert;
    adv.cost = 2;
    auto out = n.on_control(adv, s.ctx);
    EXPECT_EQ(n.cost(), 3);
    EXPECT_EQ(only<action::Broadcast>(out).size(), 1u);
    adv.cost = 3;
    EXPECT_TRUE(n.on_control(adv, s.ctx).empty());
    adv.cost = 0;
    n.on_control(adv, s.ctx);
    EXPECT_EQ(n.cost(), 1);
}

TEST(Mcfa, RelaysOnlyOneLevelCloser)
{
    McfaNode n;
    Stage s(3);
    ControlMessage adv;
    adv.kind = ControlKind::CostAdvert;
    adv.cost = 1;
    n.on_control(adv, s.ctx);  // cost 2
    auto m = datum(9, 0, 4);
    m.remaining_cost = 3;
    auto out = n.on_data(m, s.ctx);
    ASSERT_EQ(only<action::Broadcast>(out).size(), 1u);
    EXPECT_EQ(std::get<DataMessage>(only<action::Broadcast>(out)[0].packet).remaining_cost, 2);
    m.id.seq = 1;
    m.remaining_cost = 2;
    out = n.on_data(m, s.ctx);
    EXPECT_EQ(only<action::Deliver>(out).size(), 1u);
    EXPECT_TRUE(only<action::Broadcast>(out).empty());
}

TEST(Mcfa, NodeWithoutCostDoesNotSend)
{
    McfaNode n;
    Stage s(3);
    EXPECT_TRUE(n.on_originate(datum(3, 0, 3), s.ctx).empty());
}

static std::vector<std::int32_t> settled_costs(const Topology& topo)
{
    SimConfig c = support::quiet(topo, 2);
    Simulator sim(std::move(c), [](NodeId) { return std::make_unique<McfaNode>(); });
    sim.set_traffic_enabled(false);
    sim.run();
    std::vector<std::int32_t> out;
    for (NodeId v = 0; v < sim.size(); ++v) out.push_back(dynamic_cast<const McfaNode&>(sim.protocol(v)).cost());
    return out;
}

TEST(Mcfa, CostFieldEqualsBfsHopsOnRandomGraphs)
{
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const auto topo = build_random(20, 300, 300, 100, seed, 11);
        const auto hops = bfs_hops(topo.graph(), topo.sink);
        const auto costs = settled_costs(topo);
        for (NodeId v = 0; v < topo.size(); ++v) ASSERT_EQ(costs[v], hops[v]) << "seed " << seed << " node " << v;
    }
}

TEST(Mcfa, ChainTransmissionsAreCostPlusOne)
{
    // sink 0 - 1 - 2 - 3 - 4
    const auto topo = from_links(support::graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}));
    SimConfig c = support::quiet(topo, 10);
    Simulator sim(std::move(c), [](NodeId) { return std::make_unique<McfaNode>(); });
    sim.set_traffic_enabled(false);
    sim.run_until(1);
    const auto before = sim.data_transmissions();
    sim.inject_datum(4, 2);
    sim.run_until(10);
    EXPECT_EQ(sim.data_transmissions() - before, 5u);
    EXPECT_TRUE(sim.delivered_at(0).contains({4, 0}));
}

TEST(Mcfa, ResetupBumpsRoundAndRebuildsField)
{
    const auto topo = from_links(support::graph(3, {{0, 1}, {1, 2}}));
    SimConfig c = support::quiet(topo, 25);
    Simulator sim(std::move(c), [](NodeId) { return std::make_unique<McfaNode>(10.0); });
    sim.set_traffic_enabled(false);
    sim.run_until(25);
    EXPECT_EQ(dynamic_cast<const McfaNode&>(sim.protocol(2)).cost(), 2);
    EXPECT_THROW(McfaNode(0.0), std::invalid_argument);
}
