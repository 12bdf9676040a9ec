#pragma once

#include <functional>
#include <memory>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include "eagpsim/eagpsim.hpp"

namespace support {

using namespace eagpsim;

// A NodeContext plus the storage it points into.
struct Stage {
    NeighborView view;
    Rng rng;
    NodeContext ctx;

    explicit Stage(NodeId self, double energy = 100, Seconds now = 0, NodeId sink = 0, std::uint64_t seed = 7)
        : rng(seed)
    {
        ctx.self = self;
        ctx.sink = sink;
        ctx.now = now;
        ctx.energy = energy;
        ctx.view = &view;
        ctx.rng = &rng;
    }

    Stage& with(NodeId n, double energy)
    {
        view.set(n, energy, ctx.now);
        return *this;
    }

    Stage& at(Seconds now)
    {
        ctx.now = now;
        return *this;
    }
};

template <typename T>
std::vector<T> only(const Actions& actions)
{
    std::vector<T> out;
    for (const auto& a : actions)
        if (const auto* p = std::get_if<T>(&a)) out.push_back(*p);
    return out;
}

inline DataMessage datum(NodeId origin, std::uint32_t seq, NodeId sender, std::int32_t ttl = 10)
{
    DataMessage m;
    m.id = {origin, seq};
    m.sender = sender;
    m.ttl = ttl;
    return m;
}

inline Adjacency graph(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> edges)
{
    Adjacency adj(n);
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    return adj;
}

// Equal, generous batteries and no background traffic; callers inject data.
inline SimConfig quiet(Topology topo, Seconds duration = 60, double initial_j = 400)
{
    SimConfig c;
    const std::size_t n = topo.size();
    c.topology = std::move(topo);
    c.scenario.duration = duration;
    c.scenario.battery.capacity_j = 500;
    c.scenario.battery.initial_j.assign(n, initial_j);
    return c;
}

// A protocol that only does what the test tells the kernel directly.
class Inert final : public Protocol {
public:
    std::string name() const override { return "inert"; }
    Actions on_originate(const DataMessage&, const NodeContext&) override { return {}; }
    Actions on_data(const DataMessage& m, const NodeContext&) override
    {
        received.push_back(m.id);
        return {};
    }
    std::vector<MessageId> received;
};

// Fixed-energy network of EAGP nodes with every neighbor energy known. Used to
// study protocol liveness without the battery model moving the levels.
class Lab {
public:
    Lab(Adjacency adj, std::vector<double> energy, EagpConfig cfg = {})
        : adj_(std::move(adj)), energy_(std::move(energy)), got_(adj_.size())
    {
        for (NodeId v = 0; v < adj_.size(); ++v) {
            nodes_.push_back(std::make_unique<EagpNode>(cfg));
            rng_.emplace_back(1000 + v);
        }
        for (NodeId v = 0; v < adj_.size(); ++v) apply(v, nodes_[v]->start(context(v, 0)), 0);
    }

    void originate(NodeId v, std::uint32_t seq, Seconds at, std::int32_t ttl)
    {
        run_until(at);
        DataMessage m;
        m.id = {v, seq};
        m.sender = v;
        m.ttl = ttl;
        m.created_at = at;
        got_[v].insert(m.id);
        apply(v, nodes_[v]->on_originate(m, context(v, at)), at);
    }

    void run_until(Seconds t)
    {
        while (!queue_.empty() && queue_.top().time <= t) {
            Event e = queue_.top();
            queue_.pop();
            now_ = e.time;
            if (e.packet) {
                if (auto* d = std::get_if<DataMessage>(&*e.packet)) {
                    got_[e.node].insert(d->id);
                    apply(e.node, nodes_[e.node]->on_data(*d, context(e.node, now_)), now_);
                } else {
                    apply(e.node, nodes_[e.node]->on_control(std::get<ControlMessage>(*e.packet), context(e.node, now_)),
                          now_);
                }
            } else {
                apply(e.node, nodes_[e.node]->on_timer(e.tag, context(e.node, now_)), now_);
            }
        }
        now_ = t;
    }

    bool reached(NodeId v, MessageId id) const { return got_[v].contains(id); }
    const EagpNode& node(NodeId v) const { return *nodes_[v]; }
    std::size_t data_sends() const { return data_sends_; }

private:
    struct Event {
        Seconds time;
        std::uint64_t seq;
        NodeId node;
        std::optional<Packet> packet;
        TimerTag tag;
    };
    struct Later {
        bool operator()(const Event& a, const Event& b) const
        {
            return a.time != b.time ? a.time > b.time : a.seq > b.seq;
        }
    };

    NodeContext context(NodeId v, Seconds now)
    {
        views_[v] = NeighborView{};
        for (NodeId u : adj_[v]) views_[v].set(u, energy_[u], now);
        NodeContext c;
        c.self = v;
        c.now = now;
        c.energy = energy_[v];
        c.view = &views_[v];
        c.rng = &rng_[v];
        return c;
    }

    void apply(NodeId v, const Actions& actions, Seconds now)
    {
        for (const auto& a : actions) {
            if (auto* b = std::get_if<action::Broadcast>(&a)) {
                count(b->packet);
                for (NodeId u : adj_[v]) push(now + 5e-3, u, stamped(b->packet, v), {});
            } else if (auto* u = std::get_if<action::Unicast>(&a)) {
                count(u->packet);
                push(now + 5e-3, u->dest, stamped(u->packet, v), {});
            } else if (auto* t = std::get_if<action::ScheduleTimer>(&a)) {
                push(now + t->delay, v, std::nullopt, t->tag);
            }
        }
    }

    Packet stamped(Packet p, NodeId from) const
    {
        std::visit(
            [&](auto& m) {
                m.sender = from;
                if constexpr (std::is_same_v<std::decay_t<decltype(m)>, DataMessage>) m.sender_energy = energy_[from];
                else m.energy = energy_[from];
            },
            p);
        return p;
    }

    void count(const Packet& p)
    {
        if (std::holds_alternative<DataMessage>(p)) ++data_sends_;
    }

    void push(Seconds t, NodeId v, std::optional<Packet> p, TimerTag tag)
    {
        queue_.push({t, seq_++, v, std::move(p), tag});
    }

    Adjacency adj_;
    std::vector<double> energy_;
    std::vector<std::unique_ptr<EagpNode>> nodes_;
    std::vector<Rng> rng_;
    std::map<NodeId, NeighborView> views_;
    std::vector<std::set<MessageId>> got_;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::uint64_t seq_ = 0;
    Seconds now_ = 0;
    std::size_t data_sends_ = 0;
};

// Every connected simple graph on n labelled nodes, as adjacency lists.
inline void for_each_connected_graph(std::size_t n, const std::function<void(const Adjacency&)>& fn)
{
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (NodeId a = 0; a < n; ++a)
        for (NodeId b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
    const std::uint32_t subsets = 1u << pairs.size();
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
        Adjacency adj(n);
        for (std::size_t i = 0; i < pairs.size(); ++i)
            if (mask & (1u << i)) {
                adj[pairs[i].first].push_back(pairs[i].second);
                adj[pairs[i].second].push_back(pairs[i].first);
            }
        if (is_connected(adj)) fn(adj);
    }
}

}  // namespace support
