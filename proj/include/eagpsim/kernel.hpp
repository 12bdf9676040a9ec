#pragma once

// Virtual-time discrete-event kernel with a lossless broadcast radio medium.
// Events run in (time, insertion sequence) order, so a run is a pure
// function of its configuration and seed.

#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <queue>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "energy.hpp"
#include "metrics.hpp"
#include "protocol.hpp"
#include "rng.hpp"
#include "scenario.hpp"
#include "topology.hpp"

namespace eagpsim {

using ProtocolFactory = std::function<ProtocolPtr(NodeId)>;

struct SimConfig {
    Topology topology;
    ScenarioSpec scenario;
    EnergyModel energy;
    std::uint64_t seed = 1;
    std::int32_t ttl = 0;  // 0 = twice the topology diameter
    double loss_rate = 0;
    Seconds metrics_interval = 10;
    bool allow_disconnected = false;
    std::ostream* trace = nullptr;
};

enum class EventKind : std::uint8_t { Start, Receive, Timer, Sense, Originate, MobilityTick, MetricTick };

struct SimEvent {
    Seconds time = 0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::Start;
    NodeId node = 0;
    std::optional<Packet> packet;
    TimerTag tag{};
};

struct EventOrder {
    bool operator()(const SimEvent& a, const SimEvent& b) const
    {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;
    }
};

class EventQueue {
public:
    void push(SimEvent e)
    {
        e.seq = next_seq_++;
        heap_.push(std::move(e));
    }

    bool empty() const { return heap_.empty(); }
    const SimEvent& top() const { return heap_.top(); }
    std::size_t size() const { return heap_.size(); }

    // Pops the next event; throws if the heap ever yields a time earlier than
    // the previous pop.
    SimEvent pop()
    {
        SimEvent e = heap_.top();
        heap_.pop();
        if (e.time < last_time_) throw SimulationError("event queue produced a non-monotone time");
        last_time_ = e.time;
        return e;
    }

private:
    std::priority_queue<SimEvent, std::vector<SimEvent>, EventOrder> heap_;
    std::uint64_t next_seq_ = 0;
    Seconds last_time_ = 0;
};

inline Seconds startup_phase_end(const Topology& topo, const EnergyModel& m)
{
    const auto hops = bfs_hops(topo.graph(), topo.sink);
    int ecc = 0;
    for (int h : hops) ecc = std::max(ecc, h);
    return ecc * m.hop_delay + 5.0;
}

class Simulator {
public:
    Simulator(SimConfig cfg, const ProtocolFactory& factory)
        : cfg_(std::move(cfg)),
          rng_(cfg_.seed),
          metrics_(cfg_.topology.size(), cfg_.topology.sink)
    {
        cfg_.energy.validate();
        const std::size_t n = cfg_.topology.size();
        cfg_.scenario.validate(n);
        if (cfg_.loss_rate < 0 || cfg_.loss_rate >= 1) throw std::invalid_argument("radio.loss_rate must be in [0, 1)");
        if (!(cfg_.metrics_interval > 0)) throw std::invalid_argument("metrics.interval must be > 0");
        positions_ = cfg_.topology.positions;
        adjacency_ = cfg_.topology.graph();
        if (n == 0) return;
        if (cfg_.topology.sink >= n) throw std::invalid_argument("sink id out of range");
        if (cfg_.topology.links && cfg_.scenario.mobility)
            throw std::invalid_argument("fixed-link topologies cannot move");
        if (!cfg_.allow_disconnected && !is_connected(adjacency_))
            throw TopologyError("topology is not connected");
        if (cfg_.ttl <= 0) cfg_.ttl = std::max(1, 2 * std::max(cfg_.topology.diameter_hops, 0));

        Rng battery_rng = rng_.stream(Stream::Battery);
        const auto initial = assign_batteries(cfg_.scenario.battery, n, battery_rng);
        for (NodeId v = 0; v < n; ++v) {
            energy_.emplace_back(cfg_.scenario.battery.capacity_j, initial[v]);
            protocols_.push_back(factory(v));
            node_rng_.push_back(rng_.stream(Stream::Protocol, v));
            traffic_rng_.push_back(rng_.stream(Stream::Traffic, v));
        }
        heard_.resize(n);
        delivered_.resize(n);
        next_seq_.assign(n, 0);
        loss_rng_ = rng_.stream(Stream::Loss);
        mobility_rng_ = rng_.stream(Stream::Mobility);
        startup_end_ = startup_phase_end(cfg_.topology, cfg_.energy);
    }

    const SimConfig& config() const { return cfg_; }
    std::size_t size() const { return energy_.size(); }
    std::int32_t ttl() const { return cfg_.ttl; }
    Seconds startup_end() const { return startup_end_; }
    const std::vector<Point>& positions() const { return positions_; }
    const NodeEnergy& energy(NodeId v) const { return energy_.at(v); }
    const Protocol& protocol(NodeId v) const { return *protocols_.at(v); }
    const MetricsCollector& metrics() const { return metrics_; }
    double setup_energy_j() const { return setup_energy_j_; }
    std::uint64_t data_transmissions() const { return data_tx_; }
    std::uint64_t control_transmissions() const { return control_tx_; }
    const std::set<MessageId>& delivered_at(NodeId v) const { return delivered_.at(v); }
    std::uint32_t datums_created(NodeId v) const { return next_seq_.at(v); }

    // Schedules one origination at `origin` outside the traffic model. Used
    // by tests and small exhaustive checks.
    void inject_datum(NodeId origin, Seconds at) { push({at, 0, EventKind::Originate, origin, {}, {}}); }

    void set_traffic_enabled(bool on) { traffic_enabled_ = on; }

    bool alive(NodeId v, Seconds now) const { return energy_.at(v).alive_at(now, cfg_.energy); }

    // In-range, alive neighbors at `now`.
    std::vector<NodeId> neighbors(NodeId v, Seconds now) const
    {
        std::vector<NodeId> out;
        for (NodeId u : adjacency_.at(v))
            if (alive(u, now)) out.push_back(u);
        return out;
    }

    NeighborView view_of(NodeId v, Seconds now) const
    {
        NeighborView view;
        for (NodeId u : neighbors(v, now)) {
            auto it = heard_[v].find(u);
            if (it != heard_[v].end()) view.entries.emplace(u, it->second);
            else view.add_unknown(u);
        }
        return view;
    }

    // Creates a datum at `origin`, charging the sensing energy.
    std::optional<DataMessage> new_datum(NodeId origin, Seconds now)
    {
        if (!alive(origin, now)) return std::nullopt;
        auto& e = energy_[origin];
        e.sense(now, cfg_.energy);
        DataMessage msg;
        msg.id = {origin, next_seq_[origin]++};
        msg.ttl = cfg_.ttl;
        msg.sender = origin;
        msg.sender_energy = energy_percent(e.battery());
        msg.created_at = now;
        metrics_.record_created(msg.id);
        return msg;
    }

    void broadcast(NodeId from, Packet packet, Seconds now)
    {
        if (!transmit(from, packet, now)) return;
        for (NodeId u : neighbors(from, now)) deliver_to(u, packet, now);
    }

    void unicast(NodeId from, NodeId to, Packet packet, Seconds now)
    {
        if (to == from) throw SimulationError("unicast to self");
        if (to >= size()) throw SimulationError("unicast to unknown node");
        if (!transmit(from, packet, now)) return;
        const auto& adj = adjacency_[from];
        if (std::find(adj.begin(), adj.end(), to) != adj.end() && alive(to, now)) deliver_to(to, packet, now);
    }

    // Runs every event up to the configured duration and returns the metrics.
    MetricsReport run()
    {
        const Seconds duration = cfg_.scenario.duration;
        if (size() == 0) return metrics_.finalize(duration, {}, 0);
        schedule_initial();
        while (!queue_.empty() && queue_.top().time <= duration) dispatch(queue_.pop());
        return finish(duration);
    }

    // Runs events up to `until` without finalizing.
    void run_until(Seconds until)
    {
        if (!initialized_) schedule_initial();
        while (!queue_.empty() && queue_.top().time <= until) dispatch(queue_.pop());
    }

    MetricsReport finish(Seconds at)
    {
        std::vector<NodeReport> per_node;
        for (auto& e : energy_) {
            e.settle(at, cfg_.energy);
            per_node.push_back({e.drained_j(), e.death_time() <= at ? e.death_time() : kNever, e.tx_count(),
                                e.rx_count()});
        }
        return metrics_.finalize(at, std::move(per_node), setup_energy_j_);
    }

private:
    void push(SimEvent e) { queue_.push(std::move(e)); }

    void schedule_initial()
    {
        initialized_ = true;
        const Seconds duration = cfg_.scenario.duration;
        for (NodeId v = 0; v < size(); ++v) push({0, 0, EventKind::Start, v, {}, {}});
        for (std::uint64_t k = 0; k * cfg_.metrics_interval <= duration; ++k)
            push({k * cfg_.metrics_interval, 0, EventKind::MetricTick, 0, {}, {}});
        if (traffic_enabled_) {
            for (NodeId v = 0; v < size(); ++v) schedule_sense(v, startup_end_);
        }
        if (cfg_.scenario.mobility) {
            const auto& mob = *cfg_.scenario.mobility;
            bounds_ = mob.bounds.value_or(Bounds::of(cfg_.topology.positions));
            push({mob.start_after.value_or(startup_end_), 0, EventKind::MobilityTick, 0, {}, {}});
        }
    }

    void schedule_sense(NodeId v, Seconds from)
    {
        const Seconds at = traffic_next(from, traffic_rng_[v], cfg_.scenario.traffic_min, cfg_.scenario.traffic_max);
        if (at < cfg_.scenario.duration - cfg_.scenario.cooldown) push({at, 0, EventKind::Sense, v, {}, {}});
    }

    NodeContext context(NodeId v, Seconds now, const NeighborView& view)
    {
        NodeContext ctx;
        ctx.self = v;
        ctx.sink = cfg_.topology.sink;
        ctx.now = now;
        ctx.energy = energy_[v].percent_at(now, cfg_.energy);
        ctx.view = &view;
        ctx.rng = &node_rng_[v];
        return ctx;
    }

    void dispatch(SimEvent ev)
    {
        const Seconds now = ev.time;
        switch (ev.kind) {
        case EventKind::MetricTick: {
            std::size_t alive_count = 0;
            for (NodeId v = 0; v < size(); ++v)
                if (alive(v, now)) ++alive_count;
            metrics_.record_sample(now, alive_count);
            return;
        }
        case EventKind::MobilityTick: {
            const auto& mob = *cfg_.scenario.mobility;
            positions_ = mobility_step(std::move(positions_), cfg_.topology.sink, mob, bounds_, mobility_rng_);
            adjacency_ = unit_disk_graph(positions_, cfg_.topology.radio_range);
            push({now + mob.update_interval, 0, EventKind::MobilityTick, 0, {}, {}});
            return;
        }
        default: break;
        }

        const NodeId v = ev.node;
        if (!alive(v, now)) {
            trace(now, v, "drop", "dead");
            return;
        }
        switch (ev.kind) {
        case EventKind::Start: {
            const auto view = view_of(v, now);
            apply(v, protocols_[v]->start(context(v, now, view)), now);
            break;
        }
        case EventKind::Sense:
        case EventKind::Originate: {
            if (ev.kind == EventKind::Sense) schedule_sense(v, now);
            auto msg = new_datum(v, now);
            if (!msg) break;
            trace(now, v, "originate", id_string(msg->id));
            const auto view = view_of(v, now);
            apply(v, protocols_[v]->on_originate(*msg, context(v, now, view)), now);
            break;
        }
        case EventKind::Timer: {
            const auto view = view_of(v, now);
            apply(v, protocols_[v]->on_timer(ev.tag, context(v, now, view)), now);
            break;
        }
        case EventKind::Receive: receive(v, std::move(*ev.packet), now); break;
        default: throw SimulationError("unexpected event kind");
        }
    }

    void receive(NodeId v, Packet packet, Seconds now)
    {
        const bool setup = is_setup(packet);
        const double drain = energy_[v].rx(now, cfg_.energy);
        if (setup) setup_energy_j_ += drain;
        if (!energy_[v].battery().alive()) return;
        const NodeId from = packet_sender(packet);
        const double their_energy = std::visit(
            [](const auto& m) {
                if constexpr (std::is_same_v<std::decay_t<decltype(m)>, DataMessage>) return m.sender_energy;
                else return m.energy;
            },
            packet);
        heard_[v][from] = NeighborInfo{their_energy, now, true};

        const auto view = view_of(v, now);
        if (auto* data = std::get_if<DataMessage>(&packet)) {
            trace(now, v, "rx_data", id_string(data->id) + " from " + std::to_string(from));
            metrics_.record_delivery(v, *data, now);
            apply(v, protocols_[v]->on_data(*data, context(v, now, view)), now);
        } else {
            const auto& ctrl = std::get<ControlMessage>(packet);
            trace(now, v, std::string("rx_") + to_string(ctrl.kind), "from " + std::to_string(from));
            apply(v, protocols_[v]->on_control(ctrl, context(v, now, view)), now);
        }
    }

    void apply(NodeId v, Actions actions, Seconds now)
    {
        for (auto& a : actions) {
            if (auto* b = std::get_if<action::Broadcast>(&a)) {
                broadcast(v, std::move(b->packet), now);
            } else if (auto* u = std::get_if<action::Unicast>(&a)) {
                unicast(v, u->dest, std::move(u->packet), now);
            } else if (auto* t = std::get_if<action::ScheduleTimer>(&a)) {
                if (!(t->delay >= 0)) throw SimulationError("timer scheduled in the past");
                push({now + t->delay, 0, EventKind::Timer, v, {}, t->tag});
            } else if (auto* d = std::get_if<action::Deliver>(&a)) {
                if (!delivered_[v].insert(d->id).second)
                    throw SimulationError("node " + std::to_string(v) + " delivered " + id_string(d->id) + " twice");
            }
        }
    }

    static bool is_setup(const Packet& p)
    {
        const auto* c = std::get_if<ControlMessage>(&p);
        return c && c->kind == ControlKind::CostAdvert;
    }

    // Stamps and charges a transmission. False if the sender is dead.
    bool transmit(NodeId from, Packet& packet, Seconds now)
    {
        if (from >= size()) throw SimulationError("transmission from unknown node");
        auto& e = energy_[from];
        if (!e.alive_at(now, cfg_.energy)) return false;
        const double pct = e.percent_at(now, cfg_.energy);
        std::visit(
            [&](auto& m) {
                m.sender = from;
                if constexpr (std::is_same_v<std::decay_t<decltype(m)>, DataMessage>) m.sender_energy = pct;
                else m.energy = pct;
            },
            packet);
        const double drain = e.tx(now, cfg_.energy);
        if (is_setup(packet)) setup_energy_j_ += drain;
        if (std::holds_alternative<DataMessage>(packet)) ++data_tx_;
        else ++control_tx_;
        return true;
    }

    void deliver_to(NodeId to, const Packet& packet, Seconds now)
    {
        if (cfg_.loss_rate > 0 && loss_rng_.bernoulli(cfg_.loss_rate)) return;
        push({now + cfg_.energy.hop_delay, 0, EventKind::Receive, to, packet, {}});
    }

    static std::string id_string(const MessageId& id)
    {
        return std::to_string(id.origin) + ":" + std::to_string(id.seq);
    }

    void trace(Seconds now, NodeId v, const std::string& what, const std::string& detail)
    {
        if (!cfg_.trace) return;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", now);
        *cfg_.trace << buf << ',' << v << ',' << what << ',' << detail << '\n';
    }

    SimConfig cfg_;
    SeededRng rng_;
    MetricsCollector metrics_;
    EventQueue queue_;
    std::vector<Point> positions_;
    Adjacency adjacency_;
    Bounds bounds_;
    std::vector<NodeEnergy> energy_;
    std::vector<ProtocolPtr> protocols_;
    std::vector<Rng> node_rng_;
    std::vector<Rng> traffic_rng_;
    Rng loss_rng_;
    Rng mobility_rng_;
    std::vector<std::map<NodeId, NeighborInfo>> heard_;
    std::vector<std::set<MessageId>> delivered_;
    std::vector<std::uint32_t> next_seq_;
    Seconds startup_end_ = 0;
    double setup_energy_j_ = 0;
    std::uint64_t data_tx_ = 0;
    std::uint64_t control_tx_ = 0;
    bool traffic_enabled_ = true;
    bool initialized_ = false;
};

}  // namespace eagpsim
