#pragma once

// Comparison protocols: flooding gossip, fanout gossip and minimum cost
// forwarding toward the sink.

#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "protocol.hpp"

namespace eagpsim {

class GossipNode final : public Protocol {
public:
    explicit GossipNode(std::optional<std::size_t> fanout = std::nullopt) : fanout_(fanout)
    {
        if (fanout_ && *fanout_ == 0) throw std::invalid_argument("gossip.fanout must be >= 1");
    }

    std::string name() const override { return fanout_ ? "gossip_fo" : "gossip"; }

    std::optional<std::size_t> fanout() const { return fanout_; }
    const std::set<MessageId>& seen() const { return seen_; }

    Actions on_originate(const DataMessage& msg, const NodeContext& ctx) override
    {
        seen_.insert(msg.id);
        DataMessage copy = msg;
        copy.sender = ctx.self;
        copy.sender_energy = ctx.energy;
        return send(copy, ctx.self, ctx);
    }

    Actions on_data(const DataMessage& msg, const NodeContext& ctx) override
    {
        if (!seen_.insert(msg.id).second) return {};
        Actions out;
        out.push_back(action::Deliver{msg.id});
        if (msg.ttl <= 0) return out;
        DataMessage copy = msg;
        copy.ttl -= 1;
        copy.sender = ctx.self;
        copy.sender_energy = ctx.energy;
        for (auto& a : send(copy, msg.sender, ctx)) out.push_back(std::move(a));
        return out;
    }

private:
    Actions send(const DataMessage& msg, NodeId exclude, const NodeContext& ctx)
    {
        Actions out;
        if (!fanout_) {
            out.push_back(action::Broadcast{msg});
            return out;
        }
        std::vector<NodeId> pool;
        for (const auto& [n, _] : ctx.neighbors().entries)
            if (n != exclude && n != ctx.self) pool.push_back(n);
        for (NodeId n : ctx.rng->sample(std::move(pool), *fanout_)) out.push_back(action::Unicast{n, msg});
        return out;
    }

    std::optional<std::size_t> fanout_;
    std::set<MessageId> seen_;
};

inline constexpr std::int32_t kUnknownCost = std::numeric_limits<std::int32_t>::max();

// Minimum cost forwarding. The sink floods a hop-count field; data then only
// moves one cost level closer per relay. Costs are never refreshed unless a
// re-setup interval is configured, so mobility leaves the field stale.
class McfaNode final : public Protocol {
public:
    explicit McfaNode(std::optional<Seconds> resetup_interval = std::nullopt)
        : resetup_interval_(resetup_interval)
    {
        if (resetup_interval_ && !(*resetup_interval_ > 0))
            throw std::invalid_argument("mcfa.resetup_interval must be > 0");
    }

    std::string name() const override { return "mcfa"; }

    std::int32_t cost() const { return cost_; }
    bool setup_done() const { return cost_ != kUnknownCost; }
    const std::set<MessageId>& seen() const { return seen_; }

    Actions start(const NodeContext& ctx) override
    {
        if (ctx.self != ctx.sink) return {};
        Actions out = advertise_root(ctx);
        if (resetup_interval_)
            out.push_back(action::ScheduleTimer{*resetup_interval_, {TimerKind::CostResetup, {}}});
        return out;
    }

    Actions on_timer(const TimerTag& tag, const NodeContext& ctx) override
    {
        if (tag.kind != TimerKind::CostResetup || ctx.self != ctx.sink)
            throw SimulationError("mcfa: unknown timer tag");
        ++round_;
        Actions out = advertise_root(ctx);
        out.push_back(action::ScheduleTimer{*resetup_interval_, {TimerKind::CostResetup, {}}});
        return out;
    }

    Actions on_control(const ControlMessage& msg, const NodeContext& ctx) override
    {
        if (msg.kind != ControlKind::CostAdvert) return {};
        if (msg.cost < 0) throw SimulationError("mcfa: negative advertised cost");
        if (msg.round > round_) {
            round_ = msg.round;
            if (ctx.self != ctx.sink) cost_ = kUnknownCost;
        }
        if (msg.round < round_ || msg.cost + 1 >= cost_) return {};
        cost_ = msg.cost + 1;
        return {action::Broadcast{cost_advert(ctx)}};
    }

    Actions on_originate(const DataMessage& msg, const NodeContext& ctx) override
    {
        seen_.insert(msg.id);
        if (cost_ == kUnknownCost) return {};
        DataMessage copy = msg;
        copy.sender = ctx.self;
        copy.sender_energy = ctx.energy;
        copy.remaining_cost = cost_;
        return {action::Broadcast{copy}};
    }

    Actions on_data(const DataMessage& msg, const NodeContext& ctx) override
    {
        if (!seen_.insert(msg.id).second) return {};
        Actions out;
        out.push_back(action::Deliver{msg.id});
        if (msg.ttl <= 0 || cost_ == kUnknownCost || cost_ != msg.remaining_cost - 1) return out;
        DataMessage copy = msg;
        copy.ttl -= 1;
        copy.sender = ctx.self;
        copy.sender_energy = ctx.energy;
        copy.remaining_cost = cost_;
        out.push_back(action::Broadcast{copy});
        return out;
    }

private:
    ControlMessage cost_advert(const NodeContext& ctx) const
    {
        ControlMessage c;
        c.kind = ControlKind::CostAdvert;
        c.sender = ctx.self;
        c.energy = ctx.energy;
        c.cost = cost_;
        c.round = round_;
        return c;
    }

    Actions advertise_root(const NodeContext& ctx)
    {
        cost_ = 0;
        return {action::Broadcast{cost_advert(ctx)}};
    }

    std::optional<Seconds> resetup_interval_;
    std::int32_t cost_ = kUnknownCost;
    std::uint32_t round_ = 0;
    std::set<MessageId> seen_;
};

}  // namespace eagpsim
