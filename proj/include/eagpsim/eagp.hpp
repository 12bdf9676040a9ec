#pragma once

// Energy-aware gossip. Each relayed message is handled either eagerly
// (forwarded after a delay that shrinks with the node's relative energy) or
// lazily (held, discarded once a duplicate shows the data is flowing, and
// otherwise advertised so neighbors that missed it can ask for it).

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>

#include "protocol.hpp"

namespace eagpsim {

struct EagpConfig {
    Seconds dt_max = 10;
    Seconds t_rec = 20;
    double lambda = 10;  // percent of energy change that triggers a beacon
    std::optional<std::size_t> fanout;

    void validate() const
    {
        if (!(dt_max > 0)) throw std::invalid_argument("eagp.dt_max must be > 0");
        if (!(t_rec >= dt_max)) throw std::invalid_argument("eagp.t_rec must be >= eagp.dt_max");
        if (!(lambda > 0 && lambda <= 100)) throw std::invalid_argument("eagp.lambda must be in (0, 100]");
        if (fanout && *fanout == 0) throw std::invalid_argument("eagp.fanout must be >= 1");
    }
};

enum class ForwardMode { Lazy, Eager };

// Lazy when the local level is strictly below the neighborhood mean. An
// empty neighborhood gives no reason to defer, so the node goes eager.
inline ForwardMode decide_mode(double eps_local, std::span<const double> neighbor_energies)
{
    if (neighbor_energies.empty()) return ForwardMode::Eager;
    double sum = 0;
    for (double e : neighbor_energies) sum += e;
    const double mean = sum / static_cast<double>(neighbor_energies.size());
    return eps_local < mean ? ForwardMode::Lazy : ForwardMode::Eager;
}

inline ForwardMode decide_mode(double eps_local, const NeighborView& view)
{
    const auto energies = view.known_energies();
    return decide_mode(eps_local, energies);
}

// Min-max scaled hold time: the richest node in the neighborhood (self
// included) fires at 0, the poorest waits the full dt_max.
inline Seconds delta_t_next(double eps_local, std::span<const double> neighbor_energies, Seconds dt_max)
{
    double lo = eps_local;
    double hi = eps_local;
    for (double e : neighbor_energies) {
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    if (hi == lo) return 0;
    // Scale the fraction, not the product, so both ends come out exact.
    const double frac = (eps_local - lo) / (hi - lo);
    return std::clamp(dt_max * (1 - frac), 0.0, dt_max);
}

inline Seconds delta_t_next(double eps_local, const NeighborView& view, Seconds dt_max)
{
    const auto energies = view.known_energies();
    return delta_t_next(eps_local, energies, dt_max);
}

class EagpNode final : public Protocol {
public:
    struct Held {
        DataMessage msg;
        Seconds since = 0;  // enqueue time, fire time or advert time depending on the queue
        NodeId first_sender = 0;
    };

    explicit EagpNode(EagpConfig cfg) : cfg_(cfg) { cfg_.validate(); }

    std::string name() const override { return "eagp"; }

    const EagpConfig& config() const { return cfg_; }
    const std::set<MessageId>& seen() const { return seen_; }
    const std::map<MessageId, Held>& lazy_queue() const { return lazy_; }
    const std::map<MessageId, Held>& eager_pending() const { return eager_; }
    const std::map<MessageId, Held>& advertised() const { return advertised_; }
    const std::map<MessageId, Seconds>& outstanding_requests() const { return requested_; }
    double last_advertised_energy() const { return last_advertised_energy_; }

    Actions start(const NodeContext& ctx) override
    {
        Actions out;
        out.push_back(action::Broadcast{beacon(ctx)});
        out.push_back(action::ScheduleTimer{cfg_.dt_max + 1e-3 * ctx.self, {TimerKind::AdvertCycle, {}}});
        return piggyback(std::move(out), ctx);
    }

    Actions on_originate(const DataMessage& msg, const NodeContext& ctx) override
    {
        seen_.insert(msg.id);
        DataMessage copy = msg;
        stamp(copy, ctx);
        Actions out;
        out.push_back(action::Broadcast{copy});
        return piggyback(std::move(out), ctx);
    }

    Actions on_data(const DataMessage& msg, const NodeContext& ctx) override
    {
        Actions out;
        if (seen_.insert(msg.id).second) {
            requested_.erase(msg.id);
            out.push_back(action::Deliver{msg.id});
            if (msg.ttl <= 0) return out;
            Held held{msg, ctx.now, msg.sender};
            if (decide_mode(ctx.energy, ctx.neighbors()) == ForwardMode::Eager) {
                const Seconds delay = delta_t_next(ctx.energy, ctx.neighbors(), cfg_.dt_max);
                held.since = ctx.now + delay;
                eager_.emplace(msg.id, std::move(held));
                out.push_back(action::ScheduleTimer{delay, {TimerKind::EagerFire, msg.id}});
            } else {
                lazy_.emplace(msg.id, std::move(held));
            }
            return out;
        }

        // Duplicate: a copy from someone other than our first source means
        // the datum is already flowing through this neighborhood.
        if (auto it = eager_.find(msg.id); it != eager_.end()) {
            if (msg.sender != it->second.first_sender) {
                Held demoted = std::move(it->second);
                demoted.since = ctx.now;
                eager_.erase(it);
                lazy_.emplace(msg.id, std::move(demoted));
            }
        } else if (auto lit = lazy_.find(msg.id); lit != lazy_.end()) {
            if (msg.sender != lit->second.first_sender) lazy_.erase(lit);
        }
        return out;
    }

    Actions on_control(const ControlMessage& msg, const NodeContext& ctx) override
    {
        switch (msg.kind) {
        case ControlKind::LazyAdvert: return on_lazy_advert(msg, ctx);
        case ControlKind::MessageRequest: return on_message_request(msg, ctx);
        case ControlKind::EnergyBeacon:
        case ControlKind::CostAdvert: break;
        }
        return {};
    }

    Actions on_timer(const TimerTag& tag, const NodeContext& ctx) override
    {
        switch (tag.kind) {
        case TimerKind::EagerFire: return on_eager_fire(tag.id, ctx);
        case TimerKind::AdvertCycle: return on_dtmax_cycle(ctx);
        case TimerKind::AdvertPurge: purge_advertised(ctx.now); return {};
        case TimerKind::CostResetup: break;
        }
        throw SimulationError("eagp: unknown timer tag");
    }

    Actions on_eager_fire(const MessageId& id, const NodeContext& ctx)
    {
        auto it = eager_.find(id);
        if (it == eager_.end()) return {};  // demoted since scheduling
        DataMessage msg = std::move(it->second.msg);
        const NodeId came_from = it->second.first_sender;
        eager_.erase(it);
        return piggyback(forward(msg, came_from, ctx), ctx);
    }

    // Periodic batch: expired lazy entries are announced in a single advert.
    Actions on_dtmax_cycle(const NodeContext& ctx)
    {
        Actions out;
        ControlMessage advert;
        advert.kind = ControlKind::LazyAdvert;
        for (auto it = lazy_.begin(); it != lazy_.end();) {
            if (ctx.now - it->second.since > cfg_.dt_max) {
                advert.ids.push_back(it->first);
                Held h = std::move(it->second);
                h.since = ctx.now;
                advertised_.emplace(it->first, std::move(h));
                it = lazy_.erase(it);
            } else {
                ++it;
            }
        }
        if (!advert.ids.empty()) {
            advert.sender = ctx.self;
            advert.energy = ctx.energy;
            out.push_back(action::Broadcast{std::move(advert)});
            out.push_back(action::ScheduleTimer{cfg_.t_rec, {TimerKind::AdvertPurge, {}}});
        }
        out = piggyback(std::move(out), ctx);
        for (auto& a : maybe_advertise_energy(ctx)) out.push_back(std::move(a));
        out.push_back(action::ScheduleTimer{cfg_.dt_max, {TimerKind::AdvertCycle, {}}});
        return out;
    }

    Actions on_lazy_advert(const ControlMessage& advert, const NodeContext& ctx)
    {
        ControlMessage req;
        req.kind = ControlKind::MessageRequest;
        req.sender = ctx.self;
        req.energy = ctx.energy;
        for (const auto& id : advert.ids) {
            if (seen_.contains(id)) continue;
            // One outstanding request per id; another advertiser is only
            // asked once the first request has had dt_max to be answered.
            auto [it, fresh] = requested_.try_emplace(id, ctx.now);
            if (!fresh && it->second + cfg_.dt_max > ctx.now) continue;
            it->second = ctx.now;
            req.ids.push_back(id);
        }
        if (req.ids.empty()) return {};
        Actions out;
        out.push_back(action::Unicast{advert.sender, std::move(req)});
        return piggyback(std::move(out), ctx);
    }

    Actions on_message_request(const ControlMessage& req, const NodeContext& ctx)
    {
        purge_advertised(ctx.now);
        Actions out;
        for (const auto& id : req.ids) {
            const Held* h = nullptr;
            if (auto it = lazy_.find(id); it != lazy_.end()) h = &it->second;
            else if (auto at = advertised_.find(id); at != advertised_.end()) h = &at->second;
            if (!h) continue;
            DataMessage copy = h->msg;
            copy.ttl -= 1;
            stamp(copy, ctx);
            out.push_back(action::Unicast{req.sender, copy});
        }
        return piggyback(std::move(out), ctx);
    }

    Actions maybe_advertise_energy(const NodeContext& ctx)
    {
        if (std::abs(ctx.energy - last_advertised_energy_) < cfg_.lambda) return {};
        Actions out;
        out.push_back(action::Broadcast{beacon(ctx)});
        last_advertised_energy_ = ctx.energy;
        return out;
    }

    void purge_advertised(Seconds now)
    {
        std::erase_if(advertised_, [&](const auto& kv) { return kv.second.since + cfg_.t_rec <= now; });
    }

private:
    ControlMessage beacon(const NodeContext& ctx) const
    {
        ControlMessage b;
        b.kind = ControlKind::EnergyBeacon;
        b.sender = ctx.self;
        b.energy = ctx.energy;
        return b;
    }

    static void stamp(DataMessage& m, const NodeContext& ctx)
    {
        m.sender = ctx.self;
        m.sender_energy = ctx.energy;
    }

    Actions forward(DataMessage msg, NodeId came_from, const NodeContext& ctx)
    {
        msg.ttl -= 1;
        stamp(msg, ctx);
        Actions out;
        if (!cfg_.fanout) {
            out.push_back(action::Broadcast{msg});
            return out;
        }
        std::vector<NodeId> pool;
        for (const auto& [n, _] : ctx.neighbors().entries)
            if (n != came_from && n != ctx.self) pool.push_back(n);
        for (NodeId n : ctx.rng->sample(std::move(pool), *cfg_.fanout)) out.push_back(action::Unicast{n, msg});
        return out;
    }

    // Any transmission carries the current energy level, so it counts as an
    // advertisement.
    Actions piggyback(Actions out, const NodeContext& ctx)
    {
        for (const auto& a : out) {
            if (std::holds_alternative<action::Broadcast>(a) || std::holds_alternative<action::Unicast>(a)) {
                last_advertised_energy_ = ctx.energy;
                break;
            }
        }
        return out;
    }

    EagpConfig cfg_;
    std::set<MessageId> seen_;
    std::map<MessageId, Held> lazy_;
    std::map<MessageId, Held> eager_;
    std::map<MessageId, Held> advertised_;
    std::map<MessageId, Seconds> requested_;
    double last_advertised_energy_ = 100;
};

}  // namespace eagpsim
