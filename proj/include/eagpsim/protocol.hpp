#pragma once

#include <memory>
#include <string>

#include "rng.hpp"
#include "types.hpp"

namespace eagpsim {

// What the kernel hands a node on every callback. The view is a snapshot of
// in-range neighbors and their last advertised energy.
struct NodeContext {
    NodeId self = 0;
    NodeId sink = 0;
    Seconds now = 0;
    double energy = 100;  // local residual energy, percent
    const NeighborView* view = nullptr;
    Rng* rng = nullptr;

    const NeighborView& neighbors() const { return *view; }
};

// A routing protocol instance owned by one node. Implementations are pure
// state machines: the returned actions are their only side effects.
class Protocol {
public:
    virtual ~Protocol() = default;

    virtual std::string name() const = 0;

    // Called once at t=0.
    virtual Actions start(const NodeContext&) { return {}; }

    // A datum sensed locally; msg.ttl is already the configured TTL.
    virtual Actions on_originate(const DataMessage& msg, const NodeContext& ctx) = 0;

    virtual Actions on_data(const DataMessage& msg, const NodeContext& ctx) = 0;

    virtual Actions on_control(const ControlMessage&, const NodeContext&) { return {}; }

    virtual Actions on_timer(const TimerTag&, const NodeContext&)
    {
        throw SimulationError(name() + ": timer fired on a protocol that never schedules timers");
    }
};

using ProtocolPtr = std::unique_ptr<Protocol>;

}  // namespace eagpsim
