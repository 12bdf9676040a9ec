#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace eagpsim {

using NodeId = std::uint32_t;
using Seconds = double;

inline constexpr Seconds kNever = std::numeric_limits<double>::infinity();

// Raised for kernel or protocol contract violations (programming errors,
// never runtime conditions).
class SimulationError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct MessageId {
    NodeId origin = 0;
    std::uint32_t seq = 0;

    friend constexpr auto operator<=>(const MessageId&, const MessageId&) = default;
};

struct MessageIdHash {
    std::size_t operator()(const MessageId& id) const noexcept
    {
        return std::hash<std::uint64_t>{}((std::uint64_t{id.origin} << 32) | id.seq);
    }
};

inline constexpr std::size_t kDataPayloadBytes = 64;
inline constexpr std::size_t kControlBaseBytes = 32;
inline constexpr std::size_t kControlBytesPerId = 8;

struct DataMessage {
    MessageId id;
    NodeId sender = 0;           // last hop
    std::int32_t ttl = 0;
    std::size_t payload_size = kDataPayloadBytes;
    double sender_energy = 100;  // piggybacked percentage of the last hop
    Seconds created_at = 0;
    // Only used by minimum-cost forwarding; -1 when unset.
    std::int32_t remaining_cost = -1;
};

enum class ControlKind { LazyAdvert, MessageRequest, EnergyBeacon, CostAdvert };

inline const char* to_string(ControlKind k)
{
    switch (k) {
    case ControlKind::LazyAdvert: return "lazy_advert";
    case ControlKind::MessageRequest: return "message_request";
    case ControlKind::EnergyBeacon: return "energy_beacon";
    case ControlKind::CostAdvert: return "cost_advert";
    }
    return "?";
}

struct ControlMessage {
    ControlKind kind = ControlKind::EnergyBeacon;
    NodeId sender = 0;
    std::vector<MessageId> ids;
    double energy = 100;
    std::int32_t cost = 0;
    std::uint32_t round = 0;  // cost-field setup round

    std::size_t size_bytes() const { return kControlBaseBytes + kControlBytesPerId * ids.size(); }
};

using Packet = std::variant<DataMessage, ControlMessage>;

inline NodeId packet_sender(const Packet& p)
{
    return std::visit([](const auto& m) { return m.sender; }, p);
}

struct NeighborInfo {
    double energy = 0;        // last advertised percentage
    Seconds last_update = 0;
    bool known = false;       // false until anything was heard from the neighbor
};

// Neighbors currently in radio range, with the last energy level each one
// advertised. Membership comes from the kernel's range oracle.
class NeighborView {
public:
    std::map<NodeId, NeighborInfo> entries;

    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }

    void set(NodeId n, double energy, Seconds at) { entries[n] = NeighborInfo{energy, at, true}; }
    void add_unknown(NodeId n) { entries.emplace(n, NeighborInfo{}); }

    std::vector<NodeId> ids() const
    {
        std::vector<NodeId> out;
        out.reserve(entries.size());
        for (const auto& [id, _] : entries) out.push_back(id);
        return out;
    }

    std::vector<double> known_energies() const
    {
        std::vector<double> out;
        for (const auto& [_, info] : entries)
            if (info.known) out.push_back(info.energy);
        return out;
    }
};

enum class TimerKind : std::uint8_t { EagerFire, AdvertCycle, AdvertPurge, CostResetup };

struct TimerTag {
    TimerKind kind = TimerKind::EagerFire;
    MessageId id{};

    friend constexpr bool operator==(const TimerTag&, const TimerTag&) = default;
};

namespace action {
struct Broadcast {
    Packet packet;
};
struct Unicast {
    NodeId dest;
    Packet packet;
};
struct ScheduleTimer {
    Seconds delay;
    TimerTag tag;
};
struct Deliver {
    MessageId id;
};
}  // namespace action

using ProtocolAction =
    std::variant<action::Broadcast, action::Unicast, action::ScheduleTimer, action::Deliver>;
using Actions = std::vector<ProtocolAction>;

}  // namespace eagpsim
