#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rng.hpp"
#include "topology.hpp"

namespace eagpsim {

enum class ScenarioKind { SteadyState, EndOfLife, Mobility };

inline const char* to_string(ScenarioKind k)
{
    switch (k) {
    case ScenarioKind::SteadyState: return "steady_state";
    case ScenarioKind::EndOfLife: return "end_of_life";
    case ScenarioKind::Mobility: return "mobility";
    }
    return "?";
}

inline ScenarioKind parse_scenario_kind(const std::string& s)
{
    if (s == "steady_state") return ScenarioKind::SteadyState;
    if (s == "end_of_life") return ScenarioKind::EndOfLife;
    if (s == "mobility") return ScenarioKind::Mobility;
    throw std::invalid_argument("unknown scenario kind '" + s + "'");
}

struct Bounds {
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;

    bool contains(Point p) const { return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y; }

    static Bounds of(const std::vector<Point>& pts, double pad = 0)
    {
        Bounds b;
        if (pts.empty()) return b;
        b.min_x = b.max_x = pts.front().x;
        b.min_y = b.max_y = pts.front().y;
        for (const auto& p : pts) {
            b.min_x = std::min(b.min_x, p.x);
            b.max_x = std::max(b.max_x, p.x);
            b.min_y = std::min(b.min_y, p.y);
            b.max_y = std::max(b.max_y, p.y);
        }
        b.min_x -= pad;
        b.min_y -= pad;
        b.max_x += pad;
        b.max_y += pad;
        return b;
    }
};

struct RandomWalkSpec {
    double speed = 1.0;  // m/s
    Seconds update_interval = 1.0;
    std::optional<Bounds> bounds;        // defaults to the topology's bounding box
    std::optional<Seconds> start_after;  // defaults to the end of the start-up phase
};

struct BatterySpec {
    double capacity_j = 500;
    double min_pct = 60;
    double max_pct = 100;
    std::vector<double> initial_j;  // explicit per-node override when non-empty
};

inline BatterySpec default_battery(ScenarioKind kind)
{
    BatterySpec b;
    if (kind == ScenarioKind::EndOfLife) {
        b.min_pct = 1;
        b.max_pct = 5;
    }
    return b;
}

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::SteadyState;
    BatterySpec battery = default_battery(ScenarioKind::SteadyState);
    std::optional<RandomWalkSpec> mobility;
    Seconds duration = 1800;
    Seconds traffic_min = 15;
    Seconds traffic_max = 50;
    Seconds cooldown = 60;  // no new data in the final stretch of a run

    void validate(std::size_t nodes) const
    {
        if (!(duration > 0)) throw std::invalid_argument("scenario.duration must be > 0");
        if (!(traffic_min > 0 && traffic_max > traffic_min))
            throw std::invalid_argument("traffic bounds must satisfy 0 < traffic.min < traffic.max");
        if (cooldown < 0) throw std::invalid_argument("traffic.cooldown must be >= 0");
        if (!(battery.capacity_j > 0)) throw std::invalid_argument("battery.capacity_j must be > 0");
        if (!(battery.min_pct > 0 && battery.max_pct >= battery.min_pct && battery.max_pct <= 100))
            throw std::invalid_argument("battery percentages must satisfy 0 < min_pct <= max_pct <= 100");
        if (!battery.initial_j.empty()) {
            if (battery.initial_j.size() != nodes)
                throw std::invalid_argument("battery.initial_j needs exactly one value per node (" +
                                            std::to_string(nodes) + ")");
            for (double j : battery.initial_j)
                if (!(j > 0 && j <= battery.capacity_j))
                    throw std::invalid_argument("battery.initial_j values must be in (0, capacity_j]");
        }
        if ((kind == ScenarioKind::Mobility) != mobility.has_value())
            throw std::invalid_argument("mobility settings are required for, and only for, the mobility scenario");
        if (mobility && (!(mobility->speed >= 0) || !(mobility->update_interval > 0)))
            throw std::invalid_argument("mobility.speed must be >= 0 and mobility.interval > 0");
    }
};

inline Seconds traffic_next(Seconds now, Rng& rng, Seconds lo = 15, Seconds hi = 50)
{
    return now + rng.uniform(lo, hi);
}

// One random-walk step: every node except the sink moves speed * dt along a
// fresh uniform heading, reflecting off the bounds.
inline std::vector<Point> mobility_step(std::vector<Point> pos, NodeId sink, const RandomWalkSpec& spec,
                                        const Bounds& bounds, Rng& rng)
{
    const double step = spec.speed * spec.update_interval;
    auto reflect = [](double v, double lo, double hi) {
        if (hi <= lo) return lo;
        const double span = hi - lo;
        double t = std::fmod(v - lo, 2 * span);
        if (t < 0) t += 2 * span;
        return t <= span ? lo + t : hi - (t - span);
    };
    for (NodeId i = 0; i < pos.size(); ++i) {
        if (i == sink) continue;
        const double heading = rng.uniform(0, 2 * std::numbers::pi);
        pos[i].x = reflect(pos[i].x + step * std::cos(heading), bounds.min_x, bounds.max_x);
        pos[i].y = reflect(pos[i].y + step * std::sin(heading), bounds.min_y, bounds.max_y);
    }
    return pos;
}

inline std::vector<double> assign_batteries(const BatterySpec& spec, std::size_t nodes, Rng& rng)
{
    if (!spec.initial_j.empty()) return spec.initial_j;
    std::vector<double> out(nodes);
    for (auto& j : out) j = spec.capacity_j * rng.uniform(spec.min_pct, spec.max_pct) / 100.0;
    return out;
}

}  // namespace eagpsim
