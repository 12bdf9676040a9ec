#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "rng.hpp"
#include "types.hpp"

namespace eagpsim {

struct Point {
    double x = 0;
    double y = 0;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

using Adjacency = std::vector<std::vector<NodeId>>;

inline constexpr int kUnreachable = -1;

// Unit-disk graph: an edge wherever two nodes are within `range`.
inline Adjacency unit_disk_graph(const std::vector<Point>& pos, double range)
{
    Adjacency adj(pos.size());
    for (NodeId i = 0; i < pos.size(); ++i)
        for (NodeId j = i + 1; j < pos.size(); ++j)
            if (distance(pos[i], pos[j]) <= range) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
    return adj;
}

inline std::vector<int> bfs_hops(const Adjacency& adj, NodeId src)
{
    std::vector<int> dist(adj.size(), kUnreachable);
    if (src >= adj.size()) return dist;
    std::queue<NodeId> q;
    dist[src] = 0;
    q.push(src);
    while (!q.empty()) {
        const NodeId u = q.front();
        q.pop();
        for (NodeId v : adj[u])
            if (dist[v] == kUnreachable) {
                dist[v] = dist[u] + 1;
                q.push(v);
            }
    }
    return dist;
}

inline bool is_connected(const Adjacency& adj)
{
    if (adj.empty()) return true;
    const auto d = bfs_hops(adj, 0);
    return std::none_of(d.begin(), d.end(), [](int h) { return h == kUnreachable; });
}

// Largest hop count from `src`; kUnreachable if some node cannot be reached.
inline int eccentricity(const Adjacency& adj, NodeId src)
{
    int ecc = 0;
    for (int h : bfs_hops(adj, src)) {
        if (h == kUnreachable) return kUnreachable;
        ecc = std::max(ecc, h);
    }
    return ecc;
}

inline int diameter(const Adjacency& adj)
{
    int d = 0;
    for (NodeId u = 0; u < adj.size(); ++u) {
        const int e = eccentricity(adj, u);
        if (e == kUnreachable) return kUnreachable;
        d = std::max(d, e);
    }
    return d;
}

// Cut vertices (Hopcroft-Tarjan low-link), ascending.
inline std::vector<NodeId> articulation_points(const Adjacency& adj)
{
    const std::size_t n = adj.size();
    std::vector<int> disc(n, -1), low(n, 0);
    std::vector<bool> cut(n, false);
    int timer = 0;
    std::function<void(NodeId, int)> dfs = [&](NodeId u, int parent) {
        disc[u] = low[u] = timer++;
        int children = 0;
        for (NodeId v : adj[u]) {
            if (static_cast<int>(v) == parent) continue;
            if (disc[v] != -1) {
                low[u] = std::min(low[u], disc[v]);
                continue;
            }
            ++children;
            dfs(v, static_cast<int>(u));
            low[u] = std::min(low[u], low[v]);
            if (parent != -1 && low[v] >= disc[u]) cut[u] = true;
        }
        if (parent == -1 && children > 1) cut[u] = true;
    };
    for (NodeId u = 0; u < n; ++u)
        if (disc[u] == -1) dfs(u, -1);
    std::vector<NodeId> out;
    for (NodeId u = 0; u < n; ++u)
        if (cut[u]) out.push_back(u);
    return out;
}

enum class TopologyKind { Symmetrical, Asymmetrical, Random };

inline const char* to_string(TopologyKind k)
{
    switch (k) {
    case TopologyKind::Symmetrical: return "symmetrical";
    case TopologyKind::Asymmetrical: return "asymmetrical";
    case TopologyKind::Random: return "random";
    }
    return "?";
}

inline TopologyKind parse_topology_kind(const std::string& s)
{
    if (s == "symmetrical") return TopologyKind::Symmetrical;
    if (s == "asymmetrical") return TopologyKind::Asymmetrical;
    if (s == "random") return TopologyKind::Random;
    throw std::invalid_argument("unknown topology kind '" + s + "'");
}

// Raised when a topology that must be connected is not.
class TopologyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Topology {
    TopologyKind kind = TopologyKind::Symmetrical;
    std::vector<Point> positions;
    NodeId sink = 0;
    double radio_range = 100;
    int diameter_hops = 0;
    std::vector<NodeId> articulation;
    // Fixed links that replace the unit-disk rule. Static runs only.
    std::optional<Adjacency> links;

    std::size_t size() const { return positions.size(); }
    Adjacency graph() const { return links ? *links : unit_disk_graph(positions, radio_range); }

    void finalize()
    {
        const auto adj = graph();
        diameter_hops = diameter(adj);
        articulation = articulation_points(adj);
    }
};

// Sink at the origin; ring r holds per_ring nodes at radius r * 0.9 * range,
// so each node reaches the same spoke one ring in and one ring out.
inline Topology build_symmetrical(int rings, int per_ring, double range)
{
    if (rings < 0 || per_ring < 1 || !(range > 0))
        throw std::invalid_argument("symmetrical topology needs rings >= 0, per_ring >= 1, range > 0");
    Topology t;
    t.kind = TopologyKind::Symmetrical;
    t.radio_range = range;
    t.sink = 0;
    t.positions.push_back({0, 0});
    const double step = 0.9 * range;
    for (int r = 1; r <= rings; ++r)
        for (int k = 0; k < per_ring; ++k) {
            const double angle = 2 * std::numbers::pi * k / per_ring;
            t.positions.push_back({r * step * std::cos(angle), r * step * std::sin(angle)});
        }
    t.finalize();
    return t;
}

// Sink on the far left, `depth` columns of `width` nodes to its right. Columns
// are 0.9 * range apart so a column only reaches its two neighbors, which
// makes the first column the only way into the sink.
inline Topology build_asymmetrical(int depth, int width, double range)
{
    if (depth < 0 || width < 1 || !(range > 0))
        throw std::invalid_argument("asymmetrical topology needs depth >= 0, width >= 1, range > 0");
    Topology t;
    t.kind = TopologyKind::Asymmetrical;
    t.radio_range = range;
    t.sink = 0;
    t.positions.push_back({0, 0});
    const double dx = 0.9 * range;
    // First-column nodes must stay within range of the sink:
    // dx^2 + y^2 <= range^2  =>  |y| <= 0.4359 * range.
    const double half = (width - 1) / 2.0;
    const double dy = half > 0 ? std::min(0.4 * range, 0.43 * range / half) : 0.0;
    for (int c = 1; c <= depth; ++c)
        for (int j = 0; j < width; ++j) t.positions.push_back({c * dx, (j - half) * dy});
    t.finalize();
    return t;
}

// Arbitrary graph on nodes 0..adj.size()-1, sink 0. Positions are dummies.
inline Topology from_links(Adjacency adj, NodeId sink = 0)
{
    Topology t;
    t.kind = TopologyKind::Random;
    t.positions.assign(adj.size(), Point{});
    t.sink = sink;
    t.links = std::move(adj);
    t.finalize();
    return t;
}

inline std::size_t asymmetrical_column(NodeId node, int width)
{
    return node == 0 ? 0 : (node - 1) / static_cast<std::size_t>(width) + 1;
}

// Uniform placement in an area_w x area_h box, sink nearest the centroid and
// renumbered to id 0. Redrawn until connected with every node within
// max_hops of the sink.
inline Topology build_random(std::size_t n, double area_w, double area_h, double range, std::uint64_t seed,
                             int max_hops = 11, int max_attempts = 10000)
{
    if (n == 0 || !(range > 0) || !(area_w >= 0) || !(area_h >= 0))
        throw std::invalid_argument("random topology needs n >= 1, range > 0 and a non-negative area");
    Rng rng = SeededRng(seed).stream(Stream::Topology);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<Point> pos(n);
        for (auto& p : pos) {
            p.x = rng.uniform(0, area_w);
            p.y = rng.uniform(0, area_h);
        }
        Point c{};
        for (const auto& p : pos) {
            c.x += p.x / static_cast<double>(n);
            c.y += p.y / static_cast<double>(n);
        }
        std::size_t best = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (distance(pos[i], c) < distance(pos[best], c)) best = i;
        std::swap(pos[0], pos[best]);

        const auto adj = unit_disk_graph(pos, range);
        const int ecc = eccentricity(adj, 0);
        if (ecc == kUnreachable || ecc > max_hops) continue;
        Topology t;
        t.kind = TopologyKind::Random;
        t.radio_range = range;
        t.sink = 0;
        t.positions = std::move(pos);
        t.finalize();
        return t;
    }
    throw TopologyError("could not draw a connected random topology within " + std::to_string(max_hops) +
                        " hops of the sink after " + std::to_string(max_attempts) + " attempts");
}

}  // namespace eagpsim
