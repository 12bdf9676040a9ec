#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <set>
#include <vector>

#include "types.hpp"

namespace eagpsim {

struct SeriesPoint {
    Seconds time = 0;
    std::uint64_t cumulative_deliveries = 0;
    std::size_t alive_nodes = 0;
};

struct NodeReport {
    double energy_j = 0;
    Seconds death_s = kNever;
    std::uint64_t tx_count = 0;
    std::uint64_t rx_count = 0;
};

struct MetricsReport {
    std::size_t nodes = 0;
    Seconds duration = 0;
    double total_energy_j = 0;
    double setup_energy_j = 0;  // cost-field flooding, also included in the total
    std::uint64_t created = 0;
    std::uint64_t delivered_unique = 0;
    std::uint64_t sink_repeats = 0;
    double delivery_rate_pct = 0;
    double redundancy = 0;
    double efficiency_j_per_pkt = kNever;
    std::map<NodeId, double> coverage;  // per origin, mean fraction of other nodes reached
    double mean_coverage = 0;
    Seconds last_delivery_s = 0;
    Seconds first_death_s = kNever;
    std::vector<SeriesPoint> series;
    std::vector<NodeReport> per_node;
};

// One collector per run. Only data originated by nodes other than the sink
// counts toward delivery, redundancy and coverage.
class MetricsCollector {
public:
    MetricsCollector(std::size_t nodes, NodeId sink) : nodes_(nodes), sink_(sink) {}

    void record_created(const MessageId& id)
    {
        if (id.origin == sink_) return;
        ++created_;
        reached_.try_emplace(id, std::vector<bool>(nodes_, false));
    }

    // Every data arrival at any node.
    void record_delivery(NodeId node, const DataMessage& msg, Seconds now)
    {
        auto it = reached_.find(msg.id);
        if (it == reached_.end()) return;
        if (node < nodes_) it->second[node] = true;
        if (node != sink_) return;
        if (sink_seen_.insert(msg.id).second) {
            ++delivered_unique_;
            last_delivery_ = now;
        } else {
            ++sink_repeats_;
        }
    }

    void record_sample(Seconds now, std::size_t alive)
    {
        series_.push_back({now, delivered_unique_, alive});
    }

    std::uint64_t created() const { return created_; }
    std::uint64_t delivered_unique() const { return delivered_unique_; }
    std::uint64_t sink_repeats() const { return sink_repeats_; }

    // Fraction of the other nodes that have received `id` so far.
    double coverage_of(const MessageId& id) const
    {
        auto it = reached_.find(id);
        if (it == reached_.end() || nodes_ < 2) return 0;
        std::size_t n = 0;
        for (NodeId v = 0; v < nodes_; ++v)
            if (v != id.origin && it->second[v]) ++n;
        return static_cast<double>(n) / static_cast<double>(nodes_ - 1);
    }

    MetricsReport finalize(Seconds duration, std::vector<NodeReport> per_node, double setup_energy_j) const
    {
        MetricsReport r;
        r.nodes = nodes_;
        r.duration = duration;
        r.per_node = std::move(per_node);
        r.setup_energy_j = setup_energy_j;
        for (const auto& n : r.per_node) {
            r.total_energy_j += n.energy_j;
            r.first_death_s = std::min(r.first_death_s, n.death_s);
        }
        r.created = created_;
        r.delivered_unique = delivered_unique_;
        r.sink_repeats = sink_repeats_;
        r.delivery_rate_pct = created_ ? 100.0 * static_cast<double>(delivered_unique_) / static_cast<double>(created_) : 0;
        r.redundancy = delivered_unique_ ? static_cast<double>(sink_repeats_) / static_cast<double>(delivered_unique_) : 0;
        r.efficiency_j_per_pkt = delivered_unique_ ? r.total_energy_j / static_cast<double>(delivered_unique_) : kNever;
        r.last_delivery_s = last_delivery_;

        std::map<NodeId, std::pair<double, std::size_t>> acc;
        for (const auto& [id, _] : reached_) {
            auto& [sum, count] = acc[id.origin];
            sum += coverage_of(id);
            ++count;
        }
        double total = 0;
        for (const auto& [origin, sc] : acc) {
            r.coverage[origin] = sc.first / static_cast<double>(sc.second);
            total += r.coverage[origin];
        }
        r.mean_coverage = acc.empty() ? 0 : total / static_cast<double>(acc.size());
        r.series = series_;
        if (r.series.empty() || r.series.back().time < duration) {
            const std::size_t alive = r.series.empty() ? nodes_ : r.series.back().alive_nodes;
            r.series.push_back({duration, delivered_unique_, alive});
        }
        return r;
    }

private:
    std::size_t nodes_;
    NodeId sink_;
    std::uint64_t created_ = 0;
    std::uint64_t delivered_unique_ = 0;
    std::uint64_t sink_repeats_ = 0;
    Seconds last_delivery_ = 0;
    std::map<MessageId, std::vector<bool>> reached_;
    std::set<MessageId> sink_seen_;
    std::vector<SeriesPoint> series_;
};

struct Summary {
    double mean = 0;
    double stdev = 0;  // sample standard deviation; 0 for a single value
    double min = 0;
    double max = 0;
};

inline Summary summarize(const std::vector<double>& xs)
{
    Summary s;
    if (xs.empty()) return s;
    s.min = *std::min_element(xs.begin(), xs.end());
    s.max = *std::max_element(xs.begin(), xs.end());
    s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.stdev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return s;
}

struct AggregateReport {
    Summary created, delivered_unique, delivery_rate_pct, redundancy, total_energy_j, efficiency_j_per_pkt,
        mean_coverage, last_delivery_s;
};

inline AggregateReport aggregate(const std::vector<MetricsReport>& reports)
{
    auto pick = [&](auto field) {
        std::vector<double> xs;
        xs.reserve(reports.size());
        for (const auto& r : reports) xs.push_back(static_cast<double>(r.*field));
        return summarize(xs);
    };
    AggregateReport a;
    a.created = pick(&MetricsReport::created);
    a.delivered_unique = pick(&MetricsReport::delivered_unique);
    a.delivery_rate_pct = pick(&MetricsReport::delivery_rate_pct);
    a.redundancy = pick(&MetricsReport::redundancy);
    a.total_energy_j = pick(&MetricsReport::total_energy_j);
    a.efficiency_j_per_pkt = pick(&MetricsReport::efficiency_j_per_pkt);
    a.mean_coverage = pick(&MetricsReport::mean_coverage);
    a.last_delivery_s = pick(&MetricsReport::last_delivery_s);
    return a;
}

}  // namespace eagpsim
