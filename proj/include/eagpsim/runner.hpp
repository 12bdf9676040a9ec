#pragma once

// Experiment harness: resolves a scenario file into simulator settings,
// runs (protocol, seed) batches in parallel and writes the CSV outputs.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "baselines.hpp"
#include "config.hpp"
#include "eagp.hpp"
#include "kernel.hpp"

namespace eagpsim {

enum class ProtocolKind { Eagp, Gossip, GossipFo, Mcfa };

inline const char* to_string(ProtocolKind k)
{
    switch (k) {
    case ProtocolKind::Eagp: return "eagp";
    case ProtocolKind::Gossip: return "gossip";
    case ProtocolKind::GossipFo: return "gossip_fo";
    case ProtocolKind::Mcfa: return "mcfa";
    }
    return "?";
}

inline ProtocolKind parse_protocol(const std::string& s)
{
    if (s == "eagp") return ProtocolKind::Eagp;
    if (s == "gossip") return ProtocolKind::Gossip;
    if (s == "gossip_fo") return ProtocolKind::GossipFo;
    if (s == "mcfa") return ProtocolKind::Mcfa;
    throw std::invalid_argument("unknown protocol '" + s + "' (expected eagp, gossip, gossip_fo or mcfa)");
}

inline std::vector<ProtocolKind> parse_protocol_list(const std::string& s)
{
    std::vector<ProtocolKind> out;
    for (const auto& item : split_list(s)) out.push_back(parse_protocol(item));
    if (out.empty()) throw std::invalid_argument("at least one protocol is required");
    return out;
}

// "N" means seeds 1..N; "a,b,c" is an explicit list.
inline std::vector<std::uint64_t> parse_seeds(const std::string& s)
{
    std::vector<std::uint64_t> out;
    auto parse_one = [](const std::string& item) {
        char* end = nullptr;
        errno = 0;
        const auto v = std::strtoull(item.c_str(), &end, 10);
        if (errno != 0 || end == item.c_str() || *end != '\0' || item.front() == '-')
            throw std::invalid_argument("bad seed '" + item + "'");
        return static_cast<std::uint64_t>(v);
    };
    if (s.find(',') == std::string::npos) {
        const auto n = parse_one(trim(s));
        for (std::uint64_t i = 1; i <= n; ++i) out.push_back(i);
    } else {
        for (const auto& item : split_list(s)) out.push_back(parse_one(item));
    }
    if (out.empty()) throw std::invalid_argument("seed list must not be empty");
    return out;
}

struct TopologySpec {
    TopologyKind kind = TopologyKind::Symmetrical;
    std::size_t n = 30;
    int rings = 5;
    int per_ring = 6;
    int depth = 9;
    int width = 3;
    double range = 100;
    double area_w = 300;
    double area_h = 300;
    std::uint64_t seed = 1;
    int max_hops = 11;
};

inline Topology build_topology(const TopologySpec& t)
{
    switch (t.kind) {
    case TopologyKind::Symmetrical: return build_symmetrical(t.rings, t.per_ring, t.range);
    case TopologyKind::Asymmetrical: return build_asymmetrical(t.depth, t.width, t.range);
    case TopologyKind::Random: return build_random(t.n, t.area_w, t.area_h, t.range, t.seed, t.max_hops);
    }
    throw std::invalid_argument("unknown topology kind");
}

struct Experiment {
    TopologySpec topology;
    ScenarioSpec scenario;
    EnergyModel energy;
    EagpConfig eagp;
    std::size_t gossip_fanout = 3;
    std::optional<Seconds> mcfa_resetup;
    std::int32_t ttl = 0;  // 0 = twice the diameter
    double loss_rate = 0;
    Seconds metrics_interval = 10;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::vector<ProtocolKind> protocols{ProtocolKind::Gossip, ProtocolKind::GossipFo, ProtocolKind::Eagp,
                                        ProtocolKind::Mcfa};
};

inline const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys = {
        "topology.kind", "topology.n", "topology.rings", "topology.per_ring", "topology.depth",
        "topology.width", "topology.range", "topology.area", "topology.area_w", "topology.area_h",
        "topology.seed", "topology.max_hops",
        "scenario.kind", "scenario.duration",
        "battery.capacity_j", "battery.min_pct", "battery.max_pct", "battery.initial_j",
        "energy.deep_sleep_a", "energy.modem_sleep_a", "energy.awake_a", "energy.tx_a", "energy.rx_a",
        "energy.voltage", "energy.tx_time", "energy.rx_time", "energy.sensor_j", "energy.bandwidth",
        "energy.hop_delay", "energy.idle_state",
        "mobility.speed", "mobility.interval", "mobility.start_after",
        "traffic.min", "traffic.max", "traffic.cooldown",
        "eagp.dt_max", "eagp.t_rec", "eagp.lambda", "eagp.fanout",
        "gossip.fanout", "mcfa.resetup_interval",
        "protocol.ttl", "radio.loss_rate", "metrics.interval",
        "run.seeds", "run.protocols",
    };
    return keys;
}

// Turns a parsed scenario file into an Experiment. Every error carries the
// offending key and, when it came from a file, its line.
inline Experiment load_experiment(const Config& cfg)
{
    Experiment x;
    auto guarded = [&](const std::string& key, auto&& fn) {
        try {
            fn();
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(e.what(), cfg.line_of(key), key);
        }
    };

    auto& t = x.topology;
    guarded("topology.kind", [&] { t.kind = parse_topology_kind(cfg.get_string("topology.kind", "symmetrical")); });
    t.n = static_cast<std::size_t>(cfg.get_int("topology.n", 30));
    t.rings = static_cast<int>(cfg.get_int("topology.rings", 5));
    t.per_ring = static_cast<int>(cfg.get_int("topology.per_ring", 6));
    t.depth = static_cast<int>(cfg.get_int("topology.depth", 9));
    t.width = static_cast<int>(cfg.get_int("topology.width", 3));
    t.range = cfg.get_double("topology.range", 100);
    t.area_w = cfg.get_double("topology.area", 300);
    t.area_h = t.area_w;
    t.area_w = cfg.get_double("topology.area_w", t.area_w);
    t.area_h = cfg.get_double("topology.area_h", t.area_h);
    t.seed = static_cast<std::uint64_t>(cfg.get_int("topology.seed", 1));
    t.max_hops = static_cast<int>(cfg.get_int("topology.max_hops", 11));

    auto& s = x.scenario;
    guarded("scenario.kind", [&] { s.kind = parse_scenario_kind(cfg.get_string("scenario.kind", "steady_state")); });
    s.duration = cfg.get_double("scenario.duration", 1800);
    s.battery = default_battery(s.kind);
    s.battery.capacity_j = cfg.get_double("battery.capacity_j", s.battery.capacity_j);
    s.battery.min_pct = cfg.get_double("battery.min_pct", s.battery.min_pct);
    s.battery.max_pct = cfg.get_double("battery.max_pct", s.battery.max_pct);
    s.battery.initial_j = cfg.get_doubles("battery.initial_j");
    s.traffic_min = cfg.get_double("traffic.min", 15);
    s.traffic_max = cfg.get_double("traffic.max", 50);
    s.cooldown = cfg.get_double("traffic.cooldown", 60);
    if (s.kind == ScenarioKind::Mobility) {
        RandomWalkSpec m;
        m.speed = cfg.get_double("mobility.speed", 1.0);
        m.update_interval = cfg.get_double("mobility.interval", 1.0);
        if (cfg.has("mobility.start_after")) m.start_after = cfg.get_double("mobility.start_after", 0);
        s.mobility = m;
    } else {
        for (const char* k : {"mobility.speed", "mobility.interval", "mobility.start_after"})
            if (cfg.has(k)) throw ConfigError("mobility keys require scenario.kind = mobility", cfg.line_of(k), k);
    }

    auto& e = x.energy;
    e.deep_sleep_a = cfg.get_double("energy.deep_sleep_a", e.deep_sleep_a);
    e.modem_sleep_a = cfg.get_double("energy.modem_sleep_a", e.modem_sleep_a);
    e.awake_a = cfg.get_double("energy.awake_a", e.awake_a);
    e.tx_a = cfg.get_double("energy.tx_a", e.tx_a);
    e.rx_a = cfg.get_double("energy.rx_a", e.rx_a);
    e.voltage = cfg.get_double("energy.voltage", e.voltage);
    e.tx_time = cfg.get_double("energy.tx_time", e.tx_time);
    e.rx_time = cfg.get_double("energy.rx_time", e.rx_time);
    e.sensor_j = cfg.get_double("energy.sensor_j", e.sensor_j);
    e.bandwidth_bps = cfg.get_double("energy.bandwidth", e.bandwidth_bps);
    e.hop_delay = cfg.get_double("energy.hop_delay", e.hop_delay);
    guarded("energy.idle_state", [&] { e.idle_state = parse_idle_state(cfg.get_string("energy.idle_state", "awake")); });

    x.eagp.dt_max = cfg.get_double("eagp.dt_max", 10);
    x.eagp.t_rec = cfg.get_double("eagp.t_rec", 2 * x.eagp.dt_max);
    x.eagp.lambda = cfg.get_double("eagp.lambda", 10);
    if (cfg.has("eagp.fanout")) {
        const auto f = cfg.get_int("eagp.fanout", 0);
        if (f < 1) throw ConfigError("must be >= 1", cfg.line_of("eagp.fanout"), "eagp.fanout");
        x.eagp.fanout = static_cast<std::size_t>(f);
    }
    const auto gf = cfg.get_int("gossip.fanout", 3);
    if (gf < 1) throw ConfigError("must be >= 1", cfg.line_of("gossip.fanout"), "gossip.fanout");
    x.gossip_fanout = static_cast<std::size_t>(gf);
    if (cfg.has("mcfa.resetup_interval")) x.mcfa_resetup = cfg.get_double("mcfa.resetup_interval", 0);
    x.ttl = static_cast<std::int32_t>(cfg.get_int("protocol.ttl", 0));
    x.loss_rate = cfg.get_double("radio.loss_rate", 0);
    x.metrics_interval = cfg.get_double("metrics.interval", 10);
    if (cfg.has("run.seeds")) guarded("run.seeds", [&] { x.seeds = parse_seeds(cfg.get_string("run.seeds", "")); });
    if (cfg.has("run.protocols"))
        guarded("run.protocols", [&] { x.protocols = parse_protocol_list(cfg.get_string("run.protocols", "")); });

    guarded("energy", [&] { x.energy.validate(); });
    guarded("eagp", [&] { x.eagp.validate(); });
    if (x.mcfa_resetup && !(*x.mcfa_resetup > 0))
        throw ConfigError("must be > 0", cfg.line_of("mcfa.resetup_interval"), "mcfa.resetup_interval");
    if (x.ttl < 0) throw ConfigError("must be >= 0", cfg.line_of("protocol.ttl"), "protocol.ttl");
    if (x.loss_rate < 0 || x.loss_rate >= 1)
        throw ConfigError("must be in [0, 1)", cfg.line_of("radio.loss_rate"), "radio.loss_rate");
    if (!(x.metrics_interval > 0))
        throw ConfigError("must be > 0", cfg.line_of("metrics.interval"), "metrics.interval");
    if (t.range <= 0) throw ConfigError("must be > 0", cfg.line_of("topology.range"), "topology.range");
    if (t.n < 1 || t.rings < 0 || t.per_ring < 1 || t.depth < 0 || t.width < 1)
        throw ConfigError("topology sizes must be positive");
    guarded("scenario", [&] {
        const std::size_t nodes = t.kind == TopologyKind::Symmetrical    ? 1 + std::size_t(t.rings) * t.per_ring
                                  : t.kind == TopologyKind::Asymmetrical ? 1 + std::size_t(t.depth) * t.width
                                                                         : t.n;
        s.validate(nodes);
    });
    return x;
}

inline Experiment load_experiment_file(const std::string& path)
{
    return load_experiment(Config::load(path, known_keys()));
}

inline std::string fmt_num(double v)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// Fully resolved settings in scenario-file syntax; feeding it back in
// reproduces the run.
inline std::string manifest(const Experiment& x)
{
    std::ostringstream o;
    auto kv = [&](const std::string& k, const std::string& v) { o << k << " = " << v << '\n'; };
    o << "# resolved configuration\n";
    kv("topology.kind", to_string(x.topology.kind));
    kv("topology.n", std::to_string(x.topology.n));
    kv("topology.rings", std::to_string(x.topology.rings));
    kv("topology.per_ring", std::to_string(x.topology.per_ring));
    kv("topology.depth", std::to_string(x.topology.depth));
    kv("topology.width", std::to_string(x.topology.width));
    kv("topology.range", fmt_num(x.topology.range));
    kv("topology.area_w", fmt_num(x.topology.area_w));
    kv("topology.area_h", fmt_num(x.topology.area_h));
    kv("topology.seed", std::to_string(x.topology.seed));
    kv("topology.max_hops", std::to_string(x.topology.max_hops));
    kv("scenario.kind", to_string(x.scenario.kind));
    kv("scenario.duration", fmt_num(x.scenario.duration));
    kv("battery.capacity_j", fmt_num(x.scenario.battery.capacity_j));
    kv("battery.min_pct", fmt_num(x.scenario.battery.min_pct));
    kv("battery.max_pct", fmt_num(x.scenario.battery.max_pct));
    if (!x.scenario.battery.initial_j.empty()) {
        std::string list;
        for (double j : x.scenario.battery.initial_j) list += (list.empty() ? "" : ",") + fmt_num(j);
        kv("battery.initial_j", list);
    }
    const auto& e = x.energy;
    kv("energy.deep_sleep_a", fmt_num(e.deep_sleep_a));
    kv("energy.modem_sleep_a", fmt_num(e.modem_sleep_a));
    kv("energy.awake_a", fmt_num(e.awake_a));
    kv("energy.tx_a", fmt_num(e.tx_a));
    kv("energy.rx_a", fmt_num(e.rx_a));
    kv("energy.voltage", fmt_num(e.voltage));
    kv("energy.tx_time", fmt_num(e.tx_time));
    kv("energy.rx_time", fmt_num(e.rx_time));
    kv("energy.sensor_j", fmt_num(e.sensor_j));
    kv("energy.bandwidth", fmt_num(e.bandwidth_bps));
    kv("energy.hop_delay", fmt_num(e.hop_delay));
    kv("energy.idle_state", to_string(e.idle_state));
    if (x.scenario.mobility) {
        kv("mobility.speed", fmt_num(x.scenario.mobility->speed));
        kv("mobility.interval", fmt_num(x.scenario.mobility->update_interval));
        if (x.scenario.mobility->start_after) kv("mobility.start_after", fmt_num(*x.scenario.mobility->start_after));
    }
    kv("traffic.min", fmt_num(x.scenario.traffic_min));
    kv("traffic.max", fmt_num(x.scenario.traffic_max));
    kv("traffic.cooldown", fmt_num(x.scenario.cooldown));
    kv("eagp.dt_max", fmt_num(x.eagp.dt_max));
    kv("eagp.t_rec", fmt_num(x.eagp.t_rec));
    kv("eagp.lambda", fmt_num(x.eagp.lambda));
    if (x.eagp.fanout) kv("eagp.fanout", std::to_string(*x.eagp.fanout));
    kv("gossip.fanout", std::to_string(x.gossip_fanout));
    if (x.mcfa_resetup) kv("mcfa.resetup_interval", fmt_num(*x.mcfa_resetup));
    kv("protocol.ttl", std::to_string(x.ttl));
    kv("radio.loss_rate", fmt_num(x.loss_rate));
    kv("metrics.interval", fmt_num(x.metrics_interval));
    std::string seeds, protos;
    for (auto s : x.seeds) seeds += (seeds.empty() ? "" : ",") + std::to_string(s);
    for (auto p : x.protocols) protos += (protos.empty() ? "" : ",") + std::string(to_string(p));
    // A trailing comma keeps a single seed from being read as a count.
    if (x.seeds.size() == 1) seeds += ",";
    kv("run.seeds", seeds);
    kv("run.protocols", protos);
    return o.str();
}

inline ProtocolFactory make_factory(ProtocolKind kind, const Experiment& x)
{
    switch (kind) {
    case ProtocolKind::Eagp: return [cfg = x.eagp](NodeId) { return std::make_unique<EagpNode>(cfg); };
    case ProtocolKind::Gossip: return [](NodeId) { return std::make_unique<GossipNode>(); };
    case ProtocolKind::GossipFo:
        return [f = x.gossip_fanout](NodeId) { return std::make_unique<GossipNode>(f); };
    case ProtocolKind::Mcfa: return [r = x.mcfa_resetup](NodeId) { return std::make_unique<McfaNode>(r); };
    }
    throw std::invalid_argument("unknown protocol");
}

inline SimConfig sim_config(const Experiment& x, const Topology& topo, std::uint64_t seed)
{
    SimConfig c;
    c.topology = topo;
    c.scenario = x.scenario;
    c.energy = x.energy;
    c.seed = seed;
    c.ttl = x.ttl;
    c.loss_rate = x.loss_rate;
    c.metrics_interval = x.metrics_interval;
    return c;
}

inline MetricsReport run_one(const Experiment& x, const Topology& topo, ProtocolKind kind, std::uint64_t seed,
                             std::ostream* trace = nullptr)
{
    SimConfig c = sim_config(x, topo, seed);
    c.trace = trace;
    Simulator sim(std::move(c), make_factory(kind, x));
    return sim.run();
}

// Every listed protocol on the same scenario and seed.
inline std::map<ProtocolKind, MetricsReport> run(const Experiment& x, const std::vector<ProtocolKind>& protocols,
                                                 std::uint64_t seed)
{
    const Topology topo = build_topology(x.topology);
    std::map<ProtocolKind, MetricsReport> out;
    for (auto p : protocols) out.emplace(p, run_one(x, topo, p, seed));
    return out;
}

struct RunResult {
    ProtocolKind protocol = ProtocolKind::Eagp;
    std::uint64_t seed = 0;
    MetricsReport report;
    std::string trace;
};

// Runs protocols x seeds with `workers` threads. Results come back ordered
// by (protocol, seed) regardless of scheduling.
inline std::vector<RunResult> run_batch(const Experiment& x, std::size_t workers = 1, bool with_trace = false)
{
    const Topology topo = build_topology(x.topology);
    std::vector<RunResult> results;
    for (auto p : x.protocols)
        for (auto s : x.seeds) results.push_back({p, s, {}, {}});

    std::vector<std::exception_ptr> errors(results.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < results.size(); i = next++) {
            try {
                std::ostringstream trace;
                results[i].report = run_one(x, topo, results[i].protocol, results[i].seed,
                                            with_trace ? &trace : nullptr);
                if (with_trace) results[i].trace = trace.str();
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    workers = std::max<std::size_t>(1, std::min(workers, results.size()));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

inline std::string summary_header()
{
    return "seed,protocol,topology,scenario,duration_s,created,delivered_unique,delivery_rate_pct,redundancy,"
           "total_energy_j,efficiency_j_per_pkt,mean_coverage,last_delivery_s,first_death_s,setup_energy_j\n";
}

inline std::string summary_row(const Experiment& x, const RunResult& r)
{
    const auto& m = r.report;
    std::ostringstream o;
    o << r.seed << ',' << to_string(r.protocol) << ',' << to_string(x.topology.kind) << ','
      << to_string(x.scenario.kind) << ',' << fmt_num(m.duration) << ',' << m.created << ',' << m.delivered_unique
      << ',' << fmt_num(m.delivery_rate_pct) << ',' << fmt_num(m.redundancy) << ',' << fmt_num(m.total_energy_j)
      << ',' << fmt_num(m.efficiency_j_per_pkt) << ',' << fmt_num(m.mean_coverage) << ','
      << fmt_num(m.last_delivery_s) << ',' << fmt_num(m.first_death_s) << ',' << fmt_num(m.setup_energy_j) << '\n';
    return o.str();
}

// Tidy per-figure tables, averaged over seeds.
inline std::map<std::string, std::string> figure_tables(const Experiment& x, const std::vector<RunResult>& results)
{
    std::map<ProtocolKind, std::vector<const MetricsReport*>> by;
    for (const auto& r : results) by[r.protocol].push_back(&r.report);
    std::map<std::string, std::string> files;

    std::ostringstream lon;
    lon << "time_s,protocol,cum_deliveries\n";
    std::ostringstream mob;
    mob << "protocol,created,delivered_unique,delivery_rate_pct\n";
    std::ostringstream cov;
    cov << "origin,protocol,coverage\n";
    std::ostringstream eff;
    eff << "protocol,efficiency_j_per_pkt,redundancy,total_energy_j\n";
    std::ostringstream prof;
    prof << "node,protocol,energy_j\n";

    for (auto p : x.protocols) {
        const auto& reps = by[p];
        if (reps.empty()) continue;
        const double k = static_cast<double>(reps.size());
        const std::size_t points = reps.front()->series.size();
        for (std::size_t i = 0; i < points; ++i) {
            double sum = 0;
            for (const auto* r : reps) sum += i < r->series.size() ? double(r->series[i].cumulative_deliveries) : 0;
            lon << fmt_num(reps.front()->series[i].time) << ',' << to_string(p) << ',' << fmt_num(sum / k) << '\n';
        }
        double created = 0, delivered = 0, rate = 0, efficiency = 0, redundancy = 0, energy = 0;
        for (const auto* r : reps) {
            created += double(r->created);
            delivered += double(r->delivered_unique);
            rate += r->delivery_rate_pct;
            efficiency += r->efficiency_j_per_pkt;
            redundancy += r->redundancy;
            energy += r->total_energy_j;
        }
        mob << to_string(p) << ',' << fmt_num(created / k) << ',' << fmt_num(delivered / k) << ','
            << fmt_num(rate / k) << '\n';
        eff << to_string(p) << ',' << fmt_num(efficiency / k) << ',' << fmt_num(redundancy / k) << ','
            << fmt_num(energy / k) << '\n';

        std::map<NodeId, std::pair<double, int>> origin_cov;
        for (const auto* r : reps)
            for (const auto& [origin, c] : r->coverage) {
                origin_cov[origin].first += c;
                origin_cov[origin].second += 1;
            }
        for (const auto& [origin, sc] : origin_cov)
            cov << origin << ',' << to_string(p) << ',' << fmt_num(sc.first / sc.second) << '\n';

        const std::size_t nodes = reps.front()->per_node.size();
        for (std::size_t v = 0; v < nodes; ++v) {
            double sum = 0;
            for (const auto* r : reps) sum += r->per_node[v].energy_j;
            prof << v << ',' << to_string(p) << ',' << fmt_num(sum / k) << '\n';
        }
    }
    files["fig_longevity.csv"] = lon.str();
    files["fig_mobility_delivery.csv"] = mob.str();
    files["fig_coverage.csv"] = cov.str();
    files["fig_efficiency.csv"] = eff.str();
    files["fig_energy_profile.csv"] = prof.str();
    return files;
}

inline void emit_figures(const std::filesystem::path& out_dir, const Experiment& x,
                         const std::vector<RunResult>& results)
{
    std::filesystem::create_directories(out_dir);
    for (const auto& [name, body] : figure_tables(x, results)) std::ofstream(out_dir / name) << body;
}

inline void write_outputs(const std::filesystem::path& out_dir, const Experiment& x,
                          const std::vector<RunResult>& results)
{
    namespace fs = std::filesystem;
    fs::create_directories(out_dir / "timeseries");
    fs::create_directories(out_dir / "pernode");
    {
        std::ofstream f(out_dir / "summary.csv");
        f << summary_header();
        for (const auto& r : results) f << summary_row(x, r);
    }
    for (const auto& r : results) {
        const std::string stem = std::string(to_string(r.protocol)) + "_seed" + std::to_string(r.seed) + ".csv";
        std::ofstream ts(out_dir / "timeseries" / stem);
        ts << "time_s,cumulative_deliveries,alive_nodes\n";
        for (const auto& p : r.report.series)
            ts << fmt_num(p.time) << ',' << p.cumulative_deliveries << ',' << p.alive_nodes << '\n';
        std::ofstream pn(out_dir / "pernode" / stem);
        pn << "node,energy_j,death_s,tx_count,rx_count\n";
        for (std::size_t v = 0; v < r.report.per_node.size(); ++v) {
            const auto& n = r.report.per_node[v];
            pn << v << ',' << fmt_num(n.energy_j) << ',' << fmt_num(n.death_s) << ',' << n.tx_count << ','
               << n.rx_count << '\n';
        }
        if (!r.trace.empty()) {
            fs::create_directories(out_dir / "trace");
            std::ofstream(out_dir / "trace" / (std::string(to_string(r.protocol)) + "_seed" +
                                               std::to_string(r.seed) + ".log"))
                << r.trace;
        }
    }
    std::ofstream(out_dir / "manifest.cfg") << manifest(x);
    emit_figures(out_dir, x, results);
}

}  // namespace eagpsim
