#pragma once

// Battery accounting under the ESP8266 current/time model. Every charge
// function returns the Joules actually drained so that callers can keep an
// independent conservation ledger.

#include <algorithm>
#include <stdexcept>
#include <string>

#include "types.hpp"

namespace eagpsim {

enum class IdleState { Awake, ModemSleep, DeepSleep };

inline const char* to_string(IdleState s)
{
    switch (s) {
    case IdleState::Awake: return "awake";
    case IdleState::ModemSleep: return "modem_sleep";
    case IdleState::DeepSleep: return "deep_sleep";
    }
    return "?";
}

inline IdleState parse_idle_state(const std::string& s)
{
    if (s == "awake") return IdleState::Awake;
    if (s == "modem_sleep") return IdleState::ModemSleep;
    if (s == "deep_sleep") return IdleState::DeepSleep;
    throw std::invalid_argument("unknown idle state '" + s + "'");
}

struct EnergyModel {
    double deep_sleep_a = 1e-5;
    double modem_sleep_a = 1.5e-3;
    double awake_a = 8.1e-3;
    double tx_a = 1.7e-2;
    double rx_a = 5.6e-3;
    double voltage = 3.7;
    Seconds tx_time = 30e-3;
    Seconds rx_time = 40e-3;
    double sensor_j = 1.1e-9;
    double bandwidth_bps = 54e6;  // recorded only; airtime uses tx_time/rx_time
    Seconds hop_delay = 5e-3;
    double jitter = 0;
    double error = 0;
    IdleState idle_state = IdleState::Awake;

    double tx_joules() const { return voltage * tx_a * tx_time; }
    double rx_joules() const { return voltage * rx_a * rx_time; }

    double idle_current(IdleState s) const
    {
        switch (s) {
        case IdleState::Awake: return awake_a;
        case IdleState::ModemSleep: return modem_sleep_a;
        case IdleState::DeepSleep: return deep_sleep_a;
        }
        return awake_a;
    }

    double idle_watts() const { return voltage * idle_current(idle_state); }

    // Throws std::invalid_argument naming the offending field.
    void validate() const
    {
        auto positive = [](double v, const char* name) {
            if (!(v > 0)) throw std::invalid_argument(std::string("energy.") + name + " must be > 0");
        };
        positive(deep_sleep_a, "deep_sleep_a");
        positive(modem_sleep_a, "modem_sleep_a");
        positive(awake_a, "awake_a");
        positive(tx_a, "tx_a");
        positive(rx_a, "rx_a");
        positive(voltage, "voltage");
        positive(tx_time, "tx_time");
        positive(rx_time, "rx_time");
        if (sensor_j < 0) throw std::invalid_argument("energy.sensor_j must be >= 0");
        if (hop_delay < 0) throw std::invalid_argument("energy.hop_delay must be >= 0");
        if (!(tx_a > awake_a && awake_a > modem_sleep_a && modem_sleep_a > deep_sleep_a))
            throw std::invalid_argument(
                "energy currents must satisfy tx_a > awake_a > modem_sleep_a > deep_sleep_a");
    }
};

class Battery {
public:
    Battery() = default;
    Battery(double capacity_j, double initial_j)
        : capacity_j_(capacity_j), remaining_j_(std::clamp(initial_j, 0.0, capacity_j))
    {
        if (!(capacity_j > 0)) throw std::invalid_argument("battery capacity must be > 0");
    }

    double capacity_j() const { return capacity_j_; }
    double remaining_j() const { return remaining_j_; }
    bool alive() const { return remaining_j_ > 0; }

    // Removes up to `joules`, clamping at empty. Returns the amount removed.
    double draw(double joules)
    {
        if (joules < 0) throw SimulationError("negative battery draw");
        if (!alive()) return 0;
        const double taken = std::min(joules, remaining_j_);
        remaining_j_ -= taken;
        return taken;
    }

private:
    double capacity_j_ = 1;
    double remaining_j_ = 0;
};

inline double charge_tx(Battery& b, const EnergyModel& m) { return b.draw(m.tx_joules()); }

inline double charge_rx(Battery& b, const EnergyModel& m) { return b.draw(m.rx_joules()); }

inline double charge_sense(Battery& b, const EnergyModel& m) { return b.draw(m.sensor_j); }

inline double charge_idle(Battery& b, const EnergyModel& m, Seconds dt, IdleState state)
{
    if (dt < 0) throw SimulationError("negative idle interval");
    if (dt == 0) return 0;
    return b.draw(m.voltage * m.idle_current(state) * dt);
}

inline double energy_percent(const Battery& b)
{
    return std::clamp(100.0 * b.remaining_j() / b.capacity_j(), 0.0, 100.0);
}

// Battery plus the lazily-settled idle drain and a ledger of every drain.
// Idle consumption between events is accrued on demand so the kernel never
// has to step time.
class NodeEnergy {
public:
    NodeEnergy() = default;
    NodeEnergy(double capacity_j, double initial_j)
        : battery_(capacity_j, initial_j), initial_j_(battery_.remaining_j())
    {
        if (!battery_.alive()) death_time_ = 0;
    }

    const Battery& battery() const { return battery_; }
    double initial_j() const { return initial_j_; }
    double drained_j() const { return drained_j_; }
    Seconds death_time() const { return death_time_; }
    std::uint64_t tx_count() const { return tx_count_; }
    std::uint64_t rx_count() const { return rx_count_; }

    void settle(Seconds now, const EnergyModel& m)
    {
        if (now < last_settle_) throw SimulationError("energy settled backwards in time");
        if (battery_.alive()) {
            const double before = battery_.remaining_j();
            const double drain = charge_idle(battery_, m, now - last_settle_, m.idle_state);
            drained_j_ += drain;
            if (!battery_.alive() && death_time_ == kNever)
                death_time_ = last_settle_ + before / m.idle_watts();
        }
        last_settle_ = now;
    }

    // Alive at `now` assuming only idle drain since the last settle.
    bool alive_at(Seconds now, const EnergyModel& m) const
    {
        if (!battery_.alive()) return false;
        return battery_.remaining_j() - m.idle_watts() * (now - last_settle_) > 0;
    }

    double percent_at(Seconds now, const EnergyModel& m)
    {
        settle(now, m);
        return energy_percent(battery_);
    }

    double tx(Seconds now, const EnergyModel& m)
    {
        settle(now, m);
        ++tx_count_;
        return record(charge_tx(battery_, m), now);
    }

    double rx(Seconds now, const EnergyModel& m)
    {
        settle(now, m);
        ++rx_count_;
        return record(charge_rx(battery_, m), now);
    }

    double sense(Seconds now, const EnergyModel& m)
    {
        settle(now, m);
        return record(charge_sense(battery_, m), now);
    }

private:
    double record(double drain, Seconds now)
    {
        drained_j_ += drain;
        if (!battery_.alive() && death_time_ == kNever) death_time_ = now;
        return drain;
    }

    Battery battery_;
    double initial_j_ = 0;
    double drained_j_ = 0;
    Seconds last_settle_ = 0;
    Seconds death_time_ = kNever;
    std::uint64_t tx_count_ = 0;
    std::uint64_t rx_count_ = 0;
};

}  // namespace eagpsim
