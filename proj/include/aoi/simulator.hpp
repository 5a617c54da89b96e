#pragma once

// Event-driven simulation of the two-source status-update queue under every
// packet-management policy, including the simulator-only baselines.
//
// Interarrival times of each source and service times are exponential. The
// age of each source at the sink is integrated exactly as a piecewise-linear
// sawtooth, so every replication yields an unbiased time-average estimate.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "aoi/policy_models.hpp"
#include "aoi/shs.hpp"

namespace aoi {

/// Priority of source 2 over source 1 in the PP-NW / PP-WW baselines.
inline constexpr int kHighPrioritySource = 2;

struct Packet {
    int source = 1;          ///< 1 or 2
    double generated = 0.0;  ///< generation (= arrival) time

    bool operator==(const Packet&) const = default;
};

/// Waiting packets, head first. At most two slots are ever needed.
class WaitingRoom {
public:
    static constexpr std::size_t kCapacity = 2;

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    const Packet& operator[](std::size_t i) const { return slots_[i]; }
    Packet& operator[](std::size_t i) { return slots_[i]; }

    /// Index of the waiting packet of the given source, if any.
    std::optional<std::size_t> find(int source) const;
    void push_back(const Packet& p);
    Packet pop_front();

    bool operator==(const WaitingRoom& other) const;

private:
    std::array<Packet, kCapacity> slots_{};
    std::size_t size_ = 0;
};

struct SystemState {
    std::optional<Packet> in_service;
    WaitingRoom waiting;
    /// Generation time of the most recently delivered packet of each source.
    std::array<double, 2> last_delivered{0.0, 0.0};

    bool operator==(const SystemState&) const = default;
};

enum class EventKind : std::uint8_t { Arrival, ServiceCompletion };

struct Event {
    EventKind kind = EventKind::Arrival;
    int source = 1;  ///< arriving source; ignored for completions
    double time = 0.0;

    static Event arrival(int source, double time) { return {EventKind::Arrival, source, time}; }
    static Event completion(double time) { return {EventKind::ServiceCompletion, 0, time}; }
};

struct Delivery {
    int source = 1;
    double generated = 0.0;
    double delivered = 0.0;
};

struct StepResult {
    SystemState state;
    std::optional<Delivery> delivery;
    /// A packet entered the server, so a fresh service time is due.
    bool service_started = false;
};

/// Applies one arrival or service completion under the given policy.
/// Throws IllegalEvent for a completion while idle or a bad source index.
StepResult step_policy(PolicyId policy, const SystemState& state, const Event& event);

/// Occupancy constraints of the policy: waiting-room size, one packet per
/// source where required, and no waiting packet while the server is idle.
bool satisfies_invariants(PolicyId policy, const SystemState& state);

/// Area under a unit-slope age curve starting at prev_aoi over elapsed time.
/// Throws NegativeElapsed for elapsed < 0.
double aoi_area_increment(double prev_aoi, double elapsed);

struct SimConfig {
    PolicyId policy = PolicyId::Policy1;
    LoadPoint loads{1.0, 1.0, 1.0};
    std::uint64_t horizon_events = 1'000'000;  ///< arrivals + completions per replication
    double warmup_fraction = 0.1;
    std::uint64_t seed = 1;
    std::uint32_t replications = 16;
};

inline constexpr std::uint64_t kMinHorizonEvents = 10'000;

/// Throws InvalidConfig describing the first violated constraint.
void validate(const SimConfig& config);

struct ReplicationEstimate {
    std::array<double, 2> mean_aoi{};
    double measured_time = 0.0;
};

struct SimResult {
    std::array<double, 2> mean_aoi{};
    std::array<double, 2> std_error{};
    /// Mean and standard error of the per-replication sum of both ages.
    double sum_mean = 0.0;
    double sum_std_error = 0.0;
    std::uint32_t replications = 0;
    /// Total measured (post-warmup) time across replications.
    double simulated_time = 0.0;
    std::vector<ReplicationEstimate> per_replication;
};

/// Seed of the independent random stream for one replication.
std::uint64_t replication_seed(std::uint64_t seed, std::uint32_t replication);

/// Runs one replication. When trace is non-null, every delivery is written
/// as "policy,replication,source,generated,delivered".
ReplicationEstimate simulate_replication(const SimConfig& config, std::uint32_t replication,
                                         std::ostream* trace = nullptr);

/// Runs all replications (in parallel when no trace is requested) and merges
/// them in replication order. Identical configs give bit-identical results.
SimResult simulate(const SimConfig& config, std::ostream* trace = nullptr);

}  // namespace aoi
