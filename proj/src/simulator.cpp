#include "aoi/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace aoi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Inverse-transform exponential variate from 53 random bits.
class ExponentialStream {
public:
    explicit ExponentialStream(std::uint64_t seed) : engine_(seed) {}

    double next(double rate) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return -std::log1p(-u) / rate;
    }

private:
    std::mt19937_64 engine_;
};

int priority(int source) { return source == kHighPrioritySource ? 1 : 0; }

void check_source(int source) {
    if (source != 1 && source != 2) {
        throw IllegalEvent("packet source must be 1 or 2, got " + std::to_string(source));
    }
}

std::size_t waiting_capacity(PolicyId policy) {
    switch (policy) {
        case PolicyId::Policy1: return 2;
        case PolicyId::Policy2:
        case PolicyId::Policy3:
        case PolicyId::LcfsW:
        case PolicyId::PpWw: return 1;
        case PolicyId::LcfsS:
        case PolicyId::PpNw: return 0;
    }
    return 0;
}

// Arrival while the server is busy.
void arrive_busy(PolicyId policy, StepResult& r, const Packet& fresh) {
    SystemState& s = r.state;
    const Packet& serving = *s.in_service;
    auto preempt = [&] {
        s.in_service = fresh;
        r.service_started = true;
    };
    auto replace_or_enqueue_same_source = [&] {
        if (auto slot = s.waiting.find(fresh.source)) {
            s.waiting[*slot] = fresh;
        } else {
            s.waiting.push_back(fresh);
        }
    };

    switch (policy) {
        case PolicyId::Policy1:
            replace_or_enqueue_same_source();
            break;
        case PolicyId::Policy2:
            if (serving.source == fresh.source) {
                preempt();
            } else {
                replace_or_enqueue_same_source();
            }
            break;
        case PolicyId::Policy3:
            if (serving.source != fresh.source) replace_or_enqueue_same_source();
            break;
        case PolicyId::LcfsS:
            preempt();
            break;
        case PolicyId::LcfsW:
            if (s.waiting.empty()) {
                s.waiting.push_back(fresh);
            } else {
                s.waiting[0] = fresh;
            }
            break;
        case PolicyId::PpNw:
            if (priority(fresh.source) >= priority(serving.source)) preempt();
            break;
        case PolicyId::PpWw:
            if (s.waiting.empty()) {
                s.waiting.push_back(fresh);
            } else if (priority(fresh.source) >= priority(s.waiting[0].source)) {
                s.waiting[0] = fresh;
            }
            break;
    }
}

}  // namespace

std::optional<std::size_t> WaitingRoom::find(int source) const {
    for (std::size_t i = 0; i < size_; ++i) {
        if (slots_[i].source == source) return i;
    }
    return std::nullopt;
}

void WaitingRoom::push_back(const Packet& p) {
    if (size_ == kCapacity) throw IllegalEvent("waiting room overflow");
    slots_[size_++] = p;
}

Packet WaitingRoom::pop_front() {
    if (size_ == 0) throw IllegalEvent("pop from empty waiting room");
    Packet head = slots_[0];
    for (std::size_t i = 1; i < size_; ++i) slots_[i - 1] = slots_[i];
    --size_;
    return head;
}

bool WaitingRoom::operator==(const WaitingRoom& other) const {
    return size_ == other.size_ && std::equal(slots_.begin(), slots_.begin() + static_cast<std::ptrdiff_t>(size_),
                                              other.slots_.begin());
}

StepResult step_policy(PolicyId policy, const SystemState& state, const Event& event) {
    StepResult r{state, std::nullopt, false};
    SystemState& s = r.state;

    if (event.kind == EventKind::ServiceCompletion) {
        if (!s.in_service) throw IllegalEvent("service completion while the server is idle");
        const Packet done = *s.in_service;
        r.delivery = Delivery{done.source, done.generated, event.time};
        s.last_delivered[static_cast<std::size_t>(done.source - 1)] = done.generated;
        if (s.waiting.empty()) {
            s.in_service.reset();
        } else {
            s.in_service = s.waiting.pop_front();
            r.service_started = true;
        }
        return r;
    }

    check_source(event.source);
    const Packet fresh{event.source, event.time};
    if (!s.in_service) {
        s.in_service = fresh;
        r.service_started = true;
        return r;
    }
    arrive_busy(policy, r, fresh);
    return r;
}

bool satisfies_invariants(PolicyId policy, const SystemState& state) {
    const auto& w = state.waiting;
    if (w.size() > waiting_capacity(policy)) return false;
    if (!state.in_service && !w.empty()) return false;
    switch (policy) {
        case PolicyId::Policy1:
            return !(w.size() == 2 && w[0].source == w[1].source);
        case PolicyId::Policy2:
        case PolicyId::Policy3:
            return w.empty() || w[0].source != state.in_service->source;
        default:
            return true;
    }
}

double aoi_area_increment(double prev_aoi, double elapsed) {
    if (elapsed < 0.0) throw NegativeElapsed("elapsed time must be nonnegative");
    return prev_aoi * elapsed + 0.5 * elapsed * elapsed;
}

void validate(const SimConfig& config) {
    if (config.horizon_events < kMinHorizonEvents) {
        throw InvalidConfig("horizon_events must be at least " + std::to_string(kMinHorizonEvents));
    }
    if (config.replications < 1) throw InvalidConfig("replications must be at least 1");
    if (!(config.warmup_fraction >= 0.0 && config.warmup_fraction < 1.0)) {
        throw InvalidConfig("warmup_fraction must lie in [0, 1)");
    }
}

std::uint64_t replication_seed(std::uint64_t seed, std::uint32_t replication) {
    return splitmix64(splitmix64(seed) ^ splitmix64(0xA5A5A5A5ULL + replication));
}

ReplicationEstimate simulate_replication(const SimConfig& config, std::uint32_t replication,
                                         std::ostream* trace) {
    validate(config);
    ExponentialStream rng(replication_seed(config.seed, replication));
    const std::array<double, 2> arrival_rate{config.loads.lambda1(), config.loads.lambda2()};
    const double service_rate = config.loads.mu();
    const auto warmup_events =
        static_cast<std::uint64_t>(std::floor(config.warmup_fraction * static_cast<double>(config.horizon_events)));

    SystemState state;
    std::array<double, 2> next_arrival{rng.next(arrival_rate[0]), rng.next(arrival_rate[1])};
    double next_completion = kInf;
    double now = 0.0;
    double measure_start = 0.0;
    bool measuring = warmup_events == 0;
    std::array<double, 2> area{0.0, 0.0};

    for (std::uint64_t processed = 0; processed < config.horizon_events;) {
        // Completions win ties, then source 1 before source 2.
        Event event;
        if (next_completion <= next_arrival[0] && next_completion <= next_arrival[1]) {
            event = Event::completion(next_completion);
        } else if (next_arrival[0] <= next_arrival[1]) {
            event = Event::arrival(1, next_arrival[0]);
        } else {
            event = Event::arrival(2, next_arrival[1]);
        }

        if (measuring) {
            const double dt = event.time - now;
            for (std::size_t c = 0; c < 2; ++c) {
                area[c] += aoi_area_increment(now - state.last_delivered[c], dt);
            }
        }
        now = event.time;

        StepResult r = step_policy(config.policy, state, event);
        state = r.state;
        if (event.kind == EventKind::Arrival) {
            const auto c = static_cast<std::size_t>(event.source - 1);
            next_arrival[c] = now + rng.next(arrival_rate[c]);
        }
        if (r.service_started) {
            next_completion = now + rng.next(service_rate);
        } else if (!state.in_service) {
            next_completion = kInf;
        }
        if (trace != nullptr && r.delivery) {
            char times[64];
            std::snprintf(times, sizeof times, "%.12f,%.12f", r.delivery->generated, r.delivery->delivered);
            *trace << policy_name(config.policy) << ',' << replication << ',' << r.delivery->source << ','
                   << times << '\n';
        }

        ++processed;
        if (!measuring && processed == warmup_events) {
            measuring = true;
            measure_start = now;
        }
    }

    ReplicationEstimate est;
    est.measured_time = now - measure_start;
    for (std::size_t c = 0; c < 2; ++c) est.mean_aoi[c] = area[c] / est.measured_time;
    return est;
}

SimResult simulate(const SimConfig& config, std::ostream* trace) {
    validate(config);
    const std::uint32_t reps = config.replications;
    std::vector<ReplicationEstimate> estimates(reps);

    if (trace != nullptr) {
        for (std::uint32_t k = 0; k < reps; ++k) estimates[k] = simulate_replication(config, k, trace);
    } else {
        const unsigned workers =
            std::max(1u, std::min(reps, std::max(1u, std::thread::hardware_concurrency())));
        std::atomic<std::uint32_t> next{0};
        auto worker = [&] {
            for (std::uint32_t k = next++; k < reps; k = next++) {
                estimates[k] = simulate_replication(config, k);
            }
        };
        std::vector<std::future<void>> pool;
        for (unsigned w = 1; w < workers; ++w) pool.push_back(std::async(std::launch::async, worker));
        worker();
        for (auto& f : pool) f.get();
    }

    SimResult result;
    result.replications = reps;
    result.per_replication = estimates;
    const double n = static_cast<double>(reps);
    auto mean_and_se = [&](auto value_of) {
        double mean = 0.0;
        for (const auto& e : estimates) mean += value_of(e);
        mean /= n;
        double ss = 0.0;
        for (const auto& e : estimates) ss += (value_of(e) - mean) * (value_of(e) - mean);
        const double se = reps > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
        return std::pair{mean, se};
    };
    for (std::size_t c = 0; c < 2; ++c) {
        std::tie(result.mean_aoi[c], result.std_error[c]) =
            mean_and_se([c](const ReplicationEstimate& e) { return e.mean_aoi[c]; });
    }
    std::tie(result.sum_mean, result.sum_std_error) =
        mean_and_se([](const ReplicationEstimate& e) { return e.mean_aoi[0] + e.mean_aoi[1]; });
    for (const auto& e : estimates) result.simulated_time += e.measured_time;
    return result;
}

}  // namespace aoi
