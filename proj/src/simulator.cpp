#include "basketcheck/simulator.hpp"

#include <cmath>
#include <deque>

namespace basketcheck {

std::uint64_t SplitMix64::next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double SplitMix64::next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t replication) {
    // Output (replication+1) of the seed's counter sequence: streams for
    // distinct replications never depend on one another.
    SplitMix64 gen(seed + replication * 0x9E3779B97F4A7C15ull);
    return gen.next();
}

namespace {

StateIndex step_from(const std::vector<Transition>& row, double u) {
    double cumulative = 0.0;
    for (const Transition& t : row) {
        cumulative += t.prob;
        if (u < cumulative) return t.target;
    }
    return row.back().target;  // absorbs rounding slack at the top of the row
}

// States with no path into the goal. Kept local so the simulator depends on
// nothing beyond the model itself.
StateSet unreachable_from(const Dtmc& dtmc, const StateSet& goal) {
    const std::size_t n = dtmc.state_count();
    std::vector<std::vector<StateIndex>> preds(n);
    for (StateIndex s = 0; s < n; ++s) {
        for (const Transition& t : dtmc.rows[s]) preds[t.target].push_back(s);
    }
    StateSet reached(n);
    std::deque<StateIndex> queue;
    for (StateIndex s : goal.indices()) {
        reached.insert(s);
        queue.push_back(s);
    }
    while (!queue.empty()) {
        StateIndex s = queue.front();
        queue.pop_front();
        for (StateIndex p : preds[s]) {
            if (!reached.contains(p)) {
                reached.insert(p);
                queue.push_back(p);
            }
        }
    }
    return reached.complement();
}

}  // namespace

Path sample_path(const Dtmc& dtmc, StateIndex start, std::uint64_t seed,
                 std::size_t max_steps, const StateSet& stop) {
    if (start >= dtmc.state_count()) {
        throw ModelError("start state " + std::to_string(start) + " out of range");
    }
    Path path;
    path.states.push_back(start);
    SplitMix64 gen(seed);
    StateIndex current = start;
    for (std::size_t steps = 0;; ++steps) {
        if (stop.contains(current)) {
            path.terminated_by = Path::Termination::GoalHit;
            return path;
        }
        if (steps == max_steps) {
            path.terminated_by = Path::Termination::StepLimit;
            return path;
        }
        const auto& row = dtmc.rows[current];
        if (row.empty()) {
            throw ModelError("state " + std::to_string(current) +
                             " has no outgoing transitions");
        }
        current = step_from(row, gen.next_unit());
        path.states.push_back(current);
    }
}

std::pair<double, double> wilson_interval(std::size_t hits, std::size_t samples, double z) {
    if (samples == 0) return {0.0, 1.0};
    double n = static_cast<double>(samples);
    double p = static_cast<double>(hits) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    double low = center - half;
    double high = center + half;
    return {low < 0.0 ? 0.0 : low, high > 1.0 ? 1.0 : high};
}

ReachEstimate estimate_reach(const Dtmc& dtmc, const StateSet& goal, StateIndex start,
                             std::size_t samples, std::size_t max_steps, std::uint64_t seed) {
    if (samples == 0) {
        throw ModelError("at least one sample is required");
    }
    if (start >= dtmc.state_count()) {
        throw ModelError("start state " + std::to_string(start) + " out of range");
    }

    // Entering this set decides the replication: the goal is graph-unreachable
    // from here, so finishing the walk could never change the outcome.
    StateSet hopeless = unreachable_from(dtmc, goal);

    ReachEstimate est;
    est.samples = samples;
    est.seed = seed;
    for (std::size_t i = 0; i < samples; ++i) {
        SplitMix64 gen(derive_stream_seed(seed, i));
        StateIndex current = start;
        for (std::size_t steps = 0;; ++steps) {
            if (goal.contains(current)) {
                ++est.hits;
                break;
            }
            if (hopeless.contains(current)) {
                break;
            }
            if (steps == max_steps) {
                ++est.censored;
                break;
            }
            current = step_from(dtmc.rows[current], gen.next_unit());
        }
    }

    est.estimate = static_cast<double>(est.hits) / static_cast<double>(samples);
    auto [low, high] = wilson_interval(est.hits, est.samples);
    est.ci_low = low;
    est.ci_high = high;
    return est;
}

}  // namespace basketcheck
