#pragma once

#include "basketcheck/model.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace basketcheck {

// splitmix64: counter-based generator. The whole stream is a function of the
// 64-bit seed, so runs are reproducible bit-for-bit and replication streams
// can be derived independently of scheduling.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    double next_unit();  // uniform in [0, 1), 53 random bits

private:
    std::uint64_t state_;
};

// Stream for replication i of a run seeded with `seed`. Serial and parallel
// execution agree because the stream depends only on (seed, i).
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t replication);

struct Path {
    enum class Termination { GoalHit, StepLimit };

    std::vector<StateIndex> states;  // starts at the requested start state
    Termination terminated_by = Termination::StepLimit;
};

// Samples one trajectory: each step is drawn from the current state's row.
// Stops on entering `stop` (including at the start state) or after max_steps
// transitions. Reproducible given the seed.
Path sample_path(const Dtmc& dtmc, StateIndex start, std::uint64_t seed,
                 std::size_t max_steps, const StateSet& stop);

struct ReachEstimate {
    std::size_t hits = 0;
    std::size_t samples = 0;
    std::size_t censored = 0;  // paths cut off by max_steps, counted as non-hits
    double estimate = 0.0;     // hits / samples
    double ci_low = 0.0;       // Wilson 95% interval
    double ci_high = 0.0;
    std::uint64_t seed = 0;
};

// Monte Carlo estimate of P(F goal) from `start`: `samples` independent
// replications, each on its own derived stream. Paths entering a state from
// which the goal is graph-unreachable are finished early as definite
// non-hits (that is exact, not censoring); only step-limit cutoffs count as
// censored.
ReachEstimate estimate_reach(const Dtmc& dtmc, const StateSet& goal, StateIndex start,
                             std::size_t samples, std::size_t max_steps, std::uint64_t seed);

// Wilson score interval for hits/samples, clamped to [0, 1].
std::pair<double, double> wilson_interval(std::size_t hits, std::size_t samples,
                                          double z = 1.959963984540054);

}  // namespace basketcheck
