#pragma once

#include "basketcheck/model.hpp"
#include "basketcheck/pctl.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace basketcheck {

enum class SolveMethod { Exact, Power, Jacobi, GaussSeidel };
enum class ConvergenceNorm { Absolute, Relative };

const char* solve_method_name(SolveMethod method);
std::optional<SolveMethod> solve_method_from_name(std::string_view name);

struct SolveOptions {
    SolveMethod method = SolveMethod::Power;
    double epsilon = 1e-6;
    std::size_t max_iterations = 1'000'000;
    ConvergenceNorm convergence = ConvergenceNorm::Absolute;
};

// Graph-only precomputation: prob0 / prob1 / the rest. The three sets
// partition the state space.
struct QualitativeSets {
    StateSet prob0;
    StateSet prob1;
    StateSet unknown;
};

// States that reach the goal with probability exactly 0 (backward
// reachability, no numerics).
StateSet prob0(const Dtmc& dtmc, const StateSet& goal);

// States that reach the goal with probability exactly 1: states that cannot
// reach prob0 once the goal is made absorbing.
StateSet prob1(const Dtmc& dtmc, const StateSet& goal);

QualitativeSets qualitative_sets(const Dtmc& dtmc, const StateSet& goal);

struct ReachResult {
    ProbVector values;
    std::vector<Rational> exact;  // filled iff method == Exact
    SolveMethod method = SolveMethod::Power;
    std::size_t iterations = 0;
    double residual = 0.0;
};

// Unbounded reachability probabilities, one value per state: exactly 0 on
// prob0, exactly 1 on prob1, and on the remaining states the solution of
// x = P·x + b restricted to those states (b carries the one-step mass into
// prob1). Exact method: rational Gaussian elimination. Iterative methods
// stop when the max-norm of the successive-iterate difference meets
// options.epsilon; throws SolveError past max_iterations.
ReachResult reach_probabilities(const Dtmc& dtmc, const StateSet& goal,
                                const SolveOptions& options = {});

// Probability of reaching the goal within k steps, with goal states made
// absorbing first so re-entering paths are not double-counted. k = 0 gives
// the goal indicator.
ProbVector bounded_reach_probabilities(const Dtmc& dtmc, const StateSet& goal, std::size_t k);
std::vector<Rational> bounded_reach_exact(const Dtmc& dtmc, const StateSet& goal, std::size_t k);

// Distribution over states after exactly n steps from the initial state,
// by repeated sparse vector-matrix products (dense P^n is never formed).
ProbVector transient_distribution(const Dtmc& dtmc, std::size_t n);

// Bounded reachability at `from` as a function of the step bound,
// k = 0..k_max.
std::vector<std::pair<std::size_t, double>> curve(const Dtmc& dtmc, const StateSet& goal,
                                                  StateIndex from, std::size_t k_max);

// Full verification outcome for one property, mirroring the two-line report:
// bound properties carry the satisfying-state set and a verdict at the
// evaluation state(s); queries carry numeric value(s).
struct VerificationResult {
    Property property;
    bool is_query = false;

    std::vector<StateIndex> eval_states;  // initial state, or the filter states
    std::string context;                  // report phrase, e.g. "value in the initial state"

    // Bound properties.
    std::optional<bool> verdict;
    StateSet satisfying;

    // Queries. `value` is set when a single evaluation state applies;
    // several filter states yield per-state values plus min/max instead.
    std::optional<double> value;
    std::optional<Rational> value_exact;  // exact engine only
    std::vector<std::pair<StateIndex, double>> filter_values;
    double value_min = 0.0;
    double value_max = 0.0;

    // Per-state path-formula probabilities behind the result.
    ProbVector state_values;
    std::vector<Rational> state_values_exact;  // exact engine only

    SolveMethod method = SolveMethod::Power;
    std::size_t iterations = 0;
    double residual = 0.0;
};

// Evaluates a bound property or =? query. The property must bind against the
// model (see pctl bind). Filter semantics: bound verdicts are the
// conjunction over all filter states; query values are reported at the
// unique filter state, or as min/max plus per-state values when the filter
// matches several. Throws ModelError when a filter matches no state.
VerificationResult check_property(const Dtmc& dtmc, const Property& property,
                                  const SolveOptions& options = {});

}  // namespace basketcheck
