#pragma once

#include "basketcheck/errors.hpp"
#include "basketcheck/expr.hpp"
#include "basketcheck/rational.hpp"

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace basketcheck {

using StateIndex = std::size_t;

// Per-state probabilities (reachability values, transient distributions).
// Entries stay in [0, 1]; iterative engines clamp tiny negative noise away
// before returning.
using ProbVector = std::vector<double>;

inline constexpr double kRowSumTolerance = 1e-9;

struct VariableDecl {
    std::string name;
    std::int64_t low = 0;
    std::int64_t high = 0;
    std::int64_t init = 0;

    std::int64_t range() const { return high - low + 1; }
};

// Subset of states out of a fixed universe [0, size).
class StateSet {
public:
    StateSet() = default;
    explicit StateSet(std::size_t universe) : bits_(universe, false) {}
    StateSet(std::size_t universe, std::initializer_list<StateIndex> states);

    std::size_t universe() const { return bits_.size(); }
    bool contains(StateIndex s) const { return s < bits_.size() && bits_[s]; }
    void insert(StateIndex s) { bits_.at(s) = true; }
    void erase(StateIndex s) { bits_.at(s) = false; }
    std::size_t count() const;
    bool empty() const { return count() == 0; }
    std::vector<StateIndex> indices() const;

    StateSet complement() const;
    friend StateSet operator&(const StateSet& a, const StateSet& b);
    friend StateSet operator|(const StateSet& a, const StateSet& b);
    bool operator==(const StateSet&) const = default;

private:
    std::vector<bool> bits_;
};

// Explicit product state space over integer-ranged variables.
//
// State indexing is mixed-radix with the first declared variable varying
// slowest: index = sum_i (value_i - low_i) * prod_{j>i} range_j. The mapping
// between indices and valuations is a bijection onto [0, size).
class StateSpace {
public:
    StateSpace() = default;
    explicit StateSpace(std::vector<VariableDecl> vars);  // throws ModelError

    std::size_t size() const { return size_; }
    const std::vector<VariableDecl>& variables() const { return vars_; }
    std::optional<int> slot_of(std::string_view name) const;

    StateIndex valuation_to_index(const std::map<std::string, std::int64_t>& valuation) const;
    StateIndex index_of(const std::vector<std::int64_t>& values_by_slot) const;
    std::vector<std::int64_t> index_to_valuation(StateIndex index) const;

    // "s=4" or "a=1,b=2", in declaration order.
    std::string describe_state(StateIndex index) const;

private:
    std::vector<VariableDecl> vars_;
    std::vector<std::size_t> stride_;
    std::size_t size_ = 1;
};

struct Transition {
    StateIndex target = 0;
    double prob = 0.0;   // to_double(exact), rounded once at build time
    Rational exact;
};

// Immutable after construction; all operations on it are pure, so a Dtmc can
// be shared freely across threads.
struct Dtmc {
    StateSpace space;
    StateIndex init_state = 0;
    std::vector<std::vector<Transition>> rows;
    std::map<std::string, StateSet> labels;

    std::size_t state_count() const { return rows.size(); }
    std::size_t transition_count() const;
};

// Empty result means every invariant holds: rows sum to 1 within
// kRowSumTolerance, entries lie in (0, 1], no state is deadlocked, and the
// initial state is a valid index.
std::vector<std::string> validate(const Dtmc& dtmc);

// States whose valuation satisfies the boolean predicate. Throws EvalError
// for unbound identifiers or non-boolean predicates.
StateSet satisfaction_set(const Dtmc& dtmc, const ExprPtr& predicate);

// DOT digraph: one node per state labeled with its valuation, one edge per
// stored transition labeled with its probability (up to 6 significant
// digits).
std::string to_dot(const Dtmc& dtmc);

}  // namespace basketcheck
