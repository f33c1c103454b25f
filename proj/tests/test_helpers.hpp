#pragma once

// Shared fixtures and test-side oracles. The oracles here are deliberately
// independent of the engine's solve path: a dense fixpoint iteration for
// unbounded reachability, explicit path enumeration for bounded reachability,
// and a dense vector push for distributions.

#include "basketcheck/engine.hpp"
#include "basketcheck/model.hpp"
#include "basketcheck/prism.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace testutil {

using namespace basketcheck;

inline std::string fixture_path(const std::string& name) {
    return std::string(BASKETCHECK_FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(static_cast<bool>(in), "cannot read " << path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline const Dtmc& shopping() {
    static const Dtmc dtmc = build_dtmc(parse_model(read_file(fixture_path("shopping_basket.pm"))));
    return dtmc;
}

inline StateSet states(const Dtmc& dtmc, std::initializer_list<StateIndex> list) {
    StateSet set(dtmc.state_count());
    for (StateIndex s : list) set.insert(s);
    return set;
}

// Hand-solved reachability values for the shopping chain, one table per goal
// set exercised by the bundled properties. Each was derived by eliminating
// the small linear system over the non-trivial states on paper; the dense
// fixpoint oracle below re-derives them numerically in every run.
struct ReachTable {
    std::vector<StateIndex> goal;
    std::vector<Rational> values;  // one per state 0..13
};

inline Rational r(long num, long den) { return Rational(num, den); }

inline const std::vector<ReachTable>& reach_tables() {
    static const std::vector<ReachTable> tables = {
        // goal {12}: checkout subgraph commits to 12; CancelOrder and
        // LoggedOut never reach it.
        {{12},
         {r(10, 23), r(10, 23), r(10, 23), r(33, 46), r(7, 46), r(10, 23), r(1, 1), r(0, 1),
          r(1, 1), r(1, 1), r(1, 1), r(1, 1), r(1, 1), r(0, 1)}},
        // goal {9}
        {{9},
         {r(8, 23), r(8, 23), r(8, 23), r(66, 115), r(14, 115), r(8, 23), r(4, 5), r(0, 1),
          r(3, 5), r(1, 1), r(2, 5), r(0, 1), r(0, 1), r(0, 1)}},
        // goal {7}
        {{7},
         {r(13, 23), r(13, 23), r(13, 23), r(13, 46), r(39, 46), r(13, 23), r(0, 1), r(1, 1),
          r(0, 1), r(0, 1), r(0, 1), r(0, 1), r(0, 1), r(0, 1)}},
        // goal {6}
        {{6},
         {r(10, 23), r(10, 23), r(10, 23), r(33, 46), r(7, 46), r(10, 23), r(1, 1), r(0, 1),
          r(2, 3), r(2, 3), r(1, 3), r(0, 1), r(0, 1), r(0, 1)}},
        // goal {13}: absorbed almost surely from everywhere
        {{13},
         {r(1, 1), r(1, 1), r(1, 1), r(1, 1), r(1, 1), r(1, 1), r(1, 1), r(1, 1), r(1, 1),
          r(1, 1), r(1, 1), r(1, 1), r(1, 1), r(1, 1)}},
        // goal {8, 9}
        {{8, 9},
         {r(10, 23), r(10, 23), r(10, 23), r(33, 46), r(7, 46), r(10, 23), r(1, 1), r(0, 1),
          r(1, 1), r(1, 1), r(1, 2), r(0, 1), r(0, 1), r(0, 1)}},
        // goal {4}
        {{4},
         {r(2, 3), r(2, 3), r(2, 3), r(1, 3), r(1, 1), r(2, 3), r(0, 1), r(0, 1), r(0, 1),
          r(0, 1), r(0, 1), r(0, 1), r(0, 1), r(0, 1)}},
    };
    return tables;
}

// Independent oracle: long-run dense fixpoint y <- 1_G + P|nonG * y from 0.
// Converges geometrically; 200k sweeps leave residuals far below 1e-10 on a
// 14-state chain.
inline std::vector<double> oracle_reach(const Dtmc& dtmc, const StateSet& goal,
                                        std::size_t sweeps = 200000) {
    const std::size_t n = dtmc.state_count();
    std::vector<double> y(n, 0.0);
    for (StateIndex s : goal.indices()) y[s] = 1.0;
    std::vector<double> next(n, 0.0);
    for (std::size_t it = 0; it < sweeps; ++it) {
        for (StateIndex s = 0; s < n; ++s) {
            if (goal.contains(s)) {
                next[s] = 1.0;
                continue;
            }
            double v = 0.0;
            for (const Transition& t : dtmc.rows[s]) v += t.prob * y[t.target];
            next[s] = v;
        }
        y.swap(next);
    }
    return y;
}

// Independent oracle for bounded reachability: sum the probability of every
// path that first hits the goal within k steps (explicit enumeration, fine
// for small k).
inline double oracle_bounded_reach(const Dtmc& dtmc, const StateSet& goal, StateIndex start,
                                   std::size_t k) {
    if (goal.contains(start)) return 1.0;
    if (k == 0) return 0.0;
    double total = 0.0;
    for (const Transition& t : dtmc.rows[start]) {
        total += t.prob * oracle_bounded_reach(dtmc, goal, t.target, k - 1);
    }
    return total;
}

// Pushes a distribution `steps` transitions forward (dense, test-side).
inline std::vector<double> oracle_push(const Dtmc& dtmc, std::vector<double> pi,
                                       std::size_t steps) {
    std::vector<double> next(pi.size(), 0.0);
    for (std::size_t step = 0; step < steps; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (StateIndex s = 0; s < pi.size(); ++s) {
            if (pi[s] == 0.0) continue;
            for (const Transition& t : dtmc.rows[s]) next[t.target] += pi[s] * t.prob;
        }
        pi.swap(next);
    }
    return pi;
}

}  // namespace testutil
