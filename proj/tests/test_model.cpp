#include <doctest.h>

#include "basketcheck/model.hpp"
#include "basketcheck/pctl.hpp"
#include "basketcheck/simulator.hpp"

#include "test_helpers.hpp"

#include <algorithm>
#include <sstream>

using namespace basketcheck;
using testutil::shopping;

TEST_CASE("single-variable indexing maps value minus low") {
    StateSpace space({{"s", 0, 13, 0}});
    CHECK(space.size() == 14);
    CHECK(space.valuation_to_index({{"s", 0}}) == 0);
    CHECK(space.valuation_to_index({{"s", 13}}) == 13);
    CHECK(space.describe_state(4) == "s=4");
}

TEST_CASE("two-variable indexing is mixed-radix with the first variable slowest") {
    StateSpace space({{"a", 0, 1, 0}, {"b", 0, 2, 0}});
    CHECK(space.size() == 6);
    CHECK(space.valuation_to_index({{"a", 1}, {"b", 2}}) == 5);

    // enumerate the documented order: (0,0) (0,1) (0,2) (1,0) (1,1) (1,2)
    std::vector<std::pair<std::int64_t, std::int64_t>> expected = {
        {0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}};
    for (StateIndex i = 0; i < 6; ++i) {
        auto valuation = space.index_to_valuation(i);
        CHECK(valuation[0] == expected[i].first);
        CHECK(valuation[1] == expected[i].second);
    }
}

TEST_CASE("valuation errors: unknown variable and out-of-range value") {
    StateSpace space({{"s", 0, 13, 0}});
    CHECK_THROWS_AS((void)space.valuation_to_index({{"t", 1}}), ModelError);
    CHECK_THROWS_AS((void)space.valuation_to_index({{"s", 14}}), ModelError);
    CHECK_THROWS_AS((void)space.valuation_to_index({{"s", -1}}), ModelError);
}

TEST_CASE("index round-trips over randomized state spaces") {
    SplitMix64 gen(20240811);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<VariableDecl> vars;
        std::size_t nvars = 1 + gen.next() % 4;
        for (std::size_t v = 0; v < nvars; ++v) {
            std::int64_t low = static_cast<std::int64_t>(gen.next() % 6) - 2;
            std::int64_t range = 1 + static_cast<std::int64_t>(gen.next() % 5);
            vars.push_back({"v" + std::to_string(v), low, low + range - 1, low});
        }
        StateSpace space(vars);
        for (StateIndex i = 0; i < space.size(); ++i) {
            CHECK(space.index_of(space.index_to_valuation(i)) == i);
        }
    }
}

TEST_CASE("state space rejects bad declarations") {
    CHECK_THROWS_AS(StateSpace({{"s", 5, 4, 5}}), ModelError);  // empty range
    CHECK_THROWS_AS(StateSpace({{"s", 0, 4, 9}}), ModelError);  // init outside
}

TEST_CASE("satisfaction sets on the shopping chain") {
    const Dtmc& dtmc = shopping();
    CHECK(satisfaction_set(dtmc, parse_state_formula("s=12")) == testutil::states(dtmc, {12}));
    CHECK(satisfaction_set(dtmc, parse_state_formula("(s=8)|(s=9)")) ==
          testutil::states(dtmc, {8, 9}));
    CHECK(satisfaction_set(dtmc, parse_state_formula("true")).count() == 14);
    CHECK(satisfaction_set(dtmc, parse_state_formula("\"LoggedOut\"")) ==
          testutil::states(dtmc, {13}));
    CHECK_THROWS_AS(satisfaction_set(dtmc, parse_state_formula("t=1")), EvalError);
}

TEST_CASE("negation complements and conjunction intersects satisfaction sets") {
    const Dtmc& dtmc = shopping();
    SplitMix64 gen(7);
    auto random_formula = [&]() {
        std::int64_t c = static_cast<std::int64_t>(gen.next() % 16) - 1;
        return make_binary(
            static_cast<BinaryOp>(static_cast<int>(BinaryOp::Eq) + gen.next() % 6),
            make_name("s"), make_number(Rational(c)));
    };
    for (int trial = 0; trial < 50; ++trial) {
        ExprPtr phi = random_formula();
        ExprPtr psi = random_formula();
        StateSet sat_phi = satisfaction_set(dtmc, phi);
        StateSet sat_psi = satisfaction_set(dtmc, psi);
        CHECK(satisfaction_set(dtmc, make_unary(UnaryOp::Not, phi)) == sat_phi.complement());
        CHECK(satisfaction_set(dtmc, make_binary(BinaryOp::And, phi, psi)) ==
              (sat_phi & sat_psi));
        CHECK(satisfaction_set(dtmc, make_binary(BinaryOp::Or, phi, psi)) ==
              (sat_phi | sat_psi));
    }
}

TEST_CASE("validate accepts the shopping chain") {
    CHECK(validate(shopping()).empty());
}

TEST_CASE("validate reports bad row sums and out-of-range probabilities") {
    Dtmc dtmc;
    dtmc.space = StateSpace({{"s", 0, 1, 0}});
    dtmc.init_state = 0;
    dtmc.rows.resize(2);
    dtmc.rows[0] = {{0, 0.5, Rational(1, 2)}, {1, 0.4, Rational(2, 5)}};
    dtmc.rows[1] = {{1, 1.0, Rational(1)}};

    auto problems = validate(dtmc);
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].find("row sum 0.9") != std::string::npos);
    CHECK(problems[0].find("state 0") != std::string::npos);

    dtmc.rows[0] = {{1, 1.2, Rational(6, 5)}};
    problems = validate(dtmc);
    REQUIRE(!problems.empty());
    CHECK(problems[0].find("probability out of range") != std::string::npos);

    dtmc.rows[0] = {{0, 0.5, Rational(1, 2)}, {1, 0.5, Rational(1, 2)}};
    dtmc.rows[1].clear();
    problems = validate(dtmc);
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].find("deadlock") != std::string::npos);

    dtmc.rows[1] = {{1, 1.0, Rational(1)}};
    dtmc.init_state = 7;
    problems = validate(dtmc);
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].find("initial state") != std::string::npos);
}

TEST_CASE("row sums within 1e-9 pass, beyond fail") {
    Dtmc dtmc;
    dtmc.space = StateSpace({{"s", 0, 0, 0}});
    dtmc.init_state = 0;
    dtmc.rows = {{{0, 1.0 - 5e-10, Rational(1)}}};
    CHECK(validate(dtmc).empty());
    dtmc.rows = {{{0, 1.0 - 5e-9, Rational(1)}}};
    CHECK(!validate(dtmc).empty());
}

TEST_CASE("dot export of a one-state chain") {
    Dtmc dtmc;
    dtmc.space = StateSpace({{"s", 0, 0, 0}});
    dtmc.init_state = 0;
    dtmc.rows = {{{0, 1.0, Rational(1)}}};

    std::string dot = to_dot(dtmc);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("0 -> 0 [label=\"1\"]") != std::string::npos);
}

TEST_CASE("dot export of the shopping chain: 14 nodes, 23 edges") {
    std::string dot = to_dot(shopping());
    std::size_t edges = 0;
    std::size_t nodes = 0;
    std::istringstream lines(dot);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.find(" -> ") != std::string::npos) {
            ++edges;
        } else if (line.find("[label=\"s=") != std::string::npos) {
            ++nodes;
        }
    }
    CHECK(nodes == 14);
    CHECK(edges == 23);
    CHECK(dot.find("4 -> 7 [label=\"0.65\"]") != std::string::npos);
    CHECK(dot.find("4 -> 5 [label=\"0.35\"]") != std::string::npos);
}

TEST_CASE("transition count matches stored entries") {
    CHECK(shopping().state_count() == 14);
    CHECK(shopping().transition_count() == 23);
}
