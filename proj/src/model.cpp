#include "basketcheck/model.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace basketcheck {

StateSet::StateSet(std::size_t universe, std::initializer_list<StateIndex> states)
    : bits_(universe, false) {
    for (StateIndex s : states) insert(s);
}

std::size_t StateSet::count() const {
    std::size_t n = 0;
    for (bool b : bits_) n += b;
    return n;
}

std::vector<StateIndex> StateSet::indices() const {
    std::vector<StateIndex> out;
    for (StateIndex s = 0; s < bits_.size(); ++s) {
        if (bits_[s]) out.push_back(s);
    }
    return out;
}

StateSet StateSet::complement() const {
    StateSet out(bits_.size());
    for (StateIndex s = 0; s < bits_.size(); ++s) {
        if (!bits_[s]) out.insert(s);
    }
    return out;
}

StateSet operator&(const StateSet& a, const StateSet& b) {
    StateSet out(a.universe());
    for (StateIndex s = 0; s < a.universe(); ++s) {
        if (a.contains(s) && b.contains(s)) out.insert(s);
    }
    return out;
}

StateSet operator|(const StateSet& a, const StateSet& b) {
    StateSet out(a.universe());
    for (StateIndex s = 0; s < a.universe(); ++s) {
        if (a.contains(s) || b.contains(s)) out.insert(s);
    }
    return out;
}

StateSpace::StateSpace(std::vector<VariableDecl> vars) : vars_(std::move(vars)) {
    constexpr std::size_t kMaxStates = std::size_t(1) << 31;
    for (const auto& v : vars_) {
        if (v.high < v.low) {
            throw ModelError("variable '" + v.name + "' has an empty range");
        }
        if (v.init < v.low || v.init > v.high) {
            throw ModelError("initial value of '" + v.name + "' is outside its range");
        }
        std::size_t range = static_cast<std::size_t>(v.range());
        if (size_ > kMaxStates / range) {
            throw ModelError("state space too large to enumerate");
        }
        size_ *= range;
    }
    // First declared variable varies slowest.
    stride_.assign(vars_.size(), 1);
    for (std::size_t i = vars_.size(); i-- > 1;) {
        stride_[i - 1] = stride_[i] * static_cast<std::size_t>(vars_[i].range());
    }
}

std::optional<int> StateSpace::slot_of(std::string_view name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i].name == name) return static_cast<int>(i);
    }
    return std::nullopt;
}

StateIndex StateSpace::valuation_to_index(
    const std::map<std::string, std::int64_t>& valuation) const {
    for (const auto& [name, _] : valuation) {
        if (!slot_of(name)) {
            throw ModelError("unknown variable '" + name + "' in valuation");
        }
    }
    std::vector<std::int64_t> by_slot(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = valuation.find(vars_[i].name);
        if (it == valuation.end()) {
            throw ModelError("valuation is missing variable '" + vars_[i].name + "'");
        }
        by_slot[i] = it->second;
    }
    return index_of(by_slot);
}

StateIndex StateSpace::index_of(const std::vector<std::int64_t>& values_by_slot) const {
    StateIndex index = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        const VariableDecl& v = vars_[i];
        std::int64_t value = values_by_slot[i];
        if (value < v.low || value > v.high) {
            throw ModelError("value " + std::to_string(value) + " of variable '" + v.name +
                             "' is outside [" + std::to_string(v.low) + ".." +
                             std::to_string(v.high) + "]");
        }
        index += static_cast<std::size_t>(value - v.low) * stride_[i];
    }
    return index;
}

std::vector<std::int64_t> StateSpace::index_to_valuation(StateIndex index) const {
    if (index >= size_) {
        throw ModelError("state index " + std::to_string(index) + " out of range");
    }
    std::vector<std::int64_t> values(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        values[i] = vars_[i].low + static_cast<std::int64_t>(index / stride_[i]);
        index %= stride_[i];
    }
    return values;
}

std::string StateSpace::describe_state(StateIndex index) const {
    std::vector<std::int64_t> values = index_to_valuation(index);
    std::string out;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (i) out += ",";
        out += vars_[i].name + "=" + std::to_string(values[i]);
    }
    return out;
}

std::size_t Dtmc::transition_count() const {
    std::size_t n = 0;
    for (const auto& row : rows) n += row.size();
    return n;
}

std::vector<std::string> validate(const Dtmc& dtmc) {
    std::vector<std::string> problems;
    if (dtmc.rows.size() != dtmc.space.size()) {
        problems.push_back("row count " + std::to_string(dtmc.rows.size()) +
                           " does not match state space size " +
                           std::to_string(dtmc.space.size()));
    }
    if (dtmc.init_state >= dtmc.rows.size()) {
        problems.push_back("initial state " + std::to_string(dtmc.init_state) +
                           " is not a valid index");
    }
    for (StateIndex s = 0; s < dtmc.rows.size(); ++s) {
        const auto& row = dtmc.rows[s];
        if (row.empty()) {
            problems.push_back("state " + std::to_string(s) +
                               " has no outgoing transitions (deadlock)");
            continue;
        }
        double sum = 0.0;
        for (const Transition& t : row) {
            if (!(t.prob > 0.0) || t.prob > 1.0) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.17g", t.prob);
                problems.push_back("probability out of range: " + std::string(buf) +
                                   " on transition " + std::to_string(s) + " -> " +
                                   std::to_string(t.target));
            }
            if (t.target >= dtmc.rows.size()) {
                problems.push_back("transition " + std::to_string(s) + " -> " +
                                   std::to_string(t.target) + " leaves the state space");
            }
            sum += t.prob;
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", sum);
            problems.push_back("row sum " + std::string(buf) + " at state " + std::to_string(s) +
                               (s < dtmc.space.size()
                                    ? " (" + dtmc.space.describe_state(s) + ")"
                                    : ""));
        }
    }
    return problems;
}

StateSet satisfaction_set(const Dtmc& dtmc, const ExprPtr& predicate) {
    StateSet out(dtmc.state_count());
    EvalContext ctx;
    ctx.model = &dtmc;
    ctx.space = &dtmc.space;
    for (StateIndex s = 0; s < dtmc.state_count(); ++s) {
        std::vector<std::int64_t> valuation = dtmc.space.index_to_valuation(s);
        ctx.valuation = &valuation;
        ctx.state = s;
        if (eval_bool(predicate, ctx)) out.insert(s);
    }
    return out;
}

std::string to_dot(const Dtmc& dtmc) {
    std::ostringstream out;
    out << "digraph dtmc {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=circle];\n";
    for (StateIndex s = 0; s < dtmc.state_count(); ++s) {
        out << "  " << s << " [label=\"" << dtmc.space.describe_state(s) << "\"";
        if (s == dtmc.init_state) out << " shape=doublecircle";
        out << "];\n";
    }
    for (StateIndex s = 0; s < dtmc.state_count(); ++s) {
        for (const Transition& t : dtmc.rows[s]) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6g", t.prob);
            out << "  " << s << " -> " << t.target << " [label=\"" << buf << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace basketcheck
