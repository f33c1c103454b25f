#pragma once

#include "basketcheck/expr.hpp"
#include "basketcheck/model.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace basketcheck {

enum class BoundOp { Less, LessEq, Greater, GreaterEq };

const char* bound_op_symbol(BoundOp op);

struct PathFormula {
    enum class Kind { Eventually, BoundedEventually };

    Kind kind = Kind::Eventually;
    ExprPtr target;
    std::int64_t bound = 0;  // step bound k >= 1, bounded form only
};

// One reachability property:
//   P <op> <threshold> [F target {filter}]   (bound)
//   P = ? [F target {filter}]                (query; "P ?" accepted too)
struct Property {
    bool is_query = false;
    BoundOp op = BoundOp::Less;  // bound properties only
    Rational threshold;          // in [0, 1]
    PathFormula path;
    ExprPtr filter;              // null when absent
};

Property parse_property(std::string_view text);  // throws ParseError

// Standalone boolean state formula ("s = 6", "(s = 8) | (s = 9)").
ExprPtr parse_state_formula(std::string_view text);

// Expression-level binding, shared with bind() below.
ExprPtr bind_formula(const ExprPtr& formula, const StateSpace& space,
                     const std::set<std::string>& label_names = {});

// One property per non-empty, non-comment line, in file order. Parse errors
// are collected per line rather than aborting at the first one.
struct PropertiesFile {
    std::vector<Property> properties;
    std::vector<std::string> errors;  // "line N: message"

    bool ok() const { return errors.empty(); }
};

PropertiesFile parse_properties_file(std::string_view text);

// Resolves every identifier in the property against the state space (and the
// model's label names, for quoted references). Unresolved names are rejected
// here, not at evaluation time. Throws BindError.
Property bind(const Property& property, const StateSpace& space,
              const std::set<std::string>& label_names = {});

std::string to_string(const Property& property);
bool equal(const Property& a, const Property& b);

}  // namespace basketcheck
