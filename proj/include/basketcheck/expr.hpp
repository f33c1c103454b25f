#pragma once

#include "basketcheck/errors.hpp"
#include "basketcheck/lexer.hpp"
#include "basketcheck/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace basketcheck {

struct StateSpace;
struct Dtmc;

enum class UnaryOp { Negate, Not };
enum class BinaryOp { Add, Sub, Mul, Div, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Expression tree shared by guards, updates, probabilities, label
// definitions, and PCTL state formulas.
struct Expr {
    enum class Kind { Number, Bool, Name, LabelRef, Unary, Binary };

    Kind kind = Kind::Bool;
    SourcePos pos;

    Rational number;          // Kind::Number
    bool bool_value = false;  // Kind::Bool
    std::string name;         // Kind::Name / Kind::LabelRef
    int var_slot = -1;        // Name resolved to a state variable (bind)
    UnaryOp uop = UnaryOp::Not;
    BinaryOp bop = BinaryOp::Add;
    ExprPtr lhs;              // Unary operand lives here
    ExprPtr rhs;
};

ExprPtr make_number(Rational value, SourcePos pos = {});
ExprPtr make_bool(bool value, SourcePos pos = {});
ExprPtr make_name(std::string name, SourcePos pos = {});
ExprPtr make_label_ref(std::string name, SourcePos pos = {});
ExprPtr make_unary(UnaryOp op, ExprPtr operand, SourcePos pos = {});
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos = {});

// Evaluation result: exact number or boolean.
using Value = std::variant<Rational, bool>;

bool is_bool(const Value& v);
bool as_bool(const Value& v);            // throws EvalError on numbers
const Rational& as_number(const Value& v);

// Name-resolution environment for eval. Null members simply make that class
// of name unavailable; lookups fall through constants, then state variables.
struct EvalContext {
    const std::map<std::string, Value>* constants = nullptr;
    const StateSpace* space = nullptr;
    const std::vector<std::int64_t>* valuation = nullptr;  // by variable slot
    const Dtmc* model = nullptr;  // label sets, for LabelRef
    std::size_t state = 0;        // the state LabelRefs are tested against
};

Value eval(const ExprPtr& expr, const EvalContext& ctx);
bool eval_bool(const ExprPtr& expr, const EvalContext& ctx);
Rational eval_number(const ExprPtr& expr, const EvalContext& ctx);
// Requires an integral result; reports non-exact division and decimals.
std::int64_t eval_int(const ExprPtr& expr, const EvalContext& ctx);

// Structural equality, ignoring source positions.
bool equal(const ExprPtr& a, const ExprPtr& b);

// Canonical rendering: minimal parentheses, except comparisons are always
// parenthesized under !, & and | ("(s = 8) | (s = 9)").
std::string to_string(const ExprPtr& expr);

// Collects the names of state variables referenced by expr (names that do
// not resolve as constants). Used to reject state-dependent probabilities.
std::vector<std::string> variable_references(const ExprPtr& expr,
                                             const std::map<std::string, Value>& constants);

}  // namespace basketcheck
