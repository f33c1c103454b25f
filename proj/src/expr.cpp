#include "basketcheck/expr.hpp"

#include "basketcheck/model.hpp"

#include <sstream>

namespace basketcheck {

namespace {

std::shared_ptr<Expr> blank(Expr::Kind kind, SourcePos pos) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->pos = pos;
    return e;
}

}  // namespace

ExprPtr make_number(Rational value, SourcePos pos) {
    auto e = blank(Expr::Kind::Number, pos);
    e->number = std::move(value);
    return e;
}

ExprPtr make_bool(bool value, SourcePos pos) {
    auto e = blank(Expr::Kind::Bool, pos);
    e->bool_value = value;
    return e;
}

ExprPtr make_name(std::string name, SourcePos pos) {
    auto e = blank(Expr::Kind::Name, pos);
    e->name = std::move(name);
    return e;
}

ExprPtr make_label_ref(std::string name, SourcePos pos) {
    auto e = blank(Expr::Kind::LabelRef, pos);
    e->name = std::move(name);
    return e;
}

ExprPtr make_unary(UnaryOp op, ExprPtr operand, SourcePos pos) {
    auto e = blank(Expr::Kind::Unary, pos);
    e->uop = op;
    e->lhs = std::move(operand);
    return e;
}

ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
    auto e = blank(Expr::Kind::Binary, pos);
    e->bop = op;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
}

bool is_bool(const Value& v) {
    return std::holds_alternative<bool>(v);
}

bool as_bool(const Value& v) {
    if (!is_bool(v)) {
        throw EvalError("type mismatch: expected a boolean, got a number");
    }
    return std::get<bool>(v);
}

const Rational& as_number(const Value& v) {
    if (is_bool(v)) {
        throw EvalError("type mismatch: expected a number, got a boolean");
    }
    return std::get<Rational>(v);
}

namespace {

Value eval_name(const Expr& e, const EvalContext& ctx) {
    if (ctx.constants) {
        auto it = ctx.constants->find(e.name);
        if (it != ctx.constants->end()) {
            return it->second;
        }
    }
    const StateSpace* space = ctx.space;
    if (!space && ctx.model) space = &ctx.model->space;
    if (space && ctx.valuation) {
        int slot = e.var_slot;
        if (slot < 0) {
            if (auto found = space->slot_of(e.name)) slot = *found;
        }
        if (slot >= 0 && static_cast<std::size_t>(slot) < ctx.valuation->size()) {
            return Value(Rational((*ctx.valuation)[slot]));
        }
    }
    throw EvalError("unbound identifier '" + e.name + "'", e.pos);
}

Value eval_label(const Expr& e, const EvalContext& ctx) {
    if (!ctx.model) {
        throw EvalError("label \"" + e.name + "\" cannot be used here", e.pos);
    }
    auto it = ctx.model->labels.find(e.name);
    if (it == ctx.model->labels.end()) {
        throw EvalError("unbound label \"" + e.name + "\"", e.pos);
    }
    return Value(it->second.contains(ctx.state));
}

}  // namespace

Value eval(const ExprPtr& expr, const EvalContext& ctx) {
    const Expr& e = *expr;
    switch (e.kind) {
        case Expr::Kind::Number:
            return Value(e.number);
        case Expr::Kind::Bool:
            return Value(e.bool_value);
        case Expr::Kind::Name:
            return eval_name(e, ctx);
        case Expr::Kind::LabelRef:
            return eval_label(e, ctx);
        case Expr::Kind::Unary: {
            Value v = eval(e.lhs, ctx);
            if (e.uop == UnaryOp::Not) {
                if (!is_bool(v)) throw EvalError("type mismatch: '!' needs a boolean", e.pos);
                return Value(!std::get<bool>(v));
            }
            if (is_bool(v)) throw EvalError("type mismatch: '-' needs a number", e.pos);
            return Value(Rational(-std::get<Rational>(v)));
        }
        case Expr::Kind::Binary:
            break;
    }

    // And/Or evaluate both sides: type errors should not depend on which
    // state happens to be probed first.
    if (e.bop == BinaryOp::And || e.bop == BinaryOp::Or) {
        Value lv = eval(e.lhs, ctx);
        Value rv = eval(e.rhs, ctx);
        if (!is_bool(lv) || !is_bool(rv)) {
            throw EvalError("type mismatch: '&' and '|' need boolean operands", e.pos);
        }
        bool lhs = std::get<bool>(lv);
        bool rhs = std::get<bool>(rv);
        return Value(e.bop == BinaryOp::And ? (lhs && rhs) : (lhs || rhs));
    }

    Value lv = eval(e.lhs, ctx);
    Value rv = eval(e.rhs, ctx);
    auto number = [&](const Value& v) -> const Rational& {
        if (is_bool(v)) {
            throw EvalError("type mismatch: expected a number, got a boolean", e.pos);
        }
        return std::get<Rational>(v);
    };

    switch (e.bop) {
        case BinaryOp::Add: return Value(Rational(number(lv) + number(rv)));
        case BinaryOp::Sub: return Value(Rational(number(lv) - number(rv)));
        case BinaryOp::Mul: return Value(Rational(number(lv) * number(rv)));
        case BinaryOp::Div: {
            const Rational& d = number(rv);
            if (d == 0) throw EvalError("division by zero", e.pos);
            return Value(Rational(number(lv) / d));
        }
        case BinaryOp::Eq: return Value(number(lv) == number(rv));
        case BinaryOp::Ne: return Value(number(lv) != number(rv));
        case BinaryOp::Lt: return Value(number(lv) < number(rv));
        case BinaryOp::Le: return Value(number(lv) <= number(rv));
        case BinaryOp::Gt: return Value(number(lv) > number(rv));
        case BinaryOp::Ge: return Value(number(lv) >= number(rv));
        case BinaryOp::And:
        case BinaryOp::Or:
            break;
    }
    throw EvalError("unreachable operator", e.pos);
}

bool eval_bool(const ExprPtr& expr, const EvalContext& ctx) {
    Value v = eval(expr, ctx);
    if (!is_bool(v)) {
        throw EvalError("type mismatch: expected a boolean expression", expr->pos);
    }
    return std::get<bool>(v);
}

Rational eval_number(const ExprPtr& expr, const EvalContext& ctx) {
    Value v = eval(expr, ctx);
    if (is_bool(v)) {
        throw EvalError("type mismatch: expected a numeric expression", expr->pos);
    }
    return std::get<Rational>(v);
}

std::int64_t eval_int(const ExprPtr& expr, const EvalContext& ctx) {
    Rational v = eval_number(expr, ctx);
    if (denominator(v) != 1) {
        throw EvalError("expected an integer value, got " + rational_to_string(v) +
                            " (integer division must be exact)",
                        expr->pos);
    }
    return numerator(v).convert_to<std::int64_t>();
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Expr::Kind::Number: return a->number == b->number;
        case Expr::Kind::Bool: return a->bool_value == b->bool_value;
        case Expr::Kind::Name: return a->name == b->name;
        case Expr::Kind::LabelRef: return a->name == b->name;
        case Expr::Kind::Unary: return a->uop == b->uop && equal(a->lhs, b->lhs);
        case Expr::Kind::Binary:
            return a->bop == b->bop && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
    return false;
}

namespace {

// Higher binds tighter. Mirrors the parser's precedence ladder.
int precedence(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Binary:
            switch (e.bop) {
                case BinaryOp::Or: return 1;
                case BinaryOp::And: return 2;
                case BinaryOp::Eq:
                case BinaryOp::Ne:
                case BinaryOp::Lt:
                case BinaryOp::Le:
                case BinaryOp::Gt:
                case BinaryOp::Ge: return 4;
                case BinaryOp::Add:
                case BinaryOp::Sub: return 5;
                case BinaryOp::Mul:
                case BinaryOp::Div: return 6;
            }
            return 8;
        case Expr::Kind::Unary:
            return e.uop == UnaryOp::Not ? 3 : 7;
        default:
            return 8;
    }
}

bool is_comparison(const Expr& e) {
    if (e.kind != Expr::Kind::Binary) return false;
    switch (e.bop) {
        case BinaryOp::Eq:
        case BinaryOp::Ne:
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge: return true;
        default: return false;
    }
}

const char* binary_symbol(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Div: return "/";
        case BinaryOp::Eq: return "=";
        case BinaryOp::Ne: return "!=";
        case BinaryOp::Lt: return "<";
        case BinaryOp::Le: return "<=";
        case BinaryOp::Gt: return ">";
        case BinaryOp::Ge: return ">=";
        case BinaryOp::And: return "&";
        case BinaryOp::Or: return "|";
    }
    return "?";
}

void print(const Expr& e, std::ostream& out);

void print_child(const ExprPtr& child, int parent_prec, bool comparison_parens,
                 std::ostream& out) {
    const Expr& c = *child;
    bool parens = (comparison_parens && is_comparison(c)) || precedence(c) < parent_prec;
    if (parens) out << "(";
    print(c, out);
    if (parens) out << ")";
}

void print(const Expr& e, std::ostream& out) {
    switch (e.kind) {
        case Expr::Kind::Number:
            out << rational_to_string(e.number);
            return;
        case Expr::Kind::Bool:
            out << (e.bool_value ? "true" : "false");
            return;
        case Expr::Kind::Name:
            out << e.name;
            return;
        case Expr::Kind::LabelRef:
            out << '"' << e.name << '"';
            return;
        case Expr::Kind::Unary:
            if (e.uop == UnaryOp::Not) {
                out << "!";
                print_child(e.lhs, 4, true, out);
            } else {
                out << "-";
                print_child(e.lhs, 8, false, out);
            }
            return;
        case Expr::Kind::Binary: {
            int prec = precedence(e);
            bool logical = e.bop == BinaryOp::And || e.bop == BinaryOp::Or;
            // Left-associative chains keep the left child at the same level.
            print_child(e.lhs, prec, logical, out);
            out << " " << binary_symbol(e.bop) << " ";
            print_child(e.rhs, prec + 1, logical, out);
            return;
        }
    }
}

}  // namespace

std::string to_string(const ExprPtr& expr) {
    std::ostringstream out;
    print(*expr, out);
    return out.str();
}

namespace {

void collect_variables(const ExprPtr& expr, const std::map<std::string, Value>& constants,
                       std::vector<std::string>& out) {
    if (!expr) return;
    const Expr& e = *expr;
    if (e.kind == Expr::Kind::Name && constants.find(e.name) == constants.end()) {
        out.push_back(e.name);
    }
    collect_variables(e.lhs, constants, out);
    collect_variables(e.rhs, constants, out);
}

}  // namespace

std::vector<std::string> variable_references(const ExprPtr& expr,
                                             const std::map<std::string, Value>& constants) {
    std::vector<std::string> out;
    collect_variables(expr, constants, out);
    return out;
}

}  // namespace basketcheck
