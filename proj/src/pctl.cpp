#include "basketcheck/pctl.hpp"

#include "token_cursor.hpp"

#include <sstream>

namespace basketcheck {

const char* bound_op_symbol(BoundOp op) {
    switch (op) {
        case BoundOp::Less: return "<";
        case BoundOp::LessEq: return "<=";
        case BoundOp::Greater: return ">";
        case BoundOp::GreaterEq: return ">=";
    }
    return "?";
}

namespace {

using detail::TokenCursor;
using detail::parse_expression;

Property parse_property_tokens(TokenCursor& cur) {
    const Token& head = cur.expect(TokenKind::Ident, "('P') at the start of the property");
    if (head.text != "P") {
        throw ParseError("properties start with 'P', found '" + head.text + "'", head.pos);
    }

    Property prop;
    switch (cur.peek().kind) {
        case TokenKind::Eq:
            cur.advance();
            cur.expect(TokenKind::Question, "after 'P =' (use 'P = ?' for queries)");
            prop.is_query = true;
            break;
        case TokenKind::Question:  // tolerated shorthand for 'P = ?'
            cur.advance();
            prop.is_query = true;
            break;
        case TokenKind::Lt:
        case TokenKind::Le:
        case TokenKind::Gt:
        case TokenKind::Ge: {
            const Token& op = cur.advance();
            switch (op.kind) {
                case TokenKind::Lt: prop.op = BoundOp::Less; break;
                case TokenKind::Le: prop.op = BoundOp::LessEq; break;
                case TokenKind::Gt: prop.op = BoundOp::Greater; break;
                default: prop.op = BoundOp::GreaterEq; break;
            }
            const Token& threshold = cur.expect(TokenKind::Number, "as probability bound");
            if (threshold.number < 0 || threshold.number > 1) {
                throw ParseError("probability bound " + rational_to_string(threshold.number) +
                                     " is outside [0,1]",
                                 threshold.pos);
            }
            prop.threshold = threshold.number;
            break;
        }
        default:
            throw ParseError("malformed bound: expected <, <=, >, >= or '= ?' after 'P'",
                             cur.peek().pos);
    }

    cur.expect(TokenKind::LBracket, "to open the path formula");
    const Token& f = cur.expect(TokenKind::Ident, "('F') as the path operator");
    if (f.text != "F") {
        throw ParseError("only the eventually operator 'F' is supported, found '" + f.text + "'",
                         f.pos);
    }
    if (cur.accept(TokenKind::Le)) {
        const Token& bound = cur.expect(TokenKind::Number, "as step bound");
        if (denominator(bound.number) != 1 || bound.number < 1) {
            throw ParseError("step bound must be a positive integer", bound.pos);
        }
        prop.path.kind = PathFormula::Kind::BoundedEventually;
        prop.path.bound = numerator(bound.number).convert_to<std::int64_t>();
    } else {
        prop.path.kind = PathFormula::Kind::Eventually;
    }
    prop.path.target = parse_expression(cur);

    if (cur.at(TokenKind::LBrace)) {
        const Token& brace = cur.advance();
        if (cur.at(TokenKind::RBrace)) {
            throw ParseError("empty filter braces", brace.pos);
        }
        prop.filter = parse_expression(cur);
        cur.expect(TokenKind::RBrace, "to close the filter");
    }
    cur.expect(TokenKind::RBracket, "to close the path formula");
    return prop;
}

}  // namespace

Property parse_property(std::string_view text) {
    TokenCursor cur(tokenize(text));
    Property prop = parse_property_tokens(cur);
    if (!cur.at(TokenKind::End)) {
        throw ParseError("unexpected trailing " +
                             std::string(token_kind_name(cur.peek().kind)) +
                             " after the property",
                         cur.peek().pos);
    }
    return prop;
}

ExprPtr parse_state_formula(std::string_view text) {
    TokenCursor cur(tokenize(text));
    ExprPtr formula = parse_expression(cur);
    if (!cur.at(TokenKind::End)) {
        throw ParseError("unexpected trailing " +
                             std::string(token_kind_name(cur.peek().kind)) +
                             " after the formula",
                         cur.peek().pos);
    }
    return formula;
}

PropertiesFile parse_properties_file(std::string_view text) {
    PropertiesFile out;
    std::size_t lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        std::string_view line = text.substr(
            start, end == std::string_view::npos ? std::string_view::npos : end - start);
        ++lineno;

        std::string_view trimmed = line;
        while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t' ||
                                    trimmed.front() == '\r')) {
            trimmed.remove_prefix(1);
        }
        while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\t' ||
                                    trimmed.back() == '\r')) {
            trimmed.remove_suffix(1);
        }
        if (!trimmed.empty() && trimmed.substr(0, 2) != "//") {
            try {
                out.properties.push_back(parse_property(trimmed));
            } catch (const ParseError& e) {
                out.errors.push_back("line " + std::to_string(lineno) + ": " + e.what());
            }
        }

        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

namespace {

ExprPtr bind_expr(const ExprPtr& expr, const StateSpace& space,
                  const std::set<std::string>& label_names) {
    if (!expr) return expr;
    const Expr& e = *expr;
    switch (e.kind) {
        case Expr::Kind::Number:
        case Expr::Kind::Bool:
            return expr;
        case Expr::Kind::Name: {
            auto slot = space.slot_of(e.name);
            if (!slot) {
                throw BindError("unknown identifier '" + e.name + "'", e.pos);
            }
            auto bound = std::make_shared<Expr>(e);
            bound->var_slot = *slot;
            return bound;
        }
        case Expr::Kind::LabelRef:
            if (label_names.find(e.name) == label_names.end()) {
                throw BindError("unknown label \"" + e.name + "\"", e.pos);
            }
            return expr;
        case Expr::Kind::Unary: {
            auto bound = std::make_shared<Expr>(e);
            bound->lhs = bind_expr(e.lhs, space, label_names);
            return bound;
        }
        case Expr::Kind::Binary: {
            auto bound = std::make_shared<Expr>(e);
            bound->lhs = bind_expr(e.lhs, space, label_names);
            bound->rhs = bind_expr(e.rhs, space, label_names);
            return bound;
        }
    }
    return expr;
}

}  // namespace

ExprPtr bind_formula(const ExprPtr& formula, const StateSpace& space,
                     const std::set<std::string>& label_names) {
    return bind_expr(formula, space, label_names);
}

Property bind(const Property& property, const StateSpace& space,
              const std::set<std::string>& label_names) {
    Property bound = property;
    bound.path.target = bind_expr(property.path.target, space, label_names);
    if (property.filter) {
        bound.filter = bind_expr(property.filter, space, label_names);
    }
    return bound;
}

std::string to_string(const Property& property) {
    std::ostringstream out;
    out << "P ";
    if (property.is_query) {
        out << "= ?";
    } else {
        out << bound_op_symbol(property.op) << " " << rational_to_string(property.threshold);
    }
    out << " [F ";
    if (property.path.kind == PathFormula::Kind::BoundedEventually) {
        out << "<= " << property.path.bound << " ";
    }
    out << "(" << to_string(property.path.target) << ")";
    if (property.filter) {
        out << " {(" << to_string(property.filter) << ")}";
    }
    out << "]";
    return out.str();
}

bool equal(const Property& a, const Property& b) {
    if (a.is_query != b.is_query || a.path.kind != b.path.kind) return false;
    if (!a.is_query && (a.op != b.op || a.threshold != b.threshold)) return false;
    if (a.path.kind == PathFormula::Kind::BoundedEventually && a.path.bound != b.path.bound) {
        return false;
    }
    if (!equal(a.path.target, b.path.target)) return false;
    if (static_cast<bool>(a.filter) != static_cast<bool>(b.filter)) return false;
    return !a.filter || equal(a.filter, b.filter);
}

}  // namespace basketcheck
