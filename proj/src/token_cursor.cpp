#include "token_cursor.hpp"

namespace basketcheck::detail {

namespace {

ExprPtr parse_or(TokenCursor& cur);

ExprPtr parse_primary(TokenCursor& cur) {
    const Token& t = cur.peek();
    switch (t.kind) {
        case TokenKind::Number:
            cur.advance();
            return make_number(t.number, t.pos);
        case TokenKind::KwTrue:
            cur.advance();
            return make_bool(true, t.pos);
        case TokenKind::KwFalse:
            cur.advance();
            return make_bool(false, t.pos);
        case TokenKind::Ident:
            cur.advance();
            return make_name(t.text, t.pos);
        case TokenKind::String:
            cur.advance();
            return make_label_ref(t.text, t.pos);
        case TokenKind::LParen: {
            cur.advance();
            ExprPtr inner = parse_or(cur);
            cur.expect(TokenKind::RParen, "to close '('");
            return inner;
        }
        default:
            throw ParseError("expected an expression, found " +
                                 std::string(token_kind_name(t.kind)),
                             t.pos);
    }
}

ExprPtr parse_unary(TokenCursor& cur) {
    if (cur.at(TokenKind::Minus)) {
        SourcePos pos = cur.advance().pos;
        return make_unary(UnaryOp::Negate, parse_unary(cur), pos);
    }
    return parse_primary(cur);
}

ExprPtr parse_mul(TokenCursor& cur) {
    ExprPtr lhs = parse_unary(cur);
    while (cur.at(TokenKind::Star) || cur.at(TokenKind::Slash)) {
        const Token& op = cur.advance();
        BinaryOp bop = op.kind == TokenKind::Star ? BinaryOp::Mul : BinaryOp::Div;
        lhs = make_binary(bop, lhs, parse_unary(cur), op.pos);
    }
    return lhs;
}

ExprPtr parse_add(TokenCursor& cur) {
    ExprPtr lhs = parse_mul(cur);
    while (cur.at(TokenKind::Plus) || cur.at(TokenKind::Minus)) {
        const Token& op = cur.advance();
        BinaryOp bop = op.kind == TokenKind::Plus ? BinaryOp::Add : BinaryOp::Sub;
        lhs = make_binary(bop, lhs, parse_mul(cur), op.pos);
    }
    return lhs;
}

ExprPtr parse_rel(TokenCursor& cur) {
    ExprPtr lhs = parse_add(cur);
    BinaryOp bop;
    switch (cur.peek().kind) {
        case TokenKind::Eq: bop = BinaryOp::Eq; break;
        case TokenKind::Neq: bop = BinaryOp::Ne; break;
        case TokenKind::Lt: bop = BinaryOp::Lt; break;
        case TokenKind::Le: bop = BinaryOp::Le; break;
        case TokenKind::Gt: bop = BinaryOp::Gt; break;
        case TokenKind::Ge: bop = BinaryOp::Ge; break;
        default: return lhs;
    }
    const Token& op = cur.advance();
    return make_binary(bop, lhs, parse_add(cur), op.pos);
}

ExprPtr parse_not(TokenCursor& cur) {
    if (cur.at(TokenKind::Bang)) {
        SourcePos pos = cur.advance().pos;
        return make_unary(UnaryOp::Not, parse_not(cur), pos);
    }
    return parse_rel(cur);
}

ExprPtr parse_and(TokenCursor& cur) {
    ExprPtr lhs = parse_not(cur);
    while (cur.at(TokenKind::Amp)) {
        SourcePos pos = cur.advance().pos;
        lhs = make_binary(BinaryOp::And, lhs, parse_not(cur), pos);
    }
    return lhs;
}

ExprPtr parse_or(TokenCursor& cur) {
    ExprPtr lhs = parse_and(cur);
    while (cur.at(TokenKind::Pipe)) {
        SourcePos pos = cur.advance().pos;
        lhs = make_binary(BinaryOp::Or, lhs, parse_and(cur), pos);
    }
    return lhs;
}

}  // namespace

ExprPtr parse_expression(TokenCursor& cur) {
    return parse_or(cur);
}

}  // namespace basketcheck::detail
