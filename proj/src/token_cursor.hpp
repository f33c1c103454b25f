#pragma once

// Internal: token cursor plus the expression grammar shared by the model and
// property parsers.
//
//   expr    := or_expr
//   or      := and ('|' and)*
//   and     := not ('&' not)*
//   not     := '!' not | rel
//   rel     := add (relop add)?          relop: = != < <= > >=
//   add     := mul (('+'|'-') mul)*
//   mul     := unary (('*'|'/') unary)*
//   unary   := '-' unary | primary
//   primary := NUMBER | IDENT | STRING | true | false | '(' expr ')'

#include "basketcheck/expr.hpp"
#include "basketcheck/lexer.hpp"

#include <string>
#include <vector>

namespace basketcheck::detail {

class TokenCursor {
public:
    explicit TokenCursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }

    bool at(TokenKind kind) const { return peek().kind == kind; }

    const Token& advance() {
        const Token& t = peek();
        if (pos_ < tokens_.size() - 1) ++pos_;
        return t;
    }

    bool accept(TokenKind kind) {
        if (!at(kind)) return false;
        advance();
        return true;
    }

    const Token& expect(TokenKind kind, const std::string& what) {
        if (!at(kind)) {
            throw ParseError("expected " + std::string(token_kind_name(kind)) + " " + what +
                                 ", found " + std::string(token_kind_name(peek().kind)),
                             peek().pos);
        }
        return advance();
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

ExprPtr parse_expression(TokenCursor& cur);

}  // namespace basketcheck::detail
