#pragma once

#include "basketcheck/errors.hpp"
#include "basketcheck/rational.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace basketcheck {

enum class TokenKind {
    Ident,
    Number,       // integer or decimal literal, exact value in Token::number
    String,       // double-quoted, used for label names/references
    KwDtmc,
    KwConst,
    KwModule,
    KwEndmodule,
    KwInit,
    KwLabel,
    KwTrue,
    KwFalse,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Semicolon,
    Colon,
    Prime,        // '
    Question,
    Arrow,        // ->
    DotDot,       // ..
    Plus,
    Minus,
    Star,
    Slash,
    Eq,           // =
    Neq,          // !=
    Lt,
    Le,           // <= (also accepts the UTF-8 character)
    Gt,
    Ge,           // >= (also accepts the UTF-8 character)
    Amp,
    Pipe,
    Bang,
    End,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    Rational number;  // valid for Number tokens
    SourcePos pos;
};

const char* token_kind_name(TokenKind kind);

// Tokenizes the whole input. `//` comments run to end of line. Throws
// ParseError with the offending position on unknown characters.
std::vector<Token> tokenize(std::string_view text);

}  // namespace basketcheck
