#include "basketcheck/lexer.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace basketcheck {

std::string format_message(const std::string& msg, SourcePos pos) {
    if (!pos.valid()) {
        return msg;
    }
    std::ostringstream out;
    out << pos.line << ":" << pos.col << ": " << msg;
    return out.str();
}

const char* token_kind_name(TokenKind kind) {
    switch (kind) {
        case TokenKind::Ident: return "identifier";
        case TokenKind::Number: return "number";
        case TokenKind::String: return "string";
        case TokenKind::KwDtmc: return "'dtmc'";
        case TokenKind::KwConst: return "'const'";
        case TokenKind::KwModule: return "'module'";
        case TokenKind::KwEndmodule: return "'endmodule'";
        case TokenKind::KwInit: return "'init'";
        case TokenKind::KwLabel: return "'label'";
        case TokenKind::KwTrue: return "'true'";
        case TokenKind::KwFalse: return "'false'";
        case TokenKind::LParen: return "'('";
        case TokenKind::RParen: return "')'";
        case TokenKind::LBracket: return "'['";
        case TokenKind::RBracket: return "']'";
        case TokenKind::LBrace: return "'{'";
        case TokenKind::RBrace: return "'}'";
        case TokenKind::Semicolon: return "';'";
        case TokenKind::Colon: return "':'";
        case TokenKind::Prime: return "'''";
        case TokenKind::Question: return "'?'";
        case TokenKind::Arrow: return "'->'";
        case TokenKind::DotDot: return "'..'";
        case TokenKind::Plus: return "'+'";
        case TokenKind::Minus: return "'-'";
        case TokenKind::Star: return "'*'";
        case TokenKind::Slash: return "'/'";
        case TokenKind::Eq: return "'='";
        case TokenKind::Neq: return "'!='";
        case TokenKind::Lt: return "'<'";
        case TokenKind::Le: return "'<='";
        case TokenKind::Gt: return "'>'";
        case TokenKind::Ge: return "'>='";
        case TokenKind::Amp: return "'&'";
        case TokenKind::Pipe: return "'|'";
        case TokenKind::Bang: return "'!'";
        case TokenKind::End: return "end of input";
    }
    return "?";
}

namespace {

const std::map<std::string, TokenKind>& keywords() {
    static const std::map<std::string, TokenKind> kw = {
        {"dtmc", TokenKind::KwDtmc},     {"const", TokenKind::KwConst},
        {"module", TokenKind::KwModule}, {"endmodule", TokenKind::KwEndmodule},
        {"init", TokenKind::KwInit},     {"label", TokenKind::KwLabel},
        {"true", TokenKind::KwTrue},     {"false", TokenKind::KwFalse},
    };
    return kw;
}

class Scanner {
public:
    explicit Scanner(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> tokens;
        while (true) {
            skip_space_and_comments();
            SourcePos pos{line_, col_};
            if (at_end()) {
                tokens.push_back({TokenKind::End, "", Rational(), pos});
                return tokens;
            }
            tokens.push_back(scan_token(pos));
        }
    }

private:
    bool at_end() const { return i_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const {
        return i_ + ahead < text_.size() ? text_[i_ + ahead] : '\0';
    }

    char advance() {
        char c = text_[i_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    bool match(char expected) {
        if (peek() != expected) return false;
        advance();
        return true;
    }

    void skip_space_and_comments() {
        while (!at_end()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (!at_end() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    Token scan_token(SourcePos pos) {
        char c = advance();
        switch (c) {
            case '(': return simple(TokenKind::LParen, "(", pos);
            case ')': return simple(TokenKind::RParen, ")", pos);
            case '[': return simple(TokenKind::LBracket, "[", pos);
            case ']': return simple(TokenKind::RBracket, "]", pos);
            case '{': return simple(TokenKind::LBrace, "{", pos);
            case '}': return simple(TokenKind::RBrace, "}", pos);
            case ';': return simple(TokenKind::Semicolon, ";", pos);
            case ':': return simple(TokenKind::Colon, ":", pos);
            case '\'': return simple(TokenKind::Prime, "'", pos);
            case '?': return simple(TokenKind::Question, "?", pos);
            case '+': return simple(TokenKind::Plus, "+", pos);
            case '*': return simple(TokenKind::Star, "*", pos);
            case '/': return simple(TokenKind::Slash, "/", pos);
            case '&': return simple(TokenKind::Amp, "&", pos);
            case '|': return simple(TokenKind::Pipe, "|", pos);
            case '=': return simple(TokenKind::Eq, "=", pos);
            case '-':
                if (match('>')) return simple(TokenKind::Arrow, "->", pos);
                return simple(TokenKind::Minus, "-", pos);
            case '!':
                if (match('=')) return simple(TokenKind::Neq, "!=", pos);
                return simple(TokenKind::Bang, "!", pos);
            case '<':
                if (match('=')) return simple(TokenKind::Le, "<=", pos);
                return simple(TokenKind::Lt, "<", pos);
            case '>':
                if (match('=')) return simple(TokenKind::Ge, ">=", pos);
                return simple(TokenKind::Gt, ">", pos);
            case '.':
                if (match('.')) return simple(TokenKind::DotDot, "..", pos);
                throw ParseError("unexpected '.'", pos);
            case '"': return scan_string(pos);
            default: break;
        }

        if (std::isdigit(static_cast<unsigned char>(c))) {
            return scan_number(c, pos);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return scan_ident(c, pos);
        }

        // UTF-8 comparison characters from copy-pasted property text.
        if (static_cast<unsigned char>(c) == 0xE2 && static_cast<unsigned char>(peek()) == 0x89) {
            unsigned char third = static_cast<unsigned char>(peek(1));
            if (third == 0xA5) {
                advance();
                advance();
                return simple(TokenKind::Ge, ">=", pos);
            }
            if (third == 0xA4) {
                advance();
                advance();
                return simple(TokenKind::Le, "<=", pos);
            }
        }

        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }

    Token simple(TokenKind kind, std::string text, SourcePos pos) {
        return {kind, std::move(text), Rational(), pos};
    }

    Token scan_number(char first, SourcePos pos) {
        std::string text(1, first);
        while (std::isdigit(static_cast<unsigned char>(peek()))) text += advance();
        // A '.' could start either a fraction or the '..' range operator.
        if (peek() == '.' && peek(1) != '.') {
            text += advance();
            if (!std::isdigit(static_cast<unsigned char>(peek()))) {
                throw ParseError("malformed number '" + text + "'", pos);
            }
            while (std::isdigit(static_cast<unsigned char>(peek()))) text += advance();
        }
        auto value = rational_from_literal(text);
        if (!value) {
            throw ParseError("malformed number '" + text + "'", pos);
        }
        return {TokenKind::Number, std::move(text), *value, pos};
    }

    Token scan_ident(char first, SourcePos pos) {
        std::string text(1, first);
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
            text += advance();
        }
        auto it = keywords().find(text);
        TokenKind kind = it == keywords().end() ? TokenKind::Ident : it->second;
        return {kind, std::move(text), Rational(), pos};
    }

    Token scan_string(SourcePos pos) {
        std::string text;
        while (!at_end() && peek() != '"' && peek() != '\n') {
            text += advance();
        }
        if (!match('"')) {
            throw ParseError("unterminated string", pos);
        }
        return {TokenKind::String, std::move(text), Rational(), pos};
    }

    std::string_view text_;
    std::size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
    return Scanner(text).run();
}

}  // namespace basketcheck
