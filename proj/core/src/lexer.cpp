#include "gentrans/detail/lexer.hpp"

#include <cctype>

namespace gentrans::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Lexer {
public:
    Lexer(std::string_view text, LexOptions options) : text_(text), options_(options) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_trivia();
            Token tok;
            tok.pos = here();
            if (i_ >= text_.size()) {
                tok.kind = Token::Kind::End;
                out.push_back(std::move(tok));
                return out;
            }
            char c = text_[i_];
            if (ident_start(c)) {
                std::size_t start = i_;
                while (i_ < text_.size() && ident_char(text_[i_])) advance();
                tok.text = std::string(text_.substr(start, i_ - start));
                tok.kind = std::isupper(static_cast<unsigned char>(c)) ? Token::Kind::UpperIdent
                                                                        : Token::Kind::LowerIdent;
            } else if (c == '\'' && i_ + 1 < text_.size() && ident_start(text_[i_ + 1])) {
                advance();
                std::size_t start = i_;
                while (i_ < text_.size() && ident_char(text_[i_])) advance();
                tok.text = std::string(text_.substr(start, i_ - start));
                tok.kind = Token::Kind::TyVar;
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t start = i_;
                while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) advance();
                if (i_ < text_.size() && ident_start(text_[i_])) {
                    throw Error(ErrorCode::SyntaxError, "malformed integer literal", tok.pos);
                }
                tok.text = std::string(text_.substr(start, i_ - start));
                tok.kind = Token::Kind::Int;
            } else if (c == '"') {
                tok.kind = Token::Kind::String;
                tok.text = lex_string(tok.pos);
            } else {
                tok.kind = Token::Kind::Punct;
                tok.text = lex_punct(tok.pos);
            }
            out.push_back(std::move(tok));
        }
    }

private:
    SourcePos here() const { return SourcePos{line_, col_}; }

    void advance() {
        if (text_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }

    void skip_trivia() {
        for (;;) {
            while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) advance();
            if (i_ + 1 < text_.size() && text_[i_] == '(' && text_[i_ + 1] == '*') {
                skip_block_comment();
                continue;
            }
            if (options_.hash_comments && i_ < text_.size() && text_[i_] == '#') {
                while (i_ < text_.size() && text_[i_] != '\n') advance();
                continue;
            }
            return;
        }
    }

    void skip_block_comment() {
        SourcePos start = here();
        int depth = 0;
        while (i_ < text_.size()) {
            if (i_ + 1 < text_.size() && text_[i_] == '(' && text_[i_ + 1] == '*') {
                ++depth;
                advance();
                advance();
            } else if (i_ + 1 < text_.size() && text_[i_] == '*' && text_[i_ + 1] == ')') {
                --depth;
                advance();
                advance();
                if (depth == 0) return;
            } else {
                advance();
            }
        }
        throw Error(ErrorCode::SyntaxError, "unterminated comment", start);
    }

    std::string lex_string(SourcePos start) {
        advance(); // opening quote
        std::string out;
        while (i_ < text_.size() && text_[i_] != '"') {
            char c = text_[i_];
            if (c == '\n') break;
            if (c == '\\') {
                advance();
                if (i_ >= text_.size()) break;
                char e = text_[i_];
                switch (e) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case 'r': out += '\r'; break;
                case '\\': out += '\\'; break;
                case '"': out += '"'; break;
                default:
                    throw Error(ErrorCode::SyntaxError, std::string("unknown escape \\") + e, here());
                }
                advance();
                continue;
            }
            out += c;
            advance();
        }
        if (i_ >= text_.size() || text_[i_] != '"') {
            throw Error(ErrorCode::SyntaxError, "unterminated string literal", start);
        }
        advance();
        return out;
    }

    std::string lex_punct(SourcePos pos) {
        static constexpr std::string_view two[] = {"->", "=>", "+=", "..", "::", "<=", ">=", "==", "!="};
        for (auto p : two) {
            if (text_.substr(i_, 2) == p) {
                advance();
                advance();
                return std::string(p);
            }
        }
        static constexpr std::string_view one = "()[]{},;*|=:+-/^._<>%!";
        char c = text_[i_];
        if (one.find(c) == std::string_view::npos) {
            throw Error(ErrorCode::SyntaxError, std::string("unexpected character '") + c + "'", pos);
        }
        advance();
        return std::string(1, c);
    }

    std::string_view text_;
    LexOptions options_;
    std::size_t i_ = 0;
    std::uint32_t line_ = 1;
    std::uint32_t col_ = 1;
};

} // namespace

std::vector<Token> tokenize(std::string_view text, LexOptions options) {
    return Lexer(text, options).run();
}

std::string quote_string(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string describe(const Token& tok) {
    switch (tok.kind) {
    case Token::Kind::End: return "end of input";
    case Token::Kind::String: return "string " + quote_string(tok.text);
    case Token::Kind::TyVar: return "'" + tok.text;
    case Token::Kind::Int: return "integer " + tok.text;
    default: return "'" + tok.text + "'";
    }
}

TokenStream::TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
    if (tokens_.empty() || tokens_.back().kind != Token::Kind::End) {
        tokens_.push_back(Token{});
    }
}

const Token& TokenStream::peek(std::size_t ahead) const {
    std::size_t at = pos_ + ahead;
    return at < tokens_.size() ? tokens_[at] : tokens_.back();
}

const Token& TokenStream::next() {
    const Token& tok = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return tok;
}

bool TokenStream::accept_punct(std::string_view p) {
    if (peek().is_punct(p)) {
        next();
        return true;
    }
    return false;
}

bool TokenStream::accept_keyword(std::string_view k) {
    if (peek().is_keyword(k)) {
        next();
        return true;
    }
    return false;
}

const Token& TokenStream::expect_punct(std::string_view p) {
    if (!peek().is_punct(p)) fail("'" + std::string(p) + "'");
    return next();
}

const Token& TokenStream::expect_keyword(std::string_view k) {
    if (!peek().is_keyword(k)) fail("'" + std::string(k) + "'");
    return next();
}

const Token& TokenStream::expect(Token::Kind kind, std::string_view what) {
    if (peek().kind != kind) fail(what);
    return next();
}

void TokenStream::fail(std::string_view expected) const { fail_at(peek(), expected); }

void TokenStream::fail_at(const Token& tok, std::string_view expected) const {
    throw Error(ErrorCode::SyntaxError, "expected " + std::string(expected) + ", found " + describe(tok), tok.pos);
}

} // namespace gentrans::detail
