#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gentrans/error.hpp"

namespace gentrans::detail {

struct Token {
    enum class Kind { LowerIdent, UpperIdent, TyVar, Int, String, Punct, End };

    Kind kind = Kind::End;
    std::string text; // identifier / punctuation spelling, decoded string contents, digits
    SourcePos pos;

    bool is(Kind k, std::string_view t) const { return kind == k && text == t; }
    bool is_punct(std::string_view t) const { return is(Kind::Punct, t); }
    bool is_keyword(std::string_view t) const { return is(Kind::LowerIdent, t); }
};

struct LexOptions {
    bool hash_comments = false; // `# ...` to end of line
};

/// Tokenises OCaml-flavoured text. `(* ... *)` comments nest.
std::vector<Token> tokenize(std::string_view text, LexOptions options = {});

std::string describe(const Token& tok);

/// Cursor over a token vector with expectation helpers that raise SyntaxError.
class TokenStream {
public:
    explicit TokenStream(std::vector<Token> tokens);

    const Token& peek(std::size_t ahead = 0) const;
    const Token& next();
    bool at_end() const { return peek().kind == Token::Kind::End; }

    bool accept_punct(std::string_view p);
    bool accept_keyword(std::string_view k);
    const Token& expect_punct(std::string_view p);
    const Token& expect_keyword(std::string_view k);
    const Token& expect(Token::Kind kind, std::string_view what);

    [[noreturn]] void fail(std::string_view expected) const;
    [[noreturn]] void fail_at(const Token& tok, std::string_view expected) const;

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

std::string quote_string(std::string_view s);

} // namespace gentrans::detail
