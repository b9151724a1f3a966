#pragma once

// Shared tokenizer for the poly / form / cover text grammars. Internal.

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "drwitt/zpn.hpp"

namespace drw::detail {

enum class Tok { Int, Ident, Plus, Minus, Star, Caret, LParen, RParen, Equals, Wedge, End };

struct Token {
    Tok kind;
    std::string text;
    long long value = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) { advance(); }

    const Token& peek() const { return cur_; }
    Token next()
    {
        Token t = cur_;
        advance();
        return t;
    }
    bool at(Tok k) const { return cur_.kind == k; }
    Token expect(Tok k, const char* what)
    {
        if (cur_.kind != k)
            fail(errc::parse_error, std::string("expected ") + what + " near '" + cur_.text + "'");
        return next();
    }

private:
    void advance()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (pos_ >= s_.size()) {
            cur_ = {Tok::End, "<end>", 0};
            return;
        }
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            std::string text(s_.substr(start, pos_ - start));
            long long v = 0;
            for (char d : text) {
                if (v > (INT64_MAX - 9) / 10)
                    fail(errc::parse_error, "integer literal too large");
                v = v * 10 + (d - '0');
            }
            cur_ = {Tok::Int, text, v};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                    s_[pos_] == '\''))
                ++pos_;
            cur_ = {Tok::Ident, std::string(s_.substr(start, pos_ - start)), 0};
            return;
        }
        // UTF-8 wedge sign
        if (static_cast<unsigned char>(c) == 0xE2 && pos_ + 2 < s_.size() &&
            static_cast<unsigned char>(s_[pos_ + 1]) == 0x88 &&
            static_cast<unsigned char>(s_[pos_ + 2]) == 0xA7) {
            pos_ += 3;
            cur_ = {Tok::Wedge, "∧", 0};
            return;
        }
        ++pos_;
        switch (c) {
        case '+': cur_ = {Tok::Plus, "+", 0}; return;
        case '-': cur_ = {Tok::Minus, "-", 0}; return;
        case '*': cur_ = {Tok::Star, "*", 0}; return;
        case '^': cur_ = {Tok::Caret, "^", 0}; return;
        case '(': cur_ = {Tok::LParen, "(", 0}; return;
        case ')': cur_ = {Tok::RParen, ")", 0}; return;
        case '=': cur_ = {Tok::Equals, "=", 0}; return;
        default: fail(errc::parse_error, std::string("unexpected character '") + c + "'");
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    Token cur_{Tok::End, "", 0};
};

} // namespace drw::detail
