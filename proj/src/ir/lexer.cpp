// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "lexer.hpp"

#include <cctype>

namespace wfsynth::ir::detail {

namespace {

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            const SourceLocation here{line_, col_};
            if (c == '\n') {
                advance();
                out.push_back({Tok::Newline, "\n", here});
            } else if (c == ' ' || c == '\t' || c == '\r') {
                advance();
            } else if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (c == '"') {
                out.push_back({Tok::String, read_string(), here});
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::string digits;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    digits.push_back(src_[pos_]);
                    advance();
                }
                out.push_back({Tok::Int, digits, here});
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::string word;
                while (pos_ < src_.size() && is_word_char(src_[pos_])) {
                    word.push_back(src_[pos_]);
                    advance();
                }
                out.push_back({Tok::Word, word, here});
            } else {
                Tok kind;
                switch (c) {
                    case '{': kind = Tok::LBrace; break;
                    case '}': kind = Tok::RBrace; break;
                    case '[': kind = Tok::LBracket; break;
                    case ']': kind = Tok::RBracket; break;
                    case '=': kind = Tok::Equals; break;
                    case '.': kind = Tok::Dot; break;
                    case ',': kind = Tok::Comma; break;
                    case '*': kind = Tok::Star; break;
                    default:
                        throw SyntaxError(here, std::string("unexpected character '") + c + "'");
                }
                advance();
                out.push_back({kind, std::string(1, c), here});
            }
        }
        out.push_back({Tok::End, "", {line_, col_}});
        return out;
    }

private:
    static bool is_word_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    }

    void advance() {
        const char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
            ++col_;  // continuation bytes share the column of their lead byte
        }
    }

    std::string read_string() {
        const SourceLocation start{line_, col_};
        advance();  // opening quote
        std::string out;
        while (true) {
            if (pos_ >= src_.size() || src_[pos_] == '\n') {
                throw SyntaxError(start, "unterminated string literal");
            }
            const char c = src_[pos_];
            if (c == '"') {
                advance();
                return out;
            }
            if (c == '\\') {
                const SourceLocation esc{line_, col_};
                advance();
                if (pos_ >= src_.size()) throw SyntaxError(esc, "unterminated escape");
                const char e = src_[pos_];
                switch (e) {
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    case 'r': out.push_back('\r'); break;
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    default:
                        throw SyntaxError(esc, std::string("unknown escape '\\") + e + "'");
                }
                advance();
                continue;
            }
            out.push_back(c);
            advance();
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace

std::string_view describe(Tok t) {
    switch (t) {
        case Tok::Word: return "identifier";
        case Tok::Int: return "integer";
        case Tok::String: return "string";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::LBracket: return "'['";
        case Tok::RBracket: return "']'";
        case Tok::Equals: return "'='";
        case Tok::Dot: return "'.'";
        case Tok::Comma: return "','";
        case Tok::Star: return "'*'";
        case Tok::Newline: return "end of line";
        case Tok::End: return "end of input";
    }
    return "?";
}

std::vector<Token> lex(std::string_view source) {
    return Lexer(source).run();
}

}  // namespace wfsynth::ir::detail
