// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wfsynth/ir/program.hpp"

namespace wfsynth::ir::detail {

enum class Tok {
    Word,
    Int,
    String,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Equals,
    Dot,
    Comma,
    Star,
    Newline,
    End,
};

struct Token {
    Tok kind;
    std::string text;  // decoded for strings
    SourceLocation loc;
};

std::string_view describe(Tok t);

/// Splits DSL source into tokens. `#` starts a comment outside strings.
std::vector<Token> lex(std::string_view source);

}  // namespace wfsynth::ir::detail
