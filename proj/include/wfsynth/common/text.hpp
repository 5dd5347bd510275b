// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wfsynth::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
/// Splits on "\n", dropping a trailing "\r" from each line.
std::vector<std::string> split_lines(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
bool starts_with(std::string_view s, std::string_view prefix);

/// True when `word` occurs in `s` delimited by non-identifier characters.
bool contains_word(std::string_view s, std::string_view word);

/// Replaces every identifier-delimited occurrence of `word` with `replacement`.
std::string replace_word(std::string_view s, std::string_view word, std::string_view replacement);

/// Contents of the last ``` fenced block (optionally restricted to an info
/// string such as "python" or "wf"), without the fence lines.
std::optional<std::string> last_fenced_block(std::string_view s, std::string_view info = {});

/// Reads a whole file; throws DataError naming the path when it cannot.
std::string read_file(const std::string& path);
/// Writes atomically via a temp file and rename.
void write_file(const std::string& path, std::string_view contents);

}  // namespace wfsynth::text
