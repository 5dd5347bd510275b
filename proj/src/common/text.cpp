// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/common/text.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "wfsynth/common/errors.hpp"

namespace wfsynth::text {

namespace {

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool word_at(std::string_view s, std::size_t pos, std::string_view word) {
    if (s.compare(pos, word.size(), word) != 0) return false;
    if (pos > 0 && is_ident_char(s[pos - 1])) return false;
    const std::size_t end = pos + word.size();
    return end >= s.size() || !is_ident_char(s[end]);
}

}  // namespace

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string> split_lines(std::string_view s) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t nl = s.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < s.size()) lines.emplace_back(s.substr(start));
            break;
        }
        const std::size_t end = nl > start && s[nl - 1] == '\r' ? nl - 1 : nl;
        lines.emplace_back(s.substr(start, end - start));
        start = nl + 1;
    }
    return lines;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.append(sep);
        out.append(parts[i]);
    }
    return out;
}

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.substr(0, prefix.size()) == prefix;
}

bool contains_word(std::string_view s, std::string_view word) {
    if (word.empty()) return false;
    for (std::size_t pos = s.find(word); pos != std::string_view::npos; pos = s.find(word, pos + 1)) {
        if (word_at(s, pos, word)) return true;
    }
    return false;
}

std::string replace_word(std::string_view s, std::string_view word, std::string_view replacement) {
    std::string out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!word.empty() && word_at(s, i, word)) {
            out.append(replacement);
            i += word.size();
        } else {
            out.push_back(s[i]);
            ++i;
        }
    }
    return out;
}

std::optional<std::string> last_fenced_block(std::string_view s, std::string_view info) {
    std::optional<std::string> found;
    const auto lines = split_lines(s);
    std::size_t i = 0;
    while (i < lines.size()) {
        const std::string opener = trim(lines[i]);
        if (!starts_with(opener, "```")) {
            ++i;
            continue;
        }
        const std::string tag = trim(std::string_view(opener).substr(3));
        std::size_t j = i + 1;
        while (j < lines.size() && trim(lines[j]) != "```") ++j;
        if (j == lines.size()) break;  // unterminated fence
        if (info.empty() || tag == info) {
            std::vector<std::string> body(lines.begin() + static_cast<std::ptrdiff_t>(i + 1),
                                          lines.begin() + static_cast<std::ptrdiff_t>(j));
            found = join(body, "\n");
        }
        i = j + 1;
    }
    return found;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    // Unique per writer so concurrent writers of the same target never share a temp file.
    static std::atomic<unsigned long> counter{0};
    const fs::path tmp = target.string() + ".tmp." +
                         std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) + "." +
                         std::to_string(counter.fetch_add(1));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write file: " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw DataError("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

}  // namespace wfsynth::text
