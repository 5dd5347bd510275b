// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <thread>

#include "temp_dir.hpp"
#include "wfsynth/common/errors.hpp"
#include "wfsynth/common/hash.hpp"
#include "wfsynth/common/jsonl.hpp"
#include "wfsynth/common/text.hpp"

using namespace wfsynth;

TEST_CASE("sha256_hex matches the standard test vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("trim, lower-case and line splitting (CRLF tolerated)") {
    CHECK(text::trim("  a b \n\t") == "a b");
    CHECK(text::trim("   ").empty());
    CHECK(text::to_lower("AbC1") == "abc1");
    const auto lines = text::split_lines("a\nb\r\n\nc");
    REQUIRE(lines.size() == 4);
    CHECK(lines[1] == "b");
    CHECK(lines[2].empty());
    CHECK(text::join({"x", "y", "z"}, ", ") == "x, y, z");
}

TEST_CASE("word-delimited search and replace leave longer identifiers alone") {
    CHECK(text::contains_word("node Custom {", "Custom"));
    CHECK_FALSE(text::contains_word("CustomCodeGenerate", "Custom"));
    CHECK(text::replace_word("Custom + CustomCodeGenerate + Custom", "Custom", "X") ==
          "X + CustomCodeGenerate + X");
}

TEST_CASE("last_fenced_block picks the last block, optionally by info string") {
    const std::string reply = "intro\n```python\nprint(1)\n```\nmid\n```wf\nworkflow a\n```\ntail";
    CHECK(text::last_fenced_block(reply) == std::optional<std::string>("workflow a"));
    CHECK(text::last_fenced_block(reply, "python") == std::optional<std::string>("print(1)"));
    CHECK_FALSE(text::last_fenced_block("no fences here").has_value());
}

TEST_CASE("write_file creates parents and read_file round-trips bytes") {
    testing::TempDir dir;
    const std::string path = (dir / "a/b/c.txt").string();
    const std::string body = std::string("line\n\0binary", 12);
    text::write_file(path, body);
    CHECK(text::read_file(path) == body);
    CHECK_THROWS_AS(text::read_file((dir / "missing").string()), DataError);
}

TEST_CASE("concurrent writers of one file never collide on the temp file") {
    testing::TempDir dir;
    const std::string path = (dir / "shared.json").string();
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t)
        threads.emplace_back([&] {
            for (int i = 0; i < 25; ++i) text::write_file(path, "same contents\n");
        });
    for (auto& t : threads) t.join();
    CHECK(text::read_file(path) == "same contents\n");
    std::size_t leftovers = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir.path())) leftovers += e.path() != path;
    CHECK(leftovers == 0);
}

TEST_CASE("jsonl parsing skips blank lines and reports the bad line") {
    const auto rows = jsonl::parse("{\"a\":1}\n\n{\"a\":2}\n", "mem");
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].line == 3);
    CHECK(rows[1].value["a"] == 2);
    try {
        jsonl::parse("{\"a\":1}\n{oops\n", "data.jsonl");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("data.jsonl") != std::string::npos);
        CHECK(std::string(e.what()).find('2') != std::string::npos);
    }
    CHECK(jsonl::dump({nlohmann::json{{"x", 1}}, nlohmann::json{{"y", 2}}}) == "{\"x\":1}\n{\"y\":2}\n");
}
