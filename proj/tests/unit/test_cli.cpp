// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <map>

#include "fixture_world.hpp"
#include "temp_dir.hpp"
#include "wfsynth/common/text.hpp"
#include "wfsynth/distill/priors.hpp"

using namespace wfsynth;
using wfsynth::testing::CliOutcome;
using wfsynth::testing::FixtureWorld;
using wfsynth::testing::TempDir;
namespace fs = std::filesystem;

namespace {

/// Relative path -> contents of every regular file under `dir`.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    if (!fs::exists(dir)) return files;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = text::read_file(e.path().string());
    return files;
}

CliOutcome run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    CliOutcome r;
    r.code = cli::run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

bool has(const std::string& haystack, const std::string& needle) { return haystack.find(needle) != std::string::npos; }

const std::string kCorpus = WFSYNTH_TEST_CORPUS;

}  // namespace

TEST_CASE("argument handling") {
    CHECK(run({"--help"}).code == cli::kExitOk);
    CHECK(run({}).code == cli::kExitConfig);
    CHECK(run({"frobnicate"}).code == cli::kExitConfig);
    CHECK(run({"cost", "--n", "nine"}).code == cli::kExitConfig);
    const auto missing = run({"distill", "--config", "/nonexistent/wfsynth.json"});
    CHECK(missing.code == cli::kExitConfig);
    CHECK(has(missing.err, "/nonexistent/wfsynth.json"));

    TempDir dir{"cli"};
    FixtureWorld world(dir.path());
    CHECK(world.cli({"distill", "--mode", "sideways"}).code == cli::kExitConfig);
    CHECK(world.cli({"distill", "--gamma", "0"}).code == cli::kExitConfig);
    CHECK(world.cli({"run", "--target", "gsm8k", "--parallelism", "0"}).code == cli::kExitConfig);
    CHECK(world.cli({"synthesize"}).code == cli::kExitConfig);
    const auto unknown = world.cli({"synthesize", "--target", "nope"});
    CHECK(unknown.code == cli::kExitData);
    CHECK(has(unknown.err, "nope"));
}

TEST_CASE("cost") {
    TempDir dir{"cli-cost"};
    auto r = run({"cost", "--out", dir.str()});
    REQUIRE(r.code == cli::kExitOk);
    CHECK(has(r.out, "break_even n*: 5.00\n"));
    CHECK(has(r.out, "search_total: $202.500000000"));
    CHECK(has(r.out, "amortized_total: $112.536000000"));
    const auto j = nlohmann::json::parse(text::read_file((dir.path() / "reports" / "cost.json").string()));
    CHECK(j["break_even"].get<double>() == doctest::Approx(5.0009).epsilon(1e-4));
    CHECK(j["n"] == 9);

    r = run({"cost", "--c-source", "45", "--c-synth", "0", "--out", dir.str()});
    CHECK(has(r.out, "break_even n*: 2.00\n"));
    r = run({"cost", "--c-search", "0.001", "--out", dir.str()});
    CHECK(r.code == cli::kExitOk);
    CHECK(has(r.out, "break_even n*: none"));
    CHECK(run({"cost", "--c-search", "-1", "--out", dir.str()}).code == cli::kExitConfig);
}

TEST_CASE("check") {
    const auto ok = run({"check", kCorpus + "/gsm8k.wf"});
    CHECK(ok.code == cli::kExitOk);
    CHECK(has(ok.out, "0 findings"));
    CHECK(run({"check", kCorpus + "/missing.wf"}).code == cli::kExitData);

    TempDir dir{"cli-check"};
    const std::string bad = (dir.path() / "bad.wf").string();
    text::write_file(bad, "workflow bad\nkind qa\nnode a = Custom {\n");
    CHECK(run({"check", bad}).code == cli::kExitSynthesis);
    const std::string uncontracted = (dir.path() / "nc.wf").string();
    std::string src = text::read_file(kCorpus + "/gsm8k.wf");
    const auto at = src.find("contract ");
    src.erase(at, src.find('\n', at) - at + 1);
    text::write_file(uncontracted, src);
    const auto finding = run({"check", uncontracted});
    CHECK(finding.code == cli::kExitSynthesis);
    CHECK(has(finding.out, "[contract]"));
}

TEST_CASE("missing inputs name the path") {
    TempDir dir{"cli-missing"};
    FixtureWorld world(dir.path());
    fs::remove_all(dir.path() / "trajectories");
    auto r = world.cli({"distill", "--mode", "record"}, true);
    CHECK(r.code == cli::kExitData);
    CHECK(has(r.err, (dir.path() / "trajectories").string()));

    r = world.cli({"synthesize", "--target", "gsm8k"});
    CHECK(r.code == cli::kExitData);
    CHECK(has(r.err, "priors"));

    r = world.cli({"run", "--target", "gsm8k"});
    CHECK(r.code == cli::kExitData);
    CHECK(has(r.err, "synthesis_meta.json"));
}

TEST_CASE("record, then replay offline") {
    TempDir dir{"cli-e2e"};
    FixtureWorld world(dir.path());
    world.record_pipeline();
    const std::size_t recorded_calls = world.llm().calls();
    CHECK(recorded_calls > 0);

    SUBCASE("distill replays from fixtures") {
        const auto r = world.cli({"distill"});
        REQUIRE(r.code == cli::kExitOk);
        CHECK(text::starts_with(r.out, "gamma=0.6\n"));
        INFO(r.out);
        CHECK(has(r.out, "gsm8k: records=5 best=0.81 low=0.35 zero=0"));
        CHECK(has(r.out, "hotpotqa: records=6"));
        const auto priors = distill::PriorSet::from_json(
            nlohmann::json::parse(text::read_file((dir.path() / "priors.json").string())));
        std::set<std::string> sources;
        for (const auto& e : priors.entries) sources.insert(e.provenance.begin(), e.provenance.end());
        CHECK(sources == std::set<std::string>(FixtureWorld::task_ids().begin(), FixtureWorld::task_ids().end()));
        for (const auto& e : priors.entries)
            if (e.text == "Keep the final node's instruction short.") CHECK(e.provenance.size() == 6);
    }
    SUBCASE("leaving a task out of distillation") {
        const auto r = world.cli({"distill", "--mode", "record", "--target", "math"}, true);
        REQUIRE(r.code == cli::kExitOk);
        CHECK_FALSE(has(r.out, "math:"));
    }
    SUBCASE("synthesize, run and eval replay to identical files") {
        const auto before = snapshot(dir.path() / "reports");
        for (const auto& task : FixtureWorld::task_ids()) {
            CAPTURE(task);
            REQUIRE(world.cli({"synthesize", "--target", task}).code == cli::kExitOk);
            REQUIRE(world.cli({"run", "--target", task, "--parallelism", "8"}).code == cli::kExitOk);
            const auto ev = world.cli({"eval", "--target", task});
            REQUIRE(ev.code == cli::kExitOk);
            CHECK(has(ev.out, "replay.jsonl"));
        }
        CHECK(snapshot(dir.path() / "reports") == before);
        const auto outputs = snapshot(dir.path() / "out");
        const auto runs = snapshot(dir.path() / "runs");
        for (const auto& task : FixtureWorld::task_ids()) {
            world.cli({"synthesize", "--target", task});
            world.cli({"run", "--target", task, "--parallelism", "1"});
            world.cli({"eval", "--target", task});
        }
        CHECK(snapshot(dir.path() / "reports") == before);
        CHECK(snapshot(dir.path() / "out") == outputs);
        CHECK(snapshot(dir.path() / "runs") == runs);
        CHECK(world.llm().calls() == recorded_calls);
    }
    SUBCASE("eval output") {
        auto r = world.cli({"eval", "--target", "gsm8k"});
        REQUIRE(r.code == cli::kExitOk);
        CHECK(has(r.out, "accuracy: 0.9000 (9/10)"));
        r = world.cli({"eval", "--target", "humaneval"});
        CHECK(has(r.out, "accuracy: 0.5000 (2/4) env-excluded: 0.6667"));
        CHECK(has(r.out, "errors: model=1 workflow=0 env=1"));
        const auto rep = nlohmann::json::parse(text::read_file((dir.path() / "reports" / "gsm8k.json").string()));
        CHECK(rep["accuracy"] == 0.9);
        CHECK(rep["cost_nanos"].get<std::int64_t>() > 0);
    }
    SUBCASE("a prompt that was never recorded fails in replay") {
        const auto r = world.cli({"synthesize", "--target", "gsm8k", "--k", "3"});
        CHECK(r.code == cli::kExitExecution);
        CHECK(has(r.err, "fixture"));
        CHECK(world.llm().calls() == recorded_calls);
    }
    SUBCASE("ablation under random_ops is reproducible") {
        const std::vector<std::string> args = {"ablate", "--target", "gsm8k", "--intervention", "random_ops",
                                               "--seed", "7"};
        auto record = args;
        record.insert(record.end(), {"--mode", "record"});
        const auto first = world.cli(record, true);
        REQUIRE(first.code == cli::kExitOk);
        CHECK(has(first.out, "ablation: random_ops-s7"));
        const auto report = (dir.path() / "reports" / "gsm8k.random_ops-s7.json").string();
        const std::string recorded_report = text::read_file(report);
        const auto a = world.cli(args);
        REQUIRE(a.code == cli::kExitOk);
        const auto replayed = snapshot(dir.path() / "ablations");
        const auto b = world.cli(args);
        CHECK(a.out == b.out);
        CHECK(text::read_file(report) == recorded_report);
        CHECK(snapshot(dir.path() / "ablations") == replayed);
        // The renamed operators reach the prompt, not the synthesized workflow.
        const auto wf = replayed.at("random_ops-s7/gsm8k/gsm8k.wf");
        CHECK(has(wf, "ScEnsemble"));
    }
    SUBCASE("demo sweep writes a table per k") {
        const auto rec = world.cli({"demo-sweep", "--target", "mbpp", "--k", "0,1,2", "--mode", "record"}, true);
        REQUIRE(rec.code == cli::kExitOk);
        const auto r = world.cli({"demo-sweep", "--target", "mbpp", "--k", "0,1,2"});
        REQUIRE(r.code == cli::kExitOk);
        CHECK(r.out == rec.out);
        CHECK(has(r.out, "k=0 accuracy=1.0000"));
        const auto csv = text::read_file((dir.path() / "reports" / "mbpp.sweep.csv").string());
        CHECK(text::split_lines(csv).size() == 4);
    }
}
