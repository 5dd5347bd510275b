// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <mutex>

#include "fixture_world.hpp"
#include "scripted_gateway.hpp"
#include "temp_dir.hpp"
#include "wfsynth/common/text.hpp"
#include "wfsynth/eval/dataset.hpp"
#include "wfsynth/exec/engine.hpp"
#include "wfsynth/ir/parser.hpp"

using namespace wfsynth;
using namespace wfsynth::exec;
using wfsynth::testing::FixtureWorld;
using wfsynth::testing::TempDir;
using wfsynth::testing::WorldModel;

namespace {

const gateway::Pricing kPricing = gateway::Pricing::from_per_mtok(0.15, 0.60);

/// The fixture datasets, the world model behind a logging transport, and the
/// scripted sandbox, wired into one engine context.
struct Bench {
    TempDir dir{"exec"};
    FixtureWorld world{dir.path()};
    WorldModel model{FixtureWorld::answers()};
    std::mutex mu;
    std::vector<std::string> prompts;
    gateway::Money transport_cost;  // computed from the fake's own token counts
    std::shared_ptr<testing::FakeLlm> llm = std::make_shared<testing::FakeLlm>(
        [this](const std::vector<gateway::Message>& m, const gateway::SamplingConfig& cfg) {
            std::string reply = model.respond(m, cfg);
            std::int64_t in = 0;
            for (const auto& msg : m) in += testing::fake_tokens(msg.content);
            std::lock_guard lock(mu);
            prompts.push_back(m.back().content);
            transport_cost += kPricing.cost(in, testing::fake_tokens(reply));
            return reply;
        });
    testing::ScriptedSandbox sandbox;
    gateway::Gateway gw{testing::live_options(), llm, kPricing};

    EngineContext ctx() {
        EngineContext c;
        c.gateway = &gw;
        c.sandbox = &sandbox;
        c.sampling = testing::kTestSampling;
        return c;
    }
    eval::Dataset dataset(const std::string& task, ir::TaskKind kind) {
        return eval::load_dataset((dir.path() / "data" / (task + ".jsonl")).string(), task, kind);
    }
};

ir::WorkflowProgram workflow(const std::string& task, const std::string& kind) {
    return ir::parse_workflow(WorldModel::workflow_for(task, kind));
}

std::vector<nlohmann::json> as_json(const std::vector<RunResult>& rs) {
    std::vector<nlohmann::json> out;
    for (const auto& r : rs) out.push_back(r.to_json());
    return out;
}

}  // namespace

TEST_CASE("numeric ensemble workflow") {
    Bench b;
    const auto ds = b.dataset("gsm8k", ir::TaskKind::MathNumeric);
    const auto& inst = *ds.find("gsm8k-01");
    const auto r = execute_instance(workflow("gsm8k", "math-numeric"), inst, b.ctx());
    CHECK_FALSE(r.error_category);
    CHECK(r.final_output == "11");
    REQUIRE(r.node_trace.size() == 5);
    CHECK(r.node_trace[0].node_id == "reasoning");
    CHECK(r.node_trace[2].iteration == 2);
    CHECK(r.node_trace[3].kind == "ScEnsemble");
    CHECK(r.node_trace[3].charges.empty());
    CHECK(b.llm->calls() == 4);
    // The contract clause is appended to the terminal node's instruction only.
    REQUIRE(b.prompts.size() == 4);
    CHECK(b.prompts[3].find("Reply with the final number only.") != std::string::npos);
    CHECK(b.prompts[3].find("Final answer based on reasoning: 11") != std::string::npos);
    CHECK(b.prompts[0].find("Reply with the final number only.") == std::string::npos);
}

TEST_CASE("code workflow: early return, repair and environment failures") {
    Bench b;
    const auto ds = b.dataset("humaneval", ir::TaskKind::Code);
    const auto w = workflow("humaneval", "code");
    SUBCASE("passing first attempt returns at the branch") {
        const auto r = execute_instance(w, *ds.find("he-1"), b.ctx());
        CHECK_FALSE(r.error_category);
        CHECK(r.final_output == "def add(a, b):\n    return a + b");
        CHECK(r.node_trace.size() == 2);
        CHECK(b.llm->calls() == 1);
        CHECK(b.sandbox.calls() == 1);
        CHECK(r.node_trace[1].sandbox_calls == 1);
    }
    SUBCASE("failing attempt is repaired with the failure transcript") {
        const auto r = execute_instance(w, *ds.find("he-2"), b.ctx());
        CHECK_FALSE(r.error_category);
        CHECK(r.final_output == "def mul(a, b):\n    return a * b");
        REQUIRE(r.node_trace.size() == 3);
        CHECK(b.llm->calls() == 2);
        CHECK(b.prompts[1].find("Failure: [assertion]") != std::string::npos);
    }
    SUBCASE("a sandbox environment failure is an env error") {
        const auto r = execute_instance(w, *ds.find("he-4"), b.ctx());
        CHECK(r.error_category == ErrorCategory::Env);
        CHECK(r.final_output.empty());
        CHECK(r.error.find("env-missing-module") != std::string::npos);
        REQUIRE(r.node_trace.size() == 2);
        CHECK(r.node_trace[1].error);
        CHECK(r.cost == r.node_trace[0].cost);
    }
    SUBCASE("no sandbox at all is an env error") {
        auto ctx = b.ctx();
        ctx.sandbox = nullptr;
        CHECK(execute_instance(w, *ds.find("he-1"), ctx).error_category == ErrorCategory::Env);
    }
    SUBCASE("guard: returning an ensemble output is refused before any call") {
        const auto guarded = ir::parse_workflow(
            "workflow g\nkind code\nrepeat 2 {\n  node gen = CustomCodeGenerate {\n    problem = task.problem\n"
            "    entry_point = task.entry_point\n    instruction = \"\"\n  }\n}\n"
            "node pick = ScEnsemble {\n  problem = task.problem\n  solutions = [gen[*].response]\n}\n"
            "return pick.response\n");
        const auto r = execute_instance(guarded, *ds.find("he-1"), b.ctx());
        CHECK(r.error_category == ErrorCategory::Workflow);
        CHECK(r.error.find("guard") != std::string::npos);
        CHECK(b.llm->calls() == 0);
        CHECK(r.node_trace.empty());
    }
}

TEST_CASE("Programmer outcomes") {
    const auto w = ir::parse_workflow(
        "workflow p\nkind qa\nnode prog = Programmer {\n  problem = task.problem\n}\nreturn prog.output\n");
    const TaskInstance inst{"p-1", "What is 6 times 7?", "42", std::nullopt, {}};
    testing::ScriptedSandbox sandbox;
    auto run_with = [&](const std::string& reply) {
        testing::ScriptedGateway s({reply});
        EngineContext ctx{&s.gw, &sandbox, testing::kTestSampling, {}};
        return execute_instance(w, inst, ctx);
    };
    SUBCASE("stdout becomes the output") {
        const auto r = run_with("```python\nprint(42)\n```");
        CHECK(r.final_output == "42");
        CHECK(r.node_trace[0].fields.at("code") == runtime::Value(std::string("print(42)")));
    }
    SUBCASE("runtime exceptions are data") {
        const auto r = run_with("```python\nraise ValueError('x')\n```");
        CHECK_FALSE(r.error_category);
        CHECK(text::starts_with(r.final_output, "[runtime-exception]"));
    }
    SUBCASE("a missing module is the environment's fault") {
        const auto r = run_with("```python\nimport missing_mod\nprint(1)\n```");
        CHECK(r.error_category == ErrorCategory::Env);
    }
    SUBCASE("no code block is a workflow error keeping the raw reply") {
        const auto r = run_with("It is 42.");
        CHECK(r.error_category == ErrorCategory::Workflow);
        CHECK(r.node_trace[0].error_raw == "It is 42.");
        CHECK(r.node_trace[0].cost > gateway::Money());
        CHECK(r.cost == r.node_trace[0].cost);
    }
}

TEST_CASE("repeat blocks pair sibling references by iteration") {
    int n = 0;
    auto llm = std::make_shared<testing::FakeLlm>([&](const std::vector<gateway::Message>& m, const gateway::SamplingConfig&) {
        const std::string& p = m.back().content;
        const std::string input = p.substr(p.find("### Input\n") + 10);
        if (text::starts_with(input, "r")) return input + "!";
        return "r" + std::to_string(++n);
    });
    gateway::Gateway gw(testing::live_options(), llm, kPricing);
    const auto w = ir::parse_workflow(
        "workflow s\nkind qa\nrepeat 3 {\n  node a = Custom {\n    input = task.problem\n    instruction = \"\"\n  }\n"
        "  node b = Custom {\n    input = \"${a.response}\"\n    instruction = \"\"\n  }\n}\n"
        "node pick = ScEnsemble {\n  problem = task.problem\n  solutions = [b[*].response]\n}\n"
        "return pick.response\n");
    const auto r = execute_instance(w, {"s-1", "q", "", std::nullopt, {}}, {&gw, nullptr, testing::kTestSampling, {}});
    REQUIRE_FALSE(r.error_category);
    std::vector<std::string> bs;
    for (const auto& t : r.node_trace)
        if (t.node_id == "b") bs.push_back(std::get<std::string>(t.fields.at("response")));
    CHECK(bs == std::vector<std::string>{"r1!", "r2!", "r3!"});
    CHECK(r.final_output == "r1!");
}

TEST_CASE("failures reported per instance") {
    Bench b;
    SUBCASE("non-retryable transport failure is env") {
        b.llm->fail_next(1, false);
        const auto ds = b.dataset("drop", ir::TaskKind::Qa);
        const auto r = execute_instance(workflow("drop", "qa"), ds.instances[0], b.ctx());
        CHECK(r.error_category == ErrorCategory::Env);
    }
    SUBCASE("node budget") {
        const auto ds = b.dataset("humaneval", ir::TaskKind::Code);
        auto ctx = b.ctx();
        ctx.limits.node_budget = 2;
        const auto run = execute_dataset(workflow("humaneval", "code"), ds.instances, ctx, 2);
        REQUIRE(run.results.size() == 4);
        CHECK_FALSE(run.results[0].error_category);
        for (int i : {1, 2}) {
            CHECK(run.results[i].error_category == ErrorCategory::Workflow);
            CHECK(run.results[i].error == BudgetExceeded(2).what());
            CHECK(run.results[i].node_trace.size() == 2);
        }
        CHECK(run.results[3].error_category == ErrorCategory::Env);
    }
    SUBCASE("answer without an ANSWER line") {
        testing::ScriptedGateway s({"I think it is Walter Payton."});
        const auto ds = b.dataset("drop", ir::TaskKind::Qa);
        EngineContext ctx{&s.gw, nullptr, testing::kTestSampling, {}};
        const auto r = execute_instance(workflow("drop", "qa"), ds.instances[0], ctx);
        CHECK(r.error_category == ErrorCategory::Workflow);
        CHECK(r.node_trace[0].error_raw == "I think it is Walter Payton.");
    }
}

TEST_CASE("datasets: ordering, parallelism and cost conservation") {
    Bench b;
    const auto ds = b.dataset("gsm8k", ir::TaskKind::MathNumeric);
    auto shuffled = ds.instances;
    std::reverse(shuffled.begin(), shuffled.end());
    const auto w = workflow("gsm8k", "math-numeric");
    const auto serial = execute_dataset(w, shuffled, b.ctx(), 1);
    REQUIRE(serial.results.size() == 10);
    for (std::size_t i = 1; i < serial.results.size(); ++i)
        CHECK(serial.results[i - 1].instance_id < serial.results[i].instance_id);
    CHECK(serial.results[6].final_output == "42");  // the model slips on item 7 (gold 41)

    const auto cost_before = b.transport_cost;
    for (int p : {2, 4, 8, 32}) {
        CAPTURE(p);
        const auto par = execute_dataset(w, ds.instances, b.ctx(), p);
        CHECK(as_json(par.results) == as_json(serial.results));
        CHECK(par.ledger == serial.ledger);
    }

    // Ledger total == sum of result costs == sum of node costs == sum of what
    // the transport reported, with no rounding anywhere.
    gateway::Money by_result;
    gateway::Money by_node;
    for (const auto& r : serial.results) {
        by_result += r.cost;
        for (const auto& n : r.node_trace) by_node += n.cost;
    }
    CHECK(serial.ledger.total() == by_result);
    CHECK(serial.ledger.total() == by_node);
    CHECK(serial.ledger.total() == cost_before);
    CHECK(serial.ledger.per_call().size() == 40);

    SUBCASE("empty instance list") {
        const auto none = execute_dataset(w, {}, b.ctx(), 4);
        CHECK(none.results.empty());
        CHECK(none.ledger.total() == gateway::Money());
    }
    SUBCASE("parallelism must be positive") { CHECK_THROWS_AS(execute_dataset(w, {}, b.ctx(), 0), ConfigError); }
}

TEST_CASE("run files") {
    Bench b;
    const auto ds = b.dataset("humaneval", ir::TaskKind::Code);
    const auto run = execute_dataset(workflow("humaneval", "code"), ds.instances, b.ctx(), 3);
    TempDir out;
    const auto path = write_run(out.str(), "humaneval", "humaneval", "replay", run, std::nullopt);
    CHECK(path == (out.path() / "humaneval" / "humaneval" / "replay.jsonl").string());
    const auto back = load_run(path);
    CHECK(as_json(back) == as_json(run.results));

    const auto summary_path = (out.path() / "humaneval" / "humaneval" / "summary.json").string();
    auto summary = nlohmann::json::parse(text::read_file(summary_path));
    CHECK(summary["instances"] == 4);
    CHECK(summary["errors"]["env"] == 1);
    CHECK(summary["errors"]["workflow"] == 0);
    CHECK(summary["cost_nanos"] == run.ledger.total().nanos());
    CHECK_FALSE(summary.contains("wall_s"));

    write_run(out.str(), "humaneval", "humaneval", "20260101T000000", run, 1.5);
    summary = nlohmann::json::parse(text::read_file(summary_path));
    CHECK(summary["wall_s"] == 1.5);

    text::write_file((out.path() / "bad.jsonl").string(), "{\"instance_id\":\"x\"}\n");
    CHECK_THROWS_AS(load_run((out.path() / "bad.jsonl").string()), DataError);
    CHECK_THROWS_AS(load_run((out.path() / "missing.jsonl").string()), DataError);
}
