// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Everything runs in-process against the fixture world; no
// network endpoint is configured anywhere.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "fixture_world.hpp"
#include "oracles.hpp"
#include "scripted_gateway.hpp"
#include "temp_dir.hpp"
#include "wfsynth/common/hash.hpp"
#include "wfsynth/common/text.hpp"
#include "wfsynth/distill/distiller.hpp"
#include "wfsynth/eval/cost_model.hpp"
#include "wfsynth/eval/sweep.hpp"
#include "wfsynth/exec/engine.hpp"
#include "wfsynth/ir/parser.hpp"
#include "wfsynth/ir/serializer.hpp"
#include "wfsynth/ir/validator.hpp"
#include "wfsynth/runtime/operators.hpp"

namespace {

using namespace wfsynth;
using testing::FixtureWorld;
using testing::TempDir;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

/// Collects failed expectations for one criterion.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (!ok && failures_.size() < 5) failures_.push_back(what);
        if (!ok) ++failed_;
    }
    void note(const std::string& s) { notes_.push_back(s); }
    bool ok() const { return failed_ == 0; }
    std::string summary() const {
        std::ostringstream os;
        os << checks_ << " checks";
        if (failed_) os << ", " << failed_ << " failed";
        for (const auto& n : notes_) os << "; " << n;
        for (const auto& f : failures_) os << "\n      - " << f;
        return os.str();
    }

private:
    std::size_t checks_ = 0;
    std::size_t failed_ = 0;
    std::vector<std::string> notes_;
    std::vector<std::string> failures_;
};

std::string ms(Clock::duration d) {
    return std::to_string(std::chrono::duration_cast<std::chrono::milliseconds>(d).count()) + " ms";
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    if (!fs::exists(dir)) return files;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = text::read_file(e.path().string());
    return files;
}

const gateway::Pricing kPricing = gateway::Pricing::from_per_mtok(0.15, 0.60);

/// A fixture world plus priors distilled from it through the fake model.
struct DistilledWorld {
    TempDir dir{"acceptance"};
    FixtureWorld world{dir.path()};
    synth::TaskRegistry registry = synth::TaskRegistry::load((dir.path() / "tasks.json").string());
    std::string trajectories = (dir.path() / "trajectories").string();
    gateway::Gateway gw{testing::live_options(), world.backends().transport, kPricing};
    distill::PriorSet priors = distill::distill_tasks(FixtureWorld::task_ids(), trajectories,
                                                      distill::DistillConfig{}, gw, testing::kTestSampling);
};

// ---------------------------------------------------------------------------

void selection_oracle(Check& c) {
    std::mt19937_64 rng(20260101);
    std::size_t mismatches = 0;
    const auto start = Clock::now();
    for (int round = 0; round < 200; ++round) {
        const auto acc = testing::random_accuracies(rng);
        distill::DistillConfig cfg;
        cfg.gamma = (1 + rng() % 10) / 10.0;
        std::vector<distill::TrajectoryRecord> tau;
        for (std::size_t i = 0; i < acc.size(); ++i)
            tau.push_back({"t", "w" + std::to_string(i), acc[i], {}, static_cast<int>(i)});
        const auto t = distill::select_contrastive_triplet(tau, cfg);
        const auto oracle = testing::brute_force_triplet(acc, cfg.gamma);
        if (!(testing::TripletIndices{t.best, t.low, t.zero} == oracle)) ++mismatches;
    }
    const auto elapsed = Clock::now() - start;
    c.expect(mismatches == 0, std::to_string(mismatches) + " mismatches against the brute-force oracle");
    c.expect(elapsed < std::chrono::seconds(5), "took " + ms(elapsed));
    c.note("200 trajectories, 0 allowed mismatches, " + ms(elapsed));
}

void break_even_reproduction(Check& c) {
    using gateway::Money;
    const eval::AmortizationInputs reference{Money::from_dollars(22.50), Money::from_dollars(0.004),
                                         Money::from_dollars(112.50), 0};
    const long double n_star = eval::break_even(reference);
    c.expect(n_star >= 5.000L && n_star <= 5.002L, "n* out of range");
    std::ostringstream os;
    os.precision(6);
    os << "n*=" << static_cast<double>(n_star);
    c.note(os.str());

    std::mt19937_64 rng(4242);
    std::int64_t worst = 0;
    for (int round = 0; round < 1000; ++round) {
        const auto synth = static_cast<std::int64_t>(rng() % 100'000'000);
        const auto search = synth + 1 + static_cast<std::int64_t>(rng() % 200'000'000'000);
        const auto source = static_cast<std::int64_t>(rng() % 5'000'000'000'000);
        const eval::AmortizationInputs a{Money::from_nanos(search), Money::from_nanos(synth), Money::from_nanos(source),
                                         0};
        const auto at = eval::amortized_cost_at(a, eval::break_even(a));
        worst = std::max<std::int64_t>(worst, std::llabs((at.search_total - at.amortized_total).nanos()));
    }
    c.expect(worst <= 1, "totals differ by " + std::to_string(worst) + " nano-dollars at n*");
    c.note("1000 random inputs, max gap " + std::to_string(worst) + " nano-dollar");
}

void loo_disjointness(Check& c) {
    DistilledWorld w;
    for (const auto& target : FixtureWorld::task_ids()) {
        const auto& spec = w.registry.at(target);
        const auto catalog = synth::build_demo_catalog(w.registry, w.trajectories, target);
        for (std::size_t k : {synth::default_k(spec.task_kind), std::size_t{100}}) {
            const auto pool = synth::build_demo_pool(spec, catalog, k);
            const auto prompt = synth::compose_meta_prompt(spec, pool, w.priors, w.registry);
            c.expect(prompt.rendered.find(testing::sentinel(target)) == std::string::npos,
                     "sentinel of '" + target + "' found in its own prompt (k=" + std::to_string(k) + ")");
            std::size_t foreign = 0;
            for (const auto& other : FixtureWorld::task_ids())
                if (other != target && prompt.rendered.find(testing::sentinel(other)) != std::string::npos) ++foreign;
            if (k == 100) c.expect(foreign == 5, "prompt for '" + target + "' lacks other tasks' material");
        }
    }
    c.note("6 targets");
}

void corpus_conformance(Check& c) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(WFSYNTH_TEST_CORPUS))
        if (e.path().extension() == ".wf") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    c.expect(files.size() == 7, "expected 7 corpus workflows, found " + std::to_string(files.size()));
    for (const auto& f : files) {
        const std::string name = f.filename().string();
        try {
            const std::string src = text::read_file(f.string());
            const auto program = ir::parse_workflow(src);
            const auto report = ir::validate_workflow(program);
            c.expect(report.count(ir::FindingCategory::Structural) == 0, name + ": structural findings");
            c.expect(ir::serialize_workflow(program) == src, name + ": round trip is not byte-identical");
            c.expect(ir::parse_workflow(ir::serialize_workflow(program)) == program, name + ": reparse differs");
        } catch (const std::exception& e) {
            c.expect(false, name + ": " + e.what());
        }
    }
    c.note(std::to_string(files.size()) + " workflows");
}

/// Replays distill, then synthesize, run and eval for every task into `root`.
bool replay_pipeline(FixtureWorld& world, const fs::path& root, int parallelism, Check& c) {
    auto ok = [&](const testing::CliOutcome& r, const std::string& what) {
        c.expect(r.code == 0, what + " exited " + std::to_string(r.code) + ": " + r.err);
        return r.code == 0;
    };
    const std::string out = root.string();
    const std::string par = std::to_string(parallelism);
    if (!ok(world.cli({"distill", "--out", out}), "distill")) return false;
    for (const auto& task : FixtureWorld::task_ids()) {
        if (!ok(world.cli({"synthesize", "--target", task, "--out", out}), "synthesize " + task)) return false;
        if (!ok(world.cli({"run", "--target", task, "--parallelism", par, "--out", out}), "run " + task)) return false;
        if (!ok(world.cli({"eval", "--target", task, "--out", out}), "eval " + task)) return false;
    }
    return true;
}

gateway::CostLedger run_ledgers(const fs::path& runs) {
    gateway::CostLedger all(kPricing);
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(runs))
        if (e.path().extension() == ".jsonl") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files)
        for (const auto& r : exec::load_run(f.string())) all.merge(r.ledger(kPricing));
    return all;
}

void replay_determinism(Check& c) {
    const auto start = Clock::now();
    TempDir dir{"acceptance-e2e"};
    FixtureWorld world(dir.path());
    world.record_pipeline();
    const auto recorded_llm = world.llm().calls();
    const auto recorded_sandbox = world.sandbox().calls();
    const auto replay_start = Clock::now();

    const fs::path a = dir.path() / "replay-p1";
    const fs::path b = dir.path() / "replay-p8";
    if (!replay_pipeline(world, a, 1, c) || !replay_pipeline(world, b, 8, c)) return;
    const auto replay_elapsed = Clock::now() - replay_start;

    const auto reports_a = snapshot(a / "reports");
    c.expect(reports_a.size() == FixtureWorld::task_ids().size(), "one report per task expected");
    c.expect(reports_a == snapshot(b / "reports"), "reports differ between parallelism 1 and 8");
    c.expect(snapshot(a / "out") == snapshot(b / "out"), "synthesized workflows differ");
    c.expect(snapshot(a / "runs") == snapshot(b / "runs"), "run files differ");
    c.expect(text::read_file((a / "priors.json").string()) == text::read_file((b / "priors.json").string()),
             "priors differ");
    const auto ledger_a = run_ledgers(a / "runs");
    const auto ledger_b = run_ledgers(b / "runs");
    c.expect(ledger_a == ledger_b, "cost ledgers differ");
    c.expect(ledger_a.total() > gateway::Money(), "ledger is empty");
    // Replay never builds a transport; the fakes are the only way out and they stay untouched.
    c.expect(world.llm().calls() == recorded_llm, "the model transport was called during replay");
    c.expect(world.sandbox().calls() == recorded_sandbox, "the sandbox runner was called during replay");

    const auto elapsed = Clock::now() - start;
    c.expect(elapsed < std::chrono::seconds(60), "took " + ms(elapsed));
    c.note("two replays " + ms(replay_elapsed) + ", with recording " + ms(elapsed) + ", ledger $" +
           ledger_a.total().str() + ", 0 transport calls");
}

void contract_enforcement(Check& c) {
    std::string math = text::read_file(std::string(WFSYNTH_TEST_CORPUS) + "/gsm8k.wf");
    const auto at = math.find("contract ");
    math.erase(at, math.find('\n', at) - at + 1);
    const auto r1 = ir::validate_workflow(ir::parse_workflow(math));
    c.expect(r1.count(ir::FindingCategory::Contract) == 1 && r1.findings.size() == 1,
             "uncontracted math workflow: " + std::to_string(r1.findings.size()) + " findings");

    const auto r2 = ir::validate_workflow(ir::parse_workflow(
        "workflow vote_code\nkind code\n\nrepeat 3 {\n  node gen = CustomCodeGenerate {\n    problem = task.problem\n"
        "    entry_point = task.entry_point\n    instruction = \"\"\n  }\n}\n\n"
        "node pick = ScEnsemble {\n  problem = task.problem\n  solutions = [gen[*].response]\n}\n\n"
        "return pick.response\n"));
    c.expect(r2.count(ir::FindingCategory::Guard) == 1 && r2.findings.size() == 1,
             "ensemble-terminal code workflow: " + std::to_string(r2.findings.size()) + " findings");
}

/// Documented normal form for votes, written out independently: trimmed,
/// lower-cased, whitespace runs collapsed, trailing punctuation dropped.
std::string oracle_normal(const std::string& s) {
    std::string out;
    bool space = false;
    for (char ch : s) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            space = !out.empty();
            continue;
        }
        if (space) out += ' ';
        space = false;
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    while (!out.empty() && std::string(".,;:!? ").find(out.back()) != std::string::npos) out.pop_back();
    return out;
}

void ensemble_voting(Check& c) {
    std::mt19937_64 rng(1000);
    const std::vector<std::vector<std::string>> spellings = {
        {"42", " 42.", "42!"}, {"Paris", "paris", "PARIS?"}, {"x = 1", "x  =  1", "X = 1;"}, {"B", "b", " B "}};
    std::size_t mismatches = 0;
    std::size_t variant_failures = 0;
    for (int round = 0; round < 1000; ++round) {
        const std::size_t alphabet = 1 + rng() % 4;
        std::vector<std::string> xs(1 + rng() % 9);
        for (auto& x : xs) {
            const auto& forms = spellings[rng() % alphabet];
            x = forms[rng() % forms.size()];
        }
        runtime::OperatorCall call;
        call.node_id = "vote";
        call.kind = ir::OperatorKind::ScEnsemble;
        call.inputs["solutions"] = xs;
        const std::string got = runtime::as_text(runtime::run_sc_ensemble(call).fields.at("response"), "");
        const std::size_t expected = testing::brute_force_majority(xs, oracle_normal);
        if (got != xs[expected]) ++mismatches;

        // Permutations cannot change the winning value when the plurality is unique.
        std::map<std::string, int> counts;
        for (const auto& x : xs) ++counts[oracle_normal(x)];
        int top = 0, top_n = 0;
        for (const auto& [v, n] : counts) {
            if (n > top) top = n, top_n = 1;
            else if (n == top) ++top_n;
        }
        auto shuffled = xs;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        call.inputs["solutions"] = shuffled;
        const std::string again = runtime::as_text(runtime::run_sc_ensemble(call).fields.at("response"), "");
        if (top_n == 1 && oracle_normal(again) != oracle_normal(got)) ++variant_failures;
        if (top_n > 1 && counts[oracle_normal(again)] != top) ++variant_failures;
    }
    c.expect(mismatches == 0, std::to_string(mismatches) + " mismatches against the brute-force majority");
    c.expect(variant_failures == 0, std::to_string(variant_failures) + " permutation-invariance failures");
    c.note("1000 lists");
}

std::string random_demo_text(std::mt19937_64& rng, const std::vector<std::string>& corpus) {
    static const std::vector<std::string> words = {"Custom", "AnswerGenerate", "Programmer", "CustomCodeGenerate",
                                                   "ScEnsemble", "Test", "node", "=", "{", "}", "input", "Testing",
                                                   "CustomX", "\n", "op_qwerty", "(Test)", "Custom."};
    if (rng() % 2) {
        // A real workflow with a random slice of noise appended.
        std::string t = corpus[rng() % corpus.size()];
        for (int i = 0; i < 5; ++i) t += words[rng() % words.size()] + " ";
        return t;
    }
    std::string t;
    const std::size_t n = rng() % 60;
    for (std::size_t i = 0; i < n; ++i) t += words[rng() % words.size()] + (rng() % 2 ? " " : "");
    return t;
}

void ablation_transforms(Check& c) {
    std::vector<std::string> corpus;
    for (const auto& e : fs::directory_iterator(WFSYNTH_TEST_CORPUS))
        if (e.path().extension() == ".wf") corpus.push_back(text::read_file(e.path().string()));

    std::mt19937_64 rng(8);
    std::size_t bijection_failures = 0;
    std::size_t multiset_failures = 0;
    for (int round = 0; round < 100; ++round) {
        const std::string demo = random_demo_text(rng, corpus);
        const auto seed = rng();
        const auto renaming = synth::make_op_renaming(seed);
        std::set<std::string> aliases;
        for (const auto& [name, alias] : renaming.forward) aliases.insert(alias);
        const std::string renamed = renaming.apply(demo);
        bool ok = aliases.size() == ir::kAllOperatorKinds.size() && renaming.invert(renamed) == demo &&
                  synth::make_op_renaming(seed).apply(demo) == renamed;
        for (const auto& [name, alias] : renaming.forward) ok = ok && !text::contains_word(renamed, name);
        if (!ok) ++bijection_failures;

        const std::string shuffled = synth::shuffle_lines(demo, seed);
        auto x = text::split_lines(demo);
        auto y = text::split_lines(shuffled);
        std::sort(x.begin(), x.end());
        std::sort(y.begin(), y.end());
        if (x != y || shuffled != synth::shuffle_lines(demo, seed)) ++multiset_failures;
    }
    c.expect(bijection_failures == 0, std::to_string(bijection_failures) + " random_ops round-trip failures");
    c.expect(multiset_failures == 0, std::to_string(multiset_failures) + " shuffled multiset failures");

    DistilledWorld w;
    const auto ds = eval::load_dataset((w.dir.path() / "data" / "gsm8k.jsonl").string(), "gsm8k",
                                       ir::TaskKind::MathNumeric);
    eval::PipelineInputs in;
    in.registry = &w.registry;
    in.trajectories_dir = w.trajectories;
    in.priors = &w.priors;
    in.dataset = &ds;
    in.engine = {&w.gw, &w.world.sandbox(), testing::kTestSampling, {}};
    in.parallelism = 4;
    const auto& target = w.registry.at("gsm8k");
    const auto zero_shot = eval::run_pipeline(target, synth::default_k(target.task_kind),
                                              {synth::InterventionMode::ZeroShot, 0}, in);
    c.expect(zero_shot.pool.demos.empty(), "zero_shot left demonstrations in the pool");
    const auto rows = eval::demo_sweep({0}, [&](std::size_t k) { return eval::run_pipeline(target, k, {}, in); });
    c.expect(rows.size() == 1 && rows[0].error.empty(), "k=0 sweep row failed");
    if (rows.size() == 1) {
        c.expect(rows[0].accuracy == zero_shot.report.accuracy, "k=0 accuracy differs from zero_shot");
        c.expect(rows[0].workflow_hash == sha256_hex(zero_shot.synthesis.dsl), "k=0 workflow differs from zero_shot");
    }
    c.note("100 demo texts; zero_shot == k=0 row");
}

void cost_conservation(Check& c) {
    TempDir dir{"acceptance-cost"};
    FixtureWorld world(dir.path());
    world.record_pipeline();
    const fs::path fixtures = dir.path() / "fixtures" / "llm";
    const fs::path replay = dir.path() / "replay";
    if (!replay_pipeline(world, replay, 4, c)) return;

    std::size_t runs = 0;
    for (const auto& e : fs::recursive_directory_iterator(dir.path())) {
        if (e.path().extension() != ".jsonl" || e.path().string().find("/runs/") == std::string::npos) continue;
        ++runs;
        gateway::CostLedger ledger(kPricing);
        gateway::Money by_node;
        gateway::Money by_fixture;
        gateway::Money by_result;
        for (const auto& r : exec::load_run(e.path().string())) {
            ledger.merge(r.ledger(kPricing));
            by_result += r.cost;
            for (const auto& n : r.node_trace) {
                by_node += n.cost;
                for (const auto& ch : n.charges) {
                    const auto fx = nlohmann::json::parse(text::read_file((fixtures / (ch.fingerprint + ".json")).string()));
                    by_fixture += kPricing.cost(fx.at("tokens_in").get<std::int64_t>(),
                                                fx.at("tokens_out").get<std::int64_t>());
                }
            }
        }
        const auto summary =
            nlohmann::json::parse(text::read_file((e.path().parent_path() / "summary.json").string()));
        const std::string name = fs::relative(e.path(), dir.path()).string();
        c.expect(ledger.total() == by_node, name + ": ledger != sum of node costs");
        c.expect(ledger.total() == by_fixture, name + ": ledger != sum of fixture-declared costs");
        c.expect(ledger.total() == by_result, name + ": ledger != sum of instance costs");
        if (e.path().filename() == "replay.jsonl")
            c.expect(summary.at("cost_nanos").get<std::int64_t>() == ledger.total().nanos(),
                     name + ": summary total differs");
    }
    c.expect(runs >= 2 * FixtureWorld::task_ids().size(), "expected recorded and replayed runs for every task");
    c.note(std::to_string(runs) + " run files, exact in nano-dollars");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
        {"selection oracle: contrastive triplet matches brute force", selection_oracle},
        {"break-even: n* in [5.000, 5.002]; totals agree at n* for 1000 inputs", break_even_reproduction},
        {"leave-one-out: no target sentinel in any target's meta-prompt", loo_disjointness},
        {"corpus: 7 workflows parse, validate and round-trip byte-identically", corpus_conformance},
        {"replay determinism: parallelism 1 vs 8 byte-identical, offline, < 60 s", replay_determinism},
        {"contract enforcement: one contract finding, one guard finding", contract_enforcement},
        {"ensemble voting: brute-force majority and permutation invariance", ensemble_voting},
        {"ablation transforms: random_ops bijection, shuffled multiset, zero_shot == k=0", ablation_transforms},
        {"cost conservation: ledger == node costs == fixture-declared costs", cost_conservation},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        try {
            criteria[i].second(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("threw: ") + e.what());
        }
        std::cout << (c.ok() ? "PASS" : "FAIL") << "  [" << (i + 1) << "] " << criteria[i].first << "  ("
                  << c.summary() << ")\n";
        failed += c.ok() ? 0 : 1;
    }
    std::cout << (failed ? "FAILED: " + std::to_string(failed) + " of " : "ALL PASSED: ")
              << criteria.size() << " criteria\n";
    return failed ? 1 : 0;
}
