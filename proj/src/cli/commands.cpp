// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/cli/commands.hpp"

#include <chrono>
#include <filesystem>
#include <iomanip>
#include <ostream>

#include <CLI11.hpp>

#include "wfsynth/cli/workspace.hpp"
#include "wfsynth/common/text.hpp"
#include "wfsynth/distill/distiller.hpp"
#include "wfsynth/eval/cost_model.hpp"
#include "wfsynth/eval/sweep.hpp"
#include "wfsynth/ir/parser.hpp"
#include "wfsynth/ir/validator.hpp"

namespace wfsynth::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
    std::string config = "wfsynth.json";
    std::string mode;
    std::string target;
    std::vector<std::size_t> k;
    double gamma = 0.6;
    std::string intervention = "none";
    std::uint64_t seed = 0;
    int parallelism = 1;
    std::string data;
    std::string out;
    bool drop_heuristics = false;
    bool drop_contracts = false;
    std::string workflow;
    std::string run;
    // cost
    double c_search = 22.50;
    double c_synth = 0.004;
    double c_source = 112.50;
    std::int64_t n = 9;
    // check
    std::string file;
};

/// Everything a pipeline command needs, built once from the options.
struct Session {
    Workspace ws;
    synth::TaskRegistry registry;
    std::unique_ptr<gateway::Gateway> gateway;
    std::shared_ptr<runtime::Sandbox> sandbox;

    exec::EngineContext engine() const {
        exec::EngineContext ctx;
        ctx.gateway = gateway.get();
        ctx.sandbox = sandbox.get();
        ctx.sampling = ws.gateway.sampling(ws.operator_temperature);
        ctx.limits = ws.limits;
        return ctx;
    }
};

Workspace load_workspace(const Options& o) {
    Workspace ws = Workspace::load(o.config);
    if (!o.mode.empty()) ws.gateway.mode = gateway::mode_from_string(o.mode);
    if (!o.out.empty()) ws.output_root = fs::absolute(o.out).lexically_normal().string();
    return ws;
}

Session open_session(const Options& o, const Backends& b) {
    Session s{load_workspace(o), {}, nullptr, nullptr};
    s.registry = synth::TaskRegistry::load(s.ws.tasks_path);
    s.gateway = s.ws.make_gateway(b.transport);
    s.sandbox = s.ws.make_sandbox(b.sandbox_runner);
    return s;
}

const synth::TaskSpec& require_target(const Options& o, const Session& s) {
    if (o.target.empty()) throw ConfigError("--target is required");
    return s.registry.at(o.target);
}

std::size_t pick_k(const Options& o, const synth::TaskSpec& t) {
    if (o.k.size() > 1) throw ConfigError("--k takes a single value for this command");
    return o.k.empty() ? synth::default_k(t.task_kind) : o.k.front();
}

distill::PriorSet load_priors(const Session& s, const Options& o) {
    const std::string path = s.ws.priors_path();
    if (!fs::exists(path)) {
        if (o.drop_heuristics && o.drop_contracts) return {};
        throw DataError("priors not found: " + path + " (run `wfsynth distill` first)");
    }
    try {
        return distill::PriorSet::from_json(json::parse(text::read_file(path)));
    } catch (const json::parse_error& e) {
        throw DataError(path + ": " + e.what());
    }
}

eval::Dataset load_target_dataset(const Options& o, const Session& s, const synth::TaskSpec& t) {
    const std::string path = o.data.empty() ? s.ws.dataset_path(t.task_id) : o.data;
    return eval::load_dataset(path, t.task_id, t.task_kind);
}

std::string fmt_accuracy(const std::optional<double>& a) {
    if (!a) return "n/a";
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << *a;
    return os.str();
}

void print_warnings(std::ostream& out, const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) out << "  warning: " << w << "\n";
}

// ---------------------------------------------------------------------------

int cmd_distill(const Options& o, const Backends& b, std::ostream& out) {
    Session s = open_session(o, b);
    distill::DistillConfig cfg;
    cfg.gamma = o.gamma;
    cfg.check();
    if (!fs::is_directory(s.ws.trajectories_dir))
        throw DataError("trajectory directory not found: " + s.ws.trajectories_dir);
    std::vector<std::string> sources;
    for (const auto& t : s.registry.tasks()) {
        if (t.task_id == o.target) continue;
        if (fs::exists(distill::trajectory_path(s.ws.trajectories_dir, t.task_id))) sources.push_back(t.task_id);
    }
    if (sources.empty()) throw DataError("no trajectory stores under " + s.ws.trajectories_dir);

    std::vector<distill::TripletSummary> summaries;
    const auto priors = distill::distill_tasks(sources, s.ws.trajectories_dir, cfg, *s.gateway,
                                               s.ws.gateway.sampling(0.0), &summaries);
    text::write_file(s.ws.priors_path(), priors.to_json().dump(2) + "\n");

    out << "gamma=" << cfg.gamma << "\n";
    for (const auto& sm : summaries) {
        out << sm.task_id << ": records=" << sm.records << " best=" << sm.best << " low=";
        if (sm.low) out << *sm.low;
        else out << "-";
        out << " zero=";
        if (sm.zero) out << *sm.zero;
        else out << "-";
        out << " heuristics=" << sm.heuristics << " contracts=" << sm.contracts << "\n";
    }
    out << "priors: " << priors.entries.size() << " entries -> " << s.ws.priors_path() << "\n";
    return kExitOk;
}

int cmd_synthesize(const Options& o, const Backends& b, std::ostream& out) {
    Session s = open_session(o, b);
    const auto& target = require_target(o, s);
    const std::size_t k = pick_k(o, target);
    const synth::Intervention iv{synth::intervention_from_string(o.intervention), o.seed};
    const auto priors = load_priors(s, o);

    const auto catalog = synth::build_demo_catalog(s.registry, s.ws.trajectories_dir, target.task_id);
    auto pool = synth::apply_intervention(synth::build_demo_pool(target, catalog, k), iv, target, catalog);
    const auto prompt =
        synth::compose_meta_prompt(target, pool, priors, s.registry, {o.drop_heuristics, o.drop_contracts});
    const auto result = synth::synthesize_workflow(target, prompt, *s.gateway, s.ws.gateway.sampling(0.0));
    const std::string path = synth::write_synthesis(s.ws.out_dir(), result,
                                                    {target.task_id, iv, k, o.drop_heuristics, o.drop_contracts});
    out << "wrote " << path << "\n";
    out << "nodes: " << result.program.nodes().size() << " (unrolled " << result.program.unrolled_node_count()
        << ")\n";
    out << "warnings: " << result.warnings.size() << "\n";
    print_warnings(out, result.warnings);
    return kExitOk;
}

ir::WorkflowProgram load_workflow_for(const Options& o, const Workspace& ws, const std::string& target,
                                      std::string& path) {
    if (!o.workflow.empty()) {
        path = o.workflow;
    } else {
        const fs::path meta = fs::path(ws.out_dir()) / target / "synthesis_meta.json";
        if (!fs::exists(meta)) throw DataError("no synthesized workflow for '" + target + "': " + meta.string());
        const json j = json::parse(text::read_file(meta.string()));
        path = (fs::path(ws.out_dir()) / target / (j.at("workflow").get<std::string>() + ".wf")).string();
    }
    const std::string source = text::read_file(path);
    try {
        return ir::parse_workflow(source);
    } catch (const Error& e) {
        throw synth::SynthesisParseError(path + ": " + e.what(), source);
    }
}

int cmd_run(const Options& o, const Backends& b, std::ostream& out) {
    Session s = open_session(o, b);
    const auto& target = require_target(o, s);
    std::string wf_path;
    const auto program = load_workflow_for(o, s.ws, target.task_id, wf_path);
    const auto dataset = load_target_dataset(o, s, target);
    for (const auto& e : dataset.errors) out << "data error: " << e.message << "\n";

    const auto start = std::chrono::steady_clock::now();
    const auto run = exec::execute_dataset(program, dataset.instances, s.engine(), o.parallelism);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool replay = s.ws.gateway.mode == gateway::Mode::Replay;
    const std::string path = exec::write_run(s.ws.runs_dir(), target.task_id, program.name, s.ws.run_name(), run,
                                             replay ? std::nullopt : std::optional<double>(wall));
    std::size_t failed = 0;
    for (const auto& r : run.results) failed += r.error_category ? 1 : 0;
    out << "wrote " << path << "\n";
    out << "instances: " << run.results.size() << " failed: " << failed << " cost: $" << run.ledger.total().str()
        << "\n";
    return kExitOk;
}

std::string latest_run(const Workspace& ws, const std::string& target, const std::string& workflow) {
    const fs::path dir = fs::path(ws.runs_dir()) / target / workflow;
    if (!fs::is_directory(dir)) throw DataError("no runs for '" + target + "': " + dir.string());
    std::vector<std::string> runs;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".jsonl") runs.push_back(e.path().string());
    if (runs.empty()) throw DataError("no run files in " + dir.string());
    std::sort(runs.begin(), runs.end());
    return runs.back();
}

void write_report(const Workspace& ws, const std::string& name, const eval::AccuracyReport& rep) {
    text::write_file((fs::path(ws.reports_dir()) / (name + ".json")).string(), rep.to_json().dump(2) + "\n");
}

void print_report(std::ostream& out, const eval::AccuracyReport& rep) {
    out << "accuracy: " << fmt_accuracy(rep.accuracy) << " (" << rep.correct << "/" << rep.attempted << ")"
        << " env-excluded: " << fmt_accuracy(rep.accuracy_env_excluded) << "\n";
    out << "errors: model=" << rep.errors.at("model") << " workflow=" << rep.errors.at("workflow")
        << " env=" << rep.errors.at("env") << "\n";
    if (rep.no_data()) out << "no data\n";
    if (!rep.missing_ids.empty()) out << "missing: " << rep.missing_ids.size() << "\n";
    if (!rep.data_errors.empty()) out << "data errors: " << rep.data_errors.size() << "\n";
}

int cmd_eval(const Options& o, const Backends& b, std::ostream& out) {
    Session s = open_session(o, b);
    const auto& target = require_target(o, s);
    std::string run_path = o.run;
    std::string workflow;
    if (run_path.empty()) {
        std::string wf_path;
        workflow = load_workflow_for(o, s.ws, target.task_id, wf_path).name;
        run_path = latest_run(s.ws, target.task_id, workflow);
    } else {
        workflow = fs::path(run_path).parent_path().filename().string();
    }
    const auto results = exec::load_run(run_path);
    const auto dataset = load_target_dataset(o, s, target);
    eval::ScoreOptions opts;
    opts.f1_threshold = s.ws.f1_threshold;
    opts.sandbox_timeout_s = s.ws.sandbox.timeout_s;
    const auto rep = eval::evaluate(results, dataset, workflow, s.sandbox.get(), opts);
    write_report(s.ws, target.task_id, rep);
    out << "run: " << run_path << "\n";
    print_report(out, rep);
    return kExitOk;
}

eval::PipelineInputs pipeline_inputs(const Session& s, const Options& o, const distill::PriorSet& priors,
                                     const eval::Dataset& dataset) {
    eval::PipelineInputs in;
    in.registry = &s.registry;
    in.trajectories_dir = s.ws.trajectories_dir;
    in.priors = &priors;
    in.dataset = &dataset;
    in.engine = s.engine();
    in.parallelism = o.parallelism;
    in.prompt = {o.drop_heuristics, o.drop_contracts};
    in.scoring.f1_threshold = s.ws.f1_threshold;
    in.scoring.sandbox_timeout_s = s.ws.sandbox.timeout_s;
    return in;
}

int cmd_ablate(const Options& o, const Backends& b, std::ostream& out) {
    Session s = open_session(o, b);
    const auto& target = require_target(o, s);
    const std::size_t k = pick_k(o, target);
    const synth::Intervention iv{synth::intervention_from_string(o.intervention), o.seed};
    const auto priors = load_priors(s, o);
    const auto dataset = load_target_dataset(o, s, target);

    std::string label = to_string(iv.mode);
    if (iv.mode == synth::InterventionMode::Shuffled || iv.mode == synth::InterventionMode::RandomOps)
        label += "-s" + std::to_string(iv.seed);
    if (o.drop_heuristics) label += "-noH";
    if (o.drop_contracts) label += "-noC";

    const auto outcome = eval::run_pipeline(target, k, iv, pipeline_inputs(s, o, priors, dataset));
    const fs::path root = fs::path(s.ws.output_root) / "ablations" / label;
    const std::string wf = synth::write_synthesis(root.string(), outcome.synthesis,
                                                  {target.task_id, iv, k, o.drop_heuristics, o.drop_contracts});
    exec::write_run((root / "runs").string(), target.task_id, outcome.synthesis.program.name, s.ws.run_name(),
                    outcome.run, std::nullopt);
    write_report(s.ws, target.task_id + "." + label, outcome.report);
    out << "ablation: " << label << "\n";
    out << "wrote " << wf << "\n";
    print_warnings(out, outcome.synthesis.warnings);
    print_report(out, outcome.report);
    return kExitOk;
}

int cmd_cost(const Options& o, std::ostream& out) {
    using gateway::Money;
    const eval::AmortizationInputs in{Money::from_dollars(o.c_search), Money::from_dollars(o.c_synth),
                                      Money::from_dollars(o.c_source), o.n};
    const auto totals = eval::amortized_cost(in);
    out << "n: " << in.n << "\n";
    out << "search_total: $" << totals.search_total.str() << "\n";
    out << "amortized_total: $" << totals.amortized_total.str() << "\n";
    json report = {{"c_search", in.c_search.str()},
                   {"c_synth", in.c_synth.str()},
                   {"c_source", in.c_source.str()},
                   {"n", in.n},
                   {"search_total", totals.search_total.str()},
                   {"amortized_total", totals.amortized_total.str()}};
    try {
        const long double n_star = eval::break_even(in);
        out << std::fixed << std::setprecision(2) << "break_even n*: " << static_cast<double>(n_star) << "\n";
        out << std::setprecision(6) << "break_even n* (exact): " << static_cast<double>(n_star) << "\n";
        report["break_even"] = static_cast<double>(n_star);
    } catch (const eval::DegenerateInputs& e) {
        out << "break_even n*: none (" << e.what() << ")\n";
        report["break_even"] = nullptr;
    }
    const fs::path path = fs::path(o.out.empty() ? "." : o.out) / "reports" / "cost.json";
    text::write_file(path.string(), report.dump(2) + "\n");
    out << "wrote " << path.string() << "\n";
    return kExitOk;
}

int cmd_demo_sweep(const Options& o, const Backends& b, std::ostream& out) {
    Session s = open_session(o, b);
    const auto& target = require_target(o, s);
    const std::vector<std::size_t> ks = o.k.empty() ? std::vector<std::size_t>{0, 1, 2, 4} : o.k;
    const synth::Intervention iv{synth::intervention_from_string(o.intervention), o.seed};
    const auto priors = load_priors(s, o);
    const auto dataset = load_target_dataset(o, s, target);
    const auto in = pipeline_inputs(s, o, priors, dataset);
    const auto rows = eval::demo_sweep(ks, [&](std::size_t k) { return eval::run_pipeline(target, k, iv, in); });

    const fs::path base = fs::path(s.ws.reports_dir()) / (target.task_id + ".sweep");
    text::write_file(base.string() + ".jsonl", eval::sweep_jsonl(rows));
    text::write_file(base.string() + ".csv", eval::sweep_csv(rows));
    for (const auto& r : rows) {
        out << "k=" << r.k << " accuracy=" << fmt_accuracy(r.accuracy);
        if (!r.error.empty()) out << " error=" << text::split_lines(r.error).front();
        out << "\n";
    }
    out << "wrote " << base.string() << ".jsonl\n";
    return kExitOk;
}

int cmd_check(const Options& o, std::ostream& out) {
    const auto program = ir::parse_workflow(text::read_file(o.file));
    const auto report = ir::validate_workflow(program);
    out << program.name << ": " << program.nodes().size() << " nodes, " << report.findings.size() << " findings\n";
    for (const auto& f : report.findings)
        out << "  [" << ir::to_string(f.category) << "] " << (f.node_id.empty() ? "" : f.node_id + ": ") << f.message
            << "\n";
    return report.ok() ? kExitOk : kExitSynthesis;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Backends& backends) {
    CLI::App app{"Amortized synthesis of LLM agent workflows", "wfsynth"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "Workspace config file")->capture_default_str();
        sub->add_option("--mode", o.mode, "Gateway mode: live, record or replay (overrides config)");
        sub->add_option("--out", o.out, "Output root (default: the config directory)");
    };
    auto synthesis = [&](CLI::App* sub) {
        sub->add_option("--target", o.target, "Target task id");
        sub->add_option("--k", o.k, "Demonstration count (default depends on task kind)");
        sub->add_option("--intervention", o.intervention, "none, zero_shot, shuffled, cross_domain or random_ops")
            ->capture_default_str();
        sub->add_option("--seed", o.seed, "Seed for shuffled and random_ops")->capture_default_str();
        sub->add_flag("--drop-heuristics", o.drop_heuristics, "Leave the heuristics section empty");
        sub->add_flag("--drop-contracts", o.drop_contracts, "Leave the contracts section empty");
    };
    auto execution = [&](CLI::App* sub) {
        sub->add_option("--parallelism", o.parallelism, "Concurrent instances")->capture_default_str();
        sub->add_option("--data", o.data, "Dataset file (default: <data_dir>/<target>.jsonl)");
    };

    auto* distill = app.add_subcommand("distill", "Distil heuristics and contracts from trajectories");
    common(distill);
    distill->add_option("--gamma", o.gamma, "Low-band threshold")->capture_default_str();
    distill->add_option("--target", o.target, "Task to leave out of distillation");

    auto* synthesize = app.add_subcommand("synthesize", "Synthesize a workflow for a target task");
    common(synthesize);
    synthesis(synthesize);

    auto* run = app.add_subcommand("run", "Execute a workflow over the target dataset");
    common(run);
    execution(run);
    run->add_option("--target", o.target, "Target task id");
    run->add_option("--workflow", o.workflow, "Workflow file (default: the synthesized one)");

    auto* evalc = app.add_subcommand("eval", "Score a run and write the accuracy report");
    common(evalc);
    evalc->add_option("--target", o.target, "Target task id");
    evalc->add_option("--data", o.data, "Dataset file (default: <data_dir>/<target>.jsonl)");
    evalc->add_option("--workflow", o.workflow, "Workflow file (default: the synthesized one)");
    evalc->add_option("--run", o.run, "Run file (default: latest run of the workflow)");

    auto* ablate = app.add_subcommand("ablate", "Synthesize, run and score under an intervention");
    common(ablate);
    synthesis(ablate);
    execution(ablate);

    auto* cost = app.add_subcommand("cost", "Search versus amortized cost and break-even task count");
    cost->add_option("--c-search", o.c_search, "Search cost per task ($)")->capture_default_str();
    cost->add_option("--c-synth", o.c_synth, "Synthesis cost per task ($)")->capture_default_str();
    cost->add_option("--c-source", o.c_source, "One-off prior construction cost ($)")->capture_default_str();
    cost->add_option("--n", o.n, "Number of tasks")->capture_default_str();
    cost->add_option("--out", o.out, "Output root for reports/cost.json (default: current directory)");

    auto* sweep = app.add_subcommand("demo-sweep", "Accuracy as a function of demonstration count");
    common(sweep);
    synthesis(sweep);
    execution(sweep);
    sweep->get_option("--k")->description("Demonstration counts to sweep (default 0,1,2,4)")->delimiter(',');

    auto* check = app.add_subcommand("check", "Parse and validate a workflow file");
    check->add_option("file", o.file, "Workflow file")->required();

    std::vector<std::string> argv_store{"wfsynth"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (o.parallelism < 1) throw ConfigError("--parallelism must be at least 1");
        if (*distill) return cmd_distill(o, backends, out);
        if (*synthesize) return cmd_synthesize(o, backends, out);
        if (*run) return cmd_run(o, backends, out);
        if (*evalc) return cmd_eval(o, backends, out);
        if (*ablate) return cmd_ablate(o, backends, out);
        if (*cost) return cmd_cost(o, out);
        if (*sweep) return cmd_demo_sweep(o, backends, out);
        if (*check) return cmd_check(o, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const eval::DegenerateInputs& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const synth::SynthesisParseError& e) {
        err << "synthesis error: " << e.what() << "\n";
        return kExitSynthesis;
    } catch (const ir::SyntaxError& e) {
        err << "synthesis error: " << e.what() << "\n";
        return kExitSynthesis;
    } catch (const ir::SchemaError& e) {
        err << "synthesis error: " << e.what() << "\n";
        return kExitSynthesis;
    } catch (const ir::CycleError& e) {
        err << "synthesis error: " << e.what() << "\n";
        return kExitSynthesis;
    } catch (const FormatError& e) {
        err << "synthesis error: " << e.what() << "\n";
        return kExitSynthesis;
    } catch (const std::exception& e) {
        err << "execution error: " << e.what() << "\n";
        return kExitExecution;
    }
    return kExitOk;
}

}  // namespace wfsynth::cli
