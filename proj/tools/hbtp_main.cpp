#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hbtp/bench.hpp"
#include "hbtp/domain_parser.hpp"
#include "hbtp/feedback.hpp"
#include "hbtp/oracle_search.hpp"
#include "hbtp/provider.hpp"
#include "hbtp/run_record.hpp"
#include "hbtp/simulate.hpp"
#include "hbtp/util.hpp"

namespace {

using namespace hbtp;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct ProviderArgs {
    std::string kind = "oracle";
    double correct_rate = 1.0;
    double error_rate = 0.0;
    uint64_t seed = 0;
    std::string endpoint, model, key, replay;

    void attach(CLI::App* cmd) {
        cmd->add_option("--provider", kind, "oracle, mock, or llm")
            ->check(CLI::IsMember({"oracle", "mock", "llm"}));
        cmd->add_option("--correct-rate", correct_rate, "mock: keep probability per action");
        cmd->add_option("--error-rate", error_rate, "mock: injected fraction of the path");
        cmd->add_option("--seed", seed, "mock perturbation seed");
        cmd->add_option("--llm-endpoint", endpoint, "overrides HBTP_LLM_ENDPOINT");
        cmd->add_option("--llm-model", model, "overrides HBTP_LLM_MODEL");
        cmd->add_option("--llm-key", key, "overrides HBTP_LLM_KEY");
        cmd->add_option("--llm-replay", replay, "fixture replay file instead of HTTP");
    }

    ProviderConfig config() const {
        ProviderConfig c;
        if (kind == "oracle") c.kind = ProviderConfig::Oracle;
        if (kind == "mock") c.kind = ProviderConfig::Mock;
        if (kind == "llm") c.kind = ProviderConfig::LiveLlm;
        c.correct_rate = correct_rate;
        c.error_rate = error_rate;
        c.seed = seed;
        c.llm = LlmConfig::from_env();
        if (!endpoint.empty()) c.llm.endpoint = endpoint;
        if (!model.empty()) c.llm.model = model;
        if (!key.empty()) c.llm.api_key = key;
        c.llm.replay_file = replay;
        return c;
    }
};

int run(int argc, char** argv) {
    CLI::App app{"Behavior-tree planning toolkit: heuristic backward expansion with "
                 "reasoning-guided pruning and reflective feedback"};
    app.require_subcommand(1);

    // --- plan ---
    auto* plan_cmd = app.add_subcommand("plan", "plan a BT for a task");
    std::string domain_path, task_path, algo_name = "hbtp-s", out_path = "bt.json";
    std::string record_path, rounds_path;
    double alpha = 1e6;
    int64_t budget_ms = 5000;
    int max_feedback = 3;
    size_t k_summary = 3;
    bool no_prune = false;
    ProviderArgs plan_provider;
    plan_cmd->add_option("--domain", domain_path)->required();
    plan_cmd->add_option("--task", task_path)->required();
    plan_cmd->add_option("--algo", algo_name, "btexp, obtea, hbtp-o, hbtp-s")
        ->check(CLI::IsMember({"btexp", "obtea", "hbtp-o", "hbtp-s"}));
    plan_cmd->add_option("--alpha", alpha, "discount divisor for hbtp-o");
    plan_cmd->add_option("--budget-ms", budget_ms, "planning budget per round");
    plan_cmd->add_option("--max-feedback", max_feedback, "feedback rounds (0 = none)");
    plan_cmd->add_option("--k-summary", k_summary, "longest chains per feedback payload");
    plan_cmd->add_flag("--no-prune", no_prune, "plan in the full action space");
    plan_cmd->add_option("--out", out_path, "BT output file");
    plan_cmd->add_option("--record", record_path, "run-record JSON output file");
    plan_cmd->add_option("--rounds", rounds_path, "feedback round-log JSON output file");
    plan_provider.attach(plan_cmd);

    // --- exec ---
    auto* exec_cmd = app.add_subcommand("exec", "execute a planned BT against a task");
    std::string exec_domain, exec_task, bt_path;
    exec_cmd->add_option("--domain", exec_domain)->required();
    exec_cmd->add_option("--task", exec_task)->required();
    exec_cmd->add_option("--bt", bt_path)->required();

    // --- gen ---
    auto* gen_cmd = app.add_subcommand("gen", "generate a task dataset");
    std::string gen_domain, gen_task, gen_out = "dataset.jsonl", difficulty = "easy";
    size_t gen_n = 10;
    uint64_t gen_seed = 0;
    gen_cmd->add_option("--domain", gen_domain)->required();
    gen_cmd->add_option("--task", gen_task, "task file providing the initial state")->required();
    gen_cmd->add_option("--n", gen_n);
    gen_cmd->add_option("--difficulty", difficulty)
        ->check(CLI::IsMember({"easy", "medium", "hard"}));
    gen_cmd->add_option("--seed", gen_seed);
    gen_cmd->add_option("--out", gen_out);

    // --- bench ---
    auto* bench_cmd = app.add_subcommand("bench", "run a benchmark suite");
    std::string bench_domain, dataset_path, out_dir = ".";
    std::string algos_arg = "btexp,obtea,hbtp-o,hbtp-s";
    int repetitions = 1;
    int workers = 0;
    bool serial = false, deterministic = false, bench_no_prune = false, no_provider = false;
    bool sweep = false;
    std::string sweep_correct = "0.2,0.4,0.6,0.8,1.0", sweep_error = "0,0.2,0.4";
    int64_t bench_budget = 5000;
    int bench_feedback = 3;
    ProviderArgs bench_provider;
    bench_cmd->add_option("--domain", bench_domain)->required();
    bench_cmd->add_option("--dataset", dataset_path)->required();
    bench_cmd->add_option("--algo", algos_arg, "comma-separated algorithm list");
    bench_cmd->add_option("--budget-ms", bench_budget);
    bench_cmd->add_option("--max-feedback", bench_feedback);
    bench_cmd->add_option("--repetitions", repetitions);
    bench_cmd->add_option("--workers", workers, "0 = all cores");
    bench_cmd->add_flag("--serial", serial, "single worker (clean timing)");
    bench_cmd->add_flag("--deterministic", deterministic, "zero wall-clock fields in outputs");
    bench_cmd->add_flag("--no-prune", bench_no_prune);
    bench_cmd->add_flag("--no-provider", no_provider, "baselines only, full space");
    bench_cmd->add_flag("--sweep", sweep,
                        "error-tolerance sweep over perturbed oracle paths (writes sweep.csv)");
    bench_cmd->add_option("--correct-rates", sweep_correct, "sweep: comma-separated keep rates");
    bench_cmd->add_option("--error-rates", sweep_error, "sweep: comma-separated error rates");
    bench_cmd->add_option("--out", out_dir, "output directory");
    bench_provider.attach(bench_cmd);

    // --- oracle ---
    auto* oracle_cmd = app.add_subcommand("oracle", "print the optimal path for a task");
    std::string oracle_domain, oracle_task;
    oracle_cmd->add_option("--domain", oracle_domain)->required();
    oracle_cmd->add_option("--task", oracle_task)->required();

    CLI11_PARSE(app, argc, argv);

    if (plan_cmd->parsed()) {
        auto domain = parse_domain_file(domain_path);
        auto task = parse_task_file(task_path, domain);
        PlannerOptions popts;
        popts.algo = *parse_algo(algo_name);
        popts.alpha = alpha;
        popts.budget = std::chrono::milliseconds(budget_ms);

        auto cfg = plan_provider.config();
        auto provider = make_provider(cfg);
        FeedbackOptions fopts;
        fopts.max_rounds = max_feedback;
        fopts.summary_k = k_summary;
        fopts.prune = !no_prune;
        auto fb = plan_with_feedback(domain, task, *provider, popts, fopts);

        write_file(out_path, serialize_bt(fb.result.tree, domain));
        if (!record_path.empty())
            write_file(record_path, run_record_json(fb.result, domain));
        if (!rounds_path.empty()) write_file(rounds_path, round_log_json(fb.rounds));
        std::cout << "outcome: " << to_string(fb.result.outcome)
                  << "  cost: " << fb.result.total_cost
                  << "  explored: " << fb.result.explored_count
                  << "  rounds: " << fb.rounds.size() - 1 << "\n"
                  << render_bt(fb.result.tree, domain);
        return fb.result.outcome == PlanOutcome::Solved ? 0 : 2;
    }

    if (exec_cmd->parsed()) {
        auto domain = parse_domain_file(exec_domain);
        auto task = parse_task_file(exec_task, domain);
        auto tree = deserialize_bt(read_file(bt_path), domain);
        auto trace = simulate_execution(tree, domain, task.s0);
        std::cout << (trace.success ? "success" : "failure") << " after " << trace.steps
                  << " steps\n";
        for (ActionId a : trace.applied) std::cout << "  " << domain.action(a).name << "\n";
        if (!trace.success) std::cout << "reason: " << trace.failure_reason << "\n";
        return trace.success ? 0 : 2;
    }

    if (gen_cmd->parsed()) {
        auto domain = parse_domain_file(gen_domain);
        auto task = parse_task_file(gen_task, domain);
        DatasetOptions opts;
        opts.n = gen_n;
        opts.difficulty = *parse_difficulty(difficulty);
        opts.seed = gen_seed;
        auto records = generate_dataset(domain, task.s0, opts);
        write_file(gen_out, dataset_to_jsonl(records, domain));
        std::cout << "wrote " << records.size() << " tasks to " << gen_out << "\n";
        return 0;
    }

    if (bench_cmd->parsed()) {
        auto domain = parse_domain_file(bench_domain);
        auto tasks = dataset_from_jsonl(read_file(dataset_path), domain);
        BenchOptions opts;
        opts.algorithms.clear();
        for (const auto& name : split(algos_arg, ',')) {
            auto algo = parse_algo(name);
            if (!algo) throw CLI::ValidationError("--algo", "unknown algorithm " + name);
            opts.algorithms.push_back(*algo);
        }
        opts.provider = bench_provider.config();
        opts.use_provider = !no_provider;
        opts.prune = !bench_no_prune;
        opts.budget = std::chrono::milliseconds(bench_budget);
        opts.max_feedback = bench_feedback;
        opts.repetitions = repetitions;
        opts.workers = serial ? 1 : workers;
        opts.deterministic = deterministic;
        if (sweep) {
            std::vector<double> correct, error;
            for (const auto& v : split(sweep_correct, ',')) correct.push_back(std::stod(v));
            for (const auto& v : split(sweep_error, ',')) error.push_back(std::stod(v));
            auto cells = error_tolerance_sweep(domain, tasks, opts.algorithms, correct, error,
                                               bench_provider.seed, opts);
            write_file(out_dir + "/sweep.csv", sweep_csv(cells));
            std::cout << sweep_csv(cells);
            return 0;
        }
        auto report = run_benchmark(domain, tasks, opts);
        write_file(out_dir + "/report.csv", report_csv(report));
        write_file(out_dir + "/records.csv", records_csv(report));
        write_file(out_dir + "/records.jsonl", records_jsonl(report));
        std::cout << report_csv(report);
        return 0;
    }

    if (oracle_cmd->parsed()) {
        auto domain = parse_domain_file(oracle_domain);
        auto task = parse_task_file(oracle_task, domain);
        OracleProvider provider;
        auto reasoning = provider.query(domain, task, nullptr);
        auto path = resolve_path(reasoning.path, domain);
        std::cout << "p*:";
        for (ActionId a : path) std::cout << " " << domain.action(a).name;
        std::cout << "\ncost: " << path_cost(path, domain) << "\nQ(p*):";
        for (const auto& q : reasoning.relevant_predicates) std::cout << " " << q;
        std::cout << "\nO(p*):";
        for (const auto& o : reasoning.relevant_objects) std::cout << " " << o;
        auto space = prune_action_space(domain, reasoning);
        std::cout << "\n|A*|: " << space.actions.size() << " of " << domain.actions().size()
                  << "\n";
        return 0;
    }

    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "{\"error\": " << nlohmann::json(std::string(e.what())).dump() << "}\n";
        return 1;
    }
}
