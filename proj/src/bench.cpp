#include "hbtp/bench.hpp"

#include <atomic>
#include <cstdio>
#include <functional>
#include <thread>

#include <json.hpp>

#include "hbtp/oracle_search.hpp"
#include "hbtp/util.hpp"

namespace hbtp {

namespace {

struct Job {
    size_t task_index;
    size_t algo_index;
    int rep;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

void run_jobs(size_t count, int workers, const std::function<void(size_t)>& body) {
    unsigned n = workers > 0 ? unsigned(workers) : std::thread::hardware_concurrency();
    if (n <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<size_t>(n, count); ++t)
        pool.emplace_back([&] {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= count) return;
                body(i);
            }
        });
    for (auto& t : pool) t.join();
}

}  // namespace

BenchReport run_benchmark(const Domain& domain, const std::vector<TaskRecord>& tasks,
                          const BenchOptions& options) {
    std::vector<Job> jobs;
    for (size_t ti = 0; ti < tasks.size(); ++ti)
        for (size_t ai = 0; ai < options.algorithms.size(); ++ai)
            for (int rep = 0; rep < options.repetitions; ++rep) jobs.push_back({ti, ai, rep});

    auto provider = options.use_provider ? make_provider(options.provider) : nullptr;

    BenchReport report;
    report.records.resize(jobs.size());

    run_jobs(jobs.size(), options.workers, [&](size_t i) {
        const Job& job = jobs[i];
        const TaskRecord& task = tasks[job.task_index];
        TaskRunRecord rec;
        rec.task_id = task.id;
        rec.algo = options.algorithms[job.algo_index];
        rec.rep = job.rep;

        PlannerOptions popts;
        popts.algo = rec.algo;
        popts.alpha = options.alpha;
        popts.budget = options.budget;

        try {
            if (provider) {
                FeedbackOptions fopts;
                fopts.max_rounds = options.max_feedback;
                fopts.summary_k = options.summary_k;
                fopts.prune = options.prune;
                auto fb = plan_with_feedback(domain, task.task, *provider, popts, fopts);
                rec.outcome = fb.result.outcome;
                rec.explored = fb.result.explored_count;
                rec.total_cost = fb.result.total_cost;
                rec.solved_round = fb.solved_round;
                rec.space_size =
                    options.prune ? fb.space.actions.size() : domain.actions().size();
                double ms = 0.0;
                for (const auto& r : fb.rounds) ms += r.elapsed_ms;
                rec.elapsed_ms = ms;
                if (rec.outcome == PlanOutcome::Solved)
                    rec.sim_ok =
                        simulate_execution(fb.result.tree, domain, task.task.s0).success;
            } else {
                auto result = plan(domain, task.task, {}, popts);
                rec.outcome = result.outcome;
                rec.explored = result.explored_count;
                rec.total_cost = result.total_cost;
                rec.solved_round = result.outcome == PlanOutcome::Solved ? 0 : -1;
                rec.space_size = domain.actions().size();
                rec.elapsed_ms = double(result.elapsed.count()) / 1000.0;
                if (rec.outcome == PlanOutcome::Solved)
                    rec.sim_ok = simulate_execution(result.tree, domain, task.task.s0).success;
            }
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
        if (options.deterministic) rec.elapsed_ms = 0.0;
        report.records[i] = std::move(rec);
    });

    // Aggregate per algorithm, in the order given.
    for (size_t ai = 0; ai < options.algorithms.size(); ++ai) {
        AlgoSummary row;
        row.algo = options.algorithms[ai];
        double explored = 0, time_ms = 0, cost = 0;
        size_t timeouts = 0, nf = 0, f1 = 0, f3 = 0;
        for (size_t i = 0; i < jobs.size(); ++i) {
            if (jobs[i].algo_index != ai) continue;
            const auto& rec = report.records[i];
            ++row.runs;
            explored += double(rec.explored);
            time_ms += rec.elapsed_ms;
            if (rec.outcome == PlanOutcome::Timeout) ++timeouts;
            if (rec.outcome == PlanOutcome::Solved) {
                ++row.solved;
                cost += rec.total_cost;
                if (rec.solved_round == 0) ++nf;
                if (rec.solved_round >= 0 && rec.solved_round <= 1) ++f1;
                if (rec.solved_round >= 0 && rec.solved_round <= 3) ++f3;
            }
        }
        if (row.runs) {
            row.mean_explored = explored / double(row.runs);
            row.mean_time_ms = time_ms / double(row.runs);
            row.timeout_rate = double(timeouts) / double(row.runs);
            row.sr_nf = double(nf) / double(row.runs);
            row.sr_1f = double(f1) / double(row.runs);
            row.sr_3f = double(f3) / double(row.runs);
        }
        if (row.solved) row.mean_cost = cost / double(row.solved);
        report.rows.push_back(row);
    }
    return report;
}

std::string report_csv(const BenchReport& report) {
    std::string out =
        "algo,runs,solved,timeout_rate,mean_explored,mean_time_ms,mean_cost,sr_nf,sr_1f,sr_3f\n";
    for (const auto& r : report.rows) {
        out += to_string(r.algo);
        out += "," + std::to_string(r.runs) + "," + std::to_string(r.solved);
        out += "," + fmt(r.timeout_rate) + "," + fmt(r.mean_explored) + "," +
               fmt(r.mean_time_ms) + "," + fmt(r.mean_cost) + "," + fmt(r.sr_nf) + "," +
               fmt(r.sr_1f) + "," + fmt(r.sr_3f) + "\n";
    }
    return out;
}

std::string records_csv(const BenchReport& report) {
    std::string out = "task,algo,rep,outcome,explored,time_ms,cost,space_size,solved_round,sim_ok\n";
    for (const auto& r : report.records) {
        out += r.task_id;
        out += std::string(",") + to_string(r.algo) + "," + std::to_string(r.rep) + "," +
               to_string(r.outcome) + "," + std::to_string(r.explored) + "," + fmt(r.elapsed_ms) +
               "," + fmt(r.total_cost) + "," + std::to_string(r.space_size) + "," +
               std::to_string(r.solved_round) + "," + (r.sim_ok ? "1" : "0") + "\n";
    }
    return out;
}

std::string records_jsonl(const BenchReport& report) {
    std::string out;
    for (const auto& r : report.records) {
        nlohmann::ordered_json j;
        j["task"] = r.task_id;
        j["algo"] = to_string(r.algo);
        j["rep"] = r.rep;
        j["outcome"] = to_string(r.outcome);
        j["explored"] = r.explored;
        j["cost"] = r.total_cost;
        j["time_ms"] = r.elapsed_ms;
        j["space_size"] = r.space_size;
        j["solved_round"] = r.solved_round;
        j["sim_ok"] = r.sim_ok;
        if (!r.error.empty()) j["error"] = r.error;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<SweepCell> error_tolerance_sweep(const Domain& domain,
                                             const std::vector<TaskRecord>& tasks,
                                             const std::vector<PlannerAlgo>& algorithms,
                                             const std::vector<double>& correct_rates,
                                             const std::vector<double>& error_rates,
                                             uint64_t seed, const BenchOptions& options) {
    // Oracle paths and injection pools are shared across cells.
    struct TaskData {
        std::vector<ActionId> optimal;
        std::vector<ActionId> pool;
        bool ok = false;
    };
    std::vector<TaskData> data(tasks.size());
    run_jobs(tasks.size(), options.workers, [&](size_t i) {
        try {
            auto p = oracle_plan(domain, tasks[i].task.s0, tasks[i].task.goal,
                                 options.provider.oracle_max_states);
            data[i].optimal = p.actions;
            std::vector<char> in_opt(domain.actions().size(), 0);
            for (ActionId a : p.actions) in_opt[a] = 1;
            for (size_t a = 0; a < domain.actions().size(); ++a)
                if (!in_opt[a]) data[i].pool.push_back(ActionId(a));
            data[i].ok = true;
        } catch (const std::exception&) {
        }
    });

    struct CellJob {
        size_t algo, cr, er;
    };
    std::vector<CellJob> cells;
    for (size_t a = 0; a < algorithms.size(); ++a)
        for (size_t e = 0; e < error_rates.size(); ++e)
            for (size_t c = 0; c < correct_rates.size(); ++c) cells.push_back({a, c, e});

    std::vector<SweepCell> out(cells.size());
    run_jobs(cells.size(), options.workers, [&](size_t ci) {
        const CellJob& cell = cells[ci];
        SweepCell result;
        result.algo = algorithms[cell.algo];
        result.correct_rate = correct_rates[cell.cr];
        result.error_rate = error_rates[cell.er];
        double explored = 0, cost = 0;
        size_t solved = 0;
        for (size_t ti = 0; ti < tasks.size(); ++ti) {
            if (!data[ti].ok) continue;
            uint64_t cell_seed = splitmix64(seed ^ (uint64_t(ti) << 24) ^
                                            (uint64_t(cell.cr) << 16) ^
                                            (uint64_t(cell.er) << 8));
            auto path = perturb_path(data[ti].optimal, result.correct_rate, result.error_rate,
                                     cell_seed, data[ti].pool);
            PlannerOptions popts;
            popts.algo = result.algo;
            popts.alpha = options.alpha;
            popts.budget = options.budget;
            auto r = plan(domain, tasks[ti].task, path, popts);
            ++result.runs;
            explored += double(r.explored_count);
            if (r.outcome == PlanOutcome::Solved) {
                ++solved;
                cost += r.total_cost;
            }
        }
        if (result.runs) {
            result.mean_explored = explored / double(result.runs);
            result.solve_rate = double(solved) / double(result.runs);
        }
        if (solved) result.mean_cost = cost / double(solved);
        out[ci] = result;
    });
    return out;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
    std::string out = "algo,correct_rate,error_rate,runs,mean_explored,mean_cost,solve_rate\n";
    for (const auto& c : cells) {
        out += to_string(c.algo);
        out += "," + fmt(c.correct_rate) + "," + fmt(c.error_rate) + "," +
               std::to_string(c.runs) + "," + fmt(c.mean_explored) + "," + fmt(c.mean_cost) +
               "," + fmt(c.solve_rate) + "\n";
    }
    return out;
}

}  // namespace hbtp
