#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "hbtp/dataset.hpp"
#include "hbtp/feedback.hpp"
#include "hbtp/planner.hpp"
#include "hbtp/provider.hpp"
#include "hbtp/simulate.hpp"

namespace hbtp {

struct BenchOptions {
    std::vector<PlannerAlgo> algorithms{PlannerAlgo::Obtea, PlannerAlgo::HbtpSatisficing};
    ProviderConfig provider;
    bool use_provider = true;  // false: no reasoning, full space, no feedback
    bool prune = true;
    std::chrono::milliseconds budget{5000};
    int repetitions = 1;
    int max_feedback = 3;
    size_t summary_k = 3;
    double alpha = 1e6;
    int workers = 0;            // 0 = hardware concurrency; 1 = serial
    bool deterministic = false; // zero wall-clock fields in all outputs
};

struct TaskRunRecord {
    std::string task_id;
    PlannerAlgo algo = PlannerAlgo::Obtea;
    int rep = 0;
    PlanOutcome outcome = PlanOutcome::Exhausted;
    size_t explored = 0;
    double total_cost = 0.0;
    double elapsed_ms = 0.0;  // planner time only, summed over feedback rounds
    int solved_round = -1;
    size_t space_size = 0;  // |A-| (or |A| when unpruned)
    bool sim_ok = false;    // simulate_execution verdict for solved runs
    std::string error;      // provider/oracle failure, empty otherwise
};

struct AlgoSummary {
    PlannerAlgo algo = PlannerAlgo::Obtea;
    size_t runs = 0;
    size_t solved = 0;
    double timeout_rate = 0.0;
    double mean_explored = 0.0;
    double mean_time_ms = 0.0;
    double mean_cost = 0.0;  // over solved runs
    double sr_nf = 0.0, sr_1f = 0.0, sr_3f = 0.0;
};

struct BenchReport {
    std::vector<AlgoSummary> rows;
    std::vector<TaskRunRecord> records;
};

// Runs each algorithm x task x repetition, verifying every solved tree by
// simulation. Tasks run on a bounded worker pool; records are merged in
// deterministic order regardless of scheduling. Per-task errors are recorded,
// never thrown.
BenchReport run_benchmark(const Domain& domain, const std::vector<TaskRecord>& tasks,
                          const BenchOptions& options);

std::string report_csv(const BenchReport& report);
std::string records_csv(const BenchReport& report);
std::string records_jsonl(const BenchReport& report);

// Error-tolerance sweep: perturbed oracle paths at each (correct_rate,
// error_rate) cell, no pruning, no feedback.
struct SweepCell {
    PlannerAlgo algo = PlannerAlgo::HbtpSatisficing;
    double correct_rate = 1.0;
    double error_rate = 0.0;
    size_t runs = 0;
    double mean_explored = 0.0;
    double mean_cost = 0.0;
    double solve_rate = 0.0;
};

std::vector<SweepCell> error_tolerance_sweep(const Domain& domain,
                                             const std::vector<TaskRecord>& tasks,
                                             const std::vector<PlannerAlgo>& algorithms,
                                             const std::vector<double>& correct_rates,
                                             const std::vector<double>& error_rates,
                                             uint64_t seed, const BenchOptions& options);

std::string sweep_csv(const std::vector<SweepCell>& cells);

}  // namespace hbtp
