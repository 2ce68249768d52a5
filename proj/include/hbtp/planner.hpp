#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hbtp/bt.hpp"
#include "hbtp/domain.hpp"
#include "hbtp/heuristics.hpp"

namespace hbtp {

enum class PlannerAlgo { BtExpansion, Obtea, HbtpOptimal, HbtpSatisficing };
enum class PlanOutcome { Solved, Timeout, Exhausted };

const char* to_string(PlannerAlgo a);
const char* to_string(PlanOutcome o);
std::optional<PlannerAlgo> parse_algo(std::string_view name);

struct TraceNode {
    Condition condition;
    int32_t parent = -1;      // index into the trace, -1 for the goal
    ActionId via_action = 0;  // action this condition was regressed through
    double h = 0.0;
    double true_cost = 0.0;   // cost of the parent chain under D
    int32_t pop_seq = -1;     // expansion order, -1 if never expanded
};

struct PlanResult {
    BTNode tree;
    PlanOutcome outcome = PlanOutcome::Exhausted;
    size_t explored_count = 0;  // number of expanded conditions
    double total_cost = 0.0;    // true cost of the s0-reaching chain (Solved only)
    std::chrono::microseconds elapsed{0};
    std::vector<ActionId> solution_path;  // forward execution order (Solved only)
    std::vector<TraceNode> trace;
    size_t feedback_rounds = 0;
};

struct PlannerOptions {
    PlannerAlgo algo = PlannerAlgo::HbtpSatisficing;
    double alpha = 1e6;
    std::chrono::milliseconds budget{5000};
    RelevanceGuard guard = RelevanceGuard::Standard;
    // Generated-node safety cap; exceeding it reports Timeout.
    size_t node_cap = 2'000'000;
    // Pruned action space; empty means the full grounded set.
    std::vector<ActionId> action_space;
};

// Backward expansion from the goal. Conditions are explored in ascending
// heuristic cost (FIFO for BtExpansion); each regressed condition records a
// (condition, action) sequence, and popped conditions are appended to the
// fallback root in expansion order until one is satisfied by s0.
PlanResult plan(const Domain& domain, const Task& task,
                std::span<const ActionId> heuristic_path, const PlannerOptions& options);

struct HbtpMode {
    bool satisficing = true;
    double alpha = 1e6;  // used by the optimal variant

    static HbtpMode optimal_alpha(double a) { return {false, a}; }
    static HbtpMode satisficing_mode() { return {true, 1e6}; }
};

PlanResult hbtp(const Domain& domain, const Task& task, const HeuristicPath& path, HbtpMode mode,
                std::chrono::milliseconds budget = std::chrono::milliseconds(5000));
PlanResult obtea(const Domain& domain, const Task& task,
                 std::chrono::milliseconds budget = std::chrono::milliseconds(5000));
PlanResult bt_expansion(const Domain& domain, const Task& task,
                        std::chrono::milliseconds budget = std::chrono::milliseconds(5000));

// Disjunctive goals: each disjunct is planned independently and the sub-trees
// are joined under one fallback, solved-and-cheapest first, so execution
// prefers the lowest-cost satisfiable disjunct.
struct DnfResult {
    BTNode tree;
    std::vector<PlanResult> disjuncts;  // in input order
};

DnfResult plan_dnf(const Domain& domain, const State& s0, std::span<const Condition> goals,
                   std::span<const ActionId> heuristic_path, const PlannerOptions& options);

// Forward action sequence of the trace chain ending at `leaf`.
std::vector<ActionId> chain_actions(const std::vector<TraceNode>& trace, size_t leaf);

}  // namespace hbtp
