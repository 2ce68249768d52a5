#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hbtp/planner.hpp"
#include "hbtp/provider.hpp"

namespace hbtp {

// Restricted action space built from reasoning output. Grows monotonically
// across feedback rounds.
struct PrunedSpace {
    std::vector<PredicateId> predicates;  // Q-
    std::vector<ObjectId> objects;        // O-
    std::vector<ActionId> actions;        // A- = valid groundings of Q- over O-, ascending
    int round = 0;
};

struct EmptySpace : std::runtime_error {
    explicit EmptySpace(const std::string& what) : std::runtime_error(what) {}
};

// Q- = Q_hat U Q(p_hat), O- = O_hat U O(p_hat), A- = (Q- x O-) & A.
// Unresolvable entries in the result are ignored (the grammar checker flags
// them upstream). Throws EmptySpace when A- is empty.
PrunedSpace prune_action_space(const Domain& domain, const ReasoningResult& result);

// Cumulative merge of a later round's result into an existing space.
PrunedSpace merge_pruned_space(const Domain& domain, const PrunedSpace& base,
                               const ReasoningResult& extra);

// The k longest distinct parent-chain action sequences of a failed run, in
// forward execution order. Ties resolve to earlier-generated chains.
std::vector<std::vector<ActionId>> summarize_bt(const std::vector<TraceNode>& trace, size_t k);

struct FeedbackOptions {
    int max_rounds = 3;       // 0 = no feedback
    size_t summary_k = 3;     // top-k longest chains per payload
    size_t max_missing = SIZE_MAX;  // alphabetical truncation of Q'/O' lists
    bool prune = true;        // false: full action space, heuristic path only
};

struct RoundLog {
    int round = 0;
    ReasoningResult reasoning;
    size_t q_size = 0, o_size = 0, a_size = 0;
    bool empty_space = false;
    PlanOutcome outcome = PlanOutcome::Exhausted;
    size_t explored = 0;
    double total_cost = 0.0;
    double elapsed_ms = 0.0;  // planner time for this round
    std::vector<std::vector<std::string>> summaries_sent;  // payload produced after this round
};

struct FeedbackResult {
    PlanResult result;           // last planning attempt (the solving one on success)
    std::vector<RoundLog> rounds;
    int solved_round = -1;       // -1 when never solved
    PrunedSpace space;           // final cumulative space
};

// Round 0 queries the provider, prunes, and plans inside A-. While rounds
// remain, Timeout/Exhausted/EmptySpace triggers a re-query carrying the BT
// summaries and the complement sets, the new result is merged into the
// space, and planning retries.
FeedbackResult plan_with_feedback(const Domain& domain, const Task& task,
                                  HeuristicProvider& provider, const PlannerOptions& planner,
                                  const FeedbackOptions& feedback = {});

std::string round_log_json(const std::vector<RoundLog>& rounds);

}  // namespace hbtp
