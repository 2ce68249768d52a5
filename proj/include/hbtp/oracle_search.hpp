#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hbtp/domain.hpp"

namespace hbtp {

struct UnreachableGoal : std::runtime_error {
    explicit UnreachableGoal(const std::string& what) : std::runtime_error(what) {}
};

struct SearchBudgetExceeded : std::runtime_error {
    explicit SearchBudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct OraclePath {
    std::vector<ActionId> actions;  // forward order
    double cost = 0.0;
};

// Uniform-cost search over the grounded forward state graph. Among equal-cost
// optima the action-name-lexicographically smallest sequence is returned, so
// repeated runs and platforms agree on the same witness path.
// Throws UnreachableGoal / SearchBudgetExceeded.
OraclePath oracle_plan(const Domain& domain, const State& s0, const Condition& goal,
                       size_t max_states = 2'000'000,
                       std::span<const ActionId> action_space = {});

// Breadth-first enumeration of distinct reachable states, in deterministic
// order (s0 first). Stops at max_states or max_depth.
std::vector<State> forward_explore(const Domain& domain, const State& s0, size_t max_states,
                                   size_t max_depth);

// Actions applicable in s, ascending id.
std::vector<ActionId> applicable_actions(const Domain& domain, const State& s);

}  // namespace hbtp
