#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hbtp/domain.hpp"

namespace hbtp {

enum class BTKind { Fallback, Sequence, ConditionLeaf, ActionLeaf };
enum class TickStatus { Success, Failure, Running };

struct BTNode {
    BTKind kind = BTKind::Fallback;
    Condition condition;        // ConditionLeaf payload
    ActionId action = 0;        // ActionLeaf payload
    std::vector<BTNode> children;
};

struct TickResult {
    TickStatus status = TickStatus::Failure;
    std::optional<ActionId> emitted_action;  // present iff status == Running
};

BTNode cond_leaf(Condition c);
BTNode action_leaf(ActionId a);

// Composite constructors. fallback() splices direct Fallback children so the
// planner's repeated T <- Fallback(T, M(c)) keeps the tree flat.
BTNode fallback(std::vector<BTNode> children);
BTNode sequence(std::vector<BTNode> children);

// Fallback over independently planned sub-goal trees (one per disjunct).
// Unlike fallback(), sub-trees are kept nested.
BTNode dnf_goal_tree(std::vector<BTNode> disjunct_trees);

// One evaluation pass. Fallback yields the first non-Failure child result,
// Sequence the first non-Success one; condition leaves test holds(c, s);
// action leaves report Running and emit their action.
TickResult tick(const BTNode& tree, const State& s);

// JSON serialization (canonical literal ordering, loss-free round trip).
std::string serialize_bt(const BTNode& tree, const Domain& domain);
BTNode deserialize_bt(std::string_view text, const Domain& domain);

// Indented human-readable rendering for docs and summaries.
std::string render_bt(const BTNode& tree, const Domain& domain);

}  // namespace hbtp
