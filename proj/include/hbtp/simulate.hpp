#pragma once

#include <span>
#include <string>
#include <vector>

#include "hbtp/bt.hpp"

namespace hbtp {

// State edit injected between execution steps (environment disturbance).
struct PerturbationEvent {
    size_t after_step = 0;  // applied once `after_step` actions have run
    std::vector<Literal> add;
    std::vector<Literal> del;
};

struct ExecutionTrace {
    bool success = false;
    size_t steps = 0;  // actions applied
    std::vector<ActionId> applied;
    State final_state;
    std::string failure_reason;  // empty on success
};

// Ticks the tree against the evolving state, applying each emitted action
// through the action model until Success, Failure, or the step cap
// (10 x root child count) is hit.
ExecutionTrace simulate_execution(const BTNode& tree, const Domain& domain, const State& s0,
                                  std::span<const PerturbationEvent> perturbation = {});

}  // namespace hbtp
