#include "hbtp/simulate.hpp"

namespace hbtp {

ExecutionTrace simulate_execution(const BTNode& tree, const Domain& domain, const State& s0,
                                  std::span<const PerturbationEvent> perturbation) {
    ExecutionTrace trace;
    State s = s0;
    const size_t cap = 10 * std::max<size_t>(1, tree.children.size());

    while (true) {
        TickResult r = tick(tree, s);
        if (r.status == TickStatus::Success) {
            trace.success = true;
            break;
        }
        if (r.status == TickStatus::Failure) {
            trace.failure_reason = "no embedded condition holds in the current state";
            break;
        }
        if (trace.steps >= cap) {
            trace.failure_reason = "step cap exceeded (" + std::to_string(cap) + ")";
            break;
        }
        const GroundedAction& a = domain.action(*r.emitted_action);
        try {
            s = apply_action_checked(s, a);
        } catch (const PreconditionViolated& e) {
            trace.failure_reason = e.what();
            break;
        }
        ++trace.steps;
        trace.applied.push_back(a.id);
        for (const auto& ev : perturbation) {
            if (ev.after_step != trace.steps) continue;
            for (Literal l : ev.del) s.erase(l);
            for (Literal l : ev.add) s.insert(l);
        }
    }
    trace.final_state = std::move(s);
    return trace;
}

}  // namespace hbtp
