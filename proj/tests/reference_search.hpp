#pragma once

// Brute-force search utilities used only by tests: an independent check on
// the library's planners and oracle. Kept deliberately simple (plain maps,
// no indexing) so correctness is obvious by inspection.

#include <map>
#include <optional>
#include <vector>

#include "hbtp/domain.hpp"

namespace ref {

struct Plan {
    std::vector<hbtp::ActionId> actions;
    double cost = 0.0;
};

// Textbook Dijkstra over forward states with std::map bookkeeping.
std::optional<Plan> dijkstra(const hbtp::Domain& domain, const hbtp::State& s0,
                             const hbtp::Condition& goal, size_t max_states = 1'000'000);

// Unit-cost shortest path by plain breadth-first search.
std::optional<Plan> bfs_unit(const hbtp::Domain& domain, const hbtp::State& s0,
                             const hbtp::Condition& goal, size_t max_states = 1'000'000);

// Every simple path (no repeated state) from s0 to a goal-satisfying state,
// depth-first, up to the given caps.
std::vector<std::vector<hbtp::ActionId>> enumerate_simple_paths(const hbtp::Domain& domain,
                                                                const hbtp::State& s0,
                                                                const hbtp::Condition& goal,
                                                                size_t max_len,
                                                                size_t max_paths);

}  // namespace ref
