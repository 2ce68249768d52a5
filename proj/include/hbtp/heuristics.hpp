#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hbtp/domain.hpp"

namespace hbtp {

// Predicted action sequence, by grounded-action name. Duplicates allowed.
struct HeuristicPath {
    std::vector<std::string> actions;
};

// Resolves names against a domain; throws std::invalid_argument on unknown
// names (the grammar checker rejects those upstream).
std::vector<ActionId> resolve_path(const HeuristicPath& path, const Domain& domain);
HeuristicPath path_names(std::span<const ActionId> path, const Domain& domain);

// Multiset of action occurrences; order-independent. Used both as the
// per-path indicator I(p, .) and as the per-node credit store during search.
class ActionIndicator {
public:
    ActionIndicator() = default;
    static ActionIndicator of(std::span<const ActionId> path);

    int count(ActionId a) const;
    void decrement(ActionId a);  // no-op at zero
    bool all_zero() const;

    // entries with positive count, sorted by action id
    const std::vector<std::pair<ActionId, int>>& entries() const { return counts_; }

    bool operator==(const ActionIndicator&) const = default;

    // true when count(a) <= other.count(a) for every action
    bool dominated_by(const ActionIndicator& other) const;

private:
    std::vector<std::pair<ActionId, int>> counts_;
};

// Matched-occurrence heuristic path cost: each occurrence of a in p is
// discounted to D(a)/alpha while credits from p_hat remain, and pays full
// D(a) beyond. This is exactly what the per-action rule of the expansion
// loop accumulates along a path.
double path_h_alpha(std::span<const ActionId> p, const ActionIndicator& indicator_hat,
                    double alpha, const Domain& domain);

// Literal transcription of the closed-form definition whose second term
// charges 1/alpha for unused credits of actions appearing in p. Provided for
// documentation tests; the search uses the matched-occurrence form.
double path_h_alpha_maintext(std::span<const ActionId> p, const ActionIndicator& indicator_hat,
                             double alpha, const Domain& domain);

// Satisficing variant: credited occurrences cost nothing.
double path_h_inf(std::span<const ActionId> p, const ActionIndicator& indicator_hat,
                  const Domain& domain);

// D(p_hat) / min_a D(a); callers must pick alpha strictly greater. Empty
// path yields 0.
double alpha_lower_bound(std::span<const ActionId> path_hat, const Domain& domain);
double alpha_lower_bound(std::span<const ActionId> path_hat, const Domain& domain,
                         std::span<const ActionId> action_set);

double path_cost(std::span<const ActionId> p, const Domain& domain);

}  // namespace hbtp
