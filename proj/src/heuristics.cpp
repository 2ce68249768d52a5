#include "hbtp/heuristics.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace hbtp {

std::vector<ActionId> resolve_path(const HeuristicPath& path, const Domain& domain) {
    std::vector<ActionId> out;
    out.reserve(path.actions.size());
    for (const auto& name : path.actions) {
        auto a = domain.find_action(name);
        if (!a) throw std::invalid_argument("heuristic path action does not resolve: " + name);
        out.push_back(*a);
    }
    return out;
}

HeuristicPath path_names(std::span<const ActionId> path, const Domain& domain) {
    HeuristicPath out;
    out.actions.reserve(path.size());
    for (ActionId a : path) out.actions.push_back(domain.action(a).name);
    return out;
}

ActionIndicator ActionIndicator::of(std::span<const ActionId> path) {
    ActionIndicator ind;
    for (ActionId a : path) {
        auto it = std::lower_bound(ind.counts_.begin(), ind.counts_.end(),
                                   std::pair<ActionId, int>{a, 0});
        if (it != ind.counts_.end() && it->first == a)
            ++it->second;
        else
            ind.counts_.insert(it, {a, 1});
    }
    return ind;
}

int ActionIndicator::count(ActionId a) const {
    auto it = std::lower_bound(counts_.begin(), counts_.end(), std::pair<ActionId, int>{a, 0});
    return (it != counts_.end() && it->first == a) ? it->second : 0;
}

void ActionIndicator::decrement(ActionId a) {
    auto it = std::lower_bound(counts_.begin(), counts_.end(), std::pair<ActionId, int>{a, 0});
    if (it != counts_.end() && it->first == a && it->second > 0) --it->second;
}

bool ActionIndicator::all_zero() const {
    return std::all_of(counts_.begin(), counts_.end(), [](const auto& e) { return e.second == 0; });
}

bool ActionIndicator::dominated_by(const ActionIndicator& other) const {
    for (const auto& [a, n] : counts_)
        if (n > other.count(a)) return false;
    return true;
}

double path_h_alpha(std::span<const ActionId> p, const ActionIndicator& indicator_hat,
                    double alpha, const Domain& domain) {
    if (alpha < 1.0) throw std::invalid_argument("alpha must be >= 1");
    ActionIndicator ip = ActionIndicator::of(p);
    double h = 0.0;
    for (const auto& [a, n] : ip.entries()) {
        double cost = domain.action(a).cost;
        int credits = indicator_hat.count(a);
        int matched = std::min(n, credits);
        h += double(n - matched) * cost + double(matched) * cost / alpha;
    }
    return h;
}

double path_h_alpha_maintext(std::span<const ActionId> p, const ActionIndicator& indicator_hat,
                             double alpha, const Domain& domain) {
    if (alpha < 1.0) throw std::invalid_argument("alpha must be >= 1");
    ActionIndicator ip = ActionIndicator::of(p);
    double h = 0.0;
    for (const auto& [a, n] : ip.entries()) {
        double cost = domain.action(a).cost;
        int credits = indicator_hat.count(a);
        h += double(std::max(0, n - credits)) * cost +
             double(std::max(0, credits - n)) * cost / alpha;
    }
    return h;
}

double path_h_inf(std::span<const ActionId> p, const ActionIndicator& indicator_hat,
                  const Domain& domain) {
    ActionIndicator ip = ActionIndicator::of(p);
    double h = 0.0;
    for (const auto& [a, n] : ip.entries())
        h += double(std::max(0, n - indicator_hat.count(a))) * domain.action(a).cost;
    return h;
}

double path_cost(std::span<const ActionId> p, const Domain& domain) {
    double c = 0.0;
    for (ActionId a : p) c += domain.action(a).cost;
    return c;
}

double alpha_lower_bound(std::span<const ActionId> path_hat, const Domain& domain,
                         std::span<const ActionId> action_set) {
    if (path_hat.empty()) return 0.0;
    double min_cost = std::numeric_limits<double>::infinity();
    for (ActionId a : action_set) min_cost = std::min(min_cost, domain.action(a).cost);
    if (action_set.empty()) throw std::invalid_argument("empty action set");
    return path_cost(path_hat, domain) / min_cost;
}

double alpha_lower_bound(std::span<const ActionId> path_hat, const Domain& domain) {
    std::vector<ActionId> all(domain.actions().size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = ActionId(i);
    return alpha_lower_bound(path_hat, domain, all);
}

}  // namespace hbtp
