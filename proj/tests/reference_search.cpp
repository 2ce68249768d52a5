#include "reference_search.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace ref {

using namespace hbtp;

std::optional<Plan> dijkstra(const Domain& domain, const State& s0, const Condition& goal,
                             size_t max_states) {
    std::map<std::vector<Literal>, double> dist;
    std::map<std::vector<Literal>, std::pair<std::vector<Literal>, ActionId>> parent;
    auto key = [](const State& s) { return s.literals(); };

    using QE = std::pair<double, std::vector<Literal>>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> queue;
    dist[key(s0)] = 0.0;
    queue.push({0.0, key(s0)});
    size_t settled = 0;

    while (!queue.empty()) {
        auto [d, k] = queue.top();
        queue.pop();
        if (d > dist.at(k)) continue;
        if (++settled > max_states) return std::nullopt;
        State s = State::from_sorted(k);
        if (holds(goal, s)) {
            Plan plan;
            plan.cost = d;
            auto cur = k;
            while (parent.count(cur)) {
                plan.actions.push_back(parent.at(cur).second);
                cur = parent.at(cur).first;
            }
            std::reverse(plan.actions.begin(), plan.actions.end());
            return plan;
        }
        for (const auto& a : domain.actions()) {
            if (!applicable(s, a)) continue;
            State next = apply_action(s, a);
            auto nk = key(next);
            double nd = d + a.cost;
            auto it = dist.find(nk);
            if (it == dist.end() || nd < it->second) {
                dist[nk] = nd;
                parent[nk] = {k, a.id};
                queue.push({nd, nk});
            }
        }
    }
    return std::nullopt;
}

std::optional<Plan> bfs_unit(const Domain& domain, const State& s0, const Condition& goal,
                             size_t max_states) {
    std::map<std::vector<Literal>, std::pair<std::vector<Literal>, ActionId>> parent;
    std::set<std::vector<Literal>> seen;
    std::queue<State> queue;
    queue.push(s0);
    seen.insert(s0.literals());

    while (!queue.empty()) {
        State s = queue.front();
        queue.pop();
        if (holds(goal, s)) {
            Plan plan;
            auto cur = s.literals();
            while (parent.count(cur)) {
                plan.actions.push_back(parent.at(cur).second);
                cur = parent.at(cur).first;
            }
            std::reverse(plan.actions.begin(), plan.actions.end());
            plan.cost = double(plan.actions.size());
            return plan;
        }
        if (seen.size() > max_states) return std::nullopt;
        for (const auto& a : domain.actions()) {
            if (!applicable(s, a)) continue;
            State next = apply_action(s, a);
            if (!seen.insert(next.literals()).second) continue;
            parent[next.literals()] = {s.literals(), a.id};
            queue.push(next);
        }
    }
    return std::nullopt;
}

namespace {

void dfs(const Domain& domain, const State& s, const Condition& goal,
         std::set<std::vector<Literal>>& on_path, std::vector<ActionId>& prefix, size_t max_len,
         size_t max_paths, std::vector<std::vector<ActionId>>& out) {
    if (out.size() >= max_paths) return;
    if (holds(goal, s)) {
        out.push_back(prefix);
        return;  // extending a goal-reaching simple path only adds cost
    }
    if (prefix.size() >= max_len) return;
    for (const auto& a : domain.actions()) {
        if (!applicable(s, a)) continue;
        State next = apply_action(s, a);
        if (!on_path.insert(next.literals()).second) continue;
        prefix.push_back(a.id);
        dfs(domain, next, goal, on_path, prefix, max_len, max_paths, out);
        prefix.pop_back();
        on_path.erase(next.literals());
    }
}

}  // namespace

std::vector<std::vector<ActionId>> enumerate_simple_paths(const Domain& domain, const State& s0,
                                                          const Condition& goal, size_t max_len,
                                                          size_t max_paths) {
    std::vector<std::vector<ActionId>> out;
    std::set<std::vector<Literal>> on_path{s0.literals()};
    std::vector<ActionId> prefix;
    dfs(domain, s0, goal, on_path, prefix, max_len, max_paths, out);
    return out;
}

}  // namespace ref
