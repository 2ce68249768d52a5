#include "hbtp/oracle_search.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <unordered_map>

namespace hbtp {

std::vector<ActionId> applicable_actions(const Domain& domain, const State& s) {
    std::vector<ActionId> out;
    for (const auto& a : domain.actions())
        if (applicable(s, a)) out.push_back(a.id);
    return out;
}

namespace {

// Buckets every action under its globally rarest precondition literal; any
// applicable action in s has that literal in s, so scanning the buckets of
// s's literals (plus precondition-free actions) yields a complete candidate
// set without touching actions whose preconditions never become reachable.
class SuccessorIndex {
public:
    SuccessorIndex(const Domain& domain, std::span<const ActionId> space)
        : stamp_(domain.actions().size(), 0) {
        std::unordered_map<uint64_t, uint32_t> freq;
        for (ActionId a : space)
            for (Literal l : domain.action(a).pre) ++freq[l.key()];
        for (ActionId a : space) {
            const auto& act = domain.action(a);
            if (act.pre.empty()) {
                no_pre_.push_back(a);
                continue;
            }
            Literal rarest = *act.pre.begin();
            uint32_t best = UINT32_MAX;
            for (Literal l : act.pre) {
                uint32_t f = freq[l.key()];
                if (f < best) {
                    best = f;
                    rarest = l;
                }
            }
            buckets_[rarest.key()].push_back(a);
        }
    }

    // Superset of the applicable set; callers re-check applicability.
    const std::vector<ActionId>& candidates(const State& s) {
        ++epoch_;
        scratch_.clear();
        scratch_.insert(scratch_.end(), no_pre_.begin(), no_pre_.end());
        for (ActionId a : no_pre_) stamp_[a] = epoch_;
        for (Literal l : s) {
            auto it = buckets_.find(l.key());
            if (it == buckets_.end()) continue;
            for (ActionId a : it->second) {
                if (stamp_[a] == epoch_) continue;
                stamp_[a] = epoch_;
                scratch_.push_back(a);
            }
        }
        std::sort(scratch_.begin(), scratch_.end());
        return scratch_;
    }

private:
    std::unordered_map<uint64_t, std::vector<ActionId>> buckets_;
    std::vector<ActionId> no_pre_, scratch_;
    std::vector<uint32_t> stamp_;
    uint32_t epoch_ = 0;
};

struct Label {
    double cost = 0.0;
    std::vector<uint32_t> ranks;  // action-name ranks along the path
    std::vector<ActionId> actions;
};

bool better(const Label& a, const Label& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return std::lexicographical_compare(a.ranks.begin(), a.ranks.end(), b.ranks.begin(),
                                        b.ranks.end());
}

}  // namespace

OraclePath oracle_plan(const Domain& domain, const State& s0, const Condition& goal,
                       size_t max_states, std::span<const ActionId> action_space) {
    std::vector<ActionId> space(action_space.begin(), action_space.end());
    if (space.empty()) {
        space.resize(domain.actions().size());
        for (size_t i = 0; i < space.size(); ++i) space[i] = ActionId(i);
    }

    // Rank actions by name so tie-breaking is independent of grounding order.
    std::vector<uint32_t> rank(domain.actions().size(), 0);
    {
        std::vector<ActionId> sorted = space;
        std::sort(sorted.begin(), sorted.end(), [&](ActionId a, ActionId b) {
            return domain.action(a).name < domain.action(b).name;
        });
        for (uint32_t i = 0; i < sorted.size(); ++i) rank[sorted[i]] = i;
    }

    std::unordered_map<Condition, Label, ConditionHash> best;
    best.emplace(s0, Label{});

    struct Entry {
        double cost;
        uint64_t seq;
        State state;
    };
    struct Cmp {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.cost != b.cost) return a.cost > b.cost;
            return a.seq > b.seq;
        }
    };
    std::priority_queue<Entry, std::vector<Entry>, Cmp> queue;
    uint64_t seq = 0;
    queue.push({0.0, seq++, s0});

    std::optional<Label> best_goal;
    size_t settled = 0;
    SuccessorIndex successors(domain, space);

    while (!queue.empty()) {
        Entry e = queue.top();
        queue.pop();
        auto it = best.find(e.state);
        if (it == best.end() || e.cost > it->second.cost) continue;  // stale
        if (best_goal && e.cost > best_goal->cost) break;

        if (++settled > max_states)
            throw SearchBudgetExceeded("oracle search exceeded " + std::to_string(max_states) +
                                       " states");

        const Label cur = it->second;
        if (holds(goal, e.state)) {
            if (!best_goal || better(cur, *best_goal)) best_goal = cur;
            continue;  // successors cannot improve a satisfied goal at lower cost
        }

        for (ActionId aid : successors.candidates(e.state)) {
            const auto& a = domain.action(aid);
            if (!applicable(e.state, a)) continue;
            State next = apply_action(e.state, a);
            Label cand;
            cand.cost = cur.cost + a.cost;
            cand.ranks = cur.ranks;
            cand.ranks.push_back(rank[aid]);
            cand.actions = cur.actions;
            cand.actions.push_back(aid);
            auto [nit, inserted] = best.try_emplace(next, Label{});
            if (inserted || better(cand, nit->second)) {
                nit->second = std::move(cand);
                queue.push({nit->second.cost, seq++, std::move(next)});
            }
        }
    }

    if (!best_goal) throw UnreachableGoal("goal is not reachable from s0");
    return {best_goal->actions, best_goal->cost};
}

std::vector<State> forward_explore(const Domain& domain, const State& s0, size_t max_states,
                                   size_t max_depth) {
    std::vector<State> out;
    std::unordered_map<Condition, size_t, ConditionHash> depth;
    std::deque<State> frontier;
    std::vector<ActionId> space(domain.actions().size());
    for (size_t i = 0; i < space.size(); ++i) space[i] = ActionId(i);
    SuccessorIndex successors(domain, space);

    out.push_back(s0);
    depth.emplace(s0, 0);
    frontier.push_back(s0);
    while (!frontier.empty() && out.size() < max_states) {
        State s = std::move(frontier.front());
        frontier.pop_front();
        size_t d = depth.at(s);
        if (d >= max_depth) continue;
        for (ActionId aid : successors.candidates(s)) {
            const auto& a = domain.action(aid);
            if (!applicable(s, a)) continue;
            State next = apply_action(s, a);
            if (depth.count(next)) continue;
            depth.emplace(next, d + 1);
            out.push_back(next);
            if (out.size() >= max_states) break;
            frontier.push_back(next);
        }
    }
    return out;
}

}  // namespace hbtp
