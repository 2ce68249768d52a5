#include "hbtp/planner.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>

namespace hbtp {

const char* to_string(PlannerAlgo a) {
    switch (a) {
        case PlannerAlgo::BtExpansion: return "btexp";
        case PlannerAlgo::Obtea: return "obtea";
        case PlannerAlgo::HbtpOptimal: return "hbtp-o";
        case PlannerAlgo::HbtpSatisficing: return "hbtp-s";
    }
    return "?";
}

const char* to_string(PlanOutcome o) {
    switch (o) {
        case PlanOutcome::Solved: return "solved";
        case PlanOutcome::Timeout: return "timeout";
        case PlanOutcome::Exhausted: return "exhausted";
    }
    return "?";
}

std::optional<PlannerAlgo> parse_algo(std::string_view name) {
    if (name == "btexp") return PlannerAlgo::BtExpansion;
    if (name == "obtea") return PlannerAlgo::Obtea;
    if (name == "hbtp-o") return PlannerAlgo::HbtpOptimal;
    if (name == "hbtp-s") return PlannerAlgo::HbtpSatisficing;
    return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

// Inverted index from literal to the actions that can make it true (plus
// precondition postings for the broader guards). Candidate gathering
// replaces the per-expansion scan over the whole action set.
class RelevanceIndex {
public:
    RelevanceIndex(const Domain& domain, std::span<const ActionId> space, RelevanceGuard guard)
        : stamp_(domain.actions().size(), 0) {
        for (ActionId a : space) {
            const auto& act = domain.action(a);
            for (Literal l : act.add) postings_[l.key()].push_back(a);
            if (guard != RelevanceGuard::Standard)
                for (Literal l : act.pre) postings_[l.key()].push_back(a);
        }
    }

    const std::vector<ActionId>& candidates(const Condition& c) {
        ++epoch_;
        scratch_.clear();
        for (Literal l : c) {
            auto it = postings_.find(l.key());
            if (it == postings_.end()) continue;
            for (ActionId a : it->second) {
                if (stamp_[a] == epoch_) continue;
                stamp_[a] = epoch_;
                scratch_.push_back(a);
            }
        }
        // Deterministic exploration order regardless of postings layout.
        std::sort(scratch_.begin(), scratch_.end());
        return scratch_;
    }

private:
    std::unordered_map<uint64_t, std::vector<ActionId>> postings_;
    std::vector<uint32_t> stamp_;
    uint32_t epoch_ = 0;
    std::vector<ActionId> scratch_;
};

// Per-literal postings over expanded conditions, answering "is some expanded
// condition a subset of q" without scanning all of C_E.
class SubsetIndex {
public:
    void add(const Condition& c) {
        uint32_t id = uint32_t(sizes_.size());
        sizes_.push_back(uint32_t(c.size()));
        seen_.push_back(0);
        hits_.push_back(0);
        if (c.empty()) has_empty_ = true;
        for (Literal l : c) postings_[l.key()].push_back(id);
    }

    bool contains_subset_of(const Condition& q) {
        if (has_empty_) return true;
        ++epoch_;
        for (Literal l : q) {
            auto it = postings_.find(l.key());
            if (it == postings_.end()) continue;
            for (uint32_t id : it->second) {
                if (seen_[id] != epoch_) {
                    seen_[id] = epoch_;
                    hits_[id] = 0;
                }
                if (++hits_[id] == sizes_[id]) return true;
            }
        }
        return false;
    }

private:
    std::unordered_map<uint64_t, std::vector<uint32_t>> postings_;
    std::vector<uint32_t> sizes_, seen_, hits_;
    uint32_t epoch_ = 0;
    bool has_empty_ = false;
};

struct Node {
    Condition cond;
    double h = 0.0;
    double true_cost = 0.0;
    int32_t parent = -1;
    ActionId via = 0;
    ActionIndicator indicator;
    uint32_t seq = 0;
    bool expanded = false;
    int32_t pop_seq = -1;
};

struct HeapEntry {
    double h;
    uint32_t size;
    uint32_t seq;
    uint32_t node;
};

struct OrderedCmp {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
        if (a.h != b.h) return a.h > b.h;
        if (a.size != b.size) return a.size > b.size;
        return a.seq > b.seq;
    }
};

struct FifoCmp {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const { return a.seq > b.seq; }
};

}  // namespace

PlanResult plan(const Domain& domain, const Task& task,
                std::span<const ActionId> heuristic_path, const PlannerOptions& options) {
    const auto start = Clock::now();
    const auto deadline = start + options.budget;
    if (options.alpha < 1.0) throw std::invalid_argument("alpha must be >= 1");

    const bool fifo = options.algo == PlannerAlgo::BtExpansion;
    const bool use_credits = options.algo == PlannerAlgo::HbtpOptimal ||
                             options.algo == PlannerAlgo::HbtpSatisficing;
    const bool satisficing = options.algo == PlannerAlgo::HbtpSatisficing;

    std::vector<ActionId> full_space;
    std::span<const ActionId> space = options.action_space;
    if (space.empty()) {
        full_space.resize(domain.actions().size());
        for (size_t i = 0; i < full_space.size(); ++i) full_space[i] = ActionId(i);
        space = full_space;
    }

    RelevanceIndex relevance(domain, space, options.guard);
    SubsetIndex expanded_index;

    std::vector<Node> nodes;
    std::unordered_map<Condition, uint32_t, ConditionHash> by_condition;
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, OrderedCmp> ordered_heap;
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, FifoCmp> fifo_heap;

    auto push_heap = [&](uint32_t id) {
        HeapEntry e{nodes[id].h, uint32_t(nodes[id].cond.size()), nodes[id].seq, id};
        if (fifo)
            fifo_heap.push(e);
        else
            ordered_heap.push(e);
    };

    {
        Node goal;
        goal.cond = task.goal;
        goal.h = 0.0;
        goal.indicator = ActionIndicator::of(heuristic_path);
        goal.seq = 0;
        nodes.push_back(std::move(goal));
        by_condition.emplace(task.goal, 0);
        push_heap(0);
    }

    PlanResult result;
    result.outcome = PlanOutcome::Exhausted;
    std::vector<BTNode> tree_children;
    tree_children.push_back(cond_leaf(task.goal));

    uint32_t next_seq = 1;
    int32_t pop_counter = 0;
    size_t explored = 0;
    int32_t solved_node = -1;

    auto finish = [&](PlanOutcome outcome) {
        result.outcome = outcome;
        result.explored_count = explored;
        result.tree = fallback(std::move(tree_children));
        result.trace.reserve(nodes.size());
        for (const auto& n : nodes)
            result.trace.push_back({n.cond, n.parent, n.via, n.h, n.true_cost, n.pop_seq});
        if (outcome == PlanOutcome::Solved) {
            result.total_cost = nodes[solved_node].true_cost;
            for (int32_t i = solved_node; nodes[i].parent >= 0; i = nodes[i].parent)
                result.solution_path.push_back(nodes[i].via);
        }
        result.elapsed =
            std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start);
        return result;
    };

    while (!(fifo ? fifo_heap.empty() : ordered_heap.empty())) {
        HeapEntry top = fifo ? fifo_heap.top() : ordered_heap.top();
        if (fifo)
            fifo_heap.pop();
        else
            ordered_heap.pop();
        if (nodes[top.node].expanded || top.h != nodes[top.node].h) continue;  // stale entry

        if (Clock::now() > deadline) return finish(PlanOutcome::Timeout);

        const uint32_t cur = top.node;
        const Condition cur_cond = nodes[cur].cond;  // copy: nodes may reallocate
        const double cur_h = nodes[cur].h;

        for (ActionId aid : relevance.candidates(cur_cond)) {
            const GroundedAction& a = domain.action(aid);
            if (!is_relevant_consistent(cur_cond, a, options.guard)) continue;

            Condition ca = regress(cur_cond, a);
            double ha;
            if (!use_credits)
                ha = a.cost;
            else if (nodes[cur].indicator.count(aid) > 0)
                ha = satisficing ? 0.0 : a.cost / options.alpha;
            else
                ha = a.cost;
            double new_h = cur_h + ha;

            auto it = by_condition.find(ca);
            if (fifo) {
                if (it != by_condition.end()) continue;
                if (expanded_index.contains_subset_of(ca)) continue;
            } else {
                if (expanded_index.contains_subset_of(ca)) continue;
                if (it != by_condition.end() &&
                    (nodes[it->second].expanded || new_h >= nodes[it->second].h))
                    continue;
            }

            uint32_t id;
            if (it != by_condition.end()) {
                id = it->second;
                nodes[id].h = new_h;
            } else {
                id = uint32_t(nodes.size());
                Node n;
                n.cond = ca;
                n.h = new_h;
                n.seq = next_seq++;
                nodes.push_back(std::move(n));
                by_condition.emplace(std::move(ca), id);
            }
            nodes[id].parent = int32_t(cur);
            nodes[id].via = aid;
            nodes[id].true_cost = nodes[cur].true_cost + a.cost;
            if (use_credits) {
                nodes[id].indicator = nodes[cur].indicator;
                nodes[id].indicator.decrement(aid);
            }
            push_heap(id);

            if (nodes.size() > options.node_cap) return finish(PlanOutcome::Timeout);
        }

        nodes[cur].expanded = true;
        nodes[cur].pop_seq = pop_counter++;
        ++explored;
        expanded_index.add(cur_cond);

        if (cur != 0)
            tree_children.push_back(
                sequence({cond_leaf(cur_cond), action_leaf(nodes[cur].via)}));

        if (holds(cur_cond, task.s0)) {
            solved_node = int32_t(cur);
            return finish(PlanOutcome::Solved);
        }
    }

    return finish(PlanOutcome::Exhausted);
}

PlanResult hbtp(const Domain& domain, const Task& task, const HeuristicPath& path, HbtpMode mode,
                std::chrono::milliseconds budget) {
    PlannerOptions opt;
    opt.algo = mode.satisficing ? PlannerAlgo::HbtpSatisficing : PlannerAlgo::HbtpOptimal;
    opt.alpha = mode.alpha;
    opt.budget = budget;
    auto resolved = resolve_path(path, domain);
    return plan(domain, task, resolved, opt);
}

PlanResult obtea(const Domain& domain, const Task& task, std::chrono::milliseconds budget) {
    PlannerOptions opt;
    opt.algo = PlannerAlgo::Obtea;
    opt.budget = budget;
    return plan(domain, task, {}, opt);
}

PlanResult bt_expansion(const Domain& domain, const Task& task,
                        std::chrono::milliseconds budget) {
    PlannerOptions opt;
    opt.algo = PlannerAlgo::BtExpansion;
    opt.budget = budget;
    return plan(domain, task, {}, opt);
}

DnfResult plan_dnf(const Domain& domain, const State& s0, std::span<const Condition> goals,
                   std::span<const ActionId> heuristic_path, const PlannerOptions& options) {
    if (goals.empty()) throw std::invalid_argument("dnf goal needs at least one disjunct");
    DnfResult out;
    for (const Condition& goal : goals)
        out.disjuncts.push_back(plan(domain, Task{s0, goal}, heuristic_path, options));

    std::vector<size_t> order(goals.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        const auto& ra = out.disjuncts[a];
        const auto& rb = out.disjuncts[b];
        bool sa = ra.outcome == PlanOutcome::Solved;
        bool sb = rb.outcome == PlanOutcome::Solved;
        if (sa != sb) return sa;
        if (sa && ra.total_cost != rb.total_cost) return ra.total_cost < rb.total_cost;
        return false;
    });
    std::vector<BTNode> trees;
    for (size_t i : order) trees.push_back(out.disjuncts[i].tree);
    out.tree = dnf_goal_tree(std::move(trees));
    return out;
}

std::vector<ActionId> chain_actions(const std::vector<TraceNode>& trace, size_t leaf) {
    std::vector<ActionId> out;
    for (int32_t i = int32_t(leaf); trace[i].parent >= 0; i = trace[i].parent)
        out.push_back(trace[i].via_action);
    return out;
}

}  // namespace hbtp
