#include "hbtp/feedback.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

namespace hbtp {

namespace {

void collect_symbols(const Domain& domain, const ReasoningResult& result,
                     std::set<PredicateId>& preds, std::set<ObjectId>& objects) {
    for (const auto& name : result.relevant_predicates)
        if (auto q = domain.find_schema_ci(name)) preds.insert(*q);
    for (const auto& name : result.relevant_objects)
        if (auto o = domain.find_object_ci(name)) objects.insert(*o);
    // Q(p_hat) and O(p_hat) always join the pruned sets.
    for (const auto& entry : result.path.actions) {
        if (auto a = domain.find_action(entry)) {
            const auto& act = domain.action(*a);
            preds.insert(act.schema);
            for (ObjectId o : act.args) objects.insert(o);
        }
    }
}

PrunedSpace assemble(const Domain& domain, std::set<PredicateId> preds,
                     std::set<ObjectId> objects, int round) {
    PrunedSpace space;
    space.round = round;
    space.predicates.assign(preds.begin(), preds.end());
    space.objects.assign(objects.begin(), objects.end());
    for (const auto& a : domain.actions()) {
        if (!preds.count(a.schema)) continue;
        bool ok = true;
        for (ObjectId o : a.args)
            if (!objects.count(o)) {
                ok = false;
                break;
            }
        if (ok) space.actions.push_back(a.id);
    }
    if (space.actions.empty())
        throw EmptySpace("pruned action space is empty (|Q-|=" +
                         std::to_string(space.predicates.size()) +
                         ", |O-|=" + std::to_string(space.objects.size()) + ")");
    return space;
}

}  // namespace

PrunedSpace prune_action_space(const Domain& domain, const ReasoningResult& result) {
    std::set<PredicateId> preds;
    std::set<ObjectId> objects;
    collect_symbols(domain, result, preds, objects);
    return assemble(domain, std::move(preds), std::move(objects), 0);
}

PrunedSpace merge_pruned_space(const Domain& domain, const PrunedSpace& base,
                               const ReasoningResult& extra) {
    std::set<PredicateId> preds(base.predicates.begin(), base.predicates.end());
    std::set<ObjectId> objects(base.objects.begin(), base.objects.end());
    collect_symbols(domain, extra, preds, objects);
    return assemble(domain, std::move(preds), std::move(objects), base.round + 1);
}

std::vector<std::vector<ActionId>> summarize_bt(const std::vector<TraceNode>& trace, size_t k) {
    if (trace.empty()) return {};
    std::vector<char> is_parent(trace.size(), 0);
    for (const auto& n : trace)
        if (n.parent >= 0) is_parent[size_t(n.parent)] = 1;

    struct Chain {
        std::vector<ActionId> actions;
        size_t origin;
    };
    std::vector<Chain> chains;
    for (size_t i = 0; i < trace.size(); ++i) {
        if (is_parent[i]) continue;  // only frontier-deep chains
        std::vector<ActionId> actions;
        for (int32_t j = int32_t(i); trace[j].parent >= 0; j = trace[j].parent)
            actions.push_back(trace[j].via_action);
        if (!actions.empty()) chains.push_back({std::move(actions), i});
    }
    std::stable_sort(chains.begin(), chains.end(), [](const Chain& a, const Chain& b) {
        if (a.actions.size() != b.actions.size()) return a.actions.size() > b.actions.size();
        return a.origin < b.origin;
    });

    std::vector<std::vector<ActionId>> out;
    std::set<std::vector<ActionId>> seen;
    for (const auto& c : chains) {
        if (out.size() >= k) break;
        if (seen.insert(c.actions).second) out.push_back(c.actions);
    }
    return out;
}

namespace {

std::vector<std::string> complement_names(const Domain& domain,
                                          const std::vector<PredicateId>& used_preds,
                                          size_t limit) {
    std::set<PredicateId> used(used_preds.begin(), used_preds.end());
    std::vector<std::string> names;
    for (PredicateId q = 0; q < domain.schema_count(); ++q)
        if (!used.count(q)) names.push_back(domain.schema(q).name);
    std::sort(names.begin(), names.end());
    if (names.size() > limit) names.resize(limit);
    return names;
}

std::vector<std::string> complement_object_names(const Domain& domain,
                                                 const std::vector<ObjectId>& used_objects,
                                                 size_t limit) {
    std::set<ObjectId> used(used_objects.begin(), used_objects.end());
    std::vector<std::string> names;
    for (ObjectId o = 0; o < domain.object_count(); ++o)
        if (!used.count(o)) names.push_back(domain.object_name(o));
    std::sort(names.begin(), names.end());
    if (names.size() > limit) names.resize(limit);
    return names;
}

}  // namespace

FeedbackResult plan_with_feedback(const Domain& domain, const Task& task,
                                  HeuristicProvider& provider, const PlannerOptions& planner,
                                  const FeedbackOptions& feedback) {
    FeedbackResult out;
    FeedbackPayload payload;
    bool have_payload = false;
    bool have_space = false;

    for (int round = 0; round <= feedback.max_rounds; ++round) {
        ReasoningResult reasoning =
            provider.query(domain, task, have_payload ? &payload : nullptr);

        RoundLog log;
        log.round = round;
        log.reasoning = reasoning;

        bool planned = false;
        try {
            if (feedback.prune) {
                out.space = have_space ? merge_pruned_space(domain, out.space, reasoning)
                                       : prune_action_space(domain, reasoning);
                have_space = true;
            }
            PlannerOptions opts = planner;
            if (feedback.prune) opts.action_space = out.space.actions;

            // The latest round's path drives the indicator; spaces merge,
            // paths do not.
            std::vector<ActionId> resolved;
            for (const auto& name : reasoning.path.actions)
                if (auto a = domain.find_action(name)) resolved.push_back(*a);

            out.result = plan(domain, task, resolved, opts);
            planned = true;
            log.outcome = out.result.outcome;
            log.explored = out.result.explored_count;
            log.total_cost = out.result.total_cost;
            log.elapsed_ms = double(out.result.elapsed.count()) / 1000.0;
        } catch (const EmptySpace&) {
            log.empty_space = true;
            log.outcome = PlanOutcome::Exhausted;
        }
        log.q_size = out.space.predicates.size();
        log.o_size = out.space.objects.size();
        log.a_size = out.space.actions.size();

        if (planned && out.result.outcome == PlanOutcome::Solved) {
            out.result.feedback_rounds = size_t(round);
            out.solved_round = round;
            out.rounds.push_back(std::move(log));
            return out;
        }

        if (round < feedback.max_rounds) {
            payload = FeedbackPayload{};
            payload.round = round + 1;
            if (planned)
                for (const auto& chain : summarize_bt(out.result.trace, feedback.summary_k)) {
                    std::vector<std::string> names;
                    for (ActionId a : chain) names.push_back(domain.action(a).name);
                    payload.top_paths.push_back(std::move(names));
                }
            if (feedback.prune) {
                payload.missing_predicates =
                    complement_names(domain, out.space.predicates, feedback.max_missing);
                payload.missing_objects =
                    complement_object_names(domain, out.space.objects, feedback.max_missing);
            }
            log.summaries_sent = payload.top_paths;
            have_payload = true;
        }
        out.rounds.push_back(std::move(log));
    }
    if (!out.rounds.empty() && out.rounds.back().empty_space) {
        // Never planned in the final round; surface an exhausted result.
        out.result.outcome = PlanOutcome::Exhausted;
    }
    out.result.feedback_rounds = size_t(feedback.max_rounds);
    return out;
}

std::string round_log_json(const std::vector<RoundLog>& rounds) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rounds) {
        nlohmann::ordered_json j;
        j["round"] = r.round;
        j["heuristic_path"] = r.reasoning.path.actions;
        j["relevant_predicates"] = r.reasoning.relevant_predicates;
        j["relevant_objects"] = r.reasoning.relevant_objects;
        j["q_size"] = r.q_size;
        j["o_size"] = r.o_size;
        j["a_size"] = r.a_size;
        j["empty_space"] = r.empty_space;
        j["outcome"] = to_string(r.outcome);
        j["explored"] = r.explored;
        j["total_cost"] = r.total_cost;
        j["elapsed_ms"] = r.elapsed_ms;
        j["summaries_sent"] = r.summaries_sent;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

}  // namespace hbtp
