#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "hbtp/domain_parser.hpp"
#include "hbtp/feedback.hpp"
#include "hbtp/provider.hpp"
#include "reference_search.hpp"

using namespace hbtp;

namespace {

std::string fixture(const char* name) { return std::string(HBTP_FIXTURE_DIR) + "/" + name; }

std::set<std::string> action_names(const Domain& d, const std::vector<ActionId>& ids) {
    std::set<std::string> out;
    for (ActionId a : ids) out.insert(d.action(a).name);
    return out;
}

// Records every payload it is queried with, then delegates.
struct CapturingProvider : HeuristicProvider {
    HeuristicProvider& inner;
    std::vector<FeedbackPayload> payloads;
    explicit CapturingProvider(HeuristicProvider& p) : inner(p) {}
    ReasoningResult query(const Domain& d, const Task& t, const FeedbackPayload* fb) override {
        if (fb) payloads.push_back(*fb);
        return inner.query(d, t, fb);
    }
};

ReasoningResult reasoning(std::vector<std::string> path, std::vector<std::string> preds,
                          std::vector<std::string> objects) {
    ReasoningResult r;
    r.path.actions = std::move(path);
    r.relevant_predicates = std::move(preds);
    r.relevant_objects = std::move(objects);
    return r;
}

}  // namespace

TEST_CASE("action-space pruning") {
    auto d = parse_domain_file(fixture("kitchen_mini.domain"));

    SUBCASE("unions the explicit sets with the path's predicates and objects") {
        auto space = prune_action_space(
            d, reasoning({"Walk_apple", "Grab_apple"}, {"Walk"}, {"apple"}));
        std::set<std::string> preds;
        for (PredicateId q : space.predicates) preds.insert(d.schema(q).name);
        CHECK(preds == std::set<std::string>{"Walk", "Grab"});
        std::set<std::string> objects;
        for (ObjectId o : space.objects) objects.insert(d.object_name(o));
        CHECK(objects == std::set<std::string>{"apple"});
        CHECK(action_names(d, space.actions) ==
              std::set<std::string>{"Walk_apple", "Grab_apple"});
    }
    SUBCASE("empty reasoning is a degenerate space") {
        CHECK_THROWS_AS(prune_action_space(d, reasoning({}, {}, {})), EmptySpace);
    }
    SUBCASE("the heuristic path always survives pruning") {
        auto space = prune_action_space(d, reasoning({"Put_apple_table"}, {}, {}));
        CHECK(action_names(d, space.actions).count("Put_apple_table") == 1);
    }
}

TEST_CASE("oracle-pruned spaces on the large domain stay small and sufficient") {
    auto d = parse_domain_file(fixture("robothow.domain"));
    auto task = parse_task_file(fixture("robothow.task"), d);
    OracleProvider oracle;
    auto r = oracle.query(d, task, nullptr);
    auto space = prune_action_space(d, r);
    CHECK(space.actions.size() * 5 <= d.actions().size());  // far below 20%
    for (const auto& name : r.path.actions) {
        auto a = d.find_action(name);
        REQUIRE(a.has_value());
        CHECK(std::binary_search(space.actions.begin(), space.actions.end(), *a));
    }
}

TEST_CASE("summaries pick the longest distinct chains") {
    // Synthetic trace: parent chains of lengths 5, 4, 4, 2 plus duplicates.
    std::vector<TraceNode> trace;
    auto add_node = [&](int parent, ActionId via) {
        TraceNode n;
        n.parent = parent;
        n.via_action = via;
        trace.push_back(n);
        return int(trace.size() - 1);
    };
    add_node(-1, 0);  // goal
    int c = 0;
    c = add_node(0, 10);
    c = add_node(c, 11);
    c = add_node(c, 12);
    c = add_node(c, 13);
    add_node(c, 14);  // depth-5 leaf
    c = add_node(0, 20);
    c = add_node(c, 21);
    c = add_node(c, 22);
    add_node(c, 23);  // depth-4 leaf
    c = add_node(0, 30);
    c = add_node(c, 31);
    c = add_node(c, 32);
    add_node(c, 33);  // second depth-4 leaf
    c = add_node(0, 40);
    add_node(c, 41);  // depth-2 leaf

    SUBCASE("k larger than the chain count returns them all") {
        std::vector<TraceNode> two;
        two.push_back(TraceNode{});  // goal
        two[0].parent = -1;
        TraceNode a;
        a.parent = 0;
        a.via_action = 1;
        two.push_back(a);
        TraceNode b;
        b.parent = 0;
        b.via_action = 2;
        two.push_back(b);
        CHECK(summarize_bt(two, 3).size() == 2);
    }
    SUBCASE("length ordering keeps ties") {
        auto chains = summarize_bt(trace, 3);
        REQUIRE(chains.size() == 3);
        CHECK(chains[0].size() == 5);
        CHECK(chains[1].size() == 4);
        CHECK(chains[2].size() == 4);
        // Forward order: the frontier action comes first in execution order,
        // the goal-adjacent action last.
        CHECK(chains[0].back() == 10);
        CHECK(chains[0].front() == 14);
    }
}

TEST_CASE("reflective feedback loop") {
    auto d = parse_domain_file(fixture("kitchen_mini.domain"));
    auto task = parse_task_file(fixture("kitchen_mini.task"), d);
    PlannerOptions popts;
    popts.algo = PlannerAlgo::HbtpSatisficing;

    SUBCASE("oracle reasoning solves in round zero") {
        OracleProvider oracle;
        auto fb = plan_with_feedback(d, task, oracle, popts);
        CHECK(fb.solved_round == 0);
        CHECK(fb.result.outcome == PlanOutcome::Solved);
        CHECK(fb.result.total_cost == doctest::Approx(4.0));
        REQUIRE(fb.rounds.size() == 1);
        CHECK(fb.rounds[0].a_size == fb.space.actions.size());
    }

    // Phase one omits Grab entirely; the planner dead-ends at the condition
    // requiring Holding(apple), and the feedback round restores the predicate.
    ScriptedProvider two_phase(
        reasoning({"Walk_apple", "Walk_table", "Put_apple_table"}, {"Walk", "Put"},
                  {"apple", "table"}),
        reasoning({"Walk_apple", "Grab_apple", "Walk_table", "Put_apple_table"},
                  {"Walk", "Grab", "Put"}, {"apple", "table"}));

    SUBCASE("the missing action is recovered in round one") {
        CapturingProvider capture(two_phase);
        auto fb = plan_with_feedback(d, task, capture, popts);
        CHECK(fb.solved_round == 1);
        CHECK(fb.result.outcome == PlanOutcome::Solved);
        REQUIRE(fb.rounds.size() == 2);
        CHECK(fb.rounds[0].outcome == PlanOutcome::Exhausted);
        CHECK(fb.rounds[1].outcome == PlanOutcome::Solved);

        // Monotone expansion of the pruned space across rounds.
        CHECK(fb.rounds[0].a_size <= fb.rounds[1].a_size);

        // The payload carries the exact complements of the pruned sets.
        REQUIRE(capture.payloads.size() == 1);
        const auto& payload = capture.payloads[0];
        CHECK(payload.missing_predicates == std::vector<std::string>{"Grab"});
        CHECK(payload.missing_objects == std::vector<std::string>{"fridge"});

        // The deepest summarized chain stops at the grab bottleneck: its
        // frontier condition requires Holding(apple).
        REQUIRE(!payload.top_paths.empty());
        CHECK(payload.top_paths[0].back() == "Put_apple_table");
    }
    SUBCASE("no rounds means the defect is terminal") {
        FeedbackOptions fopts;
        fopts.max_rounds = 0;
        auto fb = plan_with_feedback(d, task, two_phase, popts, fopts);
        CHECK(fb.solved_round == -1);
        CHECK(fb.result.outcome != PlanOutcome::Solved);
    }
    SUBCASE("the bottleneck condition is visible in the failed trace") {
        FeedbackOptions fopts;
        fopts.max_rounds = 0;
        auto fb = plan_with_feedback(d, task, two_phase, popts, fopts);
        auto chains = summarize_bt(fb.result.trace, 1);
        REQUIRE(!chains.empty());
        // Walk the longest chain to its frontier node and inspect the condition.
        size_t frontier = 0;
        size_t best_len = 0;
        std::vector<char> is_parent(fb.result.trace.size(), 0);
        for (const auto& n : fb.result.trace)
            if (n.parent >= 0) is_parent[size_t(n.parent)] = 1;
        for (size_t i = 0; i < fb.result.trace.size(); ++i) {
            if (is_parent[i]) continue;
            size_t len = 0;
            for (int32_t j = int32_t(i); fb.result.trace[j].parent >= 0;
                 j = fb.result.trace[j].parent)
                ++len;
            if (len > best_len) {
                best_len = len;
                frontier = i;
            }
        }
        CHECK(fb.result.trace[frontier].condition.contains(d.parse_literal("Holding(apple)")));
    }
}

TEST_CASE("empty-space reasoning triggers feedback instead of planning") {
    auto d = parse_domain_file(fixture("kitchen_mini.domain"));
    auto task = parse_task_file(fixture("kitchen_mini.task"), d);
    PlannerOptions popts;
    popts.algo = PlannerAlgo::HbtpSatisficing;

    ScriptedProvider provider(
        reasoning({}, {}, {}),  // degenerate
        reasoning({"Walk_apple", "Grab_apple", "Walk_table", "Put_apple_table"},
                  {"Walk", "Grab", "Put"}, {"apple", "table"}));
    auto fb = plan_with_feedback(d, task, provider, popts);
    CHECK(fb.rounds[0].empty_space);
    CHECK(fb.solved_round == 1);
}

TEST_CASE("pruning safety: spaces covering an optimal path keep the task solvable") {
    auto d = parse_domain_file(fixture("robothow_small.domain"));
    auto base = parse_task_file(fixture("robothow_small.task"), d);
    OracleProvider oracle;
    for (const char* goal : {"In(apple, fridge)", "On(mug, kitchentable)"}) {
        Task task{base.s0, Condition({d.parse_literal(goal)})};
        auto r = oracle.query(d, task, nullptr);
        auto space = prune_action_space(d, r);
        PlannerOptions opts;
        opts.algo = PlannerAlgo::HbtpSatisficing;
        opts.action_space = space.actions;
        auto resolved = resolve_path(r.path, d);
        auto result = plan(d, task, resolved, opts);
        CHECK(result.outcome == PlanOutcome::Solved);
    }
}

TEST_CASE("round logs serialize to JSON") {
    auto d = parse_domain_file(fixture("kitchen_mini.domain"));
    auto task = parse_task_file(fixture("kitchen_mini.task"), d);
    OracleProvider oracle;
    PlannerOptions popts;
    popts.algo = PlannerAlgo::HbtpSatisficing;
    auto fb = plan_with_feedback(d, task, oracle, popts);
    auto text = round_log_json(fb.rounds);
    CHECK(text.find("\"round\": 0") != std::string::npos);
    CHECK(text.find("\"outcome\": \"solved\"") != std::string::npos);
}
