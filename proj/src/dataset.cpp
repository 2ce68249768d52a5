#include "hbtp/dataset.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "hbtp/oracle_search.hpp"
#include "hbtp/util.hpp"

namespace hbtp {

const char* to_string(Difficulty d) {
    switch (d) {
        case Difficulty::Easy: return "easy";
        case Difficulty::Medium: return "medium";
        case Difficulty::Hard: return "hard";
    }
    return "?";
}

std::optional<Difficulty> parse_difficulty(std::string_view name) {
    if (name == "easy") return Difficulty::Easy;
    if (name == "medium") return Difficulty::Medium;
    if (name == "hard") return Difficulty::Hard;
    return std::nullopt;
}

std::vector<TaskRecord> generate_dataset(const Domain& domain, const State& s0,
                                         const DatasetOptions& options) {
    const size_t conjuncts = options.difficulty == Difficulty::Easy   ? 1
                             : options.difficulty == Difficulty::Medium ? 2
                                                                        : 3;

    auto states = forward_explore(domain, s0, options.explore_states, options.explore_depth);
    // Deeper states (later in BFS order) carry longer optimal sequences; bias
    // the harder tiers toward them.
    size_t first = 0;
    if (states.size() > 4) {
        if (options.difficulty == Difficulty::Medium) first = states.size() / 4;
        if (options.difficulty == Difficulty::Hard) first = states.size() / 2;
    }

    Rng rng(options.seed ^ (uint64_t(conjuncts) << 32));
    std::vector<TaskRecord> out;
    std::set<Condition> seen_goals;
    const size_t max_attempts = std::max<size_t>(1000, options.n * 400);

    for (size_t attempt = 0; attempt < max_attempts && out.size() < options.n; ++attempt) {
        const State& s = states[first + size_t(rng.bounded(states.size() - first))];
        Condition novel = s.set_minus(s0);
        if (novel.size() < conjuncts) continue;

        // Sample distinct literals from the novel part of the state.
        std::vector<Literal> pool(novel.begin(), novel.end());
        std::vector<Literal> picked;
        for (size_t i = 0; i < conjuncts; ++i) {
            size_t j = size_t(rng.bounded(pool.size() - i));
            picked.push_back(pool[j]);
            std::swap(pool[j], pool[pool.size() - 1 - i]);
        }
        Condition goal{std::move(picked)};
        if (!seen_goals.insert(goal).second) continue;

        try {
            oracle_plan(domain, s0, goal, options.oracle_max_states);
        } catch (const UnreachableGoal&) {
            continue;  // cannot happen for literals of a reachable state; defensive
        }

        TaskRecord rec;
        rec.difficulty = options.difficulty;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%s-%03zu", to_string(options.difficulty), out.size());
        rec.id = buf;
        rec.task = Task{s0, std::move(goal)};
        out.push_back(std::move(rec));
    }
    if (out.size() < options.n)
        throw InsufficientGoals("domain supplied only " + std::to_string(out.size()) + " of " +
                                std::to_string(options.n) + " distinct reachable goals");
    return out;
}

std::string dataset_to_jsonl(const std::vector<TaskRecord>& records, const Domain& domain) {
    std::string out;
    for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["id"] = r.id;
        j["difficulty"] = to_string(r.difficulty);
        auto s0 = nlohmann::ordered_json::array();
        for (Literal l : r.task.s0) s0.push_back(domain.literal_name(l));
        j["s0"] = std::move(s0);
        auto goal = nlohmann::ordered_json::array();
        for (Literal l : r.task.goal) goal.push_back(domain.literal_name(l));
        j["goal"] = std::move(goal);
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<TaskRecord> dataset_from_jsonl(std::string_view text, const Domain& domain) {
    std::vector<TaskRecord> out;
    size_t start = 0;
    for (size_t i = 0; i <= text.size(); ++i) {
        if (i != text.size() && text[i] != '\n') continue;
        auto line = trim(text.substr(start, i - start));
        start = i + 1;
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        TaskRecord r;
        r.id = j.at("id").get<std::string>();
        auto d = parse_difficulty(j.at("difficulty").get<std::string>());
        if (!d) throw std::runtime_error("bad difficulty in dataset line: " + r.id);
        r.difficulty = *d;
        std::vector<Literal> s0, goal;
        for (const auto& s : j.at("s0")) s0.push_back(domain.parse_literal(s.get<std::string>()));
        for (const auto& s : j.at("goal"))
            goal.push_back(domain.parse_literal(s.get<std::string>()));
        r.task.s0 = Condition(std::move(s0));
        r.task.goal = Condition(std::move(goal));
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace hbtp
