#include "hbtp/run_record.hpp"

#include <json.hpp>

namespace hbtp {

std::string run_record_json(const PlanResult& result, const Domain& domain, bool include_timing,
                            bool include_trace) {
    nlohmann::ordered_json j;
    j["outcome"] = to_string(result.outcome);
    j["explored"] = result.explored_count;
    j["total_cost"] = result.total_cost;
    j["elapsed_ms"] = include_timing ? double(result.elapsed.count()) / 1000.0 : 0.0;
    j["feedback_rounds"] = result.feedback_rounds;
    auto path = nlohmann::ordered_json::array();
    for (ActionId a : result.solution_path) path.push_back(domain.action(a).name);
    j["solution_path"] = std::move(path);
    if (include_trace) {
        auto trace = nlohmann::ordered_json::array();
        for (const auto& n : result.trace) {
            nlohmann::ordered_json t;
            t["condition"] = domain.condition_name(n.condition);
            t["action"] = n.parent >= 0 ? nlohmann::ordered_json(domain.action(n.via_action).name)
                                        : nlohmann::ordered_json(nullptr);
            t["h"] = n.h;
            t["parent"] = n.parent;
            t["pop_seq"] = n.pop_seq;
            trace.push_back(std::move(t));
        }
        j["trace"] = std::move(trace);
    }
    return j.dump(2) + "\n";
}

}  // namespace hbtp
