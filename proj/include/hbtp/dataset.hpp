#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hbtp/domain.hpp"

namespace hbtp {

enum class Difficulty { Easy, Medium, Hard };

const char* to_string(Difficulty d);
std::optional<Difficulty> parse_difficulty(std::string_view name);

struct TaskRecord {
    std::string id;
    Task task;
    Difficulty difficulty = Difficulty::Easy;
};

struct InsufficientGoals : std::runtime_error {
    explicit InsufficientGoals(const std::string& what) : std::runtime_error(what) {}
};

struct DatasetOptions {
    size_t n = 10;
    Difficulty difficulty = Difficulty::Easy;
    uint64_t seed = 0;
    size_t explore_states = 100'000;
    size_t explore_depth = 12;
    size_t oracle_max_states = 2'000'000;
};

// Samples goals as co-occurring literal sets of reachable states: one literal
// for Easy, two for Medium, three for Hard, drawn from deeper states as the
// tier rises. Every record is verified reachable with the search oracle.
// Deterministic under seed. Throws InsufficientGoals when the domain cannot
// supply n distinct goals.
std::vector<TaskRecord> generate_dataset(const Domain& domain, const State& s0,
                                         const DatasetOptions& options);

std::string dataset_to_jsonl(const std::vector<TaskRecord>& records, const Domain& domain);
std::vector<TaskRecord> dataset_from_jsonl(std::string_view text, const Domain& domain);

}  // namespace hbtp
