#pragma once

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hbtp/domain.hpp"
#include "hbtp/heuristics.hpp"

namespace hbtp {

// Task-specific reasoning output: relevant action predicates, relevant
// objects, and the predicted heuristic path. Entries are normalized to
// canonical symbol names where they resolve; unresolvable tokens are kept
// verbatim for the grammar checker.
struct ReasoningResult {
    std::vector<std::string> relevant_predicates;
    std::vector<std::string> relevant_objects;
    HeuristicPath path;
    std::string raw_text;
};

struct Demo {
    std::string goal;        // "IsOn_apple_table & IsClean_desk"
    std::string path;        // "Walk_apple, Grab_apple"
    std::string predicates;  // "Walk, Grab"
    std::string objects;     // "apple"
};

// Sections appended to a re-query after a failed planning round: summaries of
// the deepest explored chains plus the predicates/objects outside the pruned
// space.
struct FeedbackPayload {
    int round = 1;  // 1-based feedback round
    std::vector<std::vector<std::string>> top_paths;
    std::vector<std::string> missing_predicates;
    std::vector<std::string> missing_objects;
};

// Deterministic prompt document. Sections: [Condition Predicates],
// [Action Predicates] (costs in parentheses), [Objects] grouped by category,
// [Few-shot Demonstrations], [System], [Task]; a [Blacklist] section is
// emitted only when the blacklist is non-empty, and feedback sections only on
// re-queries.
std::string build_prompt(const Domain& domain, const Task& task, std::span<const Demo> demos,
                         std::span<const std::string> blacklist,
                         const FeedbackPayload* feedback = nullptr);

struct MissingSection : std::runtime_error {
    explicit MissingSection(const std::string& section)
        : std::runtime_error("missing section: " + section), section(section) {}
    std::string section;
};

// Extracts the three labeled lists from provider output, tolerating
// surrounding prose and normalizing case/underscore forms.
ReasoningResult parse_reasoning(std::string_view text, const Domain& domain);

struct Violation {
    enum Kind { UnknownActionPredicate, UnknownObject, InvalidGrounding, MalformedEntry };
    Kind kind = MalformedEntry;
    std::string token;
    std::string message;
    std::string suggestion;  // nearest valid symbol by edit distance, if any
};

std::string to_string(const Violation& v);

// Validates a reasoning result against the domain (and optionally a
// restricted action set). An empty list means the result is usable: every
// path action resolves to a valid grounding.
std::vector<Violation> grammar_check(const ReasoningResult& result, const Domain& domain,
                                     std::span<const ActionId> action_set = {});

class HeuristicProvider {
public:
    virtual ~HeuristicProvider() = default;
    virtual ReasoningResult query(const Domain& domain, const Task& task,
                                  const FeedbackPayload* feedback) = 0;
};

// Exact reasoning from uniform-cost search over the forward state graph:
// p* plus its predicates and objects. Desk-scale domains only.
class OracleProvider : public HeuristicProvider {
public:
    explicit OracleProvider(size_t max_states = 2'000'000) : max_states_(max_states) {}
    ReasoningResult query(const Domain& domain, const Task& task,
                          const FeedbackPayload* feedback) override;

private:
    size_t max_states_;
};

// Keeps each optimal action with probability correct_rate and injects
// non-optimal actions so that injected/total matches error_rate (rounded),
// then shuffles. Deterministic under seed.
std::vector<ActionId> perturb_path(std::span<const ActionId> optimal, double correct_rate,
                                   double error_rate, uint64_t seed,
                                   std::span<const ActionId> injection_pool);

// Oracle output degraded by perturb_path. The per-call seed derives from the
// base seed, the task, and the feedback round, so concurrent queries stay
// deterministic without shared RNG state.
class MockProvider : public HeuristicProvider {
public:
    MockProvider(double correct_rate, double error_rate, uint64_t seed,
                 size_t max_states = 2'000'000);
    ReasoningResult query(const Domain& domain, const Task& task,
                          const FeedbackPayload* feedback) override;

private:
    double correct_rate_, error_rate_;
    uint64_t seed_;
    size_t max_states_;
};

struct ProviderError : std::runtime_error {
    explicit ProviderError(const std::string& what) : std::runtime_error(what) {}
};

struct RetriesExhausted : std::runtime_error {
    RetriesExhausted(int attempts, std::vector<Violation> violations)
        : std::runtime_error("provider output still invalid after " + std::to_string(attempts) +
                             " attempts"),
          attempts(attempts),
          violations(std::move(violations)) {}
    int attempts;
    std::vector<Violation> violations;
};

struct LlmConfig {
    std::string endpoint;  // base URL, e.g. https://api.openai.com/v1
    std::string model;
    std::string api_key;
    double temperature = 0.0;
    int max_attempts = 3;
    std::string replay_file;  // offline fixture mode: JSON array of completions

    // Reads HBTP_LLM_ENDPOINT, HBTP_LLM_MODEL, HBTP_LLM_KEY.
    static LlmConfig from_env();
};

// OpenAI-compatible chat-completion client with a grammar-check retry loop:
// invalid outputs are appended to the blacklist and the prompt is re-sent, up
// to max_attempts. Responses are cached by prompt hash.
class LlmProvider : public HeuristicProvider {
public:
    LlmProvider(LlmConfig config, std::vector<Demo> demos);
    ~LlmProvider() override;
    ReasoningResult query(const Domain& domain, const Task& task,
                          const FeedbackPayload* feedback) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Fixed two-phase provider for bottleneck fixtures: phase-one output until
// feedback arrives, phase-two output afterwards.
class ScriptedProvider : public HeuristicProvider {
public:
    ScriptedProvider(ReasoningResult initial, ReasoningResult after_feedback)
        : initial_(std::move(initial)), after_feedback_(std::move(after_feedback)) {}
    ReasoningResult query(const Domain&, const Task&, const FeedbackPayload* feedback) override {
        return feedback ? after_feedback_ : initial_;
    }

private:
    ReasoningResult initial_, after_feedback_;
};

struct ProviderConfig {
    enum Kind { Oracle, Mock, LiveLlm } kind = Oracle;
    double correct_rate = 1.0;
    double error_rate = 0.0;
    uint64_t seed = 0;
    size_t oracle_max_states = 2'000'000;
    LlmConfig llm;
    std::vector<Demo> demos;
};

std::unique_ptr<HeuristicProvider> make_provider(const ProviderConfig& config);

// Underscore rendering used in prompts and demos: On(apple,table) ->
// On_apple_table; conjunctions join with " & ".
std::string underscore_literal(const Domain& domain, Literal l);
std::string underscore_condition(const Domain& domain, const Condition& c);

}  // namespace hbtp
