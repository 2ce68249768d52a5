#include "hbtp/provider.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include <httplib.h>
#include <json.hpp>

#include "hbtp/oracle_search.hpp"
#include "hbtp/util.hpp"

namespace hbtp {

std::string underscore_literal(const Domain& domain, Literal l) {
    std::string out = domain.condition_predicate(l.predicate()).name;
    for (int i = 0; i < l.arity(); ++i) out += "_" + domain.object_name(l.arg(i));
    return out;
}

std::string underscore_condition(const Domain& domain, const Condition& c) {
    std::string out;
    for (Literal l : c) {
        if (!out.empty()) out += " & ";
        out += underscore_literal(domain, l);
    }
    return out;
}

namespace {

std::string signature_line(const Domain& d, const std::string& name,
                           const std::vector<CategoryId>& cats) {
    std::string out = name;
    for (CategoryId c : cats) out += "_<" + d.category_name(c) + ">";
    return out;
}

std::string format_cost(double cost) {
    std::ostringstream ss;
    ss << cost;
    return ss.str();
}

}  // namespace

std::string build_prompt(const Domain& domain, const Task& task, std::span<const Demo> demos,
                         std::span<const std::string> blacklist,
                         const FeedbackPayload* feedback) {
    std::ostringstream p;

    p << "[Condition Predicates]\n";
    for (PredicateId i = 0; i < domain.condition_predicate_count(); ++i) {
        const auto& decl = domain.condition_predicate(i);
        p << signature_line(domain, decl.name, decl.param_categories) << "\n";
    }

    p << "\n[Action Predicates]\n";
    for (PredicateId q = 0; q < domain.schema_count(); ++q) {
        const auto& s = domain.schema(q);
        p << signature_line(domain, s.name, s.param_categories) << " (cost "
          << format_cost(s.cost) << ")\n";
    }

    p << "\n[Objects]\n";
    std::vector<std::string> group_names;
    for (CategoryId c = 1; c < domain.category_count(); ++c) {
        p << "<" << domain.category_name(c) << "> = [";
        bool first = true;
        for (ObjectId o : domain.category_members(c)) {
            p << (first ? "" : ", ") << "'" << domain.object_name(o) << "'";
            first = false;
        }
        p << "]\n";
        group_names.push_back("<" + domain.category_name(c) + ">");
    }
    p << "<ALL> = ";
    if (group_names.empty()) {
        p << "[]";
    } else {
        for (size_t i = 0; i < group_names.size(); ++i) p << (i ? " + " : "") << group_names[i];
    }
    p << "\n";

    p << "\n[Few-shot Demonstrations]\n";
    for (const auto& demo : demos) {
        p << "Goals: " << demo.goal << "\n"
          << "Heuristic Path: " << demo.path << "\n"
          << "Relevant Action Predicates: " << demo.predicates << "\n"
          << "Relevant Objects: " << demo.objects << "\n\n";
    }

    p << "[System]\n"
      << "You plan for a robot in the scenario above. [Condition Predicates] lists the\n"
      << "predicates that can appear in goals, with their parameter sets. [Action\n"
      << "Predicates] lists the executable actions and their costs in parentheses.\n"
      << "[Objects] lists every parameter set. Given the task below, produce:\n"
      << "1. 'Heuristic Path:' followed by a comma-separated action sequence with the\n"
      << "   lowest total cost that achieves the goals, writing each action as\n"
      << "   verb_object (underscore between verb and objects).\n"
      << "2. 'Relevant Action Predicates:' followed by the verbs used by those actions.\n"
      << "3. 'Relevant Objects:' followed by the objects involved in those actions.\n"
      << "Use only symbols from the lists above; if an item does not exist, use the\n"
      << "closest available match. Follow the exact format of the demonstrations, with\n"
      << "no extra headings or explanations.\n";

    p << "\n[Task]\n"
      << "Initial State: ";
    {
        bool first = true;
        for (Literal l : task.s0) {
            p << (first ? "" : ", ") << underscore_literal(domain, l);
            first = false;
        }
    }
    p << "\nGoals: " << underscore_condition(domain, task.goal) << "\n";

    if (feedback) {
        p << "\n[Planning Feedback]\n"
          << "Planning with your previous answer failed. The deepest explored action\n"
          << "sequences were:\n";
        for (const auto& path : feedback->top_paths) {
            p << "- ";
            for (size_t i = 0; i < path.size(); ++i) p << (i ? ", " : "") << path[i];
            p << "\n";
        }
        p << "Action predicates not yet considered: ";
        for (size_t i = 0; i < feedback->missing_predicates.size(); ++i)
            p << (i ? ", " : "") << feedback->missing_predicates[i];
        p << "\nObjects not yet considered: ";
        for (size_t i = 0; i < feedback->missing_objects.size(); ++i)
            p << (i ? ", " : "") << feedback->missing_objects[i];
        p << "\nRevise the heuristic path, relevant action predicates, and relevant\n"
          << "objects; include anything essential that was missing.\n";
    }

    if (!blacklist.empty()) {
        p << "\n[Blacklist]\n"
          << "The following outputs were rejected; do not repeat these mistakes:\n";
        for (const auto& entry : blacklist) p << "- " << entry << "\n";
    }

    return p.str();
}

namespace {

// Splits "Walk_apple" / "Walk(apple)" / "walk_Apple" into predicate and
// object tokens.
struct ActionTokens {
    std::string predicate;
    std::vector<std::string> objects;
    bool malformed = false;
};

ActionTokens tokenize_action(std::string_view raw) {
    ActionTokens t;
    auto s = trim(raw);
    if (s.empty()) {
        t.malformed = true;
        return t;
    }
    auto open = s.find('(');
    if (open != std::string_view::npos) {
        if (s.back() != ')') {
            t.malformed = true;
            return t;
        }
        t.predicate = std::string(trim(s.substr(0, open)));
        for (const auto& o : split(s.substr(open + 1, s.size() - open - 2), ','))
            t.objects.push_back(o);
        return t;
    }
    auto parts = split(s, '_');
    if (parts.empty()) {
        t.malformed = true;
        return t;
    }
    t.predicate = parts[0];
    t.objects.assign(parts.begin() + 1, parts.end());
    return t;
}

// Canonicalizes an action mention when every part resolves; otherwise
// returns the trimmed raw token.
std::string normalize_action(const Domain& d, std::string_view raw) {
    ActionTokens t = tokenize_action(raw);
    if (t.malformed) return std::string(trim(raw));
    auto q = d.find_schema_ci(t.predicate);
    if (!q) return std::string(trim(raw));
    std::string name = d.schema(*q).name;
    for (const auto& o : t.objects) {
        auto obj = d.find_object_ci(o);
        if (!obj) return std::string(trim(raw));
        name += "_" + d.object_name(*obj);
    }
    return name;
}

std::string normalize_symbol(const Domain& d, std::string_view raw, bool predicate) {
    auto s = std::string(trim(raw));
    if (predicate) {
        auto q = d.find_schema_ci(s);
        return q ? d.schema(*q).name : s;
    }
    auto o = d.find_object_ci(s);
    return o ? d.object_name(*o) : s;
}

std::optional<std::string> section_content(std::string_view text, std::string_view label) {
    std::string lowered = lower(text);
    std::string key = lower(label);
    size_t pos = 0;
    while ((pos = lowered.find(key, pos)) != std::string::npos) {
        // Label must start a line (ignoring list markers and whitespace).
        size_t line_start = lowered.rfind('\n', pos);
        line_start = line_start == std::string::npos ? 0 : line_start + 1;
        bool clean = true;
        for (size_t i = line_start; i < pos; ++i) {
            char c = lowered[i];
            if (!std::isspace(static_cast<unsigned char>(c)) && c != '-' && c != '*' &&
                c != '>') {
                clean = false;
                break;
            }
        }
        if (clean) {
            size_t start = pos + key.size();
            size_t end = text.find('\n', start);
            if (end == std::string_view::npos) end = text.size();
            return std::string(trim(text.substr(start, end - start)));
        }
        pos += key.size();
    }
    return std::nullopt;
}

}  // namespace

ReasoningResult parse_reasoning(std::string_view text, const Domain& domain) {
    ReasoningResult r;
    r.raw_text = std::string(text);

    auto path = section_content(text, "Heuristic Path:");
    if (!path) path = section_content(text, "Optimal Actions:");  // older label
    if (!path) throw MissingSection("Heuristic Path");
    auto preds = section_content(text, "Relevant Action Predicates:");
    if (!preds) throw MissingSection("Relevant Action Predicates");
    auto objs = section_content(text, "Relevant Objects:");
    if (!objs) throw MissingSection("Relevant Objects");

    for (const auto& tok : split(*path, ','))
        r.path.actions.push_back(normalize_action(domain, tok));
    for (const auto& tok : split(*preds, ','))
        r.relevant_predicates.push_back(normalize_symbol(domain, tok, true));
    for (const auto& tok : split(*objs, ','))
        r.relevant_objects.push_back(normalize_symbol(domain, tok, false));
    return r;
}

std::string to_string(const Violation& v) {
    std::string out;
    switch (v.kind) {
        case Violation::UnknownActionPredicate: out = "unknown action predicate"; break;
        case Violation::UnknownObject: out = "unknown object"; break;
        case Violation::InvalidGrounding: out = "invalid grounding"; break;
        case Violation::MalformedEntry: out = "malformed entry"; break;
    }
    out += " '" + v.token + "'";
    if (!v.message.empty()) out += ": " + v.message;
    if (!v.suggestion.empty()) out += " (closest match: " + v.suggestion + ")";
    return out;
}

namespace {

std::string nearest_schema(const Domain& d, const std::string& token) {
    std::string best;
    size_t best_dist = SIZE_MAX;
    std::string t = lower(token);
    for (PredicateId q = 0; q < d.schema_count(); ++q) {
        size_t dist = levenshtein(t, lower(d.schema(q).name));
        if (dist < best_dist || (dist == best_dist && d.schema(q).name < best)) {
            best_dist = dist;
            best = d.schema(q).name;
        }
    }
    return best;
}

std::string nearest_object(const Domain& d, const std::string& token) {
    std::string best;
    size_t best_dist = SIZE_MAX;
    std::string t = lower(token);
    for (ObjectId o = 0; o < d.object_count(); ++o) {
        size_t dist = levenshtein(t, lower(d.object_name(o)));
        if (dist < best_dist || (dist == best_dist && d.object_name(o) < best)) {
            best_dist = dist;
            best = d.object_name(o);
        }
    }
    return best;
}

}  // namespace

std::vector<Violation> grammar_check(const ReasoningResult& result, const Domain& domain,
                                     std::span<const ActionId> action_set) {
    std::vector<Violation> out;

    auto check_action = [&](const std::string& entry) {
        ActionTokens t = tokenize_action(entry);
        if (t.malformed) {
            out.push_back({Violation::MalformedEntry, entry, "cannot split into verb_objects", ""});
            return;
        }
        auto q = domain.find_schema_ci(t.predicate);
        if (!q) {
            out.push_back({Violation::UnknownActionPredicate, entry, "verb '" + t.predicate + "'",
                           nearest_schema(domain, t.predicate)});
            return;
        }
        std::string name = domain.schema(*q).name;
        for (const auto& o : t.objects) {
            auto obj = domain.find_object_ci(o);
            if (!obj) {
                out.push_back({Violation::UnknownObject, entry, "object '" + std::string(trim(o)) + "'",
                               nearest_object(domain, std::string(trim(o)))});
                return;
            }
            name += "_" + domain.object_name(*obj);
        }
        auto a = domain.find_action(name);
        if (!a) {
            out.push_back({Violation::InvalidGrounding, entry,
                           "no category-valid action " + name, ""});
            return;
        }
        if (!action_set.empty() &&
            !std::binary_search(action_set.begin(), action_set.end(), *a)) {
            out.push_back({Violation::InvalidGrounding, entry,
                           "action " + name + " is outside the allowed action set", ""});
        }
    };

    for (const auto& entry : result.path.actions) check_action(entry);
    for (const auto& entry : result.relevant_predicates) {
        if (!domain.find_schema_ci(entry))
            out.push_back({Violation::UnknownActionPredicate, entry, "",
                           nearest_schema(domain, entry)});
    }
    for (const auto& entry : result.relevant_objects) {
        if (!domain.find_object_ci(entry))
            out.push_back({Violation::UnknownObject, entry, "", nearest_object(domain, entry)});
    }
    return out;
}

namespace {

ReasoningResult reasoning_from_path(const Domain& domain, std::span<const ActionId> path) {
    ReasoningResult r;
    std::vector<std::string> preds, objs;
    for (ActionId aid : path) {
        const auto& a = domain.action(aid);
        r.path.actions.push_back(a.name);
        preds.push_back(domain.schema(a.schema).name);
        for (ObjectId o : a.args) objs.push_back(domain.object_name(o));
    }
    std::sort(preds.begin(), preds.end());
    preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
    std::sort(objs.begin(), objs.end());
    objs.erase(std::unique(objs.begin(), objs.end()), objs.end());
    r.relevant_predicates = std::move(preds);
    r.relevant_objects = std::move(objs);
    std::ostringstream raw;
    raw << "Heuristic Path: ";
    for (size_t i = 0; i < r.path.actions.size(); ++i)
        raw << (i ? ", " : "") << r.path.actions[i];
    raw << "\nRelevant Action Predicates: ";
    for (size_t i = 0; i < r.relevant_predicates.size(); ++i)
        raw << (i ? ", " : "") << r.relevant_predicates[i];
    raw << "\nRelevant Objects: ";
    for (size_t i = 0; i < r.relevant_objects.size(); ++i)
        raw << (i ? ", " : "") << r.relevant_objects[i];
    raw << "\n";
    r.raw_text = raw.str();
    return r;
}

}  // namespace

ReasoningResult OracleProvider::query(const Domain& domain, const Task& task,
                                      const FeedbackPayload*) {
    OraclePath p = oracle_plan(domain, task.s0, task.goal, max_states_);
    return reasoning_from_path(domain, p.actions);
}

std::vector<ActionId> perturb_path(std::span<const ActionId> optimal, double correct_rate,
                                   double error_rate, uint64_t seed,
                                   std::span<const ActionId> injection_pool) {
    if (correct_rate < 0.0 || correct_rate > 1.0 || error_rate < 0.0 || error_rate > 1.0)
        throw std::invalid_argument("rates must be within [0, 1]");
    Rng rng(seed);
    std::vector<ActionId> kept;
    for (ActionId a : optimal)
        if (rng.bernoulli(correct_rate)) kept.push_back(a);

    size_t injected = 0;
    if (error_rate > 0.0 && error_rate < 1.0 && !injection_pool.empty())
        injected = size_t(std::llround(double(kept.size()) * error_rate / (1.0 - error_rate)));
    else if (error_rate >= 1.0 && !injection_pool.empty())
        injected = std::max<size_t>(1, kept.size());

    if (injected == 0) return kept;  // pure omission keeps the original order
    for (size_t i = 0; i < injected; ++i)
        kept.push_back(injection_pool[size_t(rng.bounded(injection_pool.size()))]);
    rng.shuffle(kept);
    return kept;
}

MockProvider::MockProvider(double correct_rate, double error_rate, uint64_t seed,
                           size_t max_states)
    : correct_rate_(correct_rate), error_rate_(error_rate), seed_(seed),
      max_states_(max_states) {
    if (correct_rate < 0.0 || correct_rate > 1.0 || error_rate < 0.0 || error_rate > 1.0)
        throw std::invalid_argument("mock rates must be within [0, 1]");
}

ReasoningResult MockProvider::query(const Domain& domain, const Task& task,
                                    const FeedbackPayload* feedback) {
    OraclePath p = oracle_plan(domain, task.s0, task.goal, max_states_);

    std::vector<char> in_optimal(domain.actions().size(), 0);
    for (ActionId a : p.actions) in_optimal[a] = 1;
    std::vector<ActionId> pool;
    for (ActionId a = 0; a < domain.actions().size(); ++a)
        if (!in_optimal[a]) pool.push_back(a);

    uint64_t call_seed = splitmix64(seed_ ^ task.s0.hash() ^ (task.goal.hash() << 1) ^
                                    uint64_t(feedback ? feedback->round : 0));
    auto perturbed = perturb_path(p.actions, correct_rate_, error_rate_, call_seed, pool);
    return reasoning_from_path(domain, perturbed);
}

// --- Live LLM client ---

LlmConfig LlmConfig::from_env() {
    LlmConfig c;
    if (const char* e = std::getenv("HBTP_LLM_ENDPOINT")) c.endpoint = e;
    if (const char* e = std::getenv("HBTP_LLM_MODEL")) c.model = e;
    if (const char* e = std::getenv("HBTP_LLM_KEY")) c.api_key = e;
    return c;
}

struct LlmProvider::Impl {
    LlmConfig config;
    std::vector<Demo> demos;
    std::mutex mutex;
    std::unordered_map<uint64_t, std::string> cache;  // prompt hash -> completion
    std::vector<std::string> replay;
    size_t replay_cursor = 0;
    bool replay_loaded = false;

    std::string complete(const std::string& prompt) {
        uint64_t key = 0xcbf29ce484222325ull;
        for (unsigned char c : prompt) key = (key ^ c) * 0x100000001b3ull;
        {
            std::lock_guard lock(mutex);
            auto it = cache.find(key);
            if (it != cache.end()) return it->second;
        }
        std::string content = config.replay_file.empty() ? post(prompt) : replay_next();
        std::lock_guard lock(mutex);
        cache.emplace(key, content);
        return content;
    }

    std::string replay_next() {
        std::lock_guard lock(mutex);
        if (!replay_loaded) {
            std::ifstream in(config.replay_file);
            if (!in) throw ProviderError("cannot open replay file: " + config.replay_file);
            nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
            if (j.is_discarded() || !j.is_array())
                throw ProviderError("replay file must hold a JSON array of completions");
            for (const auto& item : j) replay.push_back(item.get<std::string>());
            replay_loaded = true;
        }
        if (replay_cursor >= replay.size())
            throw ProviderError("replay fixture exhausted after " +
                                std::to_string(replay.size()) + " completions");
        return replay[replay_cursor++];
    }

    std::string post(const std::string& prompt) {
        if (config.endpoint.empty()) throw ProviderError("no LLM endpoint configured");
        std::string base = config.endpoint;
        std::string path_prefix;
        // Separate scheme://host[:port] from any base path such as /v1.
        auto scheme_end = base.find("://");
        size_t path_start = base.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
        if (path_start != std::string::npos) {
            path_prefix = base.substr(path_start);
            base = base.substr(0, path_start);
        }
        while (!path_prefix.empty() && path_prefix.back() == '/') path_prefix.pop_back();

        nlohmann::json body;
        body["model"] = config.model;
        body["temperature"] = config.temperature;
        body["messages"] = nlohmann::json::array({
            {{"role", "user"}, {"content", prompt}},
        });

        httplib::Client client(base);
        client.set_connection_timeout(30);
        client.set_read_timeout(120);
        httplib::Headers headers;
        if (!config.api_key.empty())
            headers.emplace("Authorization", "Bearer " + config.api_key);

        auto res = client.Post(path_prefix + "/chat/completions", headers, body.dump(),
                               "application/json");
        if (!res)
            throw ProviderError("transport failure talking to " + base + ": " +
                                httplib::to_string(res.error()));
        if (res->status != 200)
            throw ProviderError("chat completion returned HTTP " + std::to_string(res->status) +
                                ": " + res->body);
        nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
        if (j.is_discarded()) throw ProviderError("malformed completion response body");
        try {
            return j.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (...) {
            throw ProviderError("completion response missing choices[0].message.content");
        }
    }
};

LlmProvider::LlmProvider(LlmConfig config, std::vector<Demo> demos) : impl_(new Impl) {
    impl_->config = std::move(config);
    impl_->demos = std::move(demos);
}

LlmProvider::~LlmProvider() = default;

ReasoningResult LlmProvider::query(const Domain& domain, const Task& task,
                                   const FeedbackPayload* feedback) {
    std::vector<std::string> blacklist;
    std::vector<Violation> last_violations;
    const int attempts = std::max(1, impl_->config.max_attempts);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        std::string prompt = build_prompt(domain, task, impl_->demos, blacklist, feedback);
        std::string content = impl_->complete(prompt);
        ReasoningResult parsed;
        try {
            parsed = parse_reasoning(content, domain);
        } catch (const MissingSection& e) {
            last_violations = {{Violation::MalformedEntry, e.section, "section missing", ""}};
            blacklist.push_back("output without '" + e.section + ":' section");
            continue;
        }
        last_violations = grammar_check(parsed, domain);
        if (last_violations.empty()) return parsed;
        for (const auto& v : last_violations) blacklist.push_back(to_string(v));
    }
    throw RetriesExhausted(attempts, std::move(last_violations));
}

std::unique_ptr<HeuristicProvider> make_provider(const ProviderConfig& config) {
    switch (config.kind) {
        case ProviderConfig::Oracle:
            return std::make_unique<OracleProvider>(config.oracle_max_states);
        case ProviderConfig::Mock:
            return std::make_unique<MockProvider>(config.correct_rate, config.error_rate,
                                                  config.seed, config.oracle_max_states);
        case ProviderConfig::LiveLlm:
            return std::make_unique<LlmProvider>(config.llm, config.demos);
    }
    throw std::invalid_argument("unknown provider kind");
}

}  // namespace hbtp
