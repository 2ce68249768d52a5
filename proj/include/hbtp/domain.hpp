#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace hbtp {

using PredicateId = uint16_t;
using ObjectId = uint16_t;
using CategoryId = uint16_t;
using ActionId = uint32_t;

inline constexpr int kMaxArity = 3;
inline constexpr CategoryId kCategoryAll = 0;  // implicit category holding every object

// A ground literal packed into a single word:
//   [pred:13][arity:3][arg0:16][arg1:16][arg2:16]
// The packed key gives literals a canonical total order, so id-sorted arrays
// of literals serialize identically for equal sets.
class Literal {
public:
    Literal() : key_(0) {}

    static Literal make(PredicateId pred, std::span<const ObjectId> args) {
        if (args.size() > kMaxArity) throw std::invalid_argument("literal arity > 3");
        if (pred >= (1u << 13)) throw std::invalid_argument("predicate id overflow");
        uint64_t k = (uint64_t(pred) << 51) | (uint64_t(args.size()) << 48);
        for (size_t i = 0; i < args.size(); ++i)
            k |= uint64_t(args[i]) << (32 - 16 * i);
        return Literal(k);
    }
    static Literal make(PredicateId pred, std::initializer_list<ObjectId> args) {
        return make(pred, std::span<const ObjectId>(args.begin(), args.size()));
    }

    PredicateId predicate() const { return PredicateId(key_ >> 51); }
    int arity() const { return int((key_ >> 48) & 0x7); }
    ObjectId arg(int i) const { return ObjectId((key_ >> (32 - 16 * i)) & 0xffff); }
    uint64_t key() const { return key_; }

    auto operator<=>(const Literal&) const = default;

private:
    explicit Literal(uint64_t k) : key_(k) {}
    uint64_t key_;
};

// A duplicate-free, id-sorted set of literals. States and goal conditions
// share this representation; all set operations are merge walks.
class Condition {
public:
    Condition() = default;
    explicit Condition(std::vector<Literal> lits);

    static Condition from_sorted(std::vector<Literal> lits) {
        Condition c;
        c.lits_ = std::move(lits);
        return c;
    }

    bool contains(Literal l) const;
    bool subset_of(const Condition& s) const;
    bool intersects(const Condition& o) const;
    Condition set_union(const Condition& o) const;
    Condition set_minus(const Condition& o) const;
    void insert(Literal l);
    void erase(Literal l);

    size_t size() const { return lits_.size(); }
    bool empty() const { return lits_.empty(); }
    const std::vector<Literal>& literals() const { return lits_; }
    auto begin() const { return lits_.begin(); }
    auto end() const { return lits_.end(); }

    auto operator<=>(const Condition&) const = default;
    uint64_t hash() const;

private:
    std::vector<Literal> lits_;
};

using State = Condition;

struct ConditionHash {
    size_t operator()(const Condition& c) const { return size_t(c.hash()); }
};

struct GroundedAction {
    ActionId id = 0;
    std::string name;  // SchemaName_arg1_arg2
    PredicateId schema = 0;
    std::vector<ObjectId> args;
    Condition pre, add, del;
    double cost = 1.0;
};

// Literal template inside an action schema. Arguments are either schema
// parameter references, fixed objects, or (in delete effects only) a
// wildcard expanding to every category-valid object at that position.
struct SchemaArg {
    enum Kind { Param, Object, Wildcard } kind = Param;
    uint16_t index = 0;  // param index or object id
};

struct SchemaLiteral {
    PredicateId pred = 0;
    std::vector<SchemaArg> args;
};

struct ActionSchema {
    std::string name;
    std::vector<std::string> param_names;
    std::vector<CategoryId> param_categories;
    std::vector<SchemaLiteral> pre, add, del;
    double cost = 1.0;
    // Predicates whose other groundings are deleted whenever this action adds
    // one of them (Walk-style mutual exclusion).
    std::vector<PredicateId> mutex_predicates;
};

struct PredicateDecl {
    std::string name;
    std::vector<CategoryId> param_categories;
};

// Immutable after construction (via DomainBuilder or parse_domain); safe to
// share across concurrent planner runs.
class Domain {
public:
    const std::string& name() const { return name_; }

    size_t object_count() const { return objects_.size(); }
    const std::string& object_name(ObjectId o) const { return objects_[o]; }
    std::optional<ObjectId> find_object(std::string_view name) const;
    const std::vector<CategoryId>& object_categories(ObjectId o) const { return object_cats_[o]; }
    bool object_in_category(ObjectId o, CategoryId c) const;

    size_t category_count() const { return categories_.size(); }
    const std::string& category_name(CategoryId c) const { return categories_[c]; }
    std::optional<CategoryId> find_category(std::string_view name) const;
    const std::vector<ObjectId>& category_members(CategoryId c) const { return category_members_[c]; }

    size_t condition_predicate_count() const { return cond_preds_.size(); }
    const PredicateDecl& condition_predicate(PredicateId p) const { return cond_preds_[p]; }
    std::optional<PredicateId> find_condition_predicate(std::string_view name) const;

    size_t schema_count() const { return schemas_.size(); }
    const ActionSchema& schema(PredicateId q) const { return schemas_[q]; }
    std::optional<PredicateId> find_schema(std::string_view name) const;

    const std::vector<GroundedAction>& actions() const { return actions_; }
    const GroundedAction& action(ActionId a) const { return actions_[a]; }
    std::optional<ActionId> find_action(std::string_view name) const;

    // Case-insensitive lookups used when normalizing provider output.
    std::optional<ObjectId> find_object_ci(std::string_view name) const;
    std::optional<PredicateId> find_schema_ci(std::string_view name) const;

    std::string literal_name(Literal l) const;
    std::string condition_name(const Condition& c) const;  // "P(a) & Q(b,c)"

    // Parses "Pred(a,b)" against the condition predicate table, validating
    // categories. Throws std::invalid_argument on unknown symbols.
    Literal parse_literal(std::string_view text) const;

private:
    friend class DomainBuilder;
    std::string name_;
    std::vector<std::string> objects_;
    std::vector<std::vector<CategoryId>> object_cats_;
    std::vector<std::string> categories_;
    std::vector<std::vector<ObjectId>> category_members_;
    std::vector<PredicateDecl> cond_preds_;
    std::vector<ActionSchema> schemas_;
    std::vector<GroundedAction> actions_;
    std::unordered_map<std::string, ObjectId> object_index_;
    std::unordered_map<std::string, CategoryId> category_index_;
    std::unordered_map<std::string, PredicateId> cond_pred_index_;
    std::unordered_map<std::string, PredicateId> schema_index_;
    std::unordered_map<std::string, ActionId> action_index_;
    std::unordered_map<std::string, ObjectId> object_index_ci_;
    std::unordered_map<std::string, PredicateId> schema_index_ci_;
};

// Programmatic construction path; the text parser is layered on top of it.
class DomainBuilder {
public:
    explicit DomainBuilder(std::string name = "domain");

    CategoryId add_category(const std::string& name);
    ObjectId add_object(const std::string& name, const std::vector<std::string>& categories);
    PredicateId add_condition_predicate(const std::string& name,
                                        const std::vector<std::string>& param_categories);
    PredicateId add_schema(ActionSchema schema);

    CategoryId category(const std::string& name) const;
    PredicateId condition_predicate(const std::string& name) const;

    // Read-only view of the partially built domain (symbol tables only).
    const Domain& peek() const { return d_; }

    // Grounds every schema over the declared objects and freezes the domain.
    Domain build();

private:
    Domain d_;
    void ground_schema(PredicateId q);
};

struct Task {
    State s0;
    Condition goal;
};

// --- Core operations (state transition and goal regression) ---

inline bool holds(const Condition& c, const State& s) { return c.subset_of(s); }

inline bool applicable(const State& s, const GroundedAction& a) { return holds(a.pre, s); }

// s' = (s \ del) U add; identical to s U add \ del since add and del are
// disjoint by construction.
inline State apply_action(const State& s, const GroundedAction& a) {
    return s.set_minus(a.del).set_union(a.add);
}

struct PreconditionViolated : std::runtime_error {
    explicit PreconditionViolated(const std::string& what) : std::runtime_error(what) {}
};

State apply_action_checked(const State& s, const GroundedAction& a);

enum class RelevanceGuard {
    Standard,        // add(a) & c != {} and del(a) & c == {}
    BroadUnionFirst, // (pre U add) \ del intersects c, del-consistent
    BroadMinusFirst, // pre U (add \ del) intersects c, del-consistent
};

bool is_relevant_consistent(const Condition& c, const GroundedAction& a,
                            RelevanceGuard guard = RelevanceGuard::Standard);

// c_a = pre(a) U (c \ add(a))
inline Condition regress(const Condition& c, const GroundedAction& a) {
    return c.set_minus(a.add).set_union(a.pre);
}

}  // namespace hbtp
