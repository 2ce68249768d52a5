#include "hbtp/domain.hpp"

#include <algorithm>
#include <functional>

#include "hbtp/util.hpp"

namespace hbtp {

Condition::Condition(std::vector<Literal> lits) : lits_(std::move(lits)) {
    std::sort(lits_.begin(), lits_.end());
    lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
}

bool Condition::contains(Literal l) const {
    return std::binary_search(lits_.begin(), lits_.end(), l);
}

bool Condition::subset_of(const Condition& s) const {
    if (lits_.size() > s.lits_.size()) return false;
    auto it = s.lits_.begin();
    for (Literal l : lits_) {
        it = std::lower_bound(it, s.lits_.end(), l);
        if (it == s.lits_.end() || *it != l) return false;
        ++it;
    }
    return true;
}

bool Condition::intersects(const Condition& o) const {
    auto a = lits_.begin();
    auto b = o.lits_.begin();
    while (a != lits_.end() && b != o.lits_.end()) {
        if (*a == *b) return true;
        if (*a < *b) ++a; else ++b;
    }
    return false;
}

Condition Condition::set_union(const Condition& o) const {
    std::vector<Literal> out;
    out.reserve(lits_.size() + o.lits_.size());
    std::set_union(lits_.begin(), lits_.end(), o.lits_.begin(), o.lits_.end(),
                   std::back_inserter(out));
    return from_sorted(std::move(out));
}

Condition Condition::set_minus(const Condition& o) const {
    std::vector<Literal> out;
    out.reserve(lits_.size());
    std::set_difference(lits_.begin(), lits_.end(), o.lits_.begin(), o.lits_.end(),
                        std::back_inserter(out));
    return from_sorted(std::move(out));
}

void Condition::insert(Literal l) {
    auto it = std::lower_bound(lits_.begin(), lits_.end(), l);
    if (it == lits_.end() || *it != l) lits_.insert(it, l);
}

void Condition::erase(Literal l) {
    auto it = std::lower_bound(lits_.begin(), lits_.end(), l);
    if (it != lits_.end() && *it == l) lits_.erase(it);
}

uint64_t Condition::hash() const {
    uint64_t h = 0x243f6a8885a308d3ull;
    for (Literal l : lits_) h = hash_combine(h, l.key());
    return h;
}

// --- Domain lookups ---

std::optional<ObjectId> Domain::find_object(std::string_view name) const {
    auto it = object_index_.find(std::string(name));
    if (it == object_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<CategoryId> Domain::find_category(std::string_view name) const {
    auto it = category_index_.find(std::string(name));
    if (it == category_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<PredicateId> Domain::find_condition_predicate(std::string_view name) const {
    auto it = cond_pred_index_.find(std::string(name));
    if (it == cond_pred_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<PredicateId> Domain::find_schema(std::string_view name) const {
    auto it = schema_index_.find(std::string(name));
    if (it == schema_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<ActionId> Domain::find_action(std::string_view name) const {
    auto it = action_index_.find(std::string(name));
    if (it == action_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<ObjectId> Domain::find_object_ci(std::string_view name) const {
    auto it = object_index_ci_.find(lower(name));
    if (it == object_index_ci_.end()) return std::nullopt;
    return it->second;
}

std::optional<PredicateId> Domain::find_schema_ci(std::string_view name) const {
    auto it = schema_index_ci_.find(lower(name));
    if (it == schema_index_ci_.end()) return std::nullopt;
    return it->second;
}

bool Domain::object_in_category(ObjectId o, CategoryId c) const {
    if (c == kCategoryAll) return true;
    const auto& cats = object_cats_[o];
    return std::find(cats.begin(), cats.end(), c) != cats.end();
}

std::string Domain::literal_name(Literal l) const {
    std::string out = cond_preds_[l.predicate()].name;
    out += '(';
    for (int i = 0; i < l.arity(); ++i) {
        if (i > 0) out += ',';
        out += objects_[l.arg(i)];
    }
    out += ')';
    return out;
}

std::string Domain::condition_name(const Condition& c) const {
    std::string out;
    for (Literal l : c) {
        if (!out.empty()) out += " & ";
        out += literal_name(l);
    }
    return out;
}

Literal Domain::parse_literal(std::string_view text) const {
    auto t = trim(text);
    auto open = t.find('(');
    std::string pred_name;
    std::vector<std::string> arg_names;
    if (open == std::string_view::npos) {
        pred_name = std::string(t);
    } else {
        if (t.back() != ')') throw std::invalid_argument("missing ')' in literal: " + std::string(t));
        pred_name = std::string(trim(t.substr(0, open)));
        arg_names = split(t.substr(open + 1, t.size() - open - 2), ',');
    }
    auto pred = find_condition_predicate(pred_name);
    if (!pred) throw std::invalid_argument("unknown condition predicate: " + pred_name);
    const auto& decl = cond_preds_[*pred];
    if (arg_names.size() != decl.param_categories.size())
        throw std::invalid_argument("arity mismatch for " + pred_name);
    std::vector<ObjectId> args;
    for (size_t i = 0; i < arg_names.size(); ++i) {
        auto o = find_object(arg_names[i]);
        if (!o) throw std::invalid_argument("unknown object: " + arg_names[i]);
        if (!object_in_category(*o, decl.param_categories[i]))
            throw std::invalid_argument("object " + arg_names[i] + " not in category " +
                                        categories_[decl.param_categories[i]] + " for " + pred_name);
        args.push_back(*o);
    }
    return Literal::make(*pred, args);
}

// --- DomainBuilder ---

DomainBuilder::DomainBuilder(std::string name) {
    d_.name_ = std::move(name);
    d_.categories_.push_back("ALL");
    d_.category_members_.emplace_back();
    d_.category_index_["ALL"] = kCategoryAll;
}

CategoryId DomainBuilder::add_category(const std::string& name) {
    auto it = d_.category_index_.find(name);
    if (it != d_.category_index_.end()) return it->second;
    CategoryId id = CategoryId(d_.categories_.size());
    d_.categories_.push_back(name);
    d_.category_members_.emplace_back();
    d_.category_index_[name] = id;
    return id;
}

ObjectId DomainBuilder::add_object(const std::string& name,
                                   const std::vector<std::string>& categories) {
    if (d_.object_index_.count(name)) throw std::invalid_argument("duplicate object: " + name);
    if (d_.objects_.size() >= 0xfffe) throw std::invalid_argument("too many objects");
    ObjectId id = ObjectId(d_.objects_.size());
    d_.objects_.push_back(name);
    d_.object_index_[name] = id;
    d_.object_index_ci_[lower(name)] = id;
    d_.category_members_[kCategoryAll].push_back(id);
    std::vector<CategoryId> cats;
    for (const auto& c : categories) {
        CategoryId cid = add_category(c);
        if (std::find(cats.begin(), cats.end(), cid) == cats.end()) {
            cats.push_back(cid);
            d_.category_members_[cid].push_back(id);
        }
    }
    d_.object_cats_.push_back(std::move(cats));
    return id;
}

PredicateId DomainBuilder::add_condition_predicate(
    const std::string& name, const std::vector<std::string>& param_categories) {
    if (d_.cond_pred_index_.count(name))
        throw std::invalid_argument("duplicate condition predicate: " + name);
    if (param_categories.size() > kMaxArity)
        throw std::invalid_argument("predicate arity > 3: " + name);
    PredicateDecl decl;
    decl.name = name;
    for (const auto& c : param_categories) decl.param_categories.push_back(category(c));
    PredicateId id = PredicateId(d_.cond_preds_.size());
    d_.cond_preds_.push_back(std::move(decl));
    d_.cond_pred_index_[name] = id;
    return id;
}

PredicateId DomainBuilder::add_schema(ActionSchema schema) {
    if (d_.schema_index_.count(schema.name))
        throw std::invalid_argument("duplicate action predicate: " + schema.name);
    if (schema.param_categories.size() > kMaxArity)
        throw std::invalid_argument("action arity > 3: " + schema.name);
    if (schema.cost <= 0.0)
        throw std::invalid_argument("non-positive cost for action " + schema.name);
    PredicateId id = PredicateId(d_.schemas_.size());
    d_.schema_index_[schema.name] = id;
    d_.schema_index_ci_[lower(schema.name)] = id;
    d_.schemas_.push_back(std::move(schema));
    return id;
}

CategoryId DomainBuilder::category(const std::string& name) const {
    auto it = d_.category_index_.find(name);
    if (it == d_.category_index_.end()) throw std::invalid_argument("unknown category: " + name);
    return it->second;
}

PredicateId DomainBuilder::condition_predicate(const std::string& name) const {
    auto it = d_.cond_pred_index_.find(name);
    if (it == d_.cond_pred_index_.end())
        throw std::invalid_argument("unknown condition predicate: " + name);
    return it->second;
}

namespace {

// All category-valid groundings of a condition predicate.
void enumerate_groundings(const Domain& d, PredicateId pred, const PredicateDecl& decl,
                          std::vector<Literal>& out) {
    std::vector<ObjectId> args(decl.param_categories.size());
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == args.size()) {
            out.push_back(Literal::make(pred, args));
            return;
        }
        for (ObjectId o : d.category_members(decl.param_categories[i])) {
            args[i] = o;
            rec(i + 1);
        }
    };
    rec(0);
}

}  // namespace

void DomainBuilder::ground_schema(PredicateId q) {
    const ActionSchema& schema = d_.schemas_[q];
    std::vector<ObjectId> binding(schema.param_categories.size());

    auto instantiate = [&](const std::vector<SchemaLiteral>& templ, bool allow_wildcard,
                           std::vector<Literal>& out) {
        for (const auto& tl : templ) {
            const auto& decl = d_.cond_preds_[tl.pred];
            if (tl.args.size() != decl.param_categories.size())
                throw std::invalid_argument("arity mismatch for " + decl.name + " in action " +
                                            schema.name);
            int wildcard_pos = -1;
            std::vector<ObjectId> args(tl.args.size());
            for (size_t i = 0; i < tl.args.size(); ++i) {
                switch (tl.args[i].kind) {
                    case SchemaArg::Param: args[i] = binding[tl.args[i].index]; break;
                    case SchemaArg::Object: args[i] = ObjectId(tl.args[i].index); break;
                    case SchemaArg::Wildcard:
                        if (!allow_wildcard)
                            throw std::invalid_argument("wildcard outside del in " + schema.name);
                        wildcard_pos = int(i);
                        break;
                }
                if (int(i) != wildcard_pos &&
                    !d_.object_in_category(args[i], decl.param_categories[i]))
                    throw std::invalid_argument("object " + d_.objects_[args[i]] +
                                                " is outside category " +
                                                d_.categories_[decl.param_categories[i]] +
                                                " in literal " + decl.name + " of action " +
                                                schema.name);
            }
            if (wildcard_pos < 0) {
                out.push_back(Literal::make(tl.pred, args));
            } else {
                for (ObjectId o : d_.category_members_[decl.param_categories[wildcard_pos]]) {
                    args[wildcard_pos] = o;
                    out.push_back(Literal::make(tl.pred, args));
                }
            }
        }
    };

    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == binding.size()) {
            GroundedAction a;
            a.schema = q;
            a.args.assign(binding.begin(), binding.end());
            a.cost = schema.cost;
            a.name = schema.name;
            for (ObjectId o : binding) a.name += "_" + d_.objects_[o];

            std::vector<Literal> pre, add, del;
            instantiate(schema.pre, false, pre);
            instantiate(schema.add, false, add);
            instantiate(schema.del, true, del);
            a.pre = Condition(std::move(pre));
            a.add = Condition(std::move(add));

            // Mutex groups: adding one grounding of the predicate deletes all
            // the others.
            for (PredicateId mp : schema.mutex_predicates) {
                std::vector<Literal> all;
                enumerate_groundings(d_, mp, d_.cond_preds_[mp], all);
                for (Literal l : a.add)
                    if (l.predicate() == mp)
                        for (Literal other : all)
                            if (other != l) del.push_back(other);
            }
            Condition del_c{std::move(del)};
            // Wildcard/mutex expansions may sweep in the action's own adds;
            // explicit overlaps were rejected at parse time.
            a.del = del_c.set_minus(a.add);

            if (a.add.intersects(a.del))
                throw std::invalid_argument("add/del overlap in action " + a.name);

            a.id = ActionId(d_.actions_.size());
            d_.action_index_[a.name] = a.id;
            d_.actions_.push_back(std::move(a));
            return;
        }
        for (ObjectId o : d_.category_members_[schema.param_categories[i]]) {
            binding[i] = o;
            rec(i + 1);
        }
    };
    rec(0);
}

Domain DomainBuilder::build() {
    for (PredicateId q = 0; q < d_.schemas_.size(); ++q) {
        // Validate explicit add/del disjointness at the template level where
        // both sides are wildcard-free; grounded overlap is checked per action.
        ground_schema(q);
    }
    return std::move(d_);
}

// --- Operations ---

State apply_action_checked(const State& s, const GroundedAction& a) {
    if (!applicable(s, a))
        throw PreconditionViolated("precondition of " + a.name + " does not hold");
    return apply_action(s, a);
}

bool is_relevant_consistent(const Condition& c, const GroundedAction& a, RelevanceGuard guard) {
    if (c.intersects(a.del)) return false;  // c \ del = c
    switch (guard) {
        case RelevanceGuard::Standard:
            return c.intersects(a.add);
        case RelevanceGuard::BroadUnionFirst:
            // c & ((pre U add) \ del) != {}
            for (Literal l : c)
                if ((a.pre.contains(l) || a.add.contains(l)) && !a.del.contains(l)) return true;
            return false;
        case RelevanceGuard::BroadMinusFirst:
            // c & (pre U (add \ del)) != {}
            if (c.intersects(a.pre)) return true;
            for (Literal l : c)
                if (a.add.contains(l) && !a.del.contains(l)) return true;
            return false;
    }
    return false;
}

}  // namespace hbtp
