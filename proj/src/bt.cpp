#include "hbtp/bt.hpp"

#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hbtp {

BTNode cond_leaf(Condition c) {
    BTNode n;
    n.kind = BTKind::ConditionLeaf;
    n.condition = std::move(c);
    return n;
}

BTNode action_leaf(ActionId a) {
    BTNode n;
    n.kind = BTKind::ActionLeaf;
    n.action = a;
    return n;
}

BTNode fallback(std::vector<BTNode> children) {
    if (children.empty()) throw std::invalid_argument("fallback needs at least one child");
    BTNode n;
    n.kind = BTKind::Fallback;
    for (auto& c : children) {
        if (c.kind == BTKind::Fallback) {
            for (auto& gc : c.children) n.children.push_back(std::move(gc));
        } else {
            n.children.push_back(std::move(c));
        }
    }
    return n;
}

BTNode sequence(std::vector<BTNode> children) {
    if (children.empty()) throw std::invalid_argument("sequence needs at least one child");
    BTNode n;
    n.kind = BTKind::Sequence;
    n.children = std::move(children);
    return n;
}

BTNode dnf_goal_tree(std::vector<BTNode> disjunct_trees) {
    if (disjunct_trees.empty()) throw std::invalid_argument("dnf goal needs at least one disjunct");
    BTNode n;
    n.kind = BTKind::Fallback;
    n.children = std::move(disjunct_trees);
    return n;
}

TickResult tick(const BTNode& tree, const State& s) {
    switch (tree.kind) {
        case BTKind::ConditionLeaf:
            return {holds(tree.condition, s) ? TickStatus::Success : TickStatus::Failure,
                    std::nullopt};
        case BTKind::ActionLeaf:
            return {TickStatus::Running, tree.action};
        case BTKind::Fallback:
            for (const auto& c : tree.children) {
                TickResult r = tick(c, s);
                if (r.status != TickStatus::Failure) return r;
            }
            return {TickStatus::Failure, std::nullopt};
        case BTKind::Sequence:
            for (const auto& c : tree.children) {
                TickResult r = tick(c, s);
                if (r.status != TickStatus::Success) return r;
            }
            return {TickStatus::Success, std::nullopt};
    }
    return {TickStatus::Failure, std::nullopt};
}

namespace {

using json = nlohmann::ordered_json;

json node_to_json(const BTNode& n, const Domain& d) {
    json j;
    switch (n.kind) {
        case BTKind::Fallback: j["kind"] = "fallback"; break;
        case BTKind::Sequence: j["kind"] = "sequence"; break;
        case BTKind::ConditionLeaf: {
            j["kind"] = "condition";
            json lits = json::array();
            for (Literal l : n.condition) lits.push_back(d.literal_name(l));
            j["literals"] = std::move(lits);
            return j;
        }
        case BTKind::ActionLeaf:
            j["kind"] = "action";
            j["name"] = d.action(n.action).name;
            return j;
    }
    json kids = json::array();
    for (const auto& c : n.children) kids.push_back(node_to_json(c, d));
    j["children"] = std::move(kids);
    return j;
}

BTNode node_from_json(const json& j, const Domain& d) {
    const std::string kind = j.at("kind").get<std::string>();
    BTNode n;
    if (kind == "condition") {
        std::vector<Literal> lits;
        for (const auto& s : j.at("literals"))
            lits.push_back(d.parse_literal(s.get<std::string>()));
        n = cond_leaf(Condition(std::move(lits)));
    } else if (kind == "action") {
        auto a = d.find_action(j.at("name").get<std::string>());
        if (!a) throw std::runtime_error("unknown action in tree: " + j.at("name").get<std::string>());
        n = action_leaf(*a);
    } else if (kind == "fallback" || kind == "sequence") {
        n.kind = kind == "fallback" ? BTKind::Fallback : BTKind::Sequence;
        for (const auto& c : j.at("children")) n.children.push_back(node_from_json(c, d));
        if (n.children.empty()) throw std::runtime_error("composite node with no children");
    } else {
        throw std::runtime_error("unknown node kind: " + kind);
    }
    return n;
}

void render(const BTNode& n, const Domain& d, int depth, std::ostringstream& out) {
    out << std::string(size_t(depth) * 2, ' ');
    switch (n.kind) {
        case BTKind::Fallback: out << "Fallback\n"; break;
        case BTKind::Sequence: out << "Sequence\n"; break;
        case BTKind::ConditionLeaf:
            out << "Cond " << (n.condition.empty() ? "(true)" : d.condition_name(n.condition))
                << "\n";
            return;
        case BTKind::ActionLeaf: out << "Act  " << d.action(n.action).name << "\n"; return;
    }
    for (const auto& c : n.children) render(c, d, depth + 1, out);
}

}  // namespace

std::string serialize_bt(const BTNode& tree, const Domain& domain) {
    json j;
    j["format"] = "hbtp-bt";
    j["version"] = 1;
    j["root"] = node_to_json(tree, domain);
    return j.dump(2) + "\n";
}

BTNode deserialize_bt(std::string_view text, const Domain& domain) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("malformed tree document: ") + e.what());
    }
    if (j.value("format", "") != "hbtp-bt")
        throw std::runtime_error("not an hbtp-bt document");
    return node_from_json(j.at("root"), domain);
}

std::string render_bt(const BTNode& tree, const Domain& domain) {
    std::ostringstream out;
    render(tree, domain, 0, out);
    return out.str();
}

}  // namespace hbtp
