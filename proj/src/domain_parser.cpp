#include "hbtp/domain_parser.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hbtp/util.hpp"

namespace hbtp {

namespace {

struct Line {
    std::string text;
    int number;
};

std::vector<Line> significant_lines(std::string_view text) {
    std::vector<Line> out;
    int number = 0;
    size_t start = 0;
    for (size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            ++number;
            std::string_view raw = text.substr(start, i - start);
            auto hash = raw.find('#');
            if (hash != std::string_view::npos) raw = raw.substr(0, hash);
            auto t = trim(raw);
            if (!t.empty()) out.push_back({std::string(t), number});
            start = i + 1;
        }
    }
    return out;
}

int column_of(const Line& line, std::string_view token) {
    auto pos = line.text.find(std::string(token));
    return pos == std::string::npos ? 1 : int(pos) + 1;
}

// Literal lists are comma separated, but commas also appear inside
// parentheses: On(x, y), Near(y).
std::vector<std::string> split_literals(std::string_view s) {
    std::vector<std::string> out;
    int depth = 0;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || (s[i] == ',' && depth == 0)) {
            auto piece = trim(s.substr(start, i - start));
            if (!piece.empty()) out.emplace_back(piece);
            start = i + 1;
        } else if (s[i] == '(') {
            ++depth;
        } else if (s[i] == ')') {
            --depth;
        }
    }
    return out;
}

// "Name(a, b)" -> {Name, {a, b}}; bare "Name" has no argument list.
struct Signature {
    std::string name;
    std::vector<std::string> args;
};

Signature parse_signature(const Line& line, std::string_view text) {
    auto t = trim(text);
    auto open = t.find('(');
    if (open == std::string_view::npos) return {std::string(t), {}};
    if (t.back() != ')') throw ParseError("missing ')'", line.number, int(t.size()));
    Signature sig;
    sig.name = std::string(trim(t.substr(0, open)));
    sig.args = split(t.substr(open + 1, t.size() - open - 2), ',');
    if (sig.name.empty()) throw ParseError("missing name before '('", line.number, 1);
    return sig;
}

class DomainParser {
public:
    explicit DomainParser(std::string_view text) : lines_(significant_lines(text)) {}

    Domain parse() {
        size_t i = 0;
        if (i < lines_.size() && lines_[i].text.starts_with("DOMAIN")) {
            auto rest = trim(std::string_view(lines_[i].text).substr(6));
            builder_ = DomainBuilder(rest.empty() ? "domain" : std::string(rest));
            ++i;
        }
        while (i < lines_.size()) {
            const Line& header = lines_[i];
            if (header.text == "OBJECTS") {
                i = parse_objects(i + 1);
            } else if (header.text == "PREDICATES") {
                i = parse_predicates(i + 1);
            } else if (header.text == "ACTIONS") {
                i = parse_actions(i + 1);
            } else {
                throw ParseError("expected a section header (OBJECTS, PREDICATES, ACTIONS), got '" +
                                     header.text + "'",
                                 header.number, 1);
            }
        }
        try {
            return builder_.build();
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), lines_.empty() ? 0 : lines_.back().number, 1);
        }
    }

private:
    bool is_section(const std::string& t) const {
        return t == "OBJECTS" || t == "PREDICATES" || t == "ACTIONS";
    }

    size_t parse_objects(size_t i) {
        for (; i < lines_.size() && !is_section(lines_[i].text); ++i) {
            const Line& line = lines_[i];
            auto colon = line.text.find(':');
            if (colon == std::string::npos)
                throw ParseError("expected '<object>: <categories>'", line.number, 1);
            std::string name(trim(std::string_view(line.text).substr(0, colon)));
            auto cats = split(std::string_view(line.text).substr(colon + 1), ',');
            if (name.empty()) throw ParseError("missing object name", line.number, 1);
            for (const auto& c : cats)
                if (c == "ALL")
                    throw ParseError("ALL is implicit and cannot be declared", line.number,
                                     column_of(line, c));
            try {
                builder_.add_object(name, cats);
            } catch (const std::invalid_argument& e) {
                throw ParseError(e.what(), line.number, 1);
            }
        }
        return i;
    }

    size_t parse_predicates(size_t i) {
        for (; i < lines_.size() && !is_section(lines_[i].text); ++i) {
            const Line& line = lines_[i];
            Signature sig = parse_signature(line, line.text);
            for (const auto& cat : sig.args)
                if (cat != "ALL" && !known_category(cat))
                    throw ParseError("unknown category '" + cat + "' in predicate " + sig.name,
                                     line.number, column_of(line, cat));
            try {
                builder_.add_condition_predicate(sig.name, sig.args);
            } catch (const std::invalid_argument& e) {
                throw ParseError(e.what(), line.number, 1);
            }
        }
        return i;
    }

    size_t parse_actions(size_t i) {
        while (i < lines_.size() && !is_section(lines_[i].text)) {
            i = parse_action(i);
        }
        return i;
    }

    bool is_property(const std::string& t) const {
        return t.starts_with("pre:") || t.starts_with("add:") || t.starts_with("del:") ||
               t.starts_with("cost:") || t.starts_with("mutex:");
    }

    size_t parse_action(size_t i) {
        const Line& header = lines_[i];
        if (is_property(header.text))
            throw ParseError("property line outside an action block", header.number, 1);
        Signature sig = parse_signature(header, header.text);

        ActionSchema schema;
        schema.name = sig.name;
        for (const auto& p : sig.args) {
            auto colon = p.find(':');
            if (colon == std::string::npos)
                throw ParseError("expected '<param>: <category>' in action " + sig.name,
                                 header.number, column_of(header, p));
            std::string pname(trim(std::string_view(p).substr(0, colon)));
            std::string cat(trim(std::string_view(p).substr(colon + 1)));
            if (cat != "ALL" && !known_category(cat))
                throw ParseError("unknown category '" + cat + "' in action " + sig.name,
                                 header.number, column_of(header, cat));
            schema.param_names.push_back(pname);
            schema.param_categories.push_back(cat == "ALL" ? kCategoryAll
                                                           : builder_.category(cat));
        }

        bool saw_cost = false;
        ++i;
        for (; i < lines_.size() && is_property(lines_[i].text); ++i) {
            const Line& line = lines_[i];
            auto colon = line.text.find(':');
            std::string key = line.text.substr(0, colon);
            std::string_view value = trim(std::string_view(line.text).substr(colon + 1));
            if (key == "cost") {
                saw_cost = true;
                try {
                    schema.cost = std::stod(std::string(value));
                } catch (...) {
                    throw ParseError("invalid cost '" + std::string(value) + "'", line.number,
                                     int(colon) + 2);
                }
                if (!(schema.cost > 0.0) || !std::isfinite(schema.cost))
                    throw ParseError("cost must be positive in action " + sig.name, line.number,
                                     int(colon) + 2);
            } else if (key == "mutex") {
                for (const auto& m : split(value, ',')) {
                    auto pred = builder_find_pred(m);
                    if (!pred)
                        throw ParseError("unknown mutex predicate '" + m + "'", line.number,
                                         column_of(line, m));
                    schema.mutex_predicates.push_back(*pred);
                }
            } else {
                auto* dst = key == "pre" ? &schema.pre : key == "add" ? &schema.add : &schema.del;
                for (const auto& lit : split_literals(value))
                    dst->push_back(parse_schema_literal(line, lit, schema, key == "del"));
            }
        }
        if (!saw_cost) schema.cost = 1.0;
        try {
            builder_.add_schema(std::move(schema));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), header.number, 1);
        }
        return i;
    }

    SchemaLiteral parse_schema_literal(const Line& line, std::string_view text,
                                       const ActionSchema& schema, bool in_del) {
        Signature sig = parse_signature(line, text);
        auto pred = builder_find_pred(sig.name);
        if (!pred)
            throw ParseError("unknown condition predicate '" + sig.name + "'", line.number,
                             column_of(line, sig.name));
        SchemaLiteral lit;
        lit.pred = *pred;
        for (const auto& arg : sig.args) {
            SchemaArg sa;
            auto param = std::find(schema.param_names.begin(), schema.param_names.end(), arg);
            if (arg == "*") {
                if (!in_del)
                    throw ParseError("'*' is only allowed in del effects", line.number,
                                     column_of(line, arg));
                sa.kind = SchemaArg::Wildcard;
            } else if (param != schema.param_names.end()) {
                sa.kind = SchemaArg::Param;
                sa.index = uint16_t(param - schema.param_names.begin());
            } else {
                sa.kind = SchemaArg::Object;
                auto obj = builder_find_object(arg);
                if (!obj)
                    throw ParseError("unknown object or parameter '" + arg + "'", line.number,
                                     column_of(line, arg));
                sa.index = *obj;
            }
            lit.args.push_back(sa);
        }
        return lit;
    }

    bool known_category(const std::string& name) const {
        return builder_.peek().find_category(name).has_value();
    }
    std::optional<PredicateId> builder_find_pred(const std::string& name) const {
        return builder_.peek().find_condition_predicate(name);
    }
    std::optional<ObjectId> builder_find_object(const std::string& name) const {
        return builder_.peek().find_object(name);
    }

    std::vector<Line> lines_;
    DomainBuilder builder_{"domain"};
};

}  // namespace

Domain parse_domain(std::string_view text) { return DomainParser(text).parse(); }

Domain parse_domain_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open domain file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_domain(ss.str());
}

Task parse_task(std::string_view text, const Domain& domain) {
    Task task;
    bool saw_s0 = false, saw_goal = false;
    for (const auto& line : significant_lines(text)) {
        try {
            if (line.text.starts_with("s0:")) {
                std::vector<Literal> lits;
                for (const auto& piece : split_literals(std::string_view(line.text).substr(3)))
                    lits.push_back(domain.parse_literal(piece));
                task.s0 = Condition(std::move(lits));
                saw_s0 = true;
            } else if (line.text.starts_with("goal:")) {
                std::vector<Literal> lits;
                for (const auto& piece : split(std::string_view(line.text).substr(5), '&'))
                    lits.push_back(domain.parse_literal(piece));
                task.goal = Condition(std::move(lits));
                saw_goal = true;
            } else {
                throw ParseError("expected 's0:' or 'goal:' line", line.number, 1);
            }
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), line.number, 1);
        }
    }
    if (!saw_s0) throw std::runtime_error("task file missing 's0:' line");
    if (!saw_goal) throw std::runtime_error("task file missing 'goal:' line");
    return task;
}

Task parse_task_file(const std::string& path, const Domain& domain) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open task file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_task(ss.str(), domain);
}

std::string serialize_domain(const Domain& domain) {
    std::ostringstream out;
    out << "DOMAIN " << domain.name() << "\n\nOBJECTS\n";
    for (ObjectId o = 0; o < domain.object_count(); ++o) {
        out << "  " << domain.object_name(o) << ":";
        const auto& cats = domain.object_categories(o);
        for (size_t i = 0; i < cats.size(); ++i)
            out << (i ? ", " : " ") << domain.category_name(cats[i]);
        out << "\n";
    }
    out << "\nPREDICATES\n";
    for (PredicateId p = 0; p < domain.condition_predicate_count(); ++p) {
        const auto& decl = domain.condition_predicate(p);
        out << "  " << decl.name << "(";
        for (size_t i = 0; i < decl.param_categories.size(); ++i)
            out << (i ? ", " : "") << domain.category_name(decl.param_categories[i]);
        out << ")\n";
    }
    out << "\nACTIONS\n";
    for (PredicateId q = 0; q < domain.schema_count(); ++q) {
        const auto& s = domain.schema(q);
        out << "  " << s.name << "(";
        for (size_t i = 0; i < s.param_names.size(); ++i)
            out << (i ? ", " : "") << s.param_names[i] << ": "
                << domain.category_name(s.param_categories[i]);
        out << ")\n";
        auto emit = [&](const char* key, const std::vector<SchemaLiteral>& lits) {
            out << "    " << key << ":";
            for (size_t i = 0; i < lits.size(); ++i) {
                const auto& decl = domain.condition_predicate(lits[i].pred);
                out << (i ? ", " : " ") << decl.name << "(";
                for (size_t j = 0; j < lits[i].args.size(); ++j) {
                    const auto& a = lits[i].args[j];
                    if (j) out << ", ";
                    if (a.kind == SchemaArg::Param)
                        out << s.param_names[a.index];
                    else if (a.kind == SchemaArg::Object)
                        out << domain.object_name(ObjectId(a.index));
                    else
                        out << "*";
                }
                out << ")";
            }
            out << "\n";
        };
        emit("pre", s.pre);
        emit("add", s.add);
        emit("del", s.del);
        out << "    cost: " << s.cost << "\n";
        if (!s.mutex_predicates.empty()) {
            out << "    mutex:";
            for (size_t i = 0; i < s.mutex_predicates.size(); ++i)
                out << (i ? ", " : " ")
                    << domain.condition_predicate(s.mutex_predicates[i]).name;
            out << "\n";
        }
    }
    return out.str();
}

std::string serialize_task(const Task& task, const Domain& domain) {
    std::ostringstream out;
    out << "s0:";
    bool first = true;
    for (Literal l : task.s0) {
        out << (first ? " " : ", ") << domain.literal_name(l);
        first = false;
    }
    out << "\ngoal: ";
    first = true;
    for (Literal l : task.goal) {
        if (!first) out << " & ";
        out << domain.literal_name(l);
        first = false;
    }
    out << "\n";
    return out.str();
}

}  // namespace hbtp
