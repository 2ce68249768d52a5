#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "hbtp/domain.hpp"

namespace hbtp {

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line, int col)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ", col " +
                             std::to_string(col) + ")"),
          line(line),
          col(col) {}
    int line;
    int col;
};

// Domain definition document:
//   DOMAIN <name>            (optional)
//   OBJECTS
//     <name>: <category>, <category>...
//   PREDICATES
//     <Name>(<CAT>, <CAT>)   -- zero or more parameters
//   ACTIONS
//     <Name>(<param>: <CAT>, ...)
//       pre:   <literal list>
//       add:   <literal list>
//       del:   <literal list, '*' allowed as an argument>
//       cost:  <positive float>
//       mutex: <condition predicate>
// '#' starts a comment. The implicit category ALL contains every object.
Domain parse_domain(std::string_view text);
Domain parse_domain_file(const std::string& path);

// Task document: one "s0:" line (comma-separated literals) and one "goal:"
// line (literals joined with '&').
Task parse_task(std::string_view text, const Domain& domain);
Task parse_task_file(const std::string& path, const Domain& domain);

// Canonical text form; parse(serialize(d)) grounds to the same action set.
std::string serialize_domain(const Domain& domain);
std::string serialize_task(const Task& task, const Domain& domain);

}  // namespace hbtp
