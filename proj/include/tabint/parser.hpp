#pragma once

#include "tabint/program.hpp"
#include "tabint/term.hpp"

#include <string>

namespace tabint {

// Parses a source unit of the accepted pure subset: clauses over
// user predicates and the evaluable builtins ('='/2, true/0, fail/0,
// 'is'/2, arithmetic comparisons), plus ":- entry Goal : [props]."
// directives. Cut, disjunction, if-then-else, negation and the dynamic
// database are rejected with a ParseError. Recursion classification is
// already applied to the result.
Program parse_program(const std::string& text, const std::string& unit_name = "<input>");

// Reads a file and parses it. Unreadable files raise ParseError.
Program parse_program_file(const std::string& path);

// Parses one term (no trailing '.') with its own variable scope.
// Variables are standardized to 0..var_count-1 in first-occurrence order.
Term parse_term_text(const std::string& text, int* var_count = nullptr);

} // namespace tabint
