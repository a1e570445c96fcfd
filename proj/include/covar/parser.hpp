#pragma once

#include <string>
#include <string_view>

#include "covar/expectation.hpp"
#include "covar/syntax.hpp"

namespace covar {

/// Parses cpGCL source. Sequencing is right-associative, so
/// "a; b; c" yields Seq(a, Seq(b, c)). Throws ParseError (with line/column)
/// on lexical and syntax errors, probabilities outside [0,1] and any use of
/// the reserved run-time variable.
[[nodiscard]] Program parse_program(std::string_view text);

/// Parses an expectation such as "[c != 1]*x^2 + [c = 1]*1/3". Constants
/// must be non-negative; "x^n" with a natural literal n desugars to products.
[[nodiscard]] Expectation parse_expectation(std::string_view text);

[[nodiscard]] Arith parse_arith(std::string_view text);
[[nodiscard]] Bool parse_bool(std::string_view text);

/// Single-line rendering accepted by parse_program (internal forms
/// BoundedWhile and Done render as "while<k> (...)" and "↓", which do not parse).
[[nodiscard]] std::string pretty_print(const Program& p);
[[nodiscard]] std::string to_string(const Arith& e);
[[nodiscard]] std::string to_string(const Bool& b);
[[nodiscard]] std::string to_string(const Expectation& f);

} // namespace covar
