#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nag/polysys.hpp"

namespace nag {

/// A parsed problem file.
struct ProblemSpec {
  PolySystem system;
  bool declared_projective = false;
  std::string source_name;
  /// Equation labels in file order.
  std::vector<std::string> labels;
};

/// Expression grammar (`*` is mandatory, `^` binds tighter than unary minus):
///
///     expr   := term (("+"|"-") term)*
///     term   := factor ("*" factor)*
///     factor := "-" factor | base ("^" UINT)?
///     base   := NAME | NUMBER | IMAG | "I" | "(" expr ")"
///
/// IMAG is a number immediately followed by `I` (e.g. `2I`, `1.5e-3I`).
/// Literals are rounded to double precision.
Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& vars,
                            const std::vector<std::string>& params = {});

/// Parses an input file:
///
///     file     := stmt*
///     stmt     := "vars" namelist ";" | "params" namelist ";" | "projective" ";" | assign
///     assign   := NAME "=" expr ";"
///     namelist := NAME ("," NAME)*
///
/// `%` starts a comment that runs to the end of the line.
ProblemSpec parse_input_file(std::string_view text, std::string source_name = "<input>");

/// A constant expression such as `1+2I` or `-(3.5*I)`.
Complex parse_complex_literal(std::string_view text);

/// Splits on `sep` and parses each piece with parse_complex_literal.
CVector parse_complex_list(std::string_view text, char sep = ',');

}  // namespace nag
