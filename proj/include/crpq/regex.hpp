#pragma once

#include <memory>
#include <string>
#include <vector>

#include "crpq/base.hpp"

namespace crpq {

enum class RegexKind { Epsilon, Symbol, Alt, Concat, Star };

struct RegexNode;
using RegexPtr = std::shared_ptr<const RegexNode>;

/// Regular expression AST over {epsilon, symbol, |, concatenation, *}.
/// Symbols carry label names; `inverted` marks inverse-alphabet symbols
/// produced by invert_regex (never written by users).
struct RegexNode {
  RegexKind kind;
  std::string symbol;  // Symbol only
  bool inverted = false;
  RegexPtr left;   // Alt/Concat left, Star inner
  RegexPtr right;  // Alt/Concat right

  static RegexPtr epsilon();
  static RegexPtr sym(std::string name, bool inverted = false);
  static RegexPtr alt(RegexPtr l, RegexPtr r);
  static RegexPtr concat(RegexPtr l, RegexPtr r);
  static RegexPtr star(RegexPtr inner);
};

struct RegexParseError : std::runtime_error {
  std::size_t position;
  RegexParseError(std::size_t pos, const std::string& what)
      : std::runtime_error("regex syntax error at position " +
                           std::to_string(pos) + ": " + what),
        position(pos) {}
};

/// Parses the concrete regex syntax: `|` alternation, juxtaposition
/// (whitespace or `.`) for concatenation, postfix `*`, `( )` grouping,
/// `[A-Za-z0-9_]+` identifiers as symbols, `<eps>` for the empty string.
/// An identifier run that directly follows another factor inside the same
/// term (e.g. the `aa` in `a*aa`) is read as a sequence of single-character
/// symbols.
RegexPtr parse_regex(const std::string& text);

/// Inverse regex per the inductive definition: symbols get inverse-tagged,
/// concatenation reverses operand order.
RegexPtr invert_regex(const RegexPtr& ast);

enum class ConcatSide { Prefix, Suffix };

/// Concatenates a fresh symbol onto one side of the regex. Rejects symbols
/// already present in the AST's alphabet.
RegexPtr concat_symbol(const RegexPtr& ast, ConcatSide side,
                       const std::string& symbol);

/// Collects the (name, inverted) symbol occurrences of an AST.
void collect_symbols(const RegexPtr& ast,
                     std::vector<std::pair<std::string, bool>>& out);

bool regex_mentions_symbol(const RegexPtr& ast, const std::string& name);

std::string regex_to_string(const RegexPtr& ast);

bool regex_equal(const RegexPtr& a, const RegexPtr& b);

}  // namespace crpq
