#include "crpq/regex.hpp"

#include <cctype>

namespace crpq {

RegexPtr RegexNode::epsilon() {
  return std::make_shared<RegexNode>(RegexNode{RegexKind::Epsilon});
}
RegexPtr RegexNode::sym(std::string name, bool inverted) {
  RegexNode n{RegexKind::Symbol};
  n.symbol = std::move(name);
  n.inverted = inverted;
  return std::make_shared<RegexNode>(std::move(n));
}
RegexPtr RegexNode::alt(RegexPtr l, RegexPtr r) {
  RegexNode n{RegexKind::Alt};
  n.left = std::move(l);
  n.right = std::move(r);
  return std::make_shared<RegexNode>(std::move(n));
}
RegexPtr RegexNode::concat(RegexPtr l, RegexPtr r) {
  RegexNode n{RegexKind::Concat};
  n.left = std::move(l);
  n.right = std::move(r);
  return std::make_shared<RegexNode>(std::move(n));
}
RegexPtr RegexNode::star(RegexPtr inner) {
  RegexNode n{RegexKind::Star};
  n.left = std::move(inner);
  return std::make_shared<RegexNode>(std::move(n));
}

namespace {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  RegexPtr parse() {
    RegexPtr r = parse_alt();
    skip_ws();
    if (pos_ != text_.size())
      throw RegexParseError(pos_, "unexpected character '" +
                                      std::string(1, text_[pos_]) + "'");
    return r;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  RegexPtr parse_alt() {
    RegexPtr left = parse_term_sequence();
    skip_ws();
    while (peek() == '|') {
      ++pos_;
      RegexPtr right = parse_term_sequence();
      left = RegexNode::alt(std::move(left), std::move(right));
      skip_ws();
    }
    return left;
  }

  // A sequence of terms separated by whitespace or '.'; terms concatenate.
  RegexPtr parse_term_sequence() {
    skip_ws();
    RegexPtr seq = parse_term();
    for (;;) {
      bool separated = false;
      while (pos_ < text_.size()) {
        char c = text_[pos_];
        if (std::isspace(static_cast<unsigned char>(c)) || c == '.') {
          separated = true;
          ++pos_;
        } else {
          break;
        }
      }
      char c = peek();
      if (c == '\0' || c == '|' || c == ')') return seq;
      if (!separated)
        throw RegexParseError(pos_, "unexpected character '" +
                                        std::string(1, c) + "'");
      seq = RegexNode::concat(std::move(seq), parse_term());
    }
  }

  // A term is a run of factors with no separator in between, e.g. "a*aa".
  RegexPtr parse_term() {
    RegexPtr term;
    bool first = true;
    for (;;) {
      char c = peek();
      if (c == '(' || c == '<' || is_ident_char(c)) {
        RegexPtr f = parse_factor(first);
        term = first ? std::move(f)
                     : RegexNode::concat(std::move(term), std::move(f));
        first = false;
      } else if (first) {
        if (c == '\0') throw RegexParseError(pos_, "unexpected end of input");
        throw RegexParseError(pos_, "expected symbol, '(' or '<eps>'");
      } else {
        return term;
      }
    }
  }

  RegexPtr parse_factor(bool initial) {
    char c = peek();
    RegexPtr f;
    if (c == '(') {
      ++pos_;
      f = parse_alt();
      skip_ws();
      if (peek() != ')') throw RegexParseError(pos_, "expected ')'");
      ++pos_;
    } else if (c == '<') {
      static const std::string kEps = "<eps>";
      if (text_.compare(pos_, kEps.size(), kEps) != 0)
        throw RegexParseError(pos_, "expected '<eps>'");
      pos_ += kEps.size();
      f = RegexNode::epsilon();
    } else if (is_ident_char(c)) {
      if (initial) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        f = RegexNode::sym(text_.substr(start, pos_ - start));
      } else {
        // Non-initial position inside a term: one single-character symbol
        // per factor, so "a*aa" reads as ((a* a) a).
        f = RegexNode::sym(std::string(1, text_[pos_++]));
      }
    } else {
      throw RegexParseError(pos_, "expected symbol, '(' or '<eps>'");
    }
    while (peek() == '*') {
      ++pos_;
      f = RegexNode::star(std::move(f));
    }
    return f;
  }
};

}  // namespace

RegexPtr parse_regex(const std::string& text) { return Parser(text).parse(); }

RegexPtr invert_regex(const RegexPtr& ast) {
  switch (ast->kind) {
    case RegexKind::Epsilon:
      return ast;
    case RegexKind::Symbol:
      return RegexNode::sym(ast->symbol, !ast->inverted);
    case RegexKind::Alt:
      return RegexNode::alt(invert_regex(ast->left), invert_regex(ast->right));
    case RegexKind::Concat:
      return RegexNode::concat(invert_regex(ast->right),
                               invert_regex(ast->left));
    case RegexKind::Star:
      return RegexNode::star(invert_regex(ast->left));
  }
  throw std::logic_error("bad regex kind");
}

RegexPtr concat_symbol(const RegexPtr& ast, ConcatSide side,
                       const std::string& symbol) {
  if (regex_mentions_symbol(ast, symbol))
    throw std::invalid_argument("concat_symbol: symbol '" + symbol +
                                "' already occurs in the expression");
  RegexPtr s = RegexNode::sym(symbol);
  return side == ConcatSide::Suffix ? RegexNode::concat(ast, std::move(s))
                                    : RegexNode::concat(std::move(s), ast);
}

void collect_symbols(const RegexPtr& ast,
                     std::vector<std::pair<std::string, bool>>& out) {
  switch (ast->kind) {
    case RegexKind::Epsilon:
      return;
    case RegexKind::Symbol:
      out.emplace_back(ast->symbol, ast->inverted);
      return;
    case RegexKind::Alt:
    case RegexKind::Concat:
      collect_symbols(ast->left, out);
      collect_symbols(ast->right, out);
      return;
    case RegexKind::Star:
      collect_symbols(ast->left, out);
      return;
  }
}

bool regex_mentions_symbol(const RegexPtr& ast, const std::string& name) {
  std::vector<std::pair<std::string, bool>> syms;
  collect_symbols(ast, syms);
  for (const auto& [s, inv] : syms)
    if (s == name) return true;
  return false;
}

std::string regex_to_string(const RegexPtr& ast) {
  switch (ast->kind) {
    case RegexKind::Epsilon:
      return "<eps>";
    case RegexKind::Symbol:
      return ast->inverted ? ast->symbol + "^-1" : ast->symbol;
    case RegexKind::Alt:
      return "(" + regex_to_string(ast->left) + "|" +
             regex_to_string(ast->right) + ")";
    case RegexKind::Concat:
      return "(" + regex_to_string(ast->left) + " " +
             regex_to_string(ast->right) + ")";
    case RegexKind::Star:
      return "(" + regex_to_string(ast->left) + ")*";
  }
  return "?";
}

bool regex_equal(const RegexPtr& a, const RegexPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case RegexKind::Epsilon:
      return true;
    case RegexKind::Symbol:
      return a->symbol == b->symbol && a->inverted == b->inverted;
    case RegexKind::Alt:
    case RegexKind::Concat:
      return regex_equal(a->left, b->left) && regex_equal(a->right, b->right);
    case RegexKind::Star:
      return regex_equal(a->left, b->left);
  }
  return false;
}

}  // namespace crpq
