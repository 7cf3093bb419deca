#include "nag/parser.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>

namespace nag {

namespace {

// Guards that keep fuzzed or hostile input from exhausting the stack or memory.
constexpr int kMaxNesting = 256;
constexpr std::uint32_t kMaxExponent = 1000;
constexpr std::uint32_t kMaxDegree = 512;
constexpr std::size_t kMaxTermProducts = 4'000'000;
constexpr double kMaxExpandedTerms = 200'000;

enum class Tok { Name, Number, Imag, Plus, Minus, Star, Caret, LParen, RParen, Equals, Semicolon, Comma, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
  double value = 0;
  bool integral = false;
};

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }

std::string printable(std::string_view s) {
  std::string out;
  for (unsigned char c : s) {
    if (c >= 32 && c < 127)
      out += static_cast<char>(c);
    else {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\x%02x", c);
      out += buf;
    }
  }
  return out;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", line_, col_});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
        advance();
      } else {
        return;
      }
    }
  }

  Token next() {
    const std::size_t line = line_, col = col_, start = pos_;
    char c = src_[pos_];
    auto single = [&](Tok k) {
      advance();
      return Token{k, std::string(1, c), line, col};
    };
    switch (c) {
      case '+': return single(Tok::Plus);
      case '-': return single(Tok::Minus);
      case '*': return single(Tok::Star);
      case '^': return single(Tok::Caret);
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case '=': return single(Tok::Equals);
      case ';': return single(Tok::Semicolon);
      case ',': return single(Tok::Comma);
      default: break;
    }
    if (ident_start(c)) {
      while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
      return {Tok::Name, std::string(src_.substr(start, pos_ - start)), line, col};
    }
    if (digit(c) || (c == '.' && pos_ + 1 < src_.size() && digit(src_[pos_ + 1]))) return number(line, col);
    throw ParseError("unexpected character", line, col, printable(src_.substr(pos_, 1)));
  }

  Token number(std::size_t line, std::size_t col) {
    const std::size_t start = pos_;
    bool integral = true;
    while (pos_ < src_.size() && digit(src_[pos_])) advance();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      integral = false;
      advance();
      while (pos_ < src_.size() && digit(src_[pos_])) advance();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && digit(src_[look])) {
        integral = false;
        while (pos_ < look) advance();
        while (pos_ < src_.size() && digit(src_[pos_])) advance();
      }
    }
    std::string text(src_.substr(start, pos_ - start));
    double value = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec == std::errc::result_out_of_range) {
      // Underflow rounds to zero; overflow is an error.
      if (std::strtod(text.c_str(), nullptr) != 0) throw ParseError("numeric literal out of range", line, col, text);
      value = 0;
    } else if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      throw ParseError("malformed number", line, col, text);
    }
    if (!std::isfinite(value)) throw ParseError("numeric literal out of range", line, col, text);
    Tok kind = Tok::Number;
    if (pos_ < src_.size() && src_[pos_] == 'I' && (pos_ + 1 >= src_.size() || !ident_char(src_[pos_ + 1]))) {
      advance();
      text += "I";
      kind = Tok::Imag;
      integral = false;
    }
    return {kind, std::move(text), line, col, value, integral};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

// Upper bound on the term count of p^e: monomials of degree <= deg(p)*e in
// the coordinates that occur in p.
double monomial_bound(const Polynomial& p, std::uint32_t e) {
  if (p.terms().size() <= 1) return 1;
  std::size_t used = 0;
  for (std::size_t k = 0; k < p.arity(); ++k)
    for (const auto& t : p.terms())
      if (t.exponents[k]) {
        ++used;
        break;
      }
  const double d = static_cast<double>(p.total_degree()) * e;
  double bound = 1;
  for (std::size_t i = 1; i <= used; ++i) bound = bound * (d + static_cast<double>(i)) / static_cast<double>(i);
  return bound;
}

const std::set<std::string>& keywords() {
  static const std::set<std::string> k{"vars", "params", "projective", "I"};
  return k;
}

/// Recursive-descent parser for one expression over tokens [begin, end).
class ExprParser {
 public:
  ExprParser(const std::vector<Token>& toks, std::size_t begin, std::size_t end,
             const std::map<std::string, std::size_t>& names, std::size_t arity,
             const std::set<std::string>& labels)
      : toks_(toks), pos_(begin), end_(end), names_(names), arity_(arity), labels_(labels) {}

  Polynomial parse() {
    if (pos_ >= end_) throw error("empty expression", toks_[std::min(pos_, toks_.size() - 1)]);
    Polynomial p = expr();
    if (pos_ < end_) {
      const Token& t = toks_[pos_];
      if (t.kind == Tok::RParen) throw error("unbalanced ')'", t);
      throw error("unexpected token", t);
    }
    return p;
  }

 private:
  const Token& peek() const { return pos_ < end_ ? toks_[pos_] : toks_[end_]; }
  bool at(Tok k) const { return pos_ < end_ && toks_[pos_].kind == k; }

  static ParseError error(const std::string& msg, const Token& t) {
    return ParseError(msg, t.line, t.column, printable(t.text));
  }

  void check(const Polynomial& p, const Token& where) {
    if (p.total_degree() > kMaxDegree) throw error("polynomial degree exceeds limit", where);
    for (const auto& t : p.terms())
      if (!std::isfinite(t.coefficient.real()) || !std::isfinite(t.coefficient.imag()))
        throw error("coefficient overflow", where);
  }

  Polynomial expr() {
    Polynomial acc = term();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      const Token& op = peek();
      ++pos_;
      Polynomial rhs = term();
      if (op.kind == Tok::Minus)
        acc -= rhs;
      else
        acc += rhs;
      check(acc, op);
    }
    return acc;
  }

  Polynomial term() {
    Polynomial acc = factor();
    for (;;) {
      if (at(Tok::Star)) {
        const Token& star = peek();
        ++pos_;
        Polynomial rhs = factor();
        if (acc.terms().size() * rhs.terms().size() > kMaxTermProducts)
          throw error("expression too large to expand", star);
        if (acc.total_degree() + rhs.total_degree() > kMaxDegree)
          throw error("polynomial degree exceeds limit", star);
        acc = acc * rhs;
        check(acc, star);
      } else if (at(Tok::Name) || at(Tok::Number) || at(Tok::Imag) || at(Tok::LParen)) {
        throw error("implicit multiplication is not allowed; use '*'", peek());
      } else {
        return acc;
      }
    }
  }

  Polynomial factor() {
    if (at(Tok::Minus)) {
      Depth d(*this, peek());
      ++pos_;
      return -factor();
    }
    const Token& base_tok = peek();
    Polynomial b = base();
    if (at(Tok::Caret)) {
      ++pos_;
      const Token& e = peek();
      if (pos_ >= end_) throw error("missing exponent", e);
      if (e.kind == Tok::Minus) throw error("negative exponent", e);
      if (e.kind != Tok::Number) throw error("exponent must be a nonnegative integer", e);
      if (!e.integral) throw error("non-integer exponent", e);
      if (e.value > kMaxExponent) throw error("exponent too large", e);
      auto exponent = static_cast<std::uint32_t>(e.value);
      ++pos_;
      if (static_cast<std::uint64_t>(b.total_degree()) * exponent > kMaxDegree)
        throw error("polynomial degree exceeds limit", e);
      if (monomial_bound(b, exponent) > kMaxExpandedTerms) throw error("expression too large to expand", e);
      b = b.pow(exponent);
      check(b, base_tok);
    }
    return b;
  }

  Polynomial base() {
    if (pos_ >= end_) throw error("unexpected end of expression", peek());
    const Token& t = toks_[pos_];
    switch (t.kind) {
      case Tok::Number:
        ++pos_;
        return Polynomial::constant(arity_, Complex(t.value, 0));
      case Tok::Imag:
        ++pos_;
        return Polynomial::constant(arity_, Complex(0, t.value));
      case Tok::Name: {
        ++pos_;
        if (t.text == "I") return Polynomial::constant(arity_, Complex(0, 1));
        auto it = names_.find(t.text);
        if (it != names_.end()) return Polynomial::coordinate(arity_, it->second);
        if (labels_.count(t.text)) throw error("equation labels cannot appear in expressions", t);
        throw UndeclaredIdentifier("undeclared identifier", t.line, t.column, t.text);
      }
      case Tok::LParen: {
        Depth d(*this, t);
        ++pos_;
        Polynomial inner = expr();
        if (!at(Tok::RParen)) throw error("unbalanced '(': expected ')'", peek());
        ++pos_;
        return inner;
      }
      case Tok::RParen:
        throw error("unbalanced ')'", t);
      default:
        throw error("expected a name, number, or '('", t);
    }
  }

  struct Depth {
    Depth(ExprParser& p, const Token& t) : parser(p) {
      if (++parser.depth_ > kMaxNesting) throw error("expression nested too deeply", t);
    }
    ~Depth() { --parser.depth_; }
    ExprParser& parser;
  };

  const std::vector<Token>& toks_;
  std::size_t pos_;
  std::size_t end_;
  const std::map<std::string, std::size_t>& names_;
  std::size_t arity_;
  const std::set<std::string>& labels_;
  int depth_ = 0;
};

std::map<std::string, std::size_t> name_index(const std::vector<std::string>& vars,
                                             const std::vector<std::string>& params) {
  std::map<std::string, std::size_t> names;
  for (const auto& v : vars) names.emplace(v, names.size());
  for (const auto& p : params) names.emplace(p, names.size());
  if (names.size() != vars.size() + params.size())
    throw DuplicateName("duplicate variable or parameter name", 1, 1, "");
  return names;
}

}  // namespace

Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& vars,
                            const std::vector<std::string>& params) {
  if (vars.empty()) throw InvalidSystem("parse_polynomial: variable list is empty");
  auto names = name_index(vars, params);
  auto toks = Lexer(text).run();
  for (const auto& t : toks)
    if (t.kind == Tok::Equals || t.kind == Tok::Semicolon || t.kind == Tok::Comma)
      throw ParseError("unexpected token", t.line, t.column, t.text);
  std::set<std::string> no_labels;
  return ExprParser(toks, 0, toks.size() - 1, names, vars.size() + params.size(), no_labels).parse();
}

Complex parse_complex_literal(std::string_view text) {
  auto toks = Lexer(text).run();
  for (const auto& t : toks)
    if (t.kind == Tok::Equals || t.kind == Tok::Semicolon || t.kind == Tok::Comma)
      throw ParseError("unexpected token", t.line, t.column, t.text);
  std::map<std::string, std::size_t> names;
  std::set<std::string> no_labels;
  Polynomial p = ExprParser(toks, 0, toks.size() - 1, names, 1, no_labels).parse();
  if (p.is_zero()) return {0, 0};
  if (p.total_degree() != 0)
    throw ParseError("expected a constant", 1, 1, std::string(text));
  return p.terms().front().coefficient;
}

CVector parse_complex_list(std::string_view text, char sep) {
  CVector out;
  std::size_t start = 0;
  for (;;) {
    std::size_t stop = text.find(sep, start);
    out.push_back(parse_complex_literal(text.substr(start, stop == std::string_view::npos ? stop : stop - start)));
    if (stop == std::string_view::npos) break;
    start = stop + 1;
  }
  return out;
}

ProblemSpec parse_input_file(std::string_view text, std::string source_name) {
  auto toks = Lexer(text).run();
  std::optional<std::vector<std::string>> vars;
  std::optional<std::vector<std::string>> params;
  bool projective = false;
  struct Equation {
    std::string label;
    std::size_t begin, end;
  };
  std::vector<Equation> equations;
  std::map<std::string, const Token*> declared;
  std::set<std::string> labels;

  std::size_t i = 0;
  auto expect = [&](Tok k, const char* what) {
    if (toks[i].kind != k) throw ParseError(std::string("expected ") + what, toks[i].line, toks[i].column, printable(toks[i].text));
    ++i;
  };
  auto namelist = [&](std::vector<std::string>& out) {
    for (;;) {
      const Token& t = toks[i];
      if (t.kind != Tok::Name) throw ParseError("expected a name", t.line, t.column, printable(t.text));
      if (keywords().count(t.text)) throw ParseError("reserved word cannot be used as a name", t.line, t.column, t.text);
      if (declared.count(t.text)) throw DuplicateName("name declared twice", t.line, t.column, t.text);
      declared.emplace(t.text, &t);
      out.push_back(t.text);
      ++i;
      if (toks[i].kind != Tok::Comma) break;
      ++i;
    }
    expect(Tok::Semicolon, "';'");
  };

  while (toks[i].kind != Tok::End) {
    const Token& t = toks[i];
    if (t.kind != Tok::Name) throw ParseError("expected a statement", t.line, t.column, printable(t.text));
    if (t.text == "vars") {
      if (vars) throw ParseError("more than one 'vars' statement", t.line, t.column, t.text);
      ++i;
      vars.emplace();
      namelist(*vars);
    } else if (t.text == "params") {
      if (params) throw ParseError("more than one 'params' statement", t.line, t.column, t.text);
      ++i;
      params.emplace();
      namelist(*params);
    } else if (t.text == "projective") {
      ++i;
      expect(Tok::Semicolon, "';'");
      projective = true;
    } else {
      if (t.text == "I") throw ParseError("reserved word cannot be used as a label", t.line, t.column, t.text);
      ++i;
      expect(Tok::Equals, "'='");
      if (labels.count(t.text)) throw DuplicateName("equation label used twice", t.line, t.column, t.text);
      labels.insert(t.text);
      std::size_t begin = i;
      while (toks[i].kind != Tok::Semicolon && toks[i].kind != Tok::End) {
        if (toks[i].kind == Tok::Equals || toks[i].kind == Tok::Comma)
          throw ParseError("unexpected token in expression (missing ';'?)", toks[i].line, toks[i].column, toks[i].text);
        ++i;
      }
      if (toks[i].kind != Tok::Semicolon) throw ParseError("missing ';'", toks[i].line, toks[i].column, "");
      equations.push_back({t.text, begin, i});
      ++i;
    }
  }

  const Token& eof = toks.back();
  if (!vars) throw ParseError("missing 'vars' statement", eof.line, eof.column, "");
  if (!params) params.emplace();
  for (const auto& eq : equations) {
    if (declared.count(eq.label)) {
      const Token& lt = toks[eq.begin - 2];
      throw DuplicateName("equation label clashes with a declared name", lt.line, lt.column, eq.label);
    }
  }
  if (equations.empty()) throw ParseError("no equations", eof.line, eof.column, "");

  auto names = name_index(*vars, *params);
  const std::size_t arity = vars->size() + params->size();
  std::vector<Polynomial> polys;
  ProblemSpec spec;
  for (const auto& eq : equations) {
    if (eq.begin == eq.end) {
      const Token& t = toks[eq.end];
      throw ParseError("empty expression", t.line, t.column, t.text);
    }
    polys.push_back(ExprParser(toks, eq.begin, eq.end, names, arity, labels).parse());
    spec.labels.push_back(eq.label);
  }
  spec.system = PolySystem(*vars, *params, std::move(polys));
  spec.declared_projective = projective;
  spec.source_name = std::move(source_name);
  return spec;
}

}  // namespace nag
