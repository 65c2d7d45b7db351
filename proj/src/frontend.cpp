#include "qrel/frontend.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace qrel {

char const *to_string(Diagnostic::Severity s)
{
  switch (s) {
  case Diagnostic::Severity::Error: return "error";
  case Diagnostic::Severity::Warning: return "warning";
  case Diagnostic::Severity::Note: return "note";
  }
  return "?";
}

std::string format_diagnostics(std::vector<Diagnostic> ds, std::string const &path)
{
  std::stable_sort(ds.begin(), ds.end(), [](Diagnostic const &a, Diagnostic const &b) {
    return a.span.begin.offset < b.span.begin.offset;
  });
  std::ostringstream out;
  for (auto const &d : ds) {
    out << path << ':' << d.span.begin.line << ':' << d.span.begin.col << ": " << to_string(d.severity) << ": "
        << d.message;
    if (!d.hint.empty()) { out << " (hint: " << d.hint << ')'; }
    out << '\n';
  }
  return out.str();
}

bool has_errors(std::vector<Diagnostic> const &ds)
{
  return std::any_of(ds.begin(), ds.end(), [](auto const &d) { return d.severity == Diagnostic::Severity::Error; });
}

std::vector<std::string> const &verify_kinds()
{
  static std::vector<std::string> const kinds = {
      "graph",    "preorder",     "poset-weaver",  "poset-nilpotent", "function",    "injective",     "surjective",
      "metric",   "pseudometric", "magic-unitary", "hom-witness",     "iso-witness", "quantum-group",
  };
  return kinds;
}

namespace {

// ---------------------------------------------------------------------------
// Lexer

struct Token
{
  enum class Kind { Name, Int, Float, String, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  double num = 0;
  Span span;
  bool line_start = false;
};

std::set<std::string> const decl_keywords = {"qset",   "rel",  "fn",     "const", "formula", "assert",
                                             "verify", "family", "metric", "graph", "irreps"};
std::set<std::string> const reserved = {"qset",  "rel",    "fn",     "const", "formula", "assert", "verify",
                                        "family", "metric", "graph",  "irreps", "not",    "and",    "or",
                                        "forall", "exists", "in",     "true",  "false",  "is"};

struct ParseError
{
  Diagnostic d;
};

[[noreturn]] void fail(Span span, std::string msg, std::string hint = {})
{
  throw ParseError{{Diagnostic::Severity::Error, span, std::move(msg), std::move(hint)}};
}

class Lexer
{
public:
  explicit Lexer(std::string const &text) : s_(text) {}

  std::vector<Token> run(std::vector<Diagnostic> &ds)
  {
    std::vector<Token> out;
    bool fresh_line = true;
    for (;;) {
      while (i_ < s_.size()) {
        char c = s_[i_];
        if (c == '\n') {
          fresh_line = true;
          advance();
        } else if (c == ' ' || c == '\t' || c == '\r') {
          advance();
        } else if (c == '#') {
          while (i_ < s_.size() && s_[i_] != '\n') { advance(); }
        } else {
          break;
        }
      }
      Token t;
      t.line_start = fresh_line;
      fresh_line = false;
      t.span.begin = pos_;
      if (i_ >= s_.size()) {
        t.span.end = pos_;
        out.push_back(t);
        return out;
      }
      try {
        lex_one(t);
      } catch (ParseError const &e) {
        ds.push_back(e.d);
        continue;
      }
      t.span.end = pos_;
      out.push_back(std::move(t));
    }
  }

private:
  void advance()
  {
    unsigned char c = static_cast<unsigned char>(s_[i_]);
    ++i_;
    pos_.offset = i_;
    if (c == '\n') {
      ++pos_.line;
      pos_.col = 1;
    } else if ((c & 0xC0) != 0x80) {
      ++pos_.col; // columns count code points, not bytes
    }
  }

  void lex_one(Token &t)
  {
    char c = s_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t b = i_;
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) { advance(); }
      t.kind = Token::Kind::Name;
      t.text = s_.substr(b, i_ - b);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t b = i_;
      bool is_float = false;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) { advance(); }
      if (i_ + 1 < s_.size() && s_[i_] == '.' && std::isdigit(static_cast<unsigned char>(s_[i_ + 1]))) {
        is_float = true;
        advance();
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) { advance(); }
      }
      if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
        size_t k = i_ + 1;
        if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) { ++k; }
        if (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) {
          is_float = true;
          while (i_ < k) { advance(); }
          while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) { advance(); }
        }
      }
      t.kind = is_float ? Token::Kind::Float : Token::Kind::Int;
      t.text = s_.substr(b, i_ - b);
      auto r = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.num);
      if (r.ec != std::errc()) { fail({t.span.begin, pos_}, "number out of range: " + t.text); }
      return;
    }
    if (c == '"') {
      advance();
      t.kind = Token::Kind::String;
      while (i_ < s_.size() && s_[i_] != '"') {
        if (s_[i_] == '\n') { fail({t.span.begin, pos_}, "unterminated string"); }
        if (s_[i_] == '\\' && i_ + 1 < s_.size()) { advance(); }
        t.text += s_[i_];
        advance();
      }
      if (i_ >= s_.size()) { fail({t.span.begin, pos_}, "unterminated string"); }
      advance();
      return;
    }
    static char const *const puncts[] = {"<->", ":=", "==", "->", "><", "{", "}", "(", ")", "[", "]",
                                         ",",   ";",  ".",  "*",  "~",  ":", "=", "-"};
    for (char const *p : puncts) {
      std::string_view pv(p);
      if (s_.compare(i_, pv.size(), pv) == 0) {
        for (size_t k = 0; k < pv.size(); ++k) { advance(); }
        t.kind = Token::Kind::Punct;
        t.text = p;
        return;
      }
    }
    SourcePos b = pos_;
    advance();
    while (i_ < s_.size() && (static_cast<unsigned char>(s_[i_]) & 0xC0) == 0x80) { advance(); }
    fail({b, pos_}, "unexpected character '" + s_.substr(b.offset, i_ - b.offset) + "'");
  }

  std::string const &s_;
  size_t i_ = 0;
  SourcePos pos_;
};

// ---------------------------------------------------------------------------
// Parser

class Parser
{
public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  ast::Workspace workspace(std::vector<Diagnostic> &ds)
  {
    ast::Workspace w;
    while (!at_end()) {
      try {
        w.decls.push_back(decl());
      } catch (ParseError const &e) {
        ds.push_back(e.d);
        sync();
      }
    }
    return w;
  }

  ast::Formula formula_only()
  {
    auto f = formula();
    if (!at_end()) { fail(peek().span, "unexpected " + describe(peek()) + " after formula"); }
    return f;
  }

private:
  Token const &peek(size_t k = 0) const { return t_[std::min(p_ + k, t_.size() - 1)]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  Token const &next() { return t_[p_ < t_.size() - 1 ? p_++ : p_]; }
  SourcePos last_end() const { return p_ > 0 ? t_[p_ - 1].span.end : t_[0].span.begin; }
  Span from(SourcePos b) const { return {b, last_end()}; }

  bool is_punct(char const *s, size_t k = 0) const { return peek(k).kind == Token::Kind::Punct && peek(k).text == s; }
  bool is_word(char const *s, size_t k = 0) const { return peek(k).kind == Token::Kind::Name && peek(k).text == s; }

  static std::string describe(Token const &t)
  {
    switch (t.kind) {
    case Token::Kind::End: return "end of input";
    case Token::Kind::String: return "string \"" + t.text + "\"";
    case Token::Kind::Name: return "'" + t.text + "'";
    default: return "'" + t.text + "'";
    }
  }

  void expect(char const *s)
  {
    if (!is_punct(s)) { fail(peek().span, std::string("expected '") + s + "', found " + describe(peek())); }
    next();
  }
  void expect_word(char const *s)
  {
    if (!is_word(s)) { fail(peek().span, std::string("expected '") + s + "', found " + describe(peek())); }
    next();
  }
  bool accept(char const *s)
  {
    if (!is_punct(s)) { return false; }
    next();
    return true;
  }

  std::string name(char const *what)
  {
    auto const &t = peek();
    if (t.kind != Token::Kind::Name) { fail(t.span, std::string("expected ") + what + ", found " + describe(t)); }
    if (reserved.count(t.text)) {
      fail(t.span, "'" + t.text + "' is a keyword and cannot be used as " + what, "choose another name");
    }
    return next().text;
  }

  std::string string_lit(char const *what)
  {
    if (peek().kind != Token::Kind::String) {
      fail(peek().span, std::string("expected ") + what + " (a quoted string), found " + describe(peek()));
    }
    return next().text;
  }

  long integer(char const *what)
  {
    bool neg = false;
    if (is_punct("-")) {
      next();
      neg = true;
    }
    auto const &t = peek();
    if (t.kind != Token::Kind::Int) { fail(t.span, std::string("expected ") + what + ", found " + describe(t)); }
    next();
    if (t.num > 1e15) { fail(t.span, "integer too large"); }
    return neg ? -static_cast<long>(t.num) : static_cast<long>(t.num);
  }

  double number()
  {
    bool neg = false;
    if (is_punct("-")) {
      next();
      neg = true;
    }
    auto const &t = peek();
    if (t.kind != Token::Kind::Int && t.kind != Token::Kind::Float) {
      fail(t.span, "expected a number, found " + describe(t));
    }
    next();
    return neg ? -t.num : t.num;
  }

  // Skips to the next declaration keyword that begins a line.
  void sync()
  {
    if (!at_end()) { next(); }
    while (!at_end() && !(peek().line_start && peek().kind == Token::Kind::Name && decl_keywords.count(peek().text))) {
      next();
    }
  }

  ast::Decl decl()
  {
    auto const &t = peek();
    if (t.kind != Token::Kind::Name || !decl_keywords.count(t.text)) {
      fail(t.span, "expected a declaration, found " + describe(t),
           "declarations start with qset, rel, fn, const, formula, assert, verify, family, metric, graph or irreps");
    }
    std::string kw = t.text;
    if (kw == "qset") { return qset(); }
    if (kw == "rel") { return rel(); }
    if (kw == "fn" || kw == "const") { return fn(); }
    if (kw == "formula") { return named_formula(); }
    if (kw == "assert") { return assertion(); }
    if (kw == "verify") { return verify(); }
    if (kw == "family") { return family(); }
    if (kw == "metric") { return metric(); }
    if (kw == "graph") { return graph(); }
    return irreps();
  }

  template <typename F>
  void list(char const *open, char const *close, F item)
  {
    expect(open);
    if (accept(close)) { return; }
    do { item(); } while (accept(","));
    expect(close);
  }

  ast::Qset qset()
  {
    SourcePos b = peek().span.begin;
    next();
    ast::Qset q;
    q.name = name("a quantum set name");
    expect("{");
    if (is_word("atoms")) {
      next();
      expect("=");
      list("[", "]", [&] { q.dims.push_back(integer("an atom dimension")); });
    } else if (is_word("classical")) {
      next();
      expect("=");
      q.classical = true;
      list("[", "]", [&] { q.labels.push_back(string_lit("a label")); });
    } else {
      fail(peek().span, "expected 'atoms' or 'classical', found " + describe(peek()),
           "qset X { atoms = [2] } or qset A { classical = [\"a\", \"b\"] }");
    }
    accept(";");
    expect("}");
    q.span = from(b);
    return q;
  }

  ast::Sort sort_primary()
  {
    SourcePos b = peek().span.begin;
    ast::Sort s;
    if (accept("(")) {
      s = sort();
      expect(")");
    } else if (peek().kind == Token::Kind::Int && peek().text == "1") {
      next();
      s.kind = ast::Sort::Kind::Unit;
    } else {
      s.name = name("a sort");
    }
    s.span = from(b);
    while (is_punct("*")) {
      next();
      ast::Sort d;
      d.kind = ast::Sort::Kind::Dual;
      d.args.push_back(std::move(s));
      d.span = from(b);
      s = std::move(d);
    }
    return s;
  }

  ast::Sort sort()
  {
    SourcePos b = peek().span.begin;
    ast::Sort s = sort_primary();
    while (accept("><")) {
      ast::Sort p;
      p.kind = ast::Sort::Kind::Product;
      p.args.push_back(std::move(s));
      p.args.push_back(sort_primary());
      p.span = from(b);
      s = std::move(p);
    }
    return s;
  }

  std::complex<double> complex_entry()
  {
    SourcePos b = peek().span.begin;
    if (!is_punct("[")) {
      fail(peek().span, "expected a complex entry [re, im], found " + describe(peek()),
           "complex numbers are written as [re, im] pairs");
    }
    next();
    double re = number();
    if (!accept(",")) {
      fail(peek().span, "expected ',' in complex entry [re, im], found " + describe(peek()),
           "complex numbers are written as [re, im] pairs");
    }
    double im = number();
    if (!is_punct("]")) { fail(from(b), "complex entry must have exactly two components [re, im]"); }
    next();
    return {re, im};
  }

  ast::Matrix matrix()
  {
    SourcePos b = peek().span.begin;
    ast::Matrix m;
    list("[", "]", [&] {
      ast::Row r;
      list("[", "]", [&] { r.push_back(complex_entry()); });
      m.rows.push_back(std::move(r));
    });
    m.span = from(b);
    return m;
  }

  std::vector<ast::Matrix> matrix_list()
  {
    std::vector<ast::Matrix> out;
    list("[", "]", [&] { out.push_back(matrix()); });
    return out;
  }

  std::vector<ast::Block> blocks()
  {
    std::vector<ast::Block> out;
    expect("{");
    while (!is_punct("}")) {
      SourcePos b = peek().span.begin;
      expect_word("block");
      ast::Block blk;
      list("(", ")", [&] { blk.index.push_back(integer("an atom index")); });
      expect("=");
      blk.spanning = matrix_list();
      accept(";");
      blk.span = from(b);
      out.push_back(std::move(blk));
    }
    expect("}");
    return out;
  }

  ast::Rel rel()
  {
    SourcePos b = peek().span.begin;
    next();
    ast::Rel r;
    r.name = name("a relation name");
    expect(":");
    list("(", ")", [&] { r.arity.push_back(sort()); });
    r.blocks = blocks();
    r.span = from(b);
    return r;
  }

  ast::Fn fn()
  {
    SourcePos b = peek().span.begin;
    ast::Fn f;
    f.constant = next().text == "const";
    f.name = name("a function name");
    expect(":");
    if (f.constant) {
      f.cod = sort();
    } else {
      f.dom = sort();
      expect("->");
      f.cod = sort();
    }
    f.blocks = blocks();
    f.span = from(b);
    return f;
  }

  ast::NamedFormula named_formula()
  {
    SourcePos b = peek().span.begin;
    next();
    ast::NamedFormula n;
    n.name = name("a formula name");
    expect(":=");
    n.body = formula();
    accept(";");
    n.span = from(b);
    return n;
  }

  ast::Assert assertion()
  {
    SourcePos b = peek().span.begin;
    next();
    ast::Assert a;
    a.name = name("a formula name");
    if (is_word("is")) {
      next();
      if (is_word("true")) {
        a.expect = true;
      } else if (is_word("false")) {
        a.expect = false;
      } else {
        fail(peek().span, "expected 'true' or 'false', found " + describe(peek()));
      }
      next();
    }
    accept(";");
    a.span = from(b);
    return a;
  }

  ast::Verify verify()
  {
    SourcePos b = peek().span.begin;
    next();
    ast::Verify v;
    if (peek().kind != Token::Kind::Name) { fail(peek().span, "expected a verification kind, found " + describe(peek())); }
    Span ks = peek().span;
    v.kind = next().text;
    while (is_punct("-") && peek(1).kind == Token::Kind::Name) {
      next();
      v.kind += "-" + next().text;
    }
    ks.end = last_end();
    auto const &kinds = verify_kinds();
    if (std::find(kinds.begin(), kinds.end(), v.kind) == kinds.end()) {
      std::string all;
      for (auto const &k : kinds) { all += (all.empty() ? "" : ", ") + k; }
      fail(ks, "unknown verification kind '" + v.kind + "'", "one of " + all);
    }
    while (peek().kind == Token::Kind::Name && !reserved.count(peek().text)) { v.names.push_back(next().text); }
    if (v.names.empty()) { fail(peek().span, "expected at least one name after 'verify " + v.kind + "'"); }
    accept(";");
    v.span = from(b);
    return v;
  }

  ast::Family family()
  {
    SourcePos b = peek().span.begin;
    next();
    ast::Family f;
    f.name = name("a family name");
    expect(":");
    expect("(");
    f.rows = name("a classical quantum set");
    expect(",");
    f.cols = name("a classical quantum set");
    expect(")");
    expect_word("dim");
    f.dim = integer("a Hilbert space dimension");
    expect("{");
    while (!is_punct("}")) {
      expect_word("entry");
      ast::Family::Entry e;
      expect("(");
      e.a = integer("a row index");
      expect(",");
      e.b = integer("a column index");
      expect(")");
      expect("=");
      e.m = matrix();
      accept(";");
      f.entries.push_back(std::move(e));
    }
    expect("}");
    f.span = from(b);
    return f;
  }

  ast::Metric metric()
  {
    SourcePos b = peek().span.begin;
    next();
    ast::Metric m;
    m.name = name("a metric name");
    expect_word("on");
    m.base = sort();
    list("{", "}", [&] {
      double v;
      if (is_word("inf")) {
        next();
        v = std::numeric_limits<double>::infinity();
      } else {
        v = number();
      }
      expect("=");
      m.values.emplace_back(v, name("a relation name"));
    });
    m.span = from(b);
    return m;
  }

  ast::Graph graph()
  {
    SourcePos b = peek().span.begin;
    next();
    ast::Graph g;
    g.name = name("a graph name");
    expect_word("on");
    g.set = name("a classical quantum set");
    list("{", "}", [&] {
      std::string x = string_lit("a vertex label");
      expect("-");
      g.edges.emplace_back(x, string_lit("a vertex label"));
    });
    g.span = from(b);
    return g;
  }

  ast::Irreps irreps()
  {
    SourcePos b = peek().span.begin;
    next();
    ast::Irreps r;
    r.name = name("an irrep data name");
    expect("{");
    expect_word("elements");
    expect("=");
    list("[", "]", [&] { r.elements.push_back(string_lit("a group element")); });
    accept(";");
    while (is_word("irrep")) {
      next();
      ast::Irreps::Irrep ir;
      ir.name = name("an irrep name");
      expect("=");
      ir.rho = matrix_list();
      accept(";");
      r.irreps.push_back(std::move(ir));
    }
    expect("}");
    r.span = from(b);
    return r;
  }

  // formulas: <-> (left) < -> (right) < or < and < not/quantifiers
  ast::Formula binary(ast::Formula::Op op, ast::Formula a, ast::Formula b, SourcePos begin)
  {
    ast::Formula f;
    f.op = op;
    f.sub.push_back(std::move(a));
    f.sub.push_back(std::move(b));
    f.span = from(begin);
    return f;
  }

  ast::Formula formula()
  {
    SourcePos b = peek().span.begin;
    auto f = implication();
    while (accept("<->")) { f = binary(ast::Formula::Op::Iff, std::move(f), implication(), b); }
    return f;
  }

  ast::Formula implication()
  {
    SourcePos b = peek().span.begin;
    auto f = disjunction();
    if (accept("->")) { return binary(ast::Formula::Op::Implies, std::move(f), implication(), b); }
    return f;
  }

  ast::Formula disjunction()
  {
    SourcePos b = peek().span.begin;
    auto f = conjunction();
    while (is_word("or")) {
      next();
      f = binary(ast::Formula::Op::Or, std::move(f), conjunction(), b);
    }
    return f;
  }

  ast::Formula conjunction()
  {
    SourcePos b = peek().span.begin;
    auto f = unary();
    while (is_word("and")) {
      next();
      f = binary(ast::Formula::Op::And, std::move(f), unary(), b);
    }
    return f;
  }

  ast::Formula unary()
  {
    SourcePos b = peek().span.begin;
    ast::Formula f;
    if (is_word("not")) {
      next();
      f.op = ast::Formula::Op::Not;
      f.sub.push_back(unary());
    } else if (is_word("forall") || is_word("exists")) {
      bool all = next().text == "forall";
      f.v = name("a variable");
      if (accept("==")) {
        f.vs = name("a variable");
        f.op = all ? ast::Formula::Op::ForallDiag : ast::Formula::Op::ExistsDiag;
      } else {
        f.op = all ? ast::Formula::Op::Forall : ast::Formula::Op::Exists;
      }
      expect_word("in");
      f.sort = sort();
      expect(".");
      f.sub.push_back(formula());
    } else {
      return primary();
    }
    f.span = from(b);
    return f;
  }

  ast::Formula primary()
  {
    SourcePos b = peek().span.begin;
    ast::Formula f;
    if (is_word("true") || is_word("false")) {
      f.op = next().text == "true" ? ast::Formula::Op::True : ast::Formula::Op::False;
    } else if (accept("(")) {
      f = formula();
      expect(")");
      return f;
    } else if (is_word("E") && is_punct("[", 1)) {
      next();
      next();
      f.op = ast::Formula::Op::Eq;
      f.sort = sort();
      expect("]");
      expect("(");
      f.args.push_back(term());
      expect(",");
      f.args.push_back(term());
      expect(")");
    } else {
      f.op = ast::Formula::Op::Atomic;
      f.conj = accept("~");
      if (peek().kind != Token::Kind::Name || reserved.count(peek().text)) {
        fail(peek().span, "expected a formula, found " + describe(peek()));
      }
      f.rel = next().text;
      if (!is_punct("(")) {
        fail(peek().span, "expected '(' after relation symbol '" + f.rel + "'",
             "nullary relations are written with empty parentheses, e.g. " + f.rel + "()");
      }
      list("(", ")", [&] { f.args.push_back(term()); });
    }
    f.span = from(b);
    return f;
  }

  ast::Term term()
  {
    SourcePos b = peek().span.begin;
    ast::Term t;
    if (accept("~")) {
      t.kind = ast::Term::Kind::Conj;
      t.args.push_back(term());
    } else {
      t.name = name("a term");
      if (is_punct("(")) {
        t.kind = ast::Term::Kind::App;
        list("(", ")", [&] { t.args.push_back(term()); });
      }
    }
    t.span = from(b);
    return t;
  }

  std::vector<Token> t_;
  size_t p_ = 0;
};

// ---------------------------------------------------------------------------
// Printer

std::string num(double v)
{
  if (std::isinf(v)) { return v > 0 ? "inf" : "-inf"; }
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, r.ptr);
  // keep the token an Int or Float on re-lexing
  return s;
}

std::string quote(std::string const &s)
{
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') { out += '\\'; }
    out += c;
  }
  return out + '"';
}

std::string print_matrix(ast::Matrix const &m)
{
  std::string out = "[";
  for (size_t i = 0; i < m.rows.size(); ++i) {
    out += i ? ", [" : "[";
    for (size_t j = 0; j < m.rows[i].size(); ++j) {
      out += (j ? ", [" : "[") + num(m.rows[i][j].real()) + ", " + num(m.rows[i][j].imag()) + "]";
    }
    out += "]";
  }
  return out + "]";
}

std::string print_matrices(std::vector<ast::Matrix> const &ms)
{
  std::string out = "[";
  for (size_t k = 0; k < ms.size(); ++k) { out += (k ? ", " : "") + print_matrix(ms[k]); }
  return out + "]";
}

std::string print_blocks(std::vector<ast::Block> const &bs)
{
  std::string out = " {\n";
  for (auto const &b : bs) {
    out += "  block (";
    for (size_t k = 0; k < b.index.size(); ++k) { out += (k ? ", " : "") + std::to_string(b.index[k]); }
    out += ") = " + print_matrices(b.spanning) + "\n";
  }
  return out + "}";
}

struct DeclPrinter
{
  std::string operator()(ast::Qset const &q) const
  {
    std::string out = "qset " + q.name + " { ";
    if (q.classical) {
      out += "classical = [";
      for (size_t k = 0; k < q.labels.size(); ++k) { out += (k ? ", " : "") + quote(q.labels[k]); }
    } else {
      out += "atoms = [";
      for (size_t k = 0; k < q.dims.size(); ++k) { out += (k ? ", " : "") + std::to_string(q.dims[k]); }
    }
    return out + "] }";
  }
  std::string operator()(ast::Rel const &r) const
  {
    std::string out = "rel " + r.name + " : (";
    for (size_t k = 0; k < r.arity.size(); ++k) { out += (k ? ", " : "") + ast::print(r.arity[k]); }
    return out + ")" + print_blocks(r.blocks);
  }
  std::string operator()(ast::Fn const &f) const
  {
    if (f.constant) { return "const " + f.name + " : " + ast::print(f.cod) + print_blocks(f.blocks); }
    return "fn " + f.name + " : " + ast::print(*f.dom) + " -> " + ast::print(f.cod) + print_blocks(f.blocks);
  }
  std::string operator()(ast::NamedFormula const &n) const { return "formula " + n.name + " := " + ast::print(n.body); }
  std::string operator()(ast::Assert const &a) const
  {
    std::string out = "assert " + a.name;
    if (a.expect) { out += *a.expect ? " is true" : " is false"; }
    return out;
  }
  std::string operator()(ast::Verify const &v) const
  {
    std::string out = "verify " + v.kind;
    for (auto const &n : v.names) { out += " " + n; }
    return out;
  }
  std::string operator()(ast::Family const &f) const
  {
    std::string out = "family " + f.name + " : (" + f.rows + ", " + f.cols + ") dim " + std::to_string(f.dim) + " {\n";
    for (auto const &e : f.entries) {
      out += "  entry (" + std::to_string(e.a) + ", " + std::to_string(e.b) + ") = " + print_matrix(e.m) + "\n";
    }
    return out + "}";
  }
  std::string operator()(ast::Metric const &m) const
  {
    std::string out = "metric " + m.name + " on " + ast::print(m.base) + " { ";
    for (size_t k = 0; k < m.values.size(); ++k) {
      out += (k ? ", " : "") + num(m.values[k].first) + " = " + m.values[k].second;
    }
    return out + " }";
  }
  std::string operator()(ast::Graph const &g) const
  {
    std::string out = "graph " + g.name + " on " + g.set + " { ";
    for (size_t k = 0; k < g.edges.size(); ++k) {
      out += (k ? ", " : "") + quote(g.edges[k].first) + " - " + quote(g.edges[k].second);
    }
    return out + " }";
  }
  std::string operator()(ast::Irreps const &r) const
  {
    std::string out = "irreps " + r.name + " {\n  elements = [";
    for (size_t k = 0; k < r.elements.size(); ++k) { out += (k ? ", " : "") + quote(r.elements[k]); }
    out += "]\n";
    for (auto const &ir : r.irreps) { out += "  irrep " + ir.name + " = " + print_matrices(ir.rho) + "\n"; }
    return out + "}";
  }
};

bool is_binary(ast::Formula::Op op)
{
  using Op = ast::Formula::Op;
  return op == Op::And || op == Op::Or || op == Op::Implies || op == Op::Iff;
}

bool is_quantifier(ast::Formula::Op op)
{
  using Op = ast::Formula::Op;
  return op == Op::Forall || op == Op::Exists || op == Op::ForallDiag || op == Op::ExistsDiag;
}

// Ends in a quantifier body, which would swallow anything printed after it.
bool open_right(ast::Formula const &f)
{
  if (is_quantifier(f.op)) { return true; }
  return f.op == ast::Formula::Op::Not && open_right(f.sub[0]);
}

} // namespace

namespace ast {

std::string print(Sort const &s)
{
  switch (s.kind) {
  case Sort::Kind::Name: return s.name;
  case Sort::Kind::Unit: return "1";
  case Sort::Kind::Dual: {
    auto const &a = s.args[0];
    return a.kind == Sort::Kind::Product ? "(" + print(a) + ")*" : print(a) + "*";
  }
  case Sort::Kind::Product: {
    auto const &r = s.args[1];
    return print(s.args[0]) + " >< " + (r.kind == Sort::Kind::Product ? "(" + print(r) + ")" : print(r));
  }
  }
  return {};
}

std::string print(Term const &t)
{
  switch (t.kind) {
  case Term::Kind::Name: return t.name;
  case Term::Kind::Conj: return "~" + print(t.args[0]);
  case Term::Kind::App: {
    std::string out = t.name + "(";
    for (size_t k = 0; k < t.args.size(); ++k) { out += (k ? ", " : "") + print(t.args[k]); }
    return out + ")";
  }
  }
  return {};
}

std::string print(Formula const &f)
{
  using Op = Formula::Op;
  auto child = [](Formula const &c) { return is_binary(c.op) || open_right(c) ? "(" + print(c) + ")" : print(c); };
  switch (f.op) {
  case Op::True: return "true";
  case Op::False: return "false";
  case Op::Atomic: {
    std::string out = (f.conj ? "~" : "") + f.rel + "(";
    for (size_t k = 0; k < f.args.size(); ++k) { out += (k ? ", " : "") + print(f.args[k]); }
    return out + ")";
  }
  case Op::Eq: return "E[" + print(*f.sort) + "](" + print(f.args[0]) + ", " + print(f.args[1]) + ")";
  case Op::Not: return "not " + (is_binary(f.sub[0].op) ? "(" + print(f.sub[0]) + ")" : print(f.sub[0]));
  case Op::And: return child(f.sub[0]) + " and " + child(f.sub[1]);
  case Op::Or: return child(f.sub[0]) + " or " + child(f.sub[1]);
  case Op::Implies: return child(f.sub[0]) + " -> " + child(f.sub[1]);
  case Op::Iff: return child(f.sub[0]) + " <-> " + child(f.sub[1]);
  case Op::Forall:
  case Op::Exists:
    return std::string(f.op == Op::Forall ? "forall " : "exists ") + f.v + " in " + print(*f.sort) + " . " +
           print(f.sub[0]);
  case Op::ForallDiag:
  case Op::ExistsDiag:
    return std::string(f.op == Op::ForallDiag ? "forall " : "exists ") + f.v + " == " + f.vs + " in " +
           print(*f.sort) + " . " + print(f.sub[0]);
  }
  return {};
}

std::string print(Workspace const &w)
{
  std::string out;
  for (auto const &d : w.decls) { out += std::visit(DeclPrinter{}, d) + "\n"; }
  return out;
}

} // namespace ast

ParseResult parse_workspace(std::string const &text)
{
  ParseResult r;
  auto toks = Lexer(text).run(r.diagnostics);
  r.ws = Parser(std::move(toks)).workspace(r.diagnostics);
  return r;
}

std::optional<ast::Formula> parse_formula(std::string const &text, std::vector<Diagnostic> &ds)
{
  auto toks = Lexer(text).run(ds);
  if (has_errors(ds)) { return std::nullopt; }
  try {
    return Parser(std::move(toks)).formula_only();
  } catch (ParseError const &e) {
    ds.push_back(e.d);
    return std::nullopt;
  }
}

} // namespace qrel
