#include "paralab/constraint.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

namespace paralab {

Template Template::negated() const {
  Template out;
  for (const Binder& b : prefix)
    out.prefix.push_back({b.quantifier == Quantifier::Exists ? Quantifier::Forall : Quantifier::Exists, b.var});
  out.junction = junction == Junction::All ? Junction::Any : Junction::All;
  for (const Literal& l : literals) out.literals.push_back(l.negated());
  return out;
}

namespace {

class TemplateParser {
public:
  explicit TemplateParser(std::string_view text) : s_(text) {}

  Template run() {
    Template t;
    skip();
    while (peek() == '?' || peek() == '!') {
      auto q = get() == '?' ? Template::Quantifier::Exists : Template::Quantifier::Forall;
      expect('[');
      do {
        skip();
        std::string v = identifier();
        if (!is_var_name(v)) fail("expected a variable name");
        t.prefix.push_back({q, v});
        skip();
      } while (accept(','));
      expect(']');
      expect(':');
      skip();
    }
    bool parens = false;
    if (peek() == '(') {
      ++pos_;
      parens = true;
    }
    t.literals.push_back(literal());
    char op = 0;
    while (true) {
      skip();
      char c = peek();
      if (c != '&' && c != '|') break;
      if (op && c != op) fail("mixed '&' and '|' need a single junction");
      op = c;
      ++pos_;
      t.literals.push_back(literal());
    }
    if (parens) expect(')');
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    t.junction = op == '|' ? Template::Junction::Any : Template::Junction::All;
    return t;
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    throw TemplateError(what + " at column " + std::to_string(pos_ + 1) + " in '" + std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char get() { return pos_ < s_.size() ? s_[pos_++] : '\0'; }
  bool accept(char c) {
    skip();
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (start == pos_) fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }

  // An identifier with an optional balanced argument list, handed to the
  // formula parser.
  Formula term() {
    skip();
    std::size_t start = pos_;
    identifier();
    if (peek() == '(') {
      int depth = 0;
      do {
        char c = get();
        if (c == '\0') fail("unbalanced parentheses");
        if (c == '(') ++depth;
        if (c == ')') --depth;
      } while (depth > 0);
    }
    try {
      return parse(s_.substr(start, pos_ - start));
    } catch (const SyntaxError& e) {
      pos_ = start + e.position() - 1;
      fail(e.what());
    }
  }

  Literal literal() {
    skip();
    if (accept('~')) {
      skip();
      if (identifier() != "p") fail("expected p(...) after '~'");
      expect('(');
      Formula f = term();
      expect(')');
      return Literal::provable(f, false);
    }
    std::size_t save = pos_;
    if (identifier() == "p" && peek() == '(') {
      ++pos_;
      Formula f = term();
      expect(')');
      return Literal::provable(f);
    }
    pos_ = save;
    Formula lhs = term();
    skip();
    bool positive = true;
    if (s_.substr(pos_, 2) == "!=") {
      positive = false;
      pos_ += 2;
    } else if (peek() == '=') {
      ++pos_;
    } else {
      fail("expected '=' or '!='");
    }
    return Literal::equal(lhs, term(), positive);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

void check_closed(const Template& t) {
  std::set<std::string> bound;
  for (const auto& b : t.prefix)
    if (!bound.insert(b.var).second) throw TemplateError("variable " + b.var + " bound twice");
  auto check = [&](const Formula& f) {
    for (const auto& v : variables(f))
      if (!bound.count(v)) throw TemplateError("unbound variable " + v);
  };
  for (const Literal& l : t.literals) {
    check(l.lhs);
    if (l.rhs) check(*l.rhs);
  }
}

}  // namespace

Template parse_template(std::string_view text) {
  Template t = TemplateParser(text).run();
  check_closed(t);
  return t;
}

std::string print(const Template& t) {
  std::string out;
  for (std::size_t k = 0; k < t.prefix.size();) {
    auto q = t.prefix[k].quantifier;
    out += q == Template::Quantifier::Exists ? "?[" : "![";
    for (bool first = true; k < t.prefix.size() && t.prefix[k].quantifier == q; ++k, first = false) {
      if (!first) out += ',';
      out += t.prefix[k].var;
    }
    out += "]: ";
  }
  if (t.literals.size() == 1) return out + print(t.literals[0]);
  out += '(';
  for (std::size_t k = 0; k < t.literals.size(); ++k) {
    if (k) out += t.junction == Template::Junction::All ? " & " : " | ";
    out += print(t.literals[k]);
  }
  return out + ')';
}

bool holds(const FiniteModel& m, const Template& t) {
  std::map<std::string, Element> env;
  std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
    if (k == t.prefix.size()) {
      bool all = t.junction == Template::Junction::All;
      for (const Literal& l : t.literals)
        if (holds(m, l, env) != all) return !all;
      return all;
    }
    const auto& b = t.prefix[k];
    bool exists = b.quantifier == Template::Quantifier::Exists;
    for (Element d = 0; d < m.size; ++d) {
      env[b.var] = d;
      if (rec(k + 1) == exists) return exists;
    }
    return !exists;
  };
  return rec(0);
}

Constraint Constraint::require(Template t) {
  check_closed(t);
  Constraint c;
  c.kind = Kind::RequireExists;
  c.body = std::move(t);
  return c;
}

Constraint Constraint::forbid(Template t) {
  check_closed(t);
  Constraint c;
  c.kind = Kind::Forbid;
  c.body = std::move(t);
  return c;
}

Constraint Constraint::refute(const AxiomSchema& s) {
  Constraint c;
  c.kind = Kind::RefuteSchema;
  c.schema_id = s.id;
  c.schema = s.body;
  for (const auto& v : variables(s.body)) c.body.prefix.push_back({Template::Quantifier::Exists, v});
  c.body.literals.push_back(Literal::provable(s.body, false));
  return c;
}

Template Constraint::sentence() const { return kind == Kind::Forbid ? body.negated() : body; }

std::string print(const Constraint& c) {
  switch (c.kind) {
    case Constraint::Kind::RequireExists: return "require " + print(c.body);
    case Constraint::Kind::Forbid: return "forbid " + print(c.body);
    case Constraint::Kind::RefuteSchema: return "refute " + c.schema_id + " " + print(c.schema);
  }
  return {};
}

Constraint parse_constraint(std::string_view text) {
  auto space = text.find(' ');
  if (space == std::string_view::npos) throw TemplateError("expected 'require', 'forbid' or 'refute'");
  std::string_view head = text.substr(0, space), rest = text.substr(space + 1);
  if (head == "require") return Constraint::require(parse_template(rest));
  if (head == "forbid") return Constraint::forbid(parse_template(rest));
  if (head == "refute") {
    auto sp = rest.find(' ');
    if (sp == std::string_view::npos) throw TemplateError("refute needs a schema id and a formula");
    try {
      return Constraint::refute({std::string(rest.substr(0, sp)), parse(rest.substr(sp + 1)), false});
    } catch (const SyntaxError& e) {
      throw TemplateError(e.what());
    }
  }
  throw TemplateError("unknown constraint kind '" + std::string(head) + "'");
}

bool satisfies(const FiniteModel& m, const Constraint& c) { return holds(m, c.sentence()); }

bool satisfies(const FiniteModel& m, const std::vector<Constraint>& cs) {
  return std::all_of(cs.begin(), cs.end(), [&](const Constraint& c) { return satisfies(m, c); });
}

}  // namespace paralab
