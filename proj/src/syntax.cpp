#include "paralab/syntax.hpp"

#include <cctype>
#include <functional>
#include <unordered_map>
#include <utility>

namespace paralab {

struct Formula::Node {
  Kind kind;
  std::string name;
  std::vector<Formula> args;
  std::size_t size = 1;
  std::size_t hash = 0;
  bool ground = true;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

char connective_letter(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Neg: return 'n';
    case Formula::Kind::Impl: return 'i';
    case Formula::Kind::Conj: return 'a';
    case Formula::Kind::Disj: return 'o';
    default: return '?';
  }
}

}  // namespace

Formula Formula::atom(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->hash = mix(1, std::hash<std::string>{}(name));
  n->name = std::move(name);
  return Formula(std::move(n));
}

Formula Formula::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::MetaVar;
  n->hash = mix(2, std::hash<std::string>{}(name));
  n->ground = false;
  n->name = std::move(name);
  return Formula(std::move(n));
}

Formula Formula::neg(Formula arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Neg;
  n->size = 1 + arg.size();
  n->ground = arg.ground();
  n->hash = mix(3, arg.hash());
  n->args.push_back(std::move(arg));
  return Formula(std::move(n));
}

Formula Formula::binary(Kind kind, Formula lhs, Formula rhs) {
  if (kind != Kind::Impl && kind != Kind::Conj && kind != Kind::Disj)
    throw std::invalid_argument("Formula::binary: not a binary connective");
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->size = 1 + lhs.size() + rhs.size();
  n->ground = lhs.ground() && rhs.ground();
  n->hash = mix(mix(static_cast<std::size_t>(kind) + 4, lhs.hash()), rhs.hash());
  n->args.push_back(std::move(lhs));
  n->args.push_back(std::move(rhs));
  return Formula(std::move(n));
}

Formula Formula::impl(Formula lhs, Formula rhs) { return binary(Kind::Impl, std::move(lhs), std::move(rhs)); }
Formula Formula::conj(Formula lhs, Formula rhs) { return binary(Kind::Conj, std::move(lhs), std::move(rhs)); }
Formula Formula::disj(Formula lhs, Formula rhs) { return binary(Kind::Disj, std::move(lhs), std::move(rhs)); }

Formula::Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }
std::size_t Formula::size() const { return node_->size; }
bool Formula::ground() const { return node_->ground; }
std::size_t Formula::hash() const { return node_->hash; }

const Formula& Formula::lhs() const {
  if (node_->args.empty()) throw std::logic_error("Formula::lhs on a leaf");
  return node_->args[0];
}

const Formula& Formula::rhs() const {
  if (node_->args.size() < 2) throw std::logic_error("Formula::rhs on a non-binary formula");
  return node_->args[1];
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size() || a.kind() != b.kind()) return false;
  if (a.is_leaf()) return a.name() == b.name();
  if (a.kind() == Formula::Kind::Neg) return a.lhs() == b.lhs();
  return a.lhs() == b.lhs() && a.rhs() == b.rhs();
}

bool operator<(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return false;
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  if (a.is_leaf()) return a.name() < b.name();
  if (a.lhs() != b.lhs()) return a.lhs() < b.lhs();
  if (a.kind() == Formula::Kind::Neg) return false;
  return a.rhs() < b.rhs();
}

SyntaxError::SyntaxError(const std::string& what, std::size_t position)
    : std::runtime_error(what + " at column " + std::to_string(position)), position_(position) {}

bool is_atom_name(std::string_view s) {
  if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z')) return false;
  for (char c : s.substr(1))
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
  return true;
}

bool is_var_name(std::string_view s) {
  if (s.empty() || !(s[0] >= 'A' && s[0] <= 'Z')) return false;
  for (char c : s.substr(1))
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

namespace {

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse_all() {
    Formula f = formula();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return f;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, pos_ + 1); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended");
    if (text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string_view identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return text_.substr(start, pos_ - start);
  }

  Formula formula() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected formula but input ended");
    std::size_t start = pos_;
    char c = text_[pos_];
    if (!std::isalpha(static_cast<unsigned char>(c))) fail("expected formula");
    std::string_view id = identifier();
    skip_ws();
    bool call = pos_ < text_.size() && text_[pos_] == '(';
    if (!call) {
      if (is_var_name(id)) return Formula::var(std::string(id));
      if (is_atom_name(id)) return Formula::atom(std::string(id));
      pos_ = start;
      fail("malformed identifier '" + std::string(id) + "'");
    }
    if (id == "n") {
      ++pos_;
      Formula arg = formula();
      expect(')');
      return Formula::neg(std::move(arg));
    }
    Formula::Kind kind;
    if (id == "i") kind = Formula::Kind::Impl;
    else if (id == "a") kind = Formula::Kind::Conj;
    else if (id == "o") kind = Formula::Kind::Disj;
    else {
      pos_ = start;
      fail("unknown connective '" + std::string(id) + "'");
    }
    ++pos_;
    Formula lhs = formula();
    expect(',');
    Formula rhs = formula();
    expect(')');
    return Formula::binary(kind, std::move(lhs), std::move(rhs));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void print_into(const Formula& f, std::string& out) {
  if (f.is_leaf()) {
    out += f.name();
    return;
  }
  out += connective_letter(f.kind());
  out += '(';
  print_into(f.lhs(), out);
  if (f.is_binary()) {
    out += ',';
    print_into(f.rhs(), out);
  }
  out += ')';
}

template <typename LeafFn>
Formula rebuild(const Formula& f, const LeafFn& leaf) {
  if (f.is_leaf()) return leaf(f);
  if (f.kind() == Formula::Kind::Neg) {
    Formula a = rebuild(f.lhs(), leaf);
    return a == f.lhs() ? f : Formula::neg(std::move(a));
  }
  Formula l = rebuild(f.lhs(), leaf);
  Formula r = rebuild(f.rhs(), leaf);
  if (l == f.lhs() && r == f.rhs()) return f;
  return Formula::binary(f.kind(), std::move(l), std::move(r));
}

// Triangular bindings during unification.
using Bindings = std::unordered_map<std::string, Formula>;

Formula walk(Formula t, const Bindings& b) {
  while (t.is_var()) {
    auto it = b.find(t.name());
    if (it == b.end()) break;
    t = it->second;
  }
  return t;
}

bool occurs(const std::string& v, const Formula& t, const Bindings& b) {
  Formula w = walk(t, b);
  if (w.is_var()) return w.name() == v;
  if (w.is_atom()) return false;
  if (occurs(v, w.lhs(), b)) return true;
  return w.is_binary() && occurs(v, w.rhs(), b);
}

Formula resolve(const Formula& t, const Bindings& b) {
  return rebuild(t, [&](const Formula& leaf) {
    if (!leaf.is_var()) return leaf;
    Formula w = walk(leaf, b);
    return w.is_var() ? w : resolve(w, b);
  });
}

}  // namespace

Formula parse(std::string_view text) { return Parser(text).parse_all(); }

std::string print(const Formula& f) {
  std::string out;
  out.reserve(f.size() * 3);
  print_into(f, out);
  return out;
}

Formula substitute(const Formula& f, const Substitution& s) {
  if (s.empty() || f.ground()) return f;
  return rebuild(f, [&](const Formula& leaf) {
    if (leaf.is_var()) {
      auto it = s.find(leaf.name());
      if (it != s.end()) return it->second;
    }
    return leaf;
  });
}

std::optional<Substitution> unify(const Formula& f, const Formula& g) {
  Bindings b;
  std::vector<std::pair<Formula, Formula>> work{{f, g}};
  while (!work.empty()) {
    auto [x, y] = std::move(work.back());
    work.pop_back();
    x = walk(x, b);
    y = walk(y, b);
    if (x == y) continue;
    if (x.is_var() || y.is_var()) {
      const Formula& v = x.is_var() ? x : y;
      const Formula& t = x.is_var() ? y : x;
      if (occurs(v.name(), t, b)) return std::nullopt;
      b.emplace(v.name(), t);
      continue;
    }
    if (x.kind() != y.kind() || x.is_atom()) return std::nullopt;
    if (x.is_binary()) work.emplace_back(x.rhs(), y.rhs());
    work.emplace_back(x.lhs(), y.lhs());
  }
  Substitution out;
  for (const auto& [v, t] : b) out.emplace(v, resolve(t, b));
  return out;
}

std::optional<Substitution> match(const Formula& pattern, const Formula& instance) {
  Substitution s;
  std::vector<std::pair<Formula, Formula>> work{{pattern, instance}};
  while (!work.empty()) {
    auto [p, t] = std::move(work.back());
    work.pop_back();
    if (p.is_var()) {
      auto [it, inserted] = s.emplace(p.name(), t);
      if (!inserted && it->second != t) return std::nullopt;
      continue;
    }
    if (p.kind() != t.kind()) return std::nullopt;
    if (p.is_atom()) {
      if (p.name() != t.name()) return std::nullopt;
      continue;
    }
    if (p.is_binary()) work.emplace_back(p.rhs(), t.rhs());
    work.emplace_back(p.lhs(), t.lhs());
  }
  return s;
}

bool is_instance_of(const Formula& instance, const Formula& pattern) {
  return match(pattern, instance).has_value();
}

bool is_variant(const Formula& a, const Formula& b) { return canonicalize(a) == canonicalize(b); }

std::vector<std::string> variables(const Formula& f) {
  std::vector<std::string> out;
  std::function<void(const Formula&)> go = [&](const Formula& t) {
    if (t.is_var()) {
      for (const auto& v : out)
        if (v == t.name()) return;
      out.push_back(t.name());
    } else if (!t.is_atom()) {
      go(t.lhs());
      if (t.is_binary()) go(t.rhs());
    }
  };
  go(f);
  return out;
}

std::string canonical_var_name(std::size_t k) {
  static constexpr const char* kLetters[] = {"X", "Y", "Z", "U", "V", "W"};
  if (k < 6) return kLetters[k];
  return "X" + std::to_string(k);
}

Formula canonicalize(const Formula& f) {
  if (f.ground()) return f;
  Substitution s;
  std::size_t k = 0;
  for (const auto& v : variables(f)) s.emplace(v, Formula::var(canonical_var_name(k++)));
  return substitute(f, s);
}

Formula rename_with_suffix(const Formula& f, std::string_view suffix) {
  return rebuild(f, [&](const Formula& leaf) {
    return leaf.is_var() ? Formula::var(leaf.name() + std::string(suffix)) : leaf;
  });
}

std::variant<Formula, DetachError> condensed_detach(const Formula& major, const Formula& minor) {
  if (major.kind() != Formula::Kind::Impl) return DetachError::NotImplication;
  Formula maj = rename_with_suffix(major, "_1");
  Formula min = rename_with_suffix(minor, "_2");
  auto theta = unify(maj.lhs(), min);
  if (!theta) return DetachError::UnifyFailure;
  return canonicalize(substitute(maj.rhs(), *theta));
}

Formula consistency_op(const Formula& f) { return Formula::neg(Formula::conj(f, Formula::neg(f))); }

}  // namespace paralab
