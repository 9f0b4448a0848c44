#include "paralab/search.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "json.hpp"

namespace paralab {

void SearchConfig::validate() const {
  if (min_size < 1 || min_size > max_size || max_size > 63)
    throw std::invalid_argument("search sizes must satisfy 1 <= min_size <= max_size <= 63");
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
  if (!(max_seconds > 0)) throw std::invalid_argument("max_seconds must be positive");
}

std::string to_json(const SearchStats& s) {
  nlohmann::ordered_json j;
  j["nodes"] = s.nodes;
  j["pruned"] = s.pruned;
  j["sizes"] = nlohmann::ordered_json::array();
  for (const auto& z : s.sizes)
    j["sizes"].push_back(
        {{"size", z.size}, {"nodes", z.nodes}, {"pruned", z.pruned}, {"models", z.models}, {"complete", z.complete}});
  j["last_completed_size"] = s.last_completed_size;
  j["timed_out"] = s.timed_out;
  return j.dump();
}

namespace {

using Clock = std::chrono::steady_clock;

// Ground problem for one domain size. Cells are laid out as provable bits,
// theory constants, witness cells, then the neg, impl, conj and disj tables
// row-major.
struct Problem {
  struct Term {
    enum Kind : std::uint8_t { Elem, CellRef, Neg, Impl, Conj, Disj } kind;
    int a, b;
  };
  struct Lit {
    bool positive;
    bool equality;
    int lhs, rhs;
  };

  int n = 0;
  int const_base = 0, witness_base = 0, neg_base = 0, impl_base = 0, conj_base = 0, disj_base = 0, num_cells = 0;
  std::vector<std::string> constants;
  std::vector<std::vector<int>> witness_args;
  std::vector<Term> terms;
  std::vector<Lit> lits;
  std::vector<std::uint32_t> clause_start{0};
  bool root_conflict = false;

  Problem(const std::vector<Clause>& clauses, const std::vector<Template>& sentences,
          const std::vector<std::string>& consts, int size)
      : n(size), constants(consts) {
    const_base = n;
    witness_base = const_base + static_cast<int>(constants.size());
    for (int d = 0; d < n; ++d) terms.push_back({Term::Elem, d, 0});
    for (const Clause& c : clauses) ground_clause(c);
    for (const Template& s : sentences) ground_sentence(s);
    neg_base = witness_base + static_cast<int>(witness_args.size());
    impl_base = neg_base + n;
    conj_base = impl_base + n * n;
    disj_base = conj_base + n * n;
    num_cells = disj_base + n * n;
  }

  std::size_t num_clauses() const { return clause_start.size() - 1; }
  bool has_witnesses() const { return !witness_args.empty(); }
  bool is_provable_cell(int c) const { return c < n; }

  // Elements a cell's own position refers to, besides its value.
  void cell_args(int c, std::vector<int>& out) const {
    out.clear();
    if (c < const_base) return;
    if (c < witness_base) return;
    if (c < neg_base) {
      out = witness_args[static_cast<std::size_t>(c - witness_base)];
    } else if (c < impl_base) {
      out.push_back(c - neg_base);
    } else {
      int k = (c - impl_base) % (n * n);
      out.push_back(k / n);
      out.push_back(k % n);
    }
  }

  int table_base(Term::Kind k) const {
    switch (k) {
      case Term::Impl: return impl_base;
      case Term::Conj: return conj_base;
      default: return disj_base;
    }
  }

private:
  std::unordered_map<std::uint64_t, int> interned_;

  int intern(Term::Kind k, int a, int b) {
    std::uint64_t key = (std::uint64_t(k) << 60) | (std::uint64_t(a) << 30) | std::uint64_t(b);
    auto [it, fresh] = interned_.try_emplace(key, static_cast<int>(terms.size()));
    if (fresh) terms.push_back({k, a, b});
    return it->second;
  }

  int term_of(const Formula& f, const std::map<std::string, int>& env) {
    switch (f.kind()) {
      case Formula::Kind::MetaVar: return env.at(f.name());
      case Formula::Kind::Atom: {
        auto it = std::find(constants.begin(), constants.end(), f.name());
        if (it == constants.end()) throw std::invalid_argument("atom '" + f.name() + "' is not a constant of the theory");
        return intern(Term::CellRef, const_base + static_cast<int>(it - constants.begin()), 0);
      }
      case Formula::Kind::Neg: return intern(Term::Neg, term_of(f.lhs(), env), 0);
      case Formula::Kind::Impl: return intern(Term::Impl, term_of(f.lhs(), env), term_of(f.rhs(), env));
      case Formula::Kind::Conj: return intern(Term::Conj, term_of(f.lhs(), env), term_of(f.rhs(), env));
      case Formula::Kind::Disj: return intern(Term::Disj, term_of(f.lhs(), env), term_of(f.rhs(), env));
    }
    return 0;
  }

  Lit lit_of(const Literal& l, const std::map<std::string, int>& env) {
    Lit g{l.positive, l.is_equality(), term_of(l.lhs, env), 0};
    if (l.rhs) g.rhs = term_of(*l.rhs, env);
    return g;
  }

  void add_clause(std::vector<Lit> c) {
    std::vector<Lit> kept;
    for (const Lit& l : c) {
      if (l.equality && terms[l.lhs].kind == Term::Elem && terms[l.rhs].kind == Term::Elem) {
        if ((l.lhs == l.rhs) == l.positive) return;
        continue;
      }
      kept.push_back(l);
    }
    if (kept.empty()) root_conflict = true;
    lits.insert(lits.end(), kept.begin(), kept.end());
    clause_start.push_back(static_cast<std::uint32_t>(lits.size()));
  }

  void ground_clause(const Clause& c) {
    auto vars = c.variables();
    std::vector<int> at(vars.size(), 0);
    std::map<std::string, int> env;
    while (true) {
      for (std::size_t k = 0; k < vars.size(); ++k) env[vars[k]] = at[k];
      std::vector<Lit> g;
      for (const Literal& l : c.literals) g.push_back(lit_of(l, env));
      add_clause(std::move(g));
      std::size_t k = vars.size();
      while (k > 0 && ++at[k - 1] == n) at[--k] = 0;
      if (k == 0) break;
    }
  }

  void ground_sentence(const Template& s) {
    std::map<std::string, int> env;
    std::vector<int> outer;
    bool single = s.literals.size() == 1 || s.junction == Template::Junction::Any;

    auto all_exists_from = [&](std::size_t k) {
      for (; k < s.prefix.size(); ++k)
        if (s.prefix[k].quantifier == Template::Quantifier::Forall) return false;
      return true;
    };
    std::function<void(std::size_t, std::vector<Lit>&)> expand = [&](std::size_t k, std::vector<Lit>& acc) {
      if (k == s.prefix.size()) {
        for (const Literal& l : s.literals) acc.push_back(lit_of(l, env));
        return;
      }
      for (int d = 0; d < n; ++d) {
        env[s.prefix[k].var] = d;
        expand(k + 1, acc);
      }
    };
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (k == s.prefix.size()) {
        if (s.junction == Template::Junction::Any) {
          std::vector<Lit> c;
          for (const Literal& l : s.literals) c.push_back(lit_of(l, env));
          add_clause(std::move(c));
        } else {
          for (const Literal& l : s.literals) add_clause({lit_of(l, env)});
        }
        return;
      }
      const auto& b = s.prefix[k];
      if (b.quantifier == Template::Quantifier::Forall) {
        for (int d = 0; d < n; ++d) {
          env[b.var] = d;
          outer.push_back(d);
          rec(k + 1);
          outer.pop_back();
        }
      } else if (!outer.empty() && single && all_exists_from(k)) {
        std::vector<Lit> c;
        expand(k, c);
        add_clause(std::move(c));
      } else {
        int cell = witness_base + static_cast<int>(witness_args.size());
        witness_args.push_back(outer);
        env[b.var] = intern(Term::CellRef, cell, 0);
        rec(k + 1);
      }
    };
    rec(0);
  }
};

// Backtracking over one problem with the provable bits fixed. After each
// evaluation a clause watches the cells blocking its open literals and is
// revisited when one of them is assigned; watch additions are undone on
// backtracking.
class Search {
public:
  enum class Result { Model, Exhausted, Paused };

  // `adaptive` selects cells by remaining values and conflict weight
  // instead of position.
  Search(const Problem& p, const std::vector<int>& provable, bool symmetry, bool adaptive)
      : p_(p),
        symmetry_(symmetry),
        adaptive_(adaptive),
        full_(p.n == 64 ? ~0ull : (1ull << p.n) - 1),
        dom_(static_cast<std::size_t>(p.num_cells)),
        val_(static_cast<std::size_t>(p.num_cells), -1),
        watches_(static_cast<std::size_t>(p.num_cells)),
        mention_(static_cast<std::size_t>(p.n), 0),
        provable_(provable),
        weight_(adaptive ? p.num_clauses() : 0, 1) {}

  Result run(std::uint64_t budget) {
    if (done_) return Result::Exhausted;
    if (!started_) {
      started_ = true;
      if (!init()) {
        done_ = true;
        return Result::Exhausted;
      }
      int first = next_unassigned(0);
      if (first < 0) return Result::Model;
      push_frame(first);
    }
    while (!stack_.empty()) {
      Frame& f = stack_.back();
      undo_to(f.trail_mark, f.watch_mark);
      if (f.candidates == 0) {
        stack_.pop_back();
        continue;
      }
      if (budget == 0) return Result::Paused;
      --budget;
      int v = std::countr_zero(f.candidates);
      f.candidates &= f.candidates - 1;
      int cell = f.cell;
      ++nodes_;
      assign(cell, v);
      if (!propagate()) {
        ++pruned_;
        continue;
      }
      int next = next_unassigned(adaptive_ ? 0 : cell + 1);
      if (next < 0) return Result::Model;
      push_frame(next);
    }
    done_ = true;
    return Result::Exhausted;
  }

  FiniteModel model() const {
    const int n = p_.n;
    FiniteModel m = FiniteModel::blank(n);
    for (int d = 0; d < n; ++d) m.provable[static_cast<std::size_t>(d)] = val(d) == 1;
    for (std::size_t k = 0; k < p_.constants.size(); ++k)
      m.constants[p_.constants[k]] = val(p_.const_base + static_cast<int>(k));
    for (int x = 0; x < n; ++x) {
      m.neg[static_cast<std::size_t>(x)] = val(p_.neg_base + x);
      for (int y = 0; y < n; ++y) {
        m.impl[m.index(x, y)] = val(p_.impl_base + x * n + y);
        m.conj[m.index(x, y)] = val(p_.conj_base + x * n + y);
        m.disj[m.index(x, y)] = val(p_.disj_base + x * n + y);
      }
    }
    return m;
  }

  std::uint64_t nodes() const { return nodes_; }
  std::uint64_t pruned() const { return pruned_; }

private:
  struct Frame {
    int cell;
    std::uint64_t candidates;
    std::size_t trail_mark;
    std::size_t watch_mark;
  };
  struct TrailEntry {
    int cell;
    std::uint64_t dom;
    int val;
  };
  struct Value {
    int v;        // >= 0 when known
    int blocker;  // first unassigned cell otherwise
    bool top;     // the blocker's value is the term's value
  };
  struct LitState {
    enum { True, False, Open } state;
    int blocker = -1;
    std::uint64_t mask = 0;
    bool has_mask = false;
  };

  int val(int c) const { return val_[static_cast<std::size_t>(c)]; }
  std::uint64_t& dom(int c) { return dom_[static_cast<std::size_t>(c)]; }

  bool init() {
    if (p_.root_conflict) return false;
    for (int c = 0; c < p_.num_cells; ++c) dom(c) = p_.is_provable_cell(c) ? 3 : full_;
    for (int c = 0; c < p_.num_cells; ++c)
      if (std::popcount(dom(c)) == 1) assign(c, std::countr_zero(dom(c)));
    for (std::size_t d = 0; d < provable_.size(); ++d) assign(static_cast<int>(d), provable_[d]);
    for (std::uint32_t cl = 0; cl < p_.num_clauses(); ++cl)
      if (!process(cl)) return false;
    return propagate();
  }

  Value cell_value(int c) const {
    int v = val(c);
    return v >= 0 ? Value{v, -1, false} : Value{-1, c, true};
  }

  Value eval(int t) const {
    const Problem::Term& node = p_.terms[static_cast<std::size_t>(t)];
    switch (node.kind) {
      case Problem::Term::Elem: return {node.a, -1, false};
      case Problem::Term::CellRef: return cell_value(node.a);
      case Problem::Term::Neg: {
        Value x = eval(node.a);
        if (x.v < 0) return {-1, x.blocker, false};
        return cell_value(p_.neg_base + x.v);
      }
      default: {
        Value x = eval(node.a);
        if (x.v < 0) return {-1, x.blocker, false};
        Value y = eval(node.b);
        if (y.v < 0) return {-1, y.blocker, false};
        return cell_value(p_.table_base(node.kind) + x.v * p_.n + y.v);
      }
    }
  }

  LitState eval_lit(const Problem::Lit& l) {
    LitState s;
    s.state = LitState::Open;
    auto truth = [&](bool b) {
      s.state = b ? LitState::True : LitState::False;
      return s;
    };
    Value x = eval(l.lhs);
    if (!l.equality) {
      std::uint64_t want = l.positive ? 2 : 1;
      if (x.v >= 0) {
        if (val(x.v) >= 0) return truth((val(x.v) == 1) == l.positive);
        s.blocker = x.v;
        s.mask = want;
        s.has_mask = true;
        return s;
      }
      std::uint64_t fits = 0;
      for (int u = 0; u < p_.n; ++u)
        if (dom(u) & want) fits |= 1ull << u;
      if (fits == 0) return truth(false);
      s.blocker = x.blocker;
      if (x.top) {
        s.has_mask = true;
        s.mask = fits;
      }
      return s;
    }
    Value y = eval(l.rhs);
    if (x.v >= 0 && y.v >= 0) return truth((x.v == y.v) == l.positive);
    if (x.v >= 0 || y.v >= 0) {
      const Value& known = x.v >= 0 ? x : y;
      const Value& open = x.v >= 0 ? y : x;
      s.blocker = open.blocker;
      if (open.top) {
        s.has_mask = true;
        std::uint64_t bit = 1ull << known.v;
        s.mask = l.positive ? bit : full_ & ~bit;
      }
      return s;
    }
    s.blocker = x.blocker;
    return s;
  }

  // False on conflict.
  bool process(std::uint32_t cl) {
    int open = 0;
    LitState first;
    blockers_.clear();
    for (std::uint32_t k = p_.clause_start[cl]; k < p_.clause_start[cl + 1]; ++k) {
      LitState s = eval_lit(p_.lits[k]);
      if (s.state == LitState::True) return true;
      if (s.state != LitState::Open) continue;
      if (open++ == 0) first = s;
      if (std::find(blockers_.begin(), blockers_.end(), s.blocker) == blockers_.end()) blockers_.push_back(s.blocker);
    }
    if (open == 0) return conflict(cl);
    for (int b : blockers_) {
      watches_[static_cast<std::size_t>(b)].push_back(cl);
      watch_trail_.push_back(b);
    }
    if (open == 1 && first.has_mask && !restrict(first.blocker, first.mask)) return conflict(cl);
    return true;
  }

  bool conflict(std::uint32_t cl) {
    if (adaptive_) ++weight_[cl];
    return false;
  }

  void assign(int c, int v) {
    trail_.push_back({c, dom(c), val(c)});
    dom(c) = 1ull << v;
    val_[static_cast<std::size_t>(c)] = v;
    if (symmetry_ && !p_.is_provable_cell(c)) {
      ++mention_[static_cast<std::size_t>(v)];
      p_.cell_args(c, args_);
      for (int a : args_) ++mention_[static_cast<std::size_t>(a)];
    }
    queue_.push_back(c);
  }

  bool restrict(int c, std::uint64_t mask) {
    std::uint64_t nd = dom(c) & mask;
    if (nd == dom(c)) return true;
    if (nd == 0) return false;
    trail_.push_back({c, dom(c), val(c)});
    dom(c) = nd;
    if (std::popcount(nd) == 1) assign(c, std::countr_zero(nd));
    return true;
  }

  void undo_to(std::size_t mark, std::size_t watch_mark) {
    while (watch_trail_.size() > watch_mark) {
      watches_[static_cast<std::size_t>(watch_trail_.back())].pop_back();
      watch_trail_.pop_back();
    }
    while (trail_.size() > mark) {
      TrailEntry e = trail_.back();
      trail_.pop_back();
      if (e.val < 0 && val(e.cell) >= 0 && symmetry_ && !p_.is_provable_cell(e.cell)) {
        --mention_[static_cast<std::size_t>(val(e.cell))];
        p_.cell_args(e.cell, args_);
        for (int a : args_) --mention_[static_cast<std::size_t>(a)];
      }
      dom(e.cell) = e.dom;
      val_[static_cast<std::size_t>(e.cell)] = e.val;
    }
  }

  bool propagate() {
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const auto& wl = watches_[static_cast<std::size_t>(queue_[head])];
      for (std::size_t k = 0; k < wl.size(); ++k)
        if (!process(wl[k])) {
          queue_.clear();
          return false;
        }
    }
    queue_.clear();
    return true;
  }

  // Provable bits always come first. Adaptively, the next cell maximizes
  // the conflict weight of the clauses it blocks per remaining value.
  int next_unassigned(int from) const {
    if (!adaptive_) {
      for (int c = from; c < p_.num_cells; ++c)
        if (val(c) < 0) return c;
      return -1;
    }
    for (int c = 0; c < p_.n; ++c)
      if (val(c) < 0) return c;
    int best = -1;
    double best_score = -1;
    for (int c = p_.n; c < p_.num_cells; ++c) {
      if (val(c) >= 0) continue;
      std::uint64_t w = 0;
      for (std::uint32_t cl : watches_[static_cast<std::size_t>(c)]) w += weight_[cl];
      double score = static_cast<double>(w) / std::popcount(dom_[static_cast<std::size_t>(c)]);
      if (score > best_score) {
        best = c;
        best_score = score;
      }
    }
    return best;
  }

  // Provable bits: once an element is unprovable all later ones are.
  // Other cells: among elements not yet mentioned by any assignment (or by
  // the cell's own position), only the least of each provability class.
  std::uint64_t allowed(int c) {
    if (!symmetry_) return ~0ull;
    if (p_.is_provable_cell(c)) return c > 0 && val(c - 1) == 0 ? 1 : 3;
    std::uint64_t mentioned = 0;
    for (int e = 0; e < p_.n; ++e)
      if (mention_[static_cast<std::size_t>(e)]) mentioned |= 1ull << e;
    p_.cell_args(c, args_);
    for (int a : args_) mentioned |= 1ull << a;
    std::uint64_t allow = mentioned;
    bool seen[2] = {false, false};
    for (int e = 0; e < p_.n; ++e) {
      if (mentioned >> e & 1) continue;
      int cls = val(e) == 1;
      if (!seen[cls]) {
        seen[cls] = true;
        allow |= 1ull << e;
      }
    }
    return allow;
  }

  void push_frame(int c) { stack_.push_back({c, dom(c) & allowed(c), trail_.size(), watch_trail_.size()}); }

  const Problem& p_;
  bool symmetry_;
  bool adaptive_;
  std::uint64_t full_;
  std::vector<std::uint64_t> dom_;
  std::vector<int> val_;
  std::vector<std::vector<std::uint32_t>> watches_;
  std::vector<int> mention_;
  std::vector<int> provable_;
  std::vector<std::uint64_t> weight_;
  std::vector<int> args_;
  std::vector<int> blockers_;
  std::vector<TrailEntry> trail_;
  std::vector<int> watch_trail_;
  std::vector<int> queue_;
  std::vector<Frame> stack_;
  bool started_ = false, done_ = false;
  std::uint64_t nodes_ = 0, pruned_ = 0;
};

// The provable-bit assignments that split a size into independent parts,
// in enumeration order.
std::vector<std::vector<int>> partitions(int n, bool symmetry) {
  std::vector<std::vector<int>> out;
  if (symmetry) {
    for (int k = 0; k <= n; ++k) {
      std::vector<int> bits(static_cast<std::size_t>(n), 0);
      std::fill(bits.begin(), bits.begin() + k, 1);
      out.push_back(bits);
    }
    return out;
  }
  for (std::uint64_t idx = 0; idx < (1ull << n); ++idx) {
    std::vector<int> bits(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) bits[static_cast<std::size_t>(d)] = static_cast<int>(idx >> (n - 1 - d) & 1);
    out.push_back(bits);
  }
  return out;
}

std::vector<Template> sentences_of(const std::vector<Constraint>& cs) {
  std::vector<Template> out;
  for (const Constraint& c : cs) out.push_back(c.sentence());
  return out;
}

void verify(const FiniteModel& m, const Theory& t, const std::vector<Constraint>& cs) {
  if (!check_model(m, t).ok()) throw std::logic_error("search emitted a model violating " + t.name + ": " + to_json(m));
  for (const Constraint& c : cs)
    if (!satisfies(m, c)) throw std::logic_error("search emitted a model violating " + print(c) + ": " + to_json(m));
}

constexpr std::uint64_t kSlice = 4096;

struct Deadline {
  Clock::time_point start = Clock::now();
  Clock::time_point end;
  explicit Deadline(double seconds)
      : end(start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds))) {}
  bool passed() const { return Clock::now() >= end; }
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start).count(); }
};

void add_size(SearchStats& s, const SizeStats& z) {
  s.nodes += z.nodes;
  s.pruned += z.pruned;
  bool prefix_complete = std::all_of(s.sizes.begin(), s.sizes.end(), [](const SizeStats& x) { return x.complete; });
  s.sizes.push_back(z);
  if (z.complete && prefix_complete) s.last_completed_size = z.size;
}

// Runs one partition to its first model (or to exhaustion when `sink` is
// set, passing every model to it). Returns false on timeout or when the
// sink or `cancel` asks to stop.
struct PartRun {
  std::optional<FiniteModel> first;
  std::vector<FiniteModel> models;
  std::uint64_t nodes = 0, pruned = 0;
  bool complete = false;
};

PartRun run_part(const Problem& p, const std::vector<int>& bits, bool symmetry, bool collect_all,
                 const Deadline& deadline, const std::function<bool()>& cancel) {
  PartRun r;
  Search s(p, bits, symmetry, !collect_all);
  while (true) {
    auto res = s.run(kSlice);
    if (res == Search::Result::Model) {
      if (!collect_all) {
        r.first = s.model();
        break;
      }
      r.models.push_back(s.model());
      continue;
    }
    if (res == Search::Result::Exhausted) {
      r.complete = true;
      break;
    }
    if (deadline.passed() || cancel()) break;
  }
  r.nodes = s.nodes();
  r.pruned = s.pruned();
  return r;
}

template <class Fn>
void parallel_for(std::size_t count, int workers, Fn fn) {
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < count;) fn(k);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers && static_cast<std::size_t>(w) < count; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
}

}  // namespace

FindResult find_model(const Theory& t, const std::vector<Constraint>& cs, const SearchConfig& cfg) {
  cfg.validate();
  Deadline deadline(cfg.max_seconds);
  SearchStats stats;
  auto clauses = compile(t);
  auto sentences = sentences_of(cs);
  for (int n = cfg.min_size; n <= cfg.max_size; ++n) {
    Problem p(clauses, sentences, t.constants, n);
    auto parts = partitions(n, true);
    std::vector<PartRun> runs(parts.size());
    std::atomic<std::size_t> best{parts.size()};
    parallel_for(parts.size(), cfg.workers, [&](std::size_t k) {
      if (k > best.load()) return;
      runs[k] = run_part(p, parts[k], true, false, deadline, [&] { return k > best.load(); });
      if (runs[k].first) {
        std::size_t b = best.load();
        while (k < b && !best.compare_exchange_weak(b, k)) {
        }
      }
    });
    SizeStats z{n, 0, 0, 0, true};
    std::optional<FiniteModel> found;
    bool cut = false;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      z.nodes += runs[k].nodes;
      z.pruned += runs[k].pruned;
      if (found || cut) continue;
      if (runs[k].first) {
        found = runs[k].first;
        z.models = 1;
        z.complete = false;
      } else if (!runs[k].complete) {
        cut = true;
        z.complete = false;
      }
    }
    add_size(stats, z);
    stats.seconds = deadline.elapsed();
    if (found) {
      verify(*found, t, cs);
      return *found;
    }
    if (!z.complete) {
      stats.timed_out = true;
      break;
    }
  }
  return SearchExhausted{stats};
}

FiniteModel canonical_form(const FiniteModel& m) {
  std::vector<Element> perm(static_cast<std::size_t>(m.size));
  for (int k = 0; k < m.size; ++k) perm[static_cast<std::size_t>(k)] = k;
  auto key = [](const FiniteModel& x) {
    std::vector<int> out;
    for (bool b : x.provable) out.push_back(b ? 0 : 1);
    for (const auto& [name, v] : x.constants) out.push_back(v);
    out.insert(out.end(), x.neg.begin(), x.neg.end());
    out.insert(out.end(), x.impl.begin(), x.impl.end());
    out.insert(out.end(), x.conj.begin(), x.conj.end());
    out.insert(out.end(), x.disj.begin(), x.disj.end());
    return out;
  };
  FiniteModel best = m;
  auto best_key = key(m);
  do {
    FiniteModel c = permute(m, perm);
    auto k = key(c);
    if (k < best_key) {
      best_key = std::move(k);
      best = std::move(c);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

bool isomorphic(const FiniteModel& a, const FiniteModel& b) {
  return a.size == b.size && canonical_form(a) == canonical_form(b);
}

SearchStats enumerate_models(const Theory& t, const SearchConfig& cfg, const ModelSink& sink,
                             const std::vector<Constraint>& cs) {
  cfg.validate();
  Deadline deadline(cfg.max_seconds);
  SearchStats stats;
  auto clauses = compile(t);
  auto sentences = sentences_of(cs);
  bool symmetry = cfg.iso_filter;
  for (int n = cfg.min_size; n <= cfg.max_size; ++n) {
    Problem p(clauses, sentences, t.constants, n);
    bool dedupe = cfg.iso_filter || p.has_witnesses();
    std::set<std::string> seen;
    SizeStats z{n, 0, 0, 0, true};
    bool stop = false;
    // Emits in order; returns false once the sink declines.
    auto emit = [&](const FiniteModel& m) {
      if (dedupe) {
        FiniteModel key = cfg.iso_filter ? canonical_form(m) : m;
        if (!seen.insert(to_json(key)).second) return true;
      }
      verify(m, t, cs);
      ++z.models;
      return sink(m);
    };
    auto parts = partitions(n, symmetry);
    if (cfg.workers == 1) {
      for (const auto& bits : parts) {
        Search s(p, bits, symmetry, false);
        while (!stop) {
          auto res = s.run(kSlice);
          if (res == Search::Result::Model) {
            if (!emit(s.model())) stop = true;
          } else if (res == Search::Result::Exhausted) {
            break;
          } else if (deadline.passed()) {
            stats.timed_out = stop = true;
          }
        }
        z.nodes += s.nodes();
        z.pruned += s.pruned();
        if (stop) break;
      }
    } else {
      std::vector<PartRun> runs(parts.size());
      std::atomic<bool> cancelled{false};
      parallel_for(parts.size(), cfg.workers, [&](std::size_t k) {
        runs[k] = run_part(p, parts[k], symmetry, true, deadline, [&] { return cancelled.load(); });
        if (!runs[k].complete) cancelled = true;
      });
      for (auto& r : runs) {
        z.nodes += r.nodes;
        z.pruned += r.pruned;
        if (stop) continue;
        for (const auto& m : r.models)
          if (!emit(m)) {
            stop = true;
            break;
          }
        if (!r.complete) stats.timed_out = stop = true;
      }
    }
    z.complete = !stop;
    add_size(stats, z);
    stats.seconds = deadline.elapsed();
    if (stop) break;
  }
  return stats;
}

Enumeration enumerate_models(const Theory& t, const SearchConfig& cfg, const std::vector<Constraint>& cs) {
  Enumeration e;
  e.stats = enumerate_models(
      t, cfg,
      [&](const FiniteModel& m) {
        e.models.push_back(m);
        return true;
      },
      cs);
  return e;
}

class ModelFinderSession::Impl {
public:
  Impl(const Theory& t, std::vector<Constraint> cs, const SearchConfig& cfg)
      : theory_(t), cs_(std::move(cs)), cfg_(cfg), clauses_(compile(t)), sentences_(sentences_of(cs_)),
        deadline_(cfg.max_seconds), size_(cfg.min_size) {
    cfg.validate();
    open_size();
  }

  Status step(std::uint64_t quantum) {
    while (status_ == Status::Running && quantum > 0) {
      if (deadline_.passed()) {
        stats_.timed_out = true;
        finish_size(false);
        status_ = Status::Exhausted;
        break;
      }
      std::uint64_t before = search_->nodes();
      auto res = search_->run(std::min(quantum, kSlice));
      quantum -= std::min(quantum, std::max<std::uint64_t>(search_->nodes() - before, 1));
      if (res == Search::Result::Model) {
        model_ = search_->model();
        verify(model_, theory_, cs_);
        current_.models = 1;
        finish_size(false);
        status_ = Status::Found;
      } else if (res == Search::Result::Exhausted) {
        collect();
        if (++part_ < parts_.size()) {
          search_ = std::make_unique<Search>(*problem_, parts_[part_], true, true);
        } else {
          finish_size(true);
          if (++size_ > cfg_.max_size) {
            status_ = Status::Exhausted;
          } else {
            open_size();
          }
        }
      }
    }
    stats_.seconds = deadline_.elapsed();
    return status_;
  }

  Status status_ = Status::Running;
  FiniteModel model_;
  SearchStats stats_;

  SearchStats stats() const {
    SearchStats s = stats_;
    if (status_ == Status::Running) {
      SizeStats z = current_;
      z.nodes += search_->nodes();
      z.pruned += search_->pruned();
      z.complete = false;
      s.nodes += z.nodes;
      s.pruned += z.pruned;
      s.sizes.push_back(z);
    }
    return s;
  }

private:
  void open_size() {
    problem_ = std::make_unique<Problem>(clauses_, sentences_, theory_.constants, size_);
    parts_ = partitions(size_, true);
    part_ = 0;
    current_ = SizeStats{size_, 0, 0, 0, false};
    search_ = std::make_unique<Search>(*problem_, parts_[0], true, true);
  }
  void collect() {
    current_.nodes += search_->nodes();
    current_.pruned += search_->pruned();
  }
  void finish_size(bool complete) {
    if (!complete) collect();
    current_.complete = complete;
    add_size(stats_, current_);
  }

  Theory theory_;
  std::vector<Constraint> cs_;
  SearchConfig cfg_;
  std::vector<Clause> clauses_;
  std::vector<Template> sentences_;
  Deadline deadline_;
  int size_;
  std::unique_ptr<Problem> problem_;
  std::vector<std::vector<int>> parts_;
  std::size_t part_ = 0;
  SizeStats current_;
  std::unique_ptr<Search> search_;
};

ModelFinderSession::ModelFinderSession(const Theory& t, std::vector<Constraint> cs, const SearchConfig& cfg)
    : impl_(std::make_unique<Impl>(t, std::move(cs), cfg)) {}
ModelFinderSession::~ModelFinderSession() = default;
ModelFinderSession::ModelFinderSession(ModelFinderSession&&) noexcept = default;
ModelFinderSession& ModelFinderSession::operator=(ModelFinderSession&&) noexcept = default;

ModelFinderSession::Status ModelFinderSession::step(std::uint64_t node_quantum) { return impl_->step(node_quantum); }
ModelFinderSession::Status ModelFinderSession::status() const { return impl_->status_; }
const FiniteModel& ModelFinderSession::model() const { return impl_->model_; }
SearchStats ModelFinderSession::stats() const { return impl_->stats(); }

}  // namespace paralab
