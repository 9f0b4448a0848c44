#include "paralab/prover.hpp"

#include <algorithm>
#include <cstring>
#include <functional>
#include <map>
#include <queue>
#include <unordered_map>

namespace paralab {

namespace {

// Formulas are stored flat in prefix order. Metavariables are small
// non-negative integers numbered by first occurrence; connectives and atoms
// are negative codes.
using Sym = std::int32_t;
constexpr Sym kNeg = -1;
constexpr Sym kImpl = -2;
constexpr Sym kConj = -3;
constexpr Sym kDisj = -4;
constexpr Sym kAtomBase = -5;
constexpr Sym kStar = INT32_MAX;

inline int arity(Sym s) {
  if (s >= 0) return 0;
  if (s == kNeg) return 1;
  if (s >= kDisj) return 2;
  return 0;
}

inline const Sym* skip(const Sym* p) {
  int need = 1;
  while (need) {
    need += arity(*p) - 1;
    ++p;
  }
  return p;
}

struct Ref {
  const Sym* p = nullptr;
  int off = 0;
};

// Structure-sharing unifier over two flat terms whose variables are
// distinguished by an offset.
class Unifier {
public:
  void reset(std::size_t nvars) {
    for (int v : trail_) bound_[static_cast<std::size_t>(v)] = Ref{};
    trail_.clear();
    if (bound_.size() < nvars) bound_.resize(nvars);
  }

  Ref deref(Ref r) const {
    while (*r.p >= 0) {
      const Ref& b = bound_[static_cast<std::size_t>(*r.p + r.off)];
      if (!b.p) return r;
      r = b;
    }
    return r;
  }

  bool unify(Ref a, Ref b) {
    stack_.clear();
    stack_.emplace_back(a, b);
    while (!stack_.empty()) {
      auto [x, y] = stack_.back();
      stack_.pop_back();
      x = deref(x);
      y = deref(y);
      if (*x.p >= 0 || *y.p >= 0) {
        if (*x.p < 0) std::swap(x, y);
        int v = *x.p + x.off;
        if (*y.p >= 0 && *y.p + y.off == v) continue;
        if (occurs(v, y)) return false;
        bound_[static_cast<std::size_t>(v)] = y;
        trail_.push_back(v);
        continue;
      }
      if (*x.p != *y.p) return false;
      int ar = arity(*x.p);
      if (ar == 0) continue;
      const Sym* x1 = x.p + 1;
      const Sym* y1 = y.p + 1;
      if (ar == 2) stack_.emplace_back(Ref{skip(x1), x.off}, Ref{skip(y1), y.off});
      stack_.emplace_back(Ref{x1, x.off}, Ref{y1, y.off});
    }
    return true;
  }

  // Writes the instance of `r` in canonical variable numbering. Returns
  // false if the result would exceed `limit` symbols.
  bool build(Ref r, std::vector<Sym>& out, std::size_t limit) {
    for (int v : touched_) varmap_[static_cast<std::size_t>(v)] = -1;
    touched_.clear();
    if (varmap_.size() < bound_.size()) varmap_.resize(bound_.size(), -1);
    next_var_ = 0;
    out.clear();
    return emit(r, out, limit);
  }

private:
  bool occurs(int v, Ref t) const {
    t = deref(t);
    if (*t.p >= 0) return *t.p + t.off == v;
    int ar = arity(*t.p);
    if (ar == 0) return false;
    const Sym* c1 = t.p + 1;
    if (occurs(v, Ref{c1, t.off})) return true;
    return ar == 2 && occurs(v, Ref{skip(c1), t.off});
  }

  bool emit(Ref r, std::vector<Sym>& out, std::size_t limit) {
    r = deref(r);
    if (out.size() >= limit) return false;
    if (*r.p >= 0) {
      int v = *r.p + r.off;
      int& m = varmap_[static_cast<std::size_t>(v)];
      if (m < 0) {
        m = next_var_++;
        touched_.push_back(v);
      }
      out.push_back(m);
      return true;
    }
    out.push_back(*r.p);
    int ar = arity(*r.p);
    if (ar == 0) return true;
    const Sym* c1 = r.p + 1;
    if (!emit(Ref{c1, r.off}, out, limit)) return false;
    return ar == 1 || emit(Ref{skip(c1), r.off}, out, limit);
  }

  std::vector<Ref> bound_;
  std::vector<int> trail_;
  std::vector<std::pair<Ref, Ref>> stack_;
  std::vector<int> varmap_;
  std::vector<int> touched_;
  int next_var_ = 0;
};

// Is `query` an instance of `pattern`? Query variables are rigid.
bool flat_match(const Sym* pattern, std::size_t plen, const Sym* query, std::vector<const Sym*>& binds) {
  binds.assign(plen, nullptr);
  const Sym* p = pattern;
  const Sym* end = pattern + plen;
  const Sym* q = query;
  while (p != end) {
    if (*p >= 0) {
      const Sym* qe = skip(q);
      const Sym*& b = binds[static_cast<std::size_t>(*p)];
      if (!b) {
        b = q;
      } else {
        auto len = static_cast<std::size_t>(qe - q);
        if (static_cast<std::size_t>(skip(b) - b) != len || std::memcmp(b, q, len * sizeof(Sym)) != 0) return false;
      }
      q = qe;
      ++p;
    } else {
      if (*p != *q) return false;
      ++p;
      ++q;
    }
  }
  return true;
}

// Discrimination tree over retained formulas; variables collapse to a star.
class DiscriminationTree {
public:
  DiscriminationTree() : nodes_(1) {}

  void insert(const Sym* f, std::size_t len, std::uint32_t id) {
    std::uint32_t n = 0;
    for (std::size_t k = 0; k < len; ++k) {
      Sym key = f[k] >= 0 ? kStar : f[k];
      n = child_or_create(n, key);
    }
    nodes_[n].ids.push_back(id);
  }

  // Calls `accept(id)` for each stored formula that might generalize the
  // query; stops early when it returns true.
  bool find_generalization(const Sym* q, const std::function<bool(std::uint32_t)>& accept) const {
    const Sym* end = skip(q);
    return walk(0, q, end, accept);
  }

private:
  struct Node {
    std::vector<std::pair<Sym, std::uint32_t>> kids;
    std::vector<std::uint32_t> ids;
  };

  std::uint32_t child_or_create(std::uint32_t n, Sym key) {
    for (auto [k, c] : nodes_[n].kids)
      if (k == key) return c;
    auto c = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    nodes_[n].kids.emplace_back(key, c);
    return c;
  }

  bool walk(std::uint32_t n, const Sym* q, const Sym* end, const std::function<bool(std::uint32_t)>& accept) const {
    if (q == end) {
      for (auto id : nodes_[n].ids)
        if (accept(id)) return true;
      return false;
    }
    for (auto [k, c] : nodes_[n].kids) {
      if (k == kStar) {
        if (walk(c, skip(q), end, accept)) return true;
      } else if (k == *q) {
        if (walk(c, q + 1, end, accept)) return true;
      }
    }
    return false;
  }

  std::vector<Node> nodes_;
};

}  // namespace

std::string to_string(BudgetKind k) {
  switch (k) {
    case BudgetKind::MaxGenerated: return "max_generated";
    case BudgetKind::MaxSeconds: return "max_seconds";
    case BudgetKind::Saturated: return "saturated";
  }
  return "unknown";
}

class ProverSession::Impl {
public:
  Impl(const Theory& t, const Formula& goal, ProverConfig cfg) : cfg_(cfg), start_(Clock::now()) {
    if (cfg_.max_generated == 0 || cfg_.max_formula_size == 0 || cfg_.max_seconds <= 0)
      throw std::invalid_argument("ProverConfig budgets must be positive");
    goal_ = encode(goal);
    for (const auto& s : t.schemata) axiom_ids_.push_back(s.id);
    for (std::size_t k = 0; k < t.schemata.size(); ++k) {
      std::vector<Sym> f = encode(canonicalize(t.schemata[k].body));
      Entry e;
      e.axiom = static_cast<int>(k);
      if (add(f, e) && status_ == Status::Proved) return;
    }
  }

  Status step(std::size_t quantum) {
    std::size_t stop_at = stats_.generated + quantum;
    while (status_ == Status::Running) {
      if (!have_given_) {
        if (!select_given()) {
          finish(BudgetKind::Saturated);
          break;
        }
        usable_.push_back(given_);
        partner_ = 0;
        have_given_ = true;
        ++stats_.given;
      }
      while (partner_ < usable_.size() && status_ == Status::Running) {
        std::uint32_t u = usable_[partner_];
        // Second half of the pair (u as major) may be pending after a
        // slice boundary.
        if (!half_done_) {
          detach(given_, u);
          half_done_ = true;
        } else {
          if (u != given_) detach(u, given_);
          half_done_ = false;
          ++partner_;
        }
        if (status_ != Status::Running) break;
        if (stats_.generated >= cfg_.max_generated) {
          finish(BudgetKind::MaxGenerated);
          break;
        }
        if ((++ticks_ & 0x3ff) == 0 && elapsed() > cfg_.max_seconds) {
          finish(BudgetKind::MaxSeconds);
          break;
        }
        if (stats_.generated >= stop_at) {
          stats_.seconds = elapsed();
          return status_;
        }
      }
      if (partner_ >= usable_.size()) have_given_ = false;
    }
    stats_.seconds = elapsed();
    return status_;
  }

  Status status() const { return status_; }
  const ProverStats& stats() const { return stats_; }

  Exhausted exhausted() const {
    if (status_ != Status::Exhausted) throw std::logic_error("prover session is not exhausted");
    return Exhausted{budget_, stats_};
  }

  Proof proof() const {
    if (status_ != Status::Proved) throw std::logic_error("prover session has no proof");
    Proof p;
    std::unordered_map<std::uint32_t, std::size_t> line_of;
    std::function<std::size_t(std::uint32_t)> visit = [&](std::uint32_t id) -> std::size_t {
      if (auto it = line_of.find(id); it != line_of.end()) return it->second;
      const Entry& e = entries_[id];
      ProofLine line;
      if (e.axiom >= 0) {
        line.kind = ProofLine::Kind::Axiom;
        line.schema_id = axiom_name(e.axiom);
      } else {
        std::size_t maj = visit(e.major);
        std::size_t min = visit(e.minor);
        line.kind = ProofLine::Kind::Detach;
        line.major = maj;
        line.minor = min;
      }
      line.formula = decode(&pool_[e.offset]);
      p.lines.push_back(std::move(line));
      line_of.emplace(id, p.lines.size());
      return p.lines.size();
    };
    p.goal_line = visit(goal_entry_);
    return p;
  }

private:
  using Clock = std::chrono::steady_clock;

  struct Entry {
    std::uint32_t offset = 0;
    std::uint32_t len = 0;
    int nvars = 0;
    int axiom = -1;
    std::uint32_t major = 0;
    std::uint32_t minor = 0;
  };

  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

  void finish(BudgetKind k) {
    status_ = Status::Exhausted;
    budget_ = k;
    stats_.seconds = elapsed();
  }

  // Every age_ratio-th pick takes the oldest unselected formula; the rest
  // take the lightest.
  bool select_given() {
    bool by_age = cfg_.age_ratio > 0 && (picks_ % (cfg_.age_ratio + 1)) == cfg_.age_ratio;
    ++picks_;
    if (by_age) {
      while (oldest_ < entries_.size() && selected_[oldest_]) ++oldest_;
      if (oldest_ < entries_.size()) {
        given_ = static_cast<std::uint32_t>(oldest_);
        selected_[oldest_] = true;
        return true;
      }
    }
    while (!sos_.empty()) {
      auto id = sos_.top().second;
      sos_.pop();
      if (selected_[id]) continue;
      given_ = id;
      selected_[id] = true;
      return true;
    }
    return false;
  }

  const std::string& axiom_name(int k) const { return axiom_ids_[static_cast<std::size_t>(k)]; }

  Sym atom_code(const std::string& name) {
    auto [it, inserted] = atoms_.emplace(name, static_cast<Sym>(atom_names_.size()));
    if (inserted) atom_names_.push_back(name);
    return kAtomBase - it->second;
  }

  std::vector<Sym> encode(const Formula& f) {
    std::vector<Sym> out;
    std::map<std::string, Sym> vars;
    std::function<void(const Formula&)> go = [&](const Formula& t) {
      switch (t.kind()) {
        case Formula::Kind::MetaVar: {
          auto [it, ins] = vars.emplace(t.name(), static_cast<Sym>(vars.size()));
          out.push_back(it->second);
          return;
        }
        case Formula::Kind::Atom: out.push_back(atom_code(t.name())); return;
        case Formula::Kind::Neg:
          out.push_back(kNeg);
          go(t.lhs());
          return;
        case Formula::Kind::Impl: out.push_back(kImpl); break;
        case Formula::Kind::Conj: out.push_back(kConj); break;
        case Formula::Kind::Disj: out.push_back(kDisj); break;
      }
      go(t.lhs());
      go(t.rhs());
    };
    go(f);
    return out;
  }

  Formula decode(const Sym* p) const {
    const Sym* cur = p;
    std::function<Formula()> go = [&]() -> Formula {
      Sym s = *cur++;
      if (s >= 0) return Formula::var(canonical_var_name(static_cast<std::size_t>(s)));
      if (s <= kAtomBase) return Formula::atom(atom_names_[static_cast<std::size_t>(kAtomBase - s)]);
      if (s == kNeg) return Formula::neg(go());
      Formula l = go();
      Formula r = go();
      Formula::Kind k = s == kImpl ? Formula::Kind::Impl : s == kConj ? Formula::Kind::Conj : Formula::Kind::Disj;
      return Formula::binary(k, std::move(l), std::move(r));
    };
    return go();
  }

  // Symbol count plus a penalty for connectives the goal does not use.
  std::uint32_t weight(const std::vector<Sym>& f) const {
    std::uint32_t w = 0;
    for (Sym s : f) {
      ++w;
      if (s < 0 && s >= kDisj && !goal_connective(s)) w += static_cast<std::uint32_t>(cfg_.foreign_penalty);
    }
    return w;
  }

  bool goal_connective(Sym s) const { return std::find(goal_.begin(), goal_.end(), s) != goal_.end(); }

  static int count_vars(const std::vector<Sym>& f) {
    int n = 0;
    for (Sym s : f)
      if (s >= 0) n = std::max(n, s + 1);
    return n;
  }

  // Retains `f` unless subsumed; returns whether it was retained.
  bool add(const std::vector<Sym>& f, Entry e) {
    const Sym* q = f.data();
    bool subsumed = index_.find_generalization(q, [&](std::uint32_t id) {
      const Entry& g = entries_[id];
      return flat_match(&pool_[g.offset], g.len, q, binds_);
    });
    if (subsumed) {
      ++stats_.subsumed;
      return false;
    }
    e.offset = static_cast<std::uint32_t>(pool_.size());
    e.len = static_cast<std::uint32_t>(f.size());
    e.nvars = count_vars(f);
    pool_.insert(pool_.end(), f.begin(), f.end());
    auto id = static_cast<std::uint32_t>(entries_.size());
    entries_.push_back(e);
    selected_.push_back(false);
    index_.insert(f.data(), f.size(), id);
    sos_.emplace(weight(f), id);
    ++stats_.retained;
    if (flat_match(&pool_[e.offset], e.len, goal_.data(), binds_)) {
      status_ = Status::Proved;
      goal_entry_ = id;
    }
    return true;
  }

  void detach(std::uint32_t major_id, std::uint32_t minor_id) {
    const Entry& maj = entries_[major_id];
    const Entry& min = entries_[minor_id];
    const Sym* mp = &pool_[maj.offset];
    if (*mp != kImpl) return;
    const Sym* antecedent = mp + 1;
    const Sym* consequent = skip(antecedent);
    unifier_.reset(static_cast<std::size_t>(maj.nvars + min.nvars));
    if (!unifier_.unify(Ref{antecedent, 0}, Ref{&pool_[min.offset], maj.nvars})) return;
    ++stats_.generated;
    if (!unifier_.build(Ref{consequent, 0}, scratch_, cfg_.max_formula_size)) {
      ++stats_.oversize;
      return;
    }
    if (cfg_.max_distinct_vars > 0 && count_vars(scratch_) > static_cast<int>(cfg_.max_distinct_vars)) {
      ++stats_.oversize;
      return;
    }
    Entry e;
    e.major = major_id;
    e.minor = minor_id;
    add(scratch_, e);
  }

  ProverConfig cfg_;
  Clock::time_point start_;
  std::vector<Sym> goal_;
  std::vector<Sym> pool_;
  std::vector<Entry> entries_;
  DiscriminationTree index_;
  // (symbol count, id), smallest first.
  std::priority_queue<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::pair<std::uint32_t, std::uint32_t>>,
                      std::greater<>>
      sos_;
  std::vector<std::uint32_t> usable_;
  std::vector<bool> selected_;
  std::size_t oldest_ = 0;
  std::size_t picks_ = 0;
  std::map<std::string, Sym> atoms_;
  std::vector<std::string> atom_names_;
  std::vector<std::string> axiom_ids_;
  Unifier unifier_;
  std::vector<Sym> scratch_;
  std::vector<const Sym*> binds_;
  ProverStats stats_;
  Status status_ = Status::Running;
  BudgetKind budget_ = BudgetKind::Saturated;
  std::uint32_t goal_entry_ = 0;
  std::uint32_t given_ = 0;
  std::size_t partner_ = 0;
  bool have_given_ = false;
  bool half_done_ = false;
  std::size_t ticks_ = 0;
};

ProverSession::ProverSession(const Theory& t, const Formula& goal, ProverConfig cfg)
    : impl_(std::make_unique<Impl>(t, goal, cfg)) {}
ProverSession::~ProverSession() = default;
ProverSession::ProverSession(ProverSession&&) noexcept = default;
ProverSession& ProverSession::operator=(ProverSession&&) noexcept = default;

ProverSession::Status ProverSession::step(std::size_t quantum) { return impl_->step(quantum); }
ProverSession::Status ProverSession::status() const { return impl_->status(); }
Proof ProverSession::proof() const { return impl_->proof(); }
Exhausted ProverSession::exhausted() const { return impl_->exhausted(); }
const ProverStats& ProverSession::stats() const { return impl_->stats(); }

DeriveResult derive(const Theory& t, const Formula& goal, const ProverConfig& cfg) {
  ProverSession s(t, goal, cfg);
  while (s.step(cfg.max_generated) == ProverSession::Status::Running) {
  }
  if (s.status() == ProverSession::Status::Proved) return s.proof();
  return s.exhausted();
}

}  // namespace paralab
