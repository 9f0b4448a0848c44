#include "paralab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace paralab {

using json = nlohmann::ordered_json;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Established: return "Established";
    case Verdict::Refuted: return "Refuted";
    case Verdict::Evidence: return "Evidence";
    case Verdict::Unknown: return "Unknown";
  }
  return "Unknown";
}

Verdict verdict_from_string(const std::string& s) {
  for (Verdict v : {Verdict::Established, Verdict::Refuted, Verdict::Evidence, Verdict::Unknown})
    if (to_string(v) == s) return v;
  throw std::invalid_argument("unknown verdict '" + s + "'");
}

namespace sentences {
Template nonexplosive_contradiction() { return parse_template("?[X,Y]: ~p(i(a(X,n(X)),Y))"); }
Template explosive_not_bottom_like() { return parse_template("?[X,Y]: (~p(X) & ~p(i(X,Y)))"); }
Template bottom_like_exists() { return parse_template("?[D]: ![Y]: p(i(D,Y))"); }
Template imminent_explosion_fails() { return parse_template("?[X]: ![Y]: ?[Z]: ~p(i(X,i(n(X),i(Y,Z))))"); }
}  // namespace sentences

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Witness model_witness(std::string role, Statement st, FiniteModel m) {
  Witness w;
  w.role = std::move(role);
  w.statement = std::move(st);
  w.model = std::move(m);
  return w;
}

Witness proof_witness(std::string role, Statement st, Proof p) {
  Witness w;
  w.role = std::move(role);
  w.statement = std::move(st);
  w.proof = std::move(p);
  return w;
}

void record_budgets(ExperimentReport& r, const ExperimentConfig& cfg) {
  r.budgets = {{"min_size", static_cast<double>(cfg.search.min_size)},
               {"max_size", static_cast<double>(cfg.search.max_size)},
               {"max_seconds", cfg.search.max_seconds},
               {"workers", static_cast<double>(cfg.search.workers)},
               {"max_generated", static_cast<double>(cfg.prover.max_generated)},
               {"max_formula_size", static_cast<double>(cfg.prover.max_formula_size)}};
}

// Model search for `st`: Established with the model, Refuted when every
// size was exhausted, otherwise Unknown.
ExperimentPart search_part(std::string id, std::string description, Statement st, const SearchConfig& cfg,
                           const std::string& role) {
  ExperimentPart part;
  part.id = std::move(id);
  part.description = std::move(description);
  part.statement = st;
  auto result = find_model(theory_by_name(st.theory), st.constraints, cfg);
  if (auto* m = std::get_if<FiniteModel>(&result)) {
    part.verdict = Verdict::Established;
    part.detail = "model of size " + std::to_string(m->size);
    part.witnesses.push_back(model_witness(role, st, *m));
    return part;
  }
  const SearchStats& s = std::get<SearchExhausted>(result).stats;
  part.bound = s.last_completed_size;
  if (s.timed_out) {
    part.verdict = Verdict::Unknown;
    part.detail = "search timed out; no model up to size " + std::to_string(s.last_completed_size);
  } else {
    part.verdict = Verdict::Refuted;
    part.detail = "no model up to size " + std::to_string(s.last_completed_size) + " (exhaustive, " +
                  std::to_string(s.nodes) + " nodes)";
  }
  return part;
}

Verdict combine(const std::vector<ExperimentPart>& parts) {
  bool unknown = false;
  for (const auto& p : parts) {
    if (p.verdict == Verdict::Refuted) return Verdict::Refuted;
    if (p.verdict == Verdict::Unknown) unknown = true;
  }
  return unknown ? Verdict::Unknown : Verdict::Established;
}

std::string describe_pair(Element x, Element y) {
  return "x=" + std::to_string(x) + ", y=" + std::to_string(y);
}

// Enumerates C1 models up to the enumeration bound, keeping one per
// isomorphism class.
Enumeration c1_corpus(const ExperimentConfig& cfg) {
  SearchConfig e = cfg.search;
  e.max_size = std::min(cfg.search.max_size, cfg.enumeration_max_size);
  e.min_size = std::min(e.min_size, e.max_size);
  e.iso_filter = true;
  return enumerate_models(c1(), e);
}

}  // namespace

ExperimentReport experiment0(const ExperimentConfig& cfg, const std::string& theory_name) {
  auto t0 = Clock::now();
  ExperimentReport r;
  r.experiment_id = "0";
  r.theory_name = theory_by_name(theory_name).name;
  record_budgets(r, cfg);
  Statement st{r.theory_name, {Constraint::require(sentences::nonexplosive_contradiction())}, std::nullopt};
  auto part = search_part("0", "a model with a contradiction a(x,n(x)) from which some y does not follow", st,
                          cfg.search, "countermodel");
  if (part.verdict == Verdict::Established) {
    const FiniteModel& m = *part.witnesses[0].model;
    auto xy = nonexplosive_contradiction_witness(m);
    if (!xy) throw std::logic_error("experiment 0 witness rejected by the analyzer");
    part.detail += "; " + describe_pair(xy->first, xy->second) + ": i(a(x,n(x)),y) not provable";
    part.bound = m.size;
  }
  r.verdict = part.verdict;
  r.bound = part.bound;
  r.parts.push_back(std::move(part));
  r.wall_time = since(t0);
  return r;
}

ExperimentReport experiment1(const ExperimentConfig& cfg) {
  auto t0 = Clock::now();
  ExperimentReport r;
  r.experiment_id = "1";
  r.theory_name = "c1";
  r.seed = cfg.seed;
  record_budgets(r, cfg);
  r.budgets.push_back({"corpus_count", static_cast<double>(cfg.corpus_count)});
  r.budgets.push_back({"corpus_max_size", static_cast<double>(cfg.corpus_max_size)});

  ExperimentPart a;
  a.id = "1a";
  a.description = "every random structure has a conditionally explosive element";
  a.statement.theory = "none";
  std::mt19937_64 rng(cfg.seed);
  int failures = 0;
  std::vector<int> per_size(static_cast<std::size_t>(cfg.corpus_max_size) + 1, 0);
  std::optional<FiniteModel> counterexample;
  for (int k = 0; k < cfg.corpus_count; ++k) {
    int size = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(cfg.corpus_max_size));
    FiniteModel m = random_structure(rng, size);
    ++per_size[static_cast<std::size_t>(size)];
    if (conditionally_explosive(m).empty()) {
      ++failures;
      if (!counterexample) counterexample = m;
    }
  }
  a.verdict = failures == 0 ? Verdict::Established : Verdict::Refuted;
  a.detail = std::to_string(cfg.corpus_count) + " structures, " + std::to_string(failures) + " without one; by size";
  for (int s = 1; s <= cfg.corpus_max_size; ++s)
    a.detail += " " + std::to_string(s) + ":" + std::to_string(per_size[static_cast<std::size_t>(s)]);
  if (counterexample) a.detail += "; first counterexample " + to_json(*counterexample);

  Statement st{"c1", {Constraint::require(sentences::explosive_not_bottom_like())}, std::nullopt};
  auto b = search_part("1b", "a C1 model with a conditionally explosive element that is not bottom-like", st,
                       cfg.search, "model");
  if (b.verdict == Verdict::Established) {
    const FiniteModel& m = *b.witnesses[0].model;
    auto ce = conditionally_explosive(m), bl = bottom_like(m);
    std::optional<Element> d;
    for (Element x : ce)
      if (std::find(bl.begin(), bl.end(), x) == bl.end()) {
        d = x;
        break;
      }
    if (!d) throw std::logic_error("experiment 1b witness rejected by the analyzers");
    b.detail += "; d=" + std::to_string(*d) + " is conditionally explosive, not bottom-like";
    b.bound = m.size;
    FiniteModel prod = product(classical_model(), classical_model());
    b.witnesses.push_back(model_witness("boolean product, d=(0,1)", st, prod));
  } else if (b.verdict == Verdict::Refuted) {
    b.verdict = Verdict::Unknown;
  }
  r.parts.push_back(std::move(a));
  r.parts.push_back(std::move(b));
  r.verdict = combine(r.parts);
  r.wall_time = since(t0);
  return r;
}

ExperimentReport experiment2(const ExperimentConfig& cfg) {
  auto t0 = Clock::now();
  ExperimentReport r;
  r.experiment_id = "2";
  Theory exp = with_explosion(c1());
  r.theory_name = exp.name;
  record_budgets(r, cfg);

  ExperimentPart a;
  a.id = "2a";
  a.description = "c1+explosion is consistent: the two-valued model satisfies it";
  a.statement = {exp.name, {}, std::nullopt};
  FiniteModel classical = classical_model();
  auto check = check_model(classical, exp);
  a.verdict = check.ok() ? Verdict::Established : Verdict::Refuted;
  a.detail = std::to_string(check.total_violations) + " violated clause instances";
  if (check.ok()) a.witnesses.push_back(model_witness("model", a.statement, classical));
  r.parts.push_back(std::move(a));

  auto independence_part = [&](const std::string& id, bool expect_derivable) {
    ExperimentPart p;
    p.id = "2" + std::string(expect_derivable ? "b-" : "c-") + id;
    p.description = expect_derivable ? id + " is derivable from the other axioms under explosion"
                                     : id + " is independent of the other axioms under explosion";
    auto res = independence_check(exp, id, cfg.prover, cfg.search.max_size, cfg.independence);
    const IndependenceReport& rep = report_of(res);
    p.detail = rep.summary();
    p.bound = rep.search.last_completed_size;
    Statement derive{rep.theory, {}, exp.find_schema(id)->body};
    Statement refute{rep.theory, {Constraint::refute(*exp.find_schema(id))}, std::nullopt};
    if (auto* d = std::get_if<Derivable>(&res)) {
      p.statement = derive;
      p.verdict = expect_derivable ? Verdict::Established : Verdict::Refuted;
      p.witnesses.push_back(proof_witness("proof", derive, d->proof));
    } else if (auto* i = std::get_if<Independent>(&res)) {
      p.statement = refute;
      p.verdict = expect_derivable ? Verdict::Refuted : Verdict::Established;
      p.witnesses.push_back(model_witness("countermodel", refute, i->model));
    } else {
      p.statement = expect_derivable ? derive : refute;
      p.verdict = Verdict::Unknown;
    }
    return p;
  };
  for (const char* id : {"A11", "A12", "A13", "A14"}) r.parts.push_back(independence_part(id, true));
  r.parts.push_back(independence_part("A9", false));
  r.verdict = combine(r.parts);
  r.wall_time = since(t0);
  return r;
}

ExperimentReport experiment3(const ExperimentConfig& cfg) {
  auto t0 = Clock::now();
  ExperimentReport r;
  r.experiment_id = "3";
  r.theory_name = "c1";
  record_budgets(r, cfg);
  r.budgets.push_back({"enumeration_max_size", static_cast<double>(cfg.enumeration_max_size)});

  ExperimentPart e;
  e.id = "3-enumeration";
  e.description = "every C1 model (up to isomorphism) has a bottom-like element";
  e.statement = {"c1", {}, std::nullopt};
  auto corpus = c1_corpus(cfg);
  std::size_t without = 0;
  for (const auto& m : corpus.models)
    if (bottom_like(m).empty()) {
      if (without++ == 0) e.witnesses.push_back(model_witness("model without bottom-like element", e.statement, m));
    }
  e.bound = corpus.stats.last_completed_size;
  e.verdict = without ? Verdict::Refuted : Verdict::Evidence;
  e.detail = std::to_string(corpus.models.size()) + " models up to isomorphism, sizes " +
             std::to_string(std::min(cfg.search.min_size, cfg.enumeration_max_size)) + ".." +
             std::to_string(e.bound) + "; " + std::to_string(without) + " without a bottom-like element";
  if (corpus.stats.timed_out) e.detail += "; enumeration timed out";

  Statement st{"c1", {Constraint::forbid(sentences::bottom_like_exists())}, std::nullopt};
  auto f = search_part("3-forbid", "search for a C1 model with no bottom-like element", st, cfg.search,
                       "model without bottom-like element");
  if (f.verdict == Verdict::Established) {
    if (!bottom_like(*f.witnesses[0].model).empty())
      throw std::logic_error("experiment 3 witness has a bottom-like element");
    f.verdict = Verdict::Refuted;
  } else if (f.verdict == Verdict::Refuted) {
    f.verdict = Verdict::Evidence;
  } else if (f.bound > 0) {
    f.verdict = Verdict::Evidence;
  }
  bool enum_hit = e.verdict == Verdict::Refuted, search_hit = f.verdict == Verdict::Refuted;
  if (enum_hit && !search_hit && !corpus.stats.timed_out && f.bound >= e.witnesses[0].model->size)
    throw std::logic_error("experiment 3: enumeration and constraint search disagree");
  if (search_hit && !enum_hit && f.witnesses[0].model->size <= e.bound)
    throw std::logic_error("experiment 3: constraint search and enumeration disagree");

  r.parts.push_back(std::move(e));
  r.parts.push_back(std::move(f));
  if (enum_hit || search_hit) {
    r.verdict = Verdict::Refuted;
  } else if (r.parts[1].verdict == Verdict::Evidence) {
    r.verdict = Verdict::Evidence;
    r.bound = std::max(r.parts[0].bound, r.parts[1].bound);
  } else {
    r.verdict = r.parts[0].bound > 0 ? Verdict::Evidence : Verdict::Unknown;
    r.bound = r.parts[0].bound;
  }
  r.wall_time = since(t0);
  return r;
}

ExperimentReport probe_imminent_explosion(const ExperimentConfig& cfg) {
  auto t0 = Clock::now();
  ExperimentReport r;
  r.experiment_id = "imminent";
  r.theory_name = "c1";
  record_budgets(r, cfg);

  ExperimentPart c;
  c.id = "imminent-corpus";
  c.description = "imminent explosion over the experiment 3 corpus and the fixture models";
  c.statement = {"c1", {}, std::nullopt};
  auto corpus = c1_corpus(cfg);
  std::vector<FiniteModel> models = corpus.models;
  models.push_back(trivial_model());
  models.push_back(classical_model());
  std::size_t fails = 0;
  for (const auto& m : models)
    if (!imminent_explosion_holds(m)) {
      if (fails++ == 0) c.witnesses.push_back(model_witness("model where it fails", c.statement, m));
    }
  c.verdict = fails ? Verdict::Refuted : Verdict::Evidence;
  c.bound = corpus.stats.last_completed_size;
  c.detail = std::to_string(models.size() - fails) + " of " + std::to_string(models.size()) + " models satisfy it";

  Statement st{"c1", {Constraint::require(sentences::imminent_explosion_fails())}, std::nullopt};
  auto s = search_part("imminent-search", "search for a C1 model where imminent explosion fails", st, cfg.search,
                       "model where it fails");
  if (s.verdict == Verdict::Established) {
    if (imminent_explosion_holds(*s.witnesses[0].model))
      throw std::logic_error("imminent explosion witness rejected by the analyzer");
    s.verdict = Verdict::Refuted;
  } else if (s.verdict == Verdict::Refuted) {
    s.verdict = Verdict::Evidence;
  }
  r.parts.push_back(std::move(c));
  r.parts.push_back(std::move(s));
  if (r.parts[0].verdict == Verdict::Refuted || r.parts[1].verdict == Verdict::Refuted) {
    r.verdict = Verdict::Refuted;
  } else if (r.parts[1].verdict == Verdict::Evidence) {
    r.verdict = Verdict::Evidence;
    r.bound = r.parts[1].bound;
  } else {
    r.verdict = Verdict::Unknown;
    r.bound = r.parts[1].bound;
  }
  r.wall_time = since(t0);
  return r;
}

ExperimentReport run_experiment(const std::string& id, const ExperimentConfig& cfg, const std::string& theory_name) {
  if (id == "0") return experiment0(cfg, theory_name);
  if (id == "1") return experiment1(cfg);
  if (id == "2") return experiment2(cfg);
  if (id == "3") return experiment3(cfg);
  if (id == "imminent") return probe_imminent_explosion(cfg);
  throw std::invalid_argument("unknown experiment '" + id + "' (expected 0, 1, 2, 3 or imminent)");
}

void verify_witnesses(const ExperimentReport& r) {
  for (const auto& part : r.parts)
    for (const auto& w : part.witnesses) {
      std::string where = "experiment " + r.experiment_id + " part " + part.id + " witness '" + w.role + "'";
      Theory t = theory_by_name(w.statement.theory);
      if (w.model) {
        if (!check_model(*w.model, t).ok()) throw std::logic_error(where + " violates " + t.name);
        for (const auto& c : w.statement.constraints)
          if (!satisfies(*w.model, c)) throw std::logic_error(where + " violates " + print(c));
      }
      if (w.proof) {
        auto pc = check_proof(t, *w.proof);
        if (!pc.valid) throw std::logic_error(where + " fails at line " + std::to_string(pc.line) + ": " + pc.reason);
        if (w.statement.goal && !proves(*w.proof, *w.statement.goal))
          throw std::logic_error(where + " does not prove " + print(*w.statement.goal));
      }
    }
}

namespace {

json statement_json(const Statement& st) {
  json j;
  j["theory"] = st.theory;
  j["constraints"] = json::array();
  for (const auto& c : st.constraints) j["constraints"].push_back(print(c));
  if (st.goal) j["goal"] = print(*st.goal);
  return j;
}

Statement statement_from(const json& j) {
  Statement st;
  st.theory = j.at("theory").get<std::string>();
  for (const auto& c : j.at("constraints")) st.constraints.push_back(parse_constraint(c.get<std::string>()));
  if (j.contains("goal")) st.goal = parse(j.at("goal").get<std::string>());
  return st;
}

}  // namespace

std::string render(const ExperimentReport& r) {
  verify_witnesses(r);
  json j;
  j["experiment"] = r.experiment_id;
  j["theory"] = r.theory_name;
  j["verdict"] = to_string(r.verdict);
  j["bound"] = r.bound;
  j["parts"] = json::array();
  for (const auto& p : r.parts) {
    json jp;
    jp["id"] = p.id;
    jp["description"] = p.description;
    jp["statement"] = statement_json(p.statement);
    jp["verdict"] = to_string(p.verdict);
    jp["bound"] = p.bound;
    jp["detail"] = p.detail;
    jp["witnesses"] = json::array();
    for (const auto& w : p.witnesses) {
      json jw;
      jw["role"] = w.role;
      jw["statement"] = statement_json(w.statement);
      if (w.model) jw["model"] = json::parse(to_json(*w.model));
      if (w.proof) jw["proof"] = to_transcript(*w.proof);
      jp["witnesses"].push_back(std::move(jw));
    }
    j["parts"].push_back(std::move(jp));
  }
  if (r.seed) j["seed"] = *r.seed;
  j["budgets"] = json::object();
  for (const auto& [k, v] : r.budgets) j["budgets"][k] = v;
  j["wall_time"] = r.wall_time;
  return j.dump(2);
}

ExperimentReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("report is not JSON: ") + e.what());
  }
  ExperimentReport r;
  r.experiment_id = j.at("experiment").get<std::string>();
  r.theory_name = j.at("theory").get<std::string>();
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  r.bound = j.at("bound").get<int>();
  for (const auto& jp : j.at("parts")) {
    ExperimentPart p;
    p.id = jp.at("id").get<std::string>();
    p.description = jp.at("description").get<std::string>();
    p.statement = statement_from(jp.at("statement"));
    p.verdict = verdict_from_string(jp.at("verdict").get<std::string>());
    p.bound = jp.at("bound").get<int>();
    p.detail = jp.at("detail").get<std::string>();
    for (const auto& jw : jp.at("witnesses")) {
      Witness w;
      w.role = jw.at("role").get<std::string>();
      w.statement = statement_from(jw.at("statement"));
      if (jw.contains("model")) w.model = model_from_json(jw.at("model").dump());
      if (jw.contains("proof")) w.proof = proof_from_transcript(jw.at("proof").get<std::string>());
      p.witnesses.push_back(std::move(w));
    }
    r.parts.push_back(std::move(p));
  }
  if (j.contains("seed")) r.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& [k, v] : j.at("budgets").items()) r.budgets.push_back({k, v.get<double>()});
  r.wall_time = j.at("wall_time").get<double>();
  return r;
}

}  // namespace paralab
