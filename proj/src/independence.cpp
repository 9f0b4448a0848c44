#include "paralab/independence.hpp"

#include <stdexcept>

namespace paralab {

std::string IndependenceReport::summary() const {
  std::string out = schema_id + " in " + theory + ": ";
  if (answered_by.empty())
    out += "undecided";
  else
    out += "answered by the " + answered_by;
  out += "; prover " + prover_outcome + " after " + std::to_string(prover.generated) + " generated";
  out += "; model finder " + search_outcome;
  if (search.last_completed_size > 0) out += ", no countermodel up to size " + std::to_string(search.last_completed_size);
  return out;
}

const IndependenceReport& report_of(const IndependenceResult& r) {
  return std::visit([](const auto& v) -> const IndependenceReport& { return v.report; }, r);
}

IndependenceResult independence_check(const Theory& t, std::string_view schema_id, const ProverConfig& cfg,
                                      int max_model_size, const IndependenceOptions& opts) {
  const AxiomSchema* schema = t.find_schema(schema_id);
  if (!schema) throw TheoryError("no schema '" + std::string(schema_id) + "' in theory " + t.name);
  AxiomSchema target = *schema;
  Theory rest = without_schema(t, schema_id);

  SearchConfig scfg;
  scfg.min_size = opts.min_model_size;
  scfg.max_size = max_model_size;
  scfg.max_seconds = cfg.max_seconds;
  scfg.validate();

  ProverSession prover(rest, target.body, cfg);
  ModelFinderSession finder(rest, {Constraint::refute(target)}, scfg);

  IndependenceReport report;
  report.schema_id = target.id;
  report.theory = rest.name;
  auto fill = [&] {
    report.prover = prover.stats();
    report.search = finder.stats();
    switch (prover.status()) {
      case ProverSession::Status::Running: report.prover_outcome = "running"; break;
      case ProverSession::Status::Proved: report.prover_outcome = "proved"; break;
      case ProverSession::Status::Exhausted:
        report.prover_outcome = "exhausted " + to_string(prover.exhausted().budget);
        break;
    }
    switch (finder.status()) {
      case ModelFinderSession::Status::Running: report.search_outcome = "running"; break;
      case ModelFinderSession::Status::Found: report.search_outcome = "found"; break;
      case ModelFinderSession::Status::Exhausted:
        report.search_outcome = report.search.timed_out ? "timed out" : "exhausted";
        break;
    }
  };

  bool prover_live = true, finder_live = true;
  while (prover_live || finder_live) {
    if (prover_live) {
      auto st = prover.step(opts.prover_quantum);
      if (st == ProverSession::Status::Proved) {
        Proof p = prover.proof();
        if (!check_proof(rest, p).valid || !proves(p, target.body))
          throw std::logic_error("prover returned an invalid proof of " + target.id);
        report.answered_by = "prover";
        fill();
        return Derivable{std::move(p), report};
      }
      prover_live = st == ProverSession::Status::Running;
    }
    if (finder_live) {
      auto st = finder.step(opts.search_quantum);
      if (st == ModelFinderSession::Status::Found) {
        report.answered_by = "model finder";
        fill();
        return Independent{finder.model(), report};
      }
      finder_live = st == ModelFinderSession::Status::Running;
    }
  }
  fill();
  return Unknown{report};
}

}  // namespace paralab
