#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "paralab/prover.hpp"
#include "paralab/search.hpp"

namespace paralab {

struct IndependenceOptions {
  /// Round-robin slice sizes: generated formulas for the prover, search
  /// nodes for the model finder.
  std::size_t prover_quantum = 20'000;
  std::uint64_t search_quantum = 50'000;
  int min_model_size = 1;
};

struct IndependenceReport {
  std::string schema_id;
  std::string theory;  // the theory with the schema removed
  /// "prover", "model finder", or empty when neither side answered.
  std::string answered_by;
  ProverStats prover;
  std::string prover_outcome;  // "proved", "running", or the tripped budget
  SearchStats search;
  std::string search_outcome;  // "found", "running", "exhausted" or "timed out"

  std::string summary() const;
};

struct Derivable {
  Proof proof;
  IndependenceReport report;
};
struct Independent {
  FiniteModel model;
  IndependenceReport report;
};
struct Unknown {
  IndependenceReport report;
};

using IndependenceResult = std::variant<Derivable, Independent, Unknown>;

/// Decides whether `schema_id` follows from the rest of t by alternating
/// prover slices (deriving the schema from t minus it) with model-finder
/// slices (searching t minus it for a model falsifying an instance),
/// sizes up to max_model_size. The first definitive answer wins; the
/// verdict is independent of wall-clock timing except through
/// cfg.max_seconds, which bounds each side.
IndependenceResult independence_check(const Theory& t, std::string_view schema_id, const ProverConfig& cfg,
                                      int max_model_size, const IndependenceOptions& opts = {});

const IndependenceReport& report_of(const IndependenceResult& r);

}  // namespace paralab
