#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "paralab/constraint.hpp"
#include "paralab/models.hpp"
#include "paralab/theories.hpp"

namespace paralab {

struct SearchConfig {
  int min_size = 1;
  int max_size = 4;
  double max_seconds = 600.0;
  bool enumerate_all = false;
  int workers = 1;
  /// enumerate_models only: break symmetries during the search and keep
  /// one model per isomorphism class.
  bool iso_filter = false;

  /// Throws std::invalid_argument unless 1 <= min_size <= max_size <= 63
  /// and workers >= 1.
  void validate() const;
};

struct SizeStats {
  int size = 0;
  std::uint64_t nodes = 0;
  std::uint64_t pruned = 0;
  std::uint64_t models = 0;
  bool complete = false;
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t pruned = 0;
  std::vector<SizeStats> sizes;
  /// Largest size up to which every searched size (from min_size) was
  /// fully explored; 0 when none.
  int last_completed_size = 0;
  bool timed_out = false;
  double seconds = 0.0;
};

/// `{"nodes":…,"pruned":…,"sizes":[{"size":…,"nodes":…,"pruned":…,"models":…,"complete":…}],…}`
std::string to_json(const SearchStats& s);

struct SearchExhausted {
  SearchStats stats;
};

using FindResult = std::variant<FiniteModel, SearchExhausted>;

/// Smallest model of t satisfying every constraint, sizes min_size to
/// max_size. Within a size the first model in enumeration order under
/// symmetry breaking is returned. The result is re-verified with
/// check_model and direct constraint evaluation.
FindResult find_model(const Theory& t, const std::vector<Constraint>& cs, const SearchConfig& cfg);

/// Receives each model in enumeration order; returning false stops the
/// enumeration.
using ModelSink = std::function<bool(const FiniteModel&)>;

/// Every model of t satisfying cs, size by size in enumeration order
/// (provable bits, constants, neg, impl, conj, disj; values ascending).
/// Without iso_filter every labelled model is emitted.
SearchStats enumerate_models(const Theory& t, const SearchConfig& cfg, const ModelSink& sink,
                             const std::vector<Constraint>& cs = {});

struct Enumeration {
  std::vector<FiniteModel> models;
  SearchStats stats;
};
Enumeration enumerate_models(const Theory& t, const SearchConfig& cfg, const std::vector<Constraint>& cs = {});

/// Lexicographically least relabelling of m over all permutations of its
/// domain; two models are isomorphic iff their canonical forms are equal.
FiniteModel canonical_form(const FiniteModel& m);
bool isomorphic(const FiniteModel& a, const FiniteModel& b);

/// find_model that can be advanced in node-count slices.
class ModelFinderSession {
public:
  ModelFinderSession(const Theory& t, std::vector<Constraint> cs, const SearchConfig& cfg);
  ~ModelFinderSession();
  ModelFinderSession(ModelFinderSession&&) noexcept;
  ModelFinderSession& operator=(ModelFinderSession&&) noexcept;

  enum class Status { Running, Found, Exhausted };

  Status step(std::uint64_t node_quantum);
  Status status() const;
  /// Valid once status() == Found.
  const FiniteModel& model() const;
  SearchStats stats() const;

private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace paralab
