#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lieform/matrix.hpp"
#include "lieform/roots.hpp"

namespace lieform {

/// h, x, y acting on M in lattice coordinates, over Z_(p).
struct Sl2Action {
  Matrix h, x, y;
};

/// Lattice M (columns, ambient rational coordinates) with a generic weight
/// decomposition M (x) Q = sum_i M_{iQ} and optionally an sl2 action.
struct WeightedModule {
  std::int64_t p;
  Matrix lattice;
  std::vector<std::int64_t> weights;
  std::vector<Matrix> pieces;  // ambient rational bases, aligned with weights
  std::optional<Sl2Action> action;
  std::vector<std::string> labels;  // ambient basis names

  RingSpec ring() const { return RingSpec::localized_at(p); }
  std::size_t rank() const { return lattice.cols(); }
  const Matrix& piece(std::int64_t weight) const;
  bool has_weight(std::int64_t weight) const;
  /// Throws InvalidModule when a structural invariant fails.
  void validate() const;
};

/// Basis z_0..z_j with h z_i = (j-2i) z_i, x z_i = (j-i+1) z_{i-1},
/// y z_i = (i+1) z_{i+1}.
WeightedModule chain_from_highest(std::int64_t j, std::int64_t p);

/// Sym^p of the standard module with lattice M_1 + Z_(p) (a_p + a_{-p})/p.
WeightedModule counterexample_module(std::int64_t p);

/// Direct sum of modules over the same prime.
WeightedModule direct_sum(const std::vector<WeightedModule>& parts);

/// Same module with lattice basis replaced by lattice * change (change must
/// be invertible over Z_(p)); the action is conjugated accordingly.
WeightedModule change_lattice_basis(const WeightedModule& m, const Matrix& change);

struct FailureWitness {
  std::optional<std::pair<std::int64_t, std::int64_t>> weight_pair;
  Matrix vector;  // ambient coordinates, over Rationals
  std::string text;
};

struct DecompositionResult {
  bool success = false;
  std::string path;  // "lagrange" or "saturation"
  bool type1 = false, type2 = false, type3 = false;
  std::vector<std::int64_t> weights;
  std::vector<Matrix> pieces;       // M_i = M ∩ M_{iQ}, ambient coordinates
  std::vector<Matrix> projectors;   // pi_i in lattice coordinates, over Z_(p)
  std::vector<std::pair<std::int64_t, std::int64_t>> q_violations;
  std::optional<FailureWitness> failure_witness;
};

struct ExtendOptions {
  /// Throw HypothesisNotMet for weight sets of neither p-type 1 nor 2,
  /// instead of running the saturation check and reporting its outcome.
  bool require_hypothesis = false;
};

DecompositionResult extend_torus(const WeightedModule& m, const ExtendOptions& opts = {});

/// sum_{l<p} u^l / l!; requires u^p = 0 and (p-1)! a unit in u's ring.
Matrix exp_nilpotent(const Matrix& u, std::int64_t p);

/// "(a2+a-2)/2"-style rendering of a rational column.
std::string format_vector(const Matrix& column, const std::vector<std::string>& labels);

}  // namespace lieform
