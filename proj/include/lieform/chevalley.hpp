#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lieform/matrix.hpp"
#include "lieform/roots.hpp"

namespace lieform {

struct StructureTerm {
  std::size_t index;
  std::int64_t coeff;
};

/// Chevalley Z-form: basis H_1..H_r followed by X_alpha for alpha in
/// roots() order (positive roots, then negatives). Signs are fixed by
/// N_{alpha,beta} = +(p+1) on extraspecial pairs.
class ChevalleyPresentation {
 public:
  explicit ChevalleyPresentation(DynkinType t);

  const DynkinType& dynkin() const { return roots_.dynkin(); }
  const RootSystem& roots() const { return roots_; }
  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return static_cast<std::size_t>(roots_.rank()); }
  const std::vector<std::string>& basis_labels() const { return labels_; }

  /// Basis index of X_r.
  std::size_t root_index(const Root& r) const;
  /// Sparse [b_i, b_j].
  const std::vector<StructureTerm>& bracket(std::size_t i, std::size_t j) const { return table_[i * dim_ + j]; }
  /// N_{a,b} with [X_a, X_b] = N_{a,b} X_{a+b}; zero when a+b is not a root.
  std::int64_t structure_constant(const Root& a, const Root& b) const;
  /// The extraspecial pair (alpha, beta) of a non-simple positive root.
  std::pair<Root, Root> extraspecial_pair(const Root& xi) const;

 private:
  std::int64_t compute_n(int a, int b);

  RootSystem roots_;
  std::size_t dim_;
  std::vector<std::string> labels_;
  std::vector<std::vector<StructureTerm>> table_;
  std::map<std::pair<int, int>, std::int64_t> n_;
  std::map<int, std::pair<int, int>> extraspecial_;
};

/// Jacobi identity on basis triples i < j < k. With `samples` == 0 every
/// triple is checked; otherwise that many seeded random triples.
bool check_jacobi(const ChevalleyPresentation& g, std::size_t samples = 0, std::uint64_t seed = 1);

struct MatrixRealization {
  ChevalleyPresentation presentation;
  std::vector<Matrix> matrices;  // over Integers, one per basis element
  std::size_t module_rank;
};

/// Defining representation of a classical type: sl(n+1), so(2n+1) for the
/// form x_0^2 + sum x_i x_{n+i}, sp(2n), so(2n).
MatrixRealization matrix_realization(DynkinType t);

/// Commutator check of a realization against its structure constants.
bool check_bracket_compatible(const MatrixRealization& r);

Matrix commutator(const Matrix& a, const Matrix& b);

}  // namespace lieform
