#pragma once

#include <optional>
#include <vector>

#include "lieform/chevalley.hpp"
#include "lieform/matrix.hpp"
#include "lieform/roots.hpp"

namespace lieform {

using Vec = std::vector<Scalar>;

struct Term {
  std::size_t index;
  Scalar coeff;
};

/// Free Lie algebra of finite rank over a ring, given by sparse structure
/// constants: bracket(i, j) lists the nonzero c_{ij}^k.
class LieAlgebra {
 public:
  /// `table` has dim*dim entries. Antisymmetry and Jacobi are checked when
  /// dim <= 20 (or always, with `verify` = true forced by the caller).
  LieAlgebra(const RingSpec& ring, std::size_t dim, std::vector<std::vector<Term>> table,
             std::optional<DynkinType> dynkin = std::nullopt, bool verify = true);

  static LieAlgebra from_presentation(const ChevalleyPresentation& p, const RingSpec& ring);
  static LieAlgebra chevalley(DynkinType t, const RingSpec& ring);
  static LieAlgebra abelian(const RingSpec& ring, std::size_t dim);

  const RingSpec& ring() const { return ring_; }
  std::size_t dim() const { return dim_; }
  const std::optional<DynkinType>& dynkin() const { return dynkin_; }

  const std::vector<Term>& bracket(std::size_t i, std::size_t j) const { return table_[i * dim_ + j]; }
  Vec bracket(const Vec& a, const Vec& b) const;
  Vec basis_vector(std::size_t i) const;
  Vec zero_vector() const { return Vec(dim_, Scalar(ring_)); }

  bool satisfies_jacobi() const;

 private:
  RingSpec ring_;
  std::size_t dim_;
  std::vector<std::vector<Term>> table_;
  std::optional<DynkinType> dynkin_;
};

/// Column vector <-> Vec helpers.
Matrix to_column(const RingSpec& ring, const Vec& v);
Vec column_of(const Matrix& m, std::size_t c);

/// Matrix of b -> [v, b].
Matrix ad_matrix(const LieAlgebra& g, const Vec& v);
Matrix ad_basis(const LieAlgebra& g, std::size_t i);

struct BilinearForm {
  Matrix gram;
};

BilinearForm killing_form(const LieAlgebra& g);
BilinearForm trace_form(const MatrixRealization& r, const RingSpec& ring);
bool is_perfect(const BilinearForm& f);
Matrix form_kernel(const BilinearForm& f);

/// Basis of Der(g) inside End(g); column entry a*dim+b is D_{ab}, the
/// b_a-coordinate of D(b_b).
Matrix derivation_algebra(const LieAlgebra& g);
/// End(g) -> dim^2 coordinate vector, same layout as derivation_algebra.
Vec flatten(const Matrix& endo);

/// Kernel of all ad(b_i).
Matrix center(const LieAlgebra& g);

struct CasimirTensor {
  Matrix coefficients;  // Omega = sum C_ij b_i (x) b_j
};

CasimirTensor casimir(const LieAlgebra& g);
/// sum_ij C_ij ad(b_i) ad(b_j).
Matrix casimir_operator(const LieAlgebra& g, const CasimirTensor& t);
/// s C s^T; throws Singular when s is not invertible.
Matrix apply_endo_to_casimir(const CasimirTensor& t, const Matrix& s);

LieAlgebra base_change(const LieAlgebra& g, const RingSpec& target);

/// s [b_i, b_j] == [s b_i, s b_j] for all basis pairs and det s a unit.
bool is_automorphism(const LieAlgebra& g, const Matrix& s);
/// Same bracket check without the invertibility test.
bool preserves_bracket(const LieAlgebra& g, const Matrix& s);

/// Automorphisms of a Chevalley algebra, as matrices whose k-th column is
/// the image of b_k.
/// Torus element: X_alpha -> prod_i t_i^{a_i} X_alpha, H fixed.
Matrix torus_automorphism(const ChevalleyPresentation& p, const RingSpec& ring, const std::vector<Scalar>& t);
/// H_i -> -H_i, X_alpha -> -X_{-alpha}.
Matrix chevalley_involution(const ChevalleyPresentation& p, const RingSpec& ring);
/// omega composed with a sign torus element: (H_a, X_a, X_-a) -> (-H_a, X_-a, X_a).
Matrix triple_flip(const ChevalleyPresentation& p, const RingSpec& ring, const Root& alpha);

}  // namespace lieform
