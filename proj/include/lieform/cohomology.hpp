#pragma once

#include <optional>

#include "lieform/lie_algebra.hpp"

namespace lieform {

/// Chevalley-Eilenberg cochains C^0..C^3 with coefficients in g, where x
/// acts as ad(twist x) (twist = identity gives the adjoint module).
/// Cochain coordinates: combination index * dim + output coordinate, with
/// combinations i<j (resp. i<j<k) in lexicographic order.
struct CochainComplex {
  LieAlgebra algebra;
  std::optional<Matrix> twist;
  Matrix d0;  // C^0 -> C^1
  Matrix d1;  // C^1 -> C^2
  SparseMatrix d2;  // C^2 -> C^3, kept sparse (it is the tall one)
  std::size_t dim(int degree) const;
};

inline constexpr std::size_t kMaxCochainDim = 20;

CochainComplex ce_complex(const LieAlgebra& g, const std::optional<Matrix>& twist = std::nullopt);

/// dim H^degree for degree 0, 1, 2.
std::size_t cohomology_dim(const CochainComplex& c, int degree);

/// delta with d1 delta = theta; NotACocycle if d2 theta != 0; nullopt when
/// theta is not a coboundary.
std::optional<Matrix> solve_coboundary(const CochainComplex& c, const Matrix& theta);

/// Square-zero extension total_ring -> quotient_ring with kernel J.
class SquareZeroExtension {
 public:
  /// Z/p^2 -> F_p, J = pZ/p^2.
  static SquareZeroExtension mod_p_squared(std::int64_t p);
  /// F_p[eps] -> F_p, J = eps F_p.
  static SquareZeroExtension dual_numbers(std::int64_t p);

  const RingSpec& total_ring() const { return total_; }
  const RingSpec& quotient_ring() const { return quotient_; }
  std::int64_t prime() const { return quotient_.prime(); }

  /// J^2 = 0 by ring kind: p*p = 0 in Z/p^2, eps*eps = 0 in F_p[eps].
  bool ideal_squares_to_zero() const;
  Scalar reduce(const Scalar& s) const;
  /// Canonical lift of a residue (least non-negative representative).
  Scalar lift(const Scalar& s) const;
  /// For s in J: the element t of the quotient with s = generator * t.
  Scalar ideal_coordinate(const Scalar& s) const;
  /// generator * lift(t).
  Scalar embed_ideal(const Scalar& t) const;

  Matrix reduce(const Matrix& m) const;
  Matrix lift(const Matrix& m) const;

 private:
  SquareZeroExtension(RingSpec total, RingSpec quotient) : total_(total), quotient_(quotient) {}
  RingSpec total_;
  RingSpec quotient_;
};

struct LiftReport {
  Matrix sigma;          // over the total ring
  Matrix sigma0;         // canonical linear lift
  Matrix theta;          // 2-cochain over the quotient field
  Matrix delta;          // 1-cochain over the quotient field
  bool theta_is_cocycle;
  bool reduces_to_sigma_bar;
  bool preserves_bracket;
};

/// Lift an automorphism of g over the quotient field to the total ring.
LiftReport lift_automorphism(const LieAlgebra& g_integral, const SquareZeroExtension& ext, const Matrix& sigma_bar);

}  // namespace lieform
