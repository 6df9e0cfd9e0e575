#include "lieform/cohomology.hpp"

namespace lieform {

namespace {

std::size_t choose(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct PairIndex {
  std::size_t n;
  std::vector<std::size_t> idx;
  explicit PairIndex(std::size_t n_) : n(n_), idx(n_ * n_, 0) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) idx[i * n + j] = c++;
  }
  std::size_t operator()(std::size_t i, std::size_t j) const { return idx[i * n + j]; }
};

// Module action of each basis element: ad(twist b_i).
std::vector<Matrix> actions(const LieAlgebra& g, const std::optional<Matrix>& twist) {
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < g.dim(); ++i)
    out.push_back(twist ? ad_matrix(g, column_of(*twist, i)) : ad_basis(g, i));
  return out;
}

}  // namespace

std::size_t CochainComplex::dim(int degree) const {
  const std::size_t n = algebra.dim();
  if (degree < 0 || degree > 3) fail(ErrorCode::OutOfRange, "cochain degree must be 0..3");
  return choose(n, static_cast<std::size_t>(degree)) * n;
}

CochainComplex ce_complex(const LieAlgebra& g, const std::optional<Matrix>& twist) {
  const std::size_t n = g.dim();
  const RingSpec& ring = g.ring();
  if (n > kMaxCochainDim)
    fail(ErrorCode::DimensionTooLarge, "cochain complex limited to dim <= " + std::to_string(kMaxCochainDim));
  if (!ring.is_field()) fail(ErrorCode::UnsupportedRing, "cochain complex needs a field-kind ring");
  if (twist && (twist->rows() != n || twist->cols() != n || twist->ring() != ring))
    fail(ErrorCode::DimensionMismatch, "twist must be a dim x dim matrix over the algebra's ring");
  const std::vector<Matrix> act = actions(g, twist);
  const PairIndex pair(n);
  const std::size_t n2 = choose(n, 2), n3 = choose(n, 3);

  Matrix d0(ring, n * n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t o = 0; o < n; ++o)
      for (std::size_t t = 0; t < n; ++t)
        if (!act[i](o, t).is_zero()) d0.set(i * n + o, t, act[i](o, t));

  // d delta (x_i, x_j) = x_i delta(x_j) - x_j delta(x_i) - delta([x_i, x_j])
  Matrix d1(ring, n2 * n, n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t row = pair(i, j) * n;
      for (std::size_t o = 0; o < n; ++o)
        for (std::size_t t = 0; t < n; ++t) {
          if (!act[i](o, t).is_zero()) d1.add_to(row + o, j * n + t, act[i](o, t));
          if (!act[j](o, t).is_zero()) d1.add_to(row + o, i * n + t, -act[j](o, t));
        }
      for (const auto& term : g.bracket(i, j))
        for (std::size_t o = 0; o < n; ++o) d1.add_to(row + o, term.index * n + o, -term.coeff);
    }

  // d theta (x,y,z) = x theta(y,z) - y theta(x,z) + z theta(x,y)
  //                   - theta([x,y],z) + theta([x,z],y) - theta([y,z],x)
  SparseMatrix d2(ring, n3 * n, n2 * n);
  // theta(b_a, b_b) as (column block, sign); a == b gives nothing.
  auto slot = [&](std::size_t a, std::size_t b, std::size_t& block) -> int {
    if (a == b) return 0;
    if (a < b) {
      block = pair(a, b);
      return 1;
    }
    block = pair(b, a);
    return -1;
  };
  std::size_t triple = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k, ++triple) {
        const std::size_t row = triple * n;
        const std::size_t pjk = pair(j, k), pik = pair(i, k), pij = pair(i, j);
        for (std::size_t o = 0; o < n; ++o)
          for (std::size_t t = 0; t < n; ++t) {
            if (!act[i](o, t).is_zero()) d2.add_to(row + o, pjk * n + t, act[i](o, t));
            if (!act[j](o, t).is_zero()) d2.add_to(row + o, pik * n + t, -act[j](o, t));
            if (!act[k](o, t).is_zero()) d2.add_to(row + o, pij * n + t, act[k](o, t));
          }
        auto bracket_term = [&](std::size_t a, std::size_t b, std::size_t other, int sign) {
          for (const auto& term : g.bracket(a, b)) {
            std::size_t block = 0;
            const int s = slot(term.index, other, block);
            if (s == 0) continue;
            const Scalar c = (sign * s > 0) ? term.coeff : -term.coeff;
            for (std::size_t o = 0; o < n; ++o) d2.add_to(row + o, block * n + o, c);
          }
        };
        bracket_term(i, j, k, -1);
        bracket_term(i, k, j, 1);
        bracket_term(j, k, i, -1);
      }
  return {g, twist, std::move(d0), std::move(d1), std::move(d2)};
}

std::size_t cohomology_dim(const CochainComplex& c, int degree) {
  const std::size_t n = c.algebra.dim();
  switch (degree) {
    case 0: return n - rank(c.d0);
    case 1: return (n * n - rank(c.d1)) - rank(c.d0);
    case 2: return (c.d1.rows() - c.d2.rank()) - rank(c.d1);
    default: fail(ErrorCode::OutOfRange, "cohomology_dim supports degrees 0, 1, 2");
  }
}

std::optional<Matrix> solve_coboundary(const CochainComplex& c, const Matrix& theta) {
  if (theta.rows() != c.d1.rows() || theta.cols() != 1)
    fail(ErrorCode::DimensionMismatch, "theta must be a 2-cochain column");
  if (!(c.d2 * theta).is_zero()) fail(ErrorCode::NotACocycle, "theta is not a 2-cocycle");
  return solve_linear(c.d1, theta);
}

// ---------------------------------------------------------------------------

SquareZeroExtension SquareZeroExtension::mod_p_squared(std::int64_t p) {
  return {RingSpec::integers_mod_pk(p, 2), RingSpec::prime_field(p)};
}

SquareZeroExtension SquareZeroExtension::dual_numbers(std::int64_t p) {
  const RingSpec fp = RingSpec::prime_field(p);
  return {RingSpec::dual_numbers(fp), fp};
}

bool SquareZeroExtension::ideal_squares_to_zero() const {
  if (total_.kind() == RingKind::IntegersModPk) {
    const Scalar g(total_, static_cast<long long>(prime()));
    return (g * g).is_zero();
  }
  const Scalar eps = Scalar::dual(total_, Scalar(quotient_), Scalar(quotient_, 1LL));
  return (eps * eps).is_zero();
}

Scalar SquareZeroExtension::reduce(const Scalar& s) const { return map_scalar(s, quotient_); }

Scalar SquareZeroExtension::lift(const Scalar& s) const {
  if (total_.kind() == RingKind::IntegersModPk) return Scalar(total_, static_cast<long long>(s.residue()));
  return Scalar::dual(total_, s, Scalar(quotient_));
}

Scalar SquareZeroExtension::ideal_coordinate(const Scalar& s) const {
  if (!reduce(s).is_zero()) fail(ErrorCode::OutOfRange, "element is not in the ideal J");
  if (total_.kind() == RingKind::IntegersModPk) return Scalar(quotient_, static_cast<long long>(s.residue() / prime()));
  return s.eps_part();
}

Scalar SquareZeroExtension::embed_ideal(const Scalar& t) const {
  if (total_.kind() == RingKind::IntegersModPk) return Scalar(total_, static_cast<long long>(t.residue() * prime()));
  return Scalar::dual(total_, Scalar(quotient_), t);
}

Matrix SquareZeroExtension::reduce(const Matrix& m) const { return m.base_change(quotient_); }

Matrix SquareZeroExtension::lift(const Matrix& m) const {
  Matrix out(total_, m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) out.set(i, j, lift(m(i, j)));
  return out;
}

LiftReport lift_automorphism(const LieAlgebra& g_integral, const SquareZeroExtension& ext, const Matrix& sigma_bar) {
  if (g_integral.ring() != RingSpec::integers()) fail(ErrorCode::RingMismatch, "lift_automorphism takes g over Integers");
  if (!ext.ideal_squares_to_zero()) fail(ErrorCode::InvalidRing, "extension ideal does not square to zero");
  const RingSpec& k = ext.quotient_ring();
  const LieAlgebra gk = base_change(g_integral, k);
  const LieAlgebra gb = base_change(g_integral, ext.total_ring());
  const std::size_t n = gk.dim();
  if (sigma_bar.ring() != k || sigma_bar.rows() != n || sigma_bar.cols() != n)
    fail(ErrorCode::DimensionMismatch, "sigma_bar must be a dim x dim matrix over " + k.to_string());
  if (!is_automorphism(gk, sigma_bar)) fail(ErrorCode::NotAutomorphism, "sigma_bar is not a Lie algebra automorphism");
  if (!is_perfect(killing_form(gk))) fail(ErrorCode::NotPerfect, "Killing form is not perfect over " + k.to_string());

  const Matrix sigma0 = ext.lift(sigma_bar);
  // theta(x,y) = [sigma0 x, sigma0 y] - sigma0 [x,y] lies in J g.
  const PairIndex pair(n);
  Matrix theta(k, choose(n, 2) * n, 1);
  std::vector<Vec> cols;
  for (std::size_t i = 0; i < n; ++i) cols.push_back(column_of(sigma0, i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Vec v = gb.bracket(cols[i], cols[j]);
      for (const auto& t : gb.bracket(i, j))
        for (std::size_t m = 0; m < n; ++m) v[m] -= t.coeff * cols[t.index][m];
      for (std::size_t m = 0; m < n; ++m) {
        const Scalar c = ext.ideal_coordinate(v[m]);
        if (!c.is_zero()) theta.set(pair(i, j) * n + m, 0, c);
      }
    }

  const CochainComplex cx = ce_complex(gk, sigma_bar);
  LiftReport rep{sigma0, sigma0, theta, Matrix(k, n * n, 1), false, false, false};
  rep.theta_is_cocycle = (cx.d2 * theta).is_zero();
  if (!rep.theta_is_cocycle) fail(ErrorCode::NotACocycle, "obstruction theta is not a cocycle");
  auto delta = solve_linear(cx.d1, theta);
  if (!delta) fail(ErrorCode::NotACocycle, "theta is not a coboundary; H^2 of the twisted module is nonzero");
  rep.delta = *delta;
  // sigma = sigma0 - delta, with delta(x_k) the k-th block of the 1-cochain.
  Matrix sigma = sigma0;
  for (std::size_t kk = 0; kk < n; ++kk)
    for (std::size_t m = 0; m < n; ++m) {
      const Scalar& d = (*delta)(kk * n + m, 0);
      if (!d.is_zero()) sigma.add_to(m, kk, -ext.embed_ideal(d));
    }
  rep.sigma = sigma;
  rep.reduces_to_sigma_bar = ext.reduce(sigma) == sigma_bar;
  rep.preserves_bracket = preserves_bracket(gb, sigma);
  return rep;
}

}  // namespace lieform
