#include "lieform/lattice.hpp"

namespace lieform {

namespace {

// Scale a rational column to a primitive integer vector (first nonzero > 0).
std::vector<mpz_class> primitive_integer(const Matrix& c, std::size_t col) {
  mpz_class den = 1;
  for (std::size_t i = 0; i < c.rows(); ++i)
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c(i, col).rational().get_den_mpz_t());
  std::vector<mpz_class> v(c.rows());
  mpz_class g = 0;
  for (std::size_t i = 0; i < c.rows(); ++i) {
    mpq_class x = c(i, col).rational() * den;
    v[i] = x.get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v[i].get_mpz_t());
  }
  if (g == 0) return v;
  for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  for (const auto& x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : v) y = -y;
    break;
  }
  return v;
}

}  // namespace

bool is_p_integral(const Matrix& m, std::int64_t p) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (mpz_divisible_ui_p(m(i, j).rational().get_den_mpz_t(), static_cast<unsigned long>(p))) return false;
  return true;
}

Matrix independent_columns(const Matrix& m) {
  const EchelonForm ef = echelon_form(m);
  Matrix out(m.ring(), m.rows(), ef.pivot_columns.size());
  for (std::size_t k = 0; k < ef.pivot_columns.size(); ++k)
    for (std::size_t i = 0; i < m.rows(); ++i) out.set(i, k, m(i, ef.pivot_columns[k]));
  return out;
}

Matrix lattice_coordinates(const Matrix& basis, const Matrix& vectors) {
  auto c = solve_linear(basis, vectors);
  if (!c) fail(ErrorCode::NotASubspace, "vectors are not in the span of the lattice basis");
  return *c;
}

Matrix saturate(const Matrix& lattice_basis, const Matrix& subspace_basis, std::int64_t p) {
  const RingSpec q = RingSpec::rationals();
  if (lattice_basis.ring() != q || subspace_basis.ring() != q)
    fail(ErrorCode::RingMismatch, "saturate works on rational bases");
  if (!is_prime(p)) fail(ErrorCode::InvalidRing, "saturate: p must be prime");
  if (rank(lattice_basis) != lattice_basis.cols())
    fail(ErrorCode::DimensionMismatch, "lattice basis columns are dependent");
  const Matrix sub = independent_columns(subspace_basis);
  const Matrix coords = lattice_coordinates(lattice_basis, sub);
  const std::size_t r = coords.rows();
  const std::size_t s = coords.cols();
  if (s == 0) return Matrix(q, lattice_basis.rows(), 0);

  std::vector<std::vector<mpz_class>> b(s);
  for (std::size_t k = 0; k < s; ++k) b[k] = primitive_integer(coords, k);

  const RingSpec fp = RingSpec::prime_field(p);
  const mpz_class pz(static_cast<long>(p));
  for (;;) {
    Matrix red(fp, r, s);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t k = 0; k < s; ++k) red.set(i, k, Scalar(fp, b[k][i]));
    const Matrix ker = kernel_basis(red);
    if (ker.cols() == 0) break;
    // B·a ≡ 0 mod p, so B·a/p is integral and joins the lattice.
    std::size_t replace = s;
    std::vector<mpz_class> w(r, 0);
    for (std::size_t k = 0; k < s; ++k) {
      const std::int64_t a = ker(k, 0).residue();
      if (a == 0) continue;
      if (replace == s && a == 1) replace = k;
      for (std::size_t i = 0; i < r; ++i) w[i] += b[k][i] * a;
    }
    for (auto& x : w) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), pz.get_mpz_t());
    b[replace] = std::move(w);
  }

  Matrix prim(q, r, s);
  for (std::size_t k = 0; k < s; ++k) {
    Matrix col(q, r, 1);
    for (std::size_t i = 0; i < r; ++i) col.set(i, 0, Scalar(q, b[k][i]));
    auto v = primitive_integer(col, 0);
    for (std::size_t i = 0; i < r; ++i) prim.set(i, k, Scalar(q, v[i]));
  }
  return lattice_basis * prim;
}

}  // namespace lieform
