#include <doctest.h>

#include "lieform/lattice.hpp"
#include "lieform/matrix.hpp"
#include "oracles.hpp"

using namespace lieform;
using oracle::Rng;

namespace {

const RingSpec Q = RingSpec::rationals();
const RingSpec Z = RingSpec::integers();

Scalar q(const char* s) { return Scalar::from_rational(Q, mpq_class(s)); }

Matrix random_int_matrix(Rng& rng, const RingSpec& ring, std::size_t r, std::size_t c, std::int64_t bound) {
  std::vector<long long> v(r * c);
  for (auto& x : v) x = rng.uniform(-bound, bound);
  return Matrix::from_ints(ring, r, c, v);
}

oracle::QMat to_qmat(const Matrix& m) {
  oracle::QMat out(m.rows(), std::vector<mpq_class>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).rational();
  return out;
}

}  // namespace

TEST_CASE("scalar arithmetic in canonical form") {
  CHECK(q("1/2") * q("2/3") == q("1/3"));
  CHECK((q("1/2") * q("2/3")).to_string() == "1/3");
  CHECK(q("-6/4").to_string() == "-3/2");
  const RingSpec f5 = RingSpec::prime_field(5);
  CHECK((Scalar(f5, 3) + Scalar(f5, 4)).residue() == 2);
  CHECK(Scalar(f5, -1).residue() == 4);
  const RingSpec z2 = RingSpec::localized_at(2);
  CHECK((Scalar::from_rational(z2, mpq_class(1, 3)) * Scalar(z2, 3)).is_one());
  CHECK_THROWS_AS(Scalar(f5, 1) + Scalar(RingSpec::prime_field(7), 1), Error);
}

TEST_CASE("ring construction guards") {
  CHECK_THROWS_AS(RingSpec::prime_field(4), Error);
  CHECK_THROWS_AS(RingSpec::integers_mod_pk(6, 2), Error);
  CHECK_THROWS_AS(RingSpec::localized_at(1), Error);
  CHECK_THROWS_AS(RingSpec::dual_numbers(RingSpec::integers()), Error);
  CHECK_THROWS_AS(Scalar::from_rational(RingSpec::localized_at(3), mpq_class(1, 3)), Error);
  CHECK_THROWS_AS(Scalar::from_rational(RingSpec::prime_field(3), mpq_class(1, 6)), Error);
  CHECK(Scalar::from_rational(RingSpec::prime_field(5), mpq_class(1, 2)).residue() == 3);
}

TEST_CASE("is_unit per ring kind") {
  CHECK_FALSE(Scalar::from_rational(RingSpec::localized_at(3), mpq_class(6, 5)).is_unit());
  CHECK(Scalar::from_rational(RingSpec::localized_at(3), mpq_class(5, 7)).is_unit());
  CHECK_FALSE(Scalar(RingSpec::integers_mod_pk(5, 2), 5).is_unit());
  CHECK(Scalar(RingSpec::integers_mod_pk(5, 2), 7).is_unit());
  CHECK(Scalar(Z, -1).is_unit());
  CHECK_FALSE(Scalar(Z, 2).is_unit());
  CHECK_FALSE(Scalar(Q, 0).is_unit());
  const RingSpec d = RingSpec::dual_numbers(RingSpec::prime_field(3));
  const RingSpec f3 = RingSpec::prime_field(3);
  CHECK(Scalar::dual(d, Scalar(f3, 1), Scalar(f3, 2)).is_unit());
  CHECK_FALSE(Scalar::dual(d, Scalar(f3, 0), Scalar(f3, 1)).is_unit());
}

TEST_CASE("unit inverse round trip over every ring (seeded)") {
  Rng rng(11);
  const std::vector<RingSpec> rings = {Q,
                                       Z,
                                       RingSpec::prime_field(7),
                                       RingSpec::integers_mod_pk(3, 3),
                                       RingSpec::localized_at(5),
                                       RingSpec::dual_numbers(RingSpec::prime_field(5)),
                                       RingSpec::dual_numbers(Q)};
  for (const auto& ring : rings) {
    for (int trial = 0; trial < 200; ++trial) {
      Scalar a(ring);
      if (ring.kind() == RingKind::DualNumbers) {
        const RingSpec b = ring.base();
        a = Scalar::dual(ring, Scalar(b, rng.uniform(-9, 9)), Scalar(b, rng.uniform(-9, 9)));
      } else if (ring.kind() == RingKind::Rationals || ring.kind() == RingKind::LocalizedAtP) {
        std::int64_t den = rng.uniform(1, 12);
        if (ring.kind() == RingKind::LocalizedAtP && den % 5 == 0) den += 1;
        a = Scalar::from_rational(ring, mpq_class(rng.uniform(-20, 20), den));
      } else {
        a = Scalar(ring, rng.uniform(-30, 30));
      }
      if (a.is_unit()) {
        CHECK((a * a.inverse()).is_one());
      } else {
        CHECK_THROWS_AS(a.inverse(), Error);
      }
    }
  }
}

TEST_CASE("rank examples") {
  CHECK(rank(Matrix::identity(RingSpec::prime_field(7), 3)) == 3);
  CHECK(rank(Matrix(Q, 2, 5)) == 0);
  CHECK_THROWS_AS(rank(Matrix::identity(Z, 2)), Error);
  // Killing Gram of sl2 {K(h,h)=8, K(x,y)=4}; every entry even.
  const Matrix gram = Matrix::from_rows(RingSpec::prime_field(2), {{8, 0, 0}, {0, 0, 4}, {0, 4, 0}});
  CHECK(rank(gram) == 0);
  CHECK(rank(gram.base_change(RingSpec::prime_field(2))) == 0);
}

TEST_CASE("rank over F_p agrees with brute-force span counting (seeded)") {
  Rng rng(7);
  for (std::int64_t p : {2, 3, 5}) {
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t r = static_cast<std::size_t>(rng.uniform(1, 4));
      const std::size_t c = static_cast<std::size_t>(rng.uniform(1, 4));
      std::vector<std::vector<std::int64_t>> rows(r, std::vector<std::int64_t>(c));
      std::vector<long long> flat;
      for (auto& row : rows)
        for (auto& x : row) {
          x = rng.uniform(0, p - 1);
          flat.push_back(x);
        }
      const Matrix m = Matrix::from_ints(RingSpec::prime_field(p), r, c, flat);
      CHECK(rank(m) == oracle::rank_mod_p_bruteforce(rows, p));
    }
  }
}

TEST_CASE("rank over Q bounds every mod-p rank (seeded)") {
  Rng rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const Matrix m = random_int_matrix(rng, Z, 4, 5, 3);
    const std::size_t rq = rank(m.base_change(Q));
    for (std::int64_t p : {2, 3, 5, 7}) CHECK(rank(m.base_change(RingSpec::prime_field(p))) <= rq);
    CHECK(rank(m.base_change(Q).transpose()) == rq);
  }
}

TEST_CASE("determinant matches Leibniz expansion across rings (seeded)") {
  Rng rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 5));
    const Matrix m = random_int_matrix(rng, Z, n, n, 4);
    const mpq_class expect = oracle::det_leibniz(to_qmat(m));
    CHECK(determinant(m).rational() == expect);
    CHECK(determinant(m.base_change(Q)).rational() == expect);
    CHECK(determinant(m.base_change(RingSpec::localized_at(3))).rational() == expect);
    for (std::int64_t p : {2, 3, 7}) {
      const mpz_class r = ((expect.get_num() % p) + p) % p;
      CHECK(determinant(m.base_change(RingSpec::prime_field(p))).residue() == r.get_si());
    }
    const mpz_class r9 = ((expect.get_num() % 9) + 9) % 9;
    CHECK(determinant(m.base_change(RingSpec::integers_mod_pk(3, 2))).residue() == r9.get_si());
  }
}

TEST_CASE("determinant over Q with fractions") {
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 4));
    std::vector<mpq_class> v(n * n);
    for (auto& x : v) {
      x = mpq_class(rng.uniform(-5, 5), rng.uniform(1, 4));
      x.canonicalize();
    }
    const Matrix m = Matrix::from_rationals(Q, n, n, v);
    CHECK(determinant(m).rational() == oracle::det_leibniz(to_qmat(m)));
  }
}

TEST_CASE("inverse over local and finite rings (seeded)") {
  Rng rng(23);
  const std::vector<RingSpec> rings = {Q, RingSpec::prime_field(5), RingSpec::integers_mod_pk(5, 2),
                                       RingSpec::localized_at(3), Z,
                                       RingSpec::dual_numbers(RingSpec::prime_field(3))};
  for (const auto& ring : rings) {
    int inverted = 0;
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 4));
      Matrix m = random_int_matrix(rng, Z, n, n, 3).base_change(ring.kind() == RingKind::DualNumbers ? ring.base() : ring);
      if (ring.kind() == RingKind::DualNumbers) {
        Matrix d(ring, n, n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            d.set(i, j, Scalar::dual(ring, m(i, j), Scalar(ring.base(), rng.uniform(0, 2))));
        m = d;
      }
      if (determinant(m).is_unit()) {
        const Matrix inv = inverse(m);
        CHECK(inv * m == Matrix::identity(ring, n));
        CHECK(m * inv == Matrix::identity(ring, n));
        ++inverted;
      } else {
        CHECK_THROWS_AS(inverse(m), Error);
      }
    }
    CHECK(inverted > 0);
  }
}

TEST_CASE("kernel basis and solve_linear") {
  const RingSpec f5 = RingSpec::prime_field(5);
  const auto x = solve_linear(Matrix::from_rows(f5, {{2}}), Matrix::from_rows(f5, {{1}}));
  REQUIRE(x);
  CHECK((*x)(0, 0).residue() == 3);
  CHECK_FALSE(solve_linear(Matrix::from_rows(f5, {{0}}), Matrix::from_rows(f5, {{1}})));
  CHECK_THROWS_AS(solve_linear(Matrix::identity(f5, 2), Matrix::from_rows(f5, {{1}})), Error);

  Rng rng(29);
  for (int trial = 0; trial < 60; ++trial) {
    const RingSpec ring = trial % 2 ? Q : RingSpec::prime_field(3);
    const Matrix m = random_int_matrix(rng, Z, 3, 5, 2).base_change(ring);
    const Matrix k = kernel_basis(m);
    CHECK(k.cols() == 5 - rank(m));
    CHECK((m * k).is_zero());
    CHECK(rank(k.transpose()) == k.cols());
    // rhs in the image is always solvable
    const Matrix rhs = m * random_int_matrix(rng, Z, 5, 1, 3).base_change(ring);
    const auto sol = solve_linear(m, rhs);
    REQUIRE(sol);
    CHECK(m * *sol == rhs);
  }
}

TEST_CASE("echelon pivots are the first nonzero columns") {
  const Matrix m = Matrix::from_rows(Q, {{0, 2, 4, 1}, {0, 1, 2, 3}});
  const EchelonForm e = echelon_form(m);
  CHECK(e.pivot_columns == std::vector<std::size_t>{1, 3});
  CHECK(e.reduced == Matrix::from_rows(Q, {{0, 1, 2, 0}, {0, 0, 0, 1}}));
}

TEST_CASE("row reducer and sparse matrix agree with dense elimination (seeded)") {
  Rng rng(31);
  for (const RingSpec& ring : {Q, RingSpec::prime_field(7)}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix m = random_int_matrix(rng, Z, 12, 6, 1).base_change(ring);
      RowReducer rr(ring, 6);
      SparseMatrix s(ring, 12, 6);
      for (std::size_t i = 0; i < m.rows(); ++i) {
        std::vector<std::pair<std::size_t, Scalar>> row;
        for (std::size_t j = 0; j < m.cols(); ++j)
          if (!m(i, j).is_zero()) {
            row.emplace_back(j, m(i, j));
            s.add_to(i, j, m(i, j));
          }
        rr.add_row(row);
      }
      CHECK(rr.rank() == rank(m));
      CHECK(s.rank() == rank(m));
      CHECK(s.to_dense() == m);
      const Matrix k = rr.kernel();
      CHECK(k.cols() == 6 - rank(m));
      CHECK((m * k).is_zero());
      const Matrix v = random_int_matrix(rng, Z, 6, 2, 3).base_change(ring);
      CHECK(s * v == m * v);
    }
  }
}

TEST_CASE("saturate examples") {
  const RingSpec qq = Q;
  const Matrix std3 = Matrix::identity(qq, 3);
  CHECK(saturate(std3, Matrix::from_rows(qq, {{1}, {0}, {0}}), 2) == Matrix::from_rows(qq, {{1}, {0}, {0}}));
  // lattice {e1, (e1+e2)/3}, p = 5, subspace span(e1+e2)
  const Matrix lat = Matrix::from_rationals(qq, 2, 2, {1, mpq_class(1, 3), 0, mpq_class(1, 3)});
  const Matrix sub = Matrix::from_rows(qq, {{1}, {1}});
  const Matrix s = saturate(lat, sub, 5);
  CHECK(s == Matrix::from_rationals(qq, 2, 1, {mpq_class(1, 3), mpq_class(1, 3)}));
  CHECK_THROWS_AS(saturate(Matrix::from_rows(qq, {{1}, {0}}), Matrix::from_rows(qq, {{0}, {1}}), 3), Error);
}

TEST_CASE("saturate against brute-force lattice enumeration (seeded)") {
  Rng rng(37);
  for (std::int64_t p : {2, 3, 5}) {
    for (int trial = 0; trial < 15; ++trial) {
      // Random full-rank lattice in Q^3 with small denominators.
      Matrix lat(Q, 3, 3);
      do {
        std::vector<mpq_class> v(9);
        for (auto& x : v) {
          x = mpq_class(rng.uniform(-3, 3), rng.uniform(1, 2) * (rng.uniform(0, 1) ? p : 1));
          x.canonicalize();
        }
        lat = Matrix::from_rationals(Q, 3, 3, v);
      } while (rank(lat) < 3);
      // Subspace spanned by one or two small lattice vectors, rescaled.
      const std::size_t k = static_cast<std::size_t>(rng.uniform(1, 2));
      Matrix sub(Q, 3, 0);
      do {
        sub = (lat * random_int_matrix(rng, Z, 3, k, 3).base_change(Q)).scaled(Scalar(Q, rng.uniform(1, 7)));
      } while (rank(sub) < k);
      const Matrix s = saturate(lat, sub, p);
      REQUIRE(s.cols() == k);
      // S lies in the lattice (p-integral coordinates) and in the subspace.
      CHECK(is_p_integral(lattice_coordinates(lat, s), p));
      CHECK(rank(sub.hstack(s)) == k);
      // Every small lattice vector inside the subspace is a Z_(p)-combination of S.
      int hits = 0;
      for (int a = -4; a <= 4; ++a)
        for (int b = -4; b <= 4; ++b)
          for (int c = -4; c <= 4; ++c) {
            const Matrix coeff = Matrix::from_ints(Q, 3, 1, {a, b, c});
            const Matrix v = lat * coeff;
            if (v.is_zero() || rank(sub.hstack(v)) != k) continue;
            ++hits;
            CHECK(is_p_integral(lattice_coordinates(s, v), p));
          }
      CHECK(hits > 0);
    }
  }
}
