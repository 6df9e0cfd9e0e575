#include <doctest.h>

#include "lieform/chevalley.hpp"
#include "lieform/lattice.hpp"
#include "lieform/lie_algebra.hpp"
#include "lieform/sl2_modules.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace lieform;

namespace {

const RingSpec Q = RingSpec::rationals();

Matrix pow(const Matrix& m, int k) {
  Matrix r = Matrix::identity(m.ring(), m.rows());
  for (int i = 0; i < k; ++i) r = r * m;
  return r;
}

// Coordinates of every M_i in the lattice basis, side by side.
Matrix assembled_coordinates(const WeightedModule& m, const DecompositionResult& r) {
  Matrix all(Q, m.rank(), 0);
  for (const auto& pc : r.pieces) all = all.hstack(lattice_coordinates(m.lattice, pc));
  return all;
}

void check_success_postconditions(const WeightedModule& m, const DecompositionResult& r) {
  REQUIRE(r.success);
  const RingSpec zp = m.ring();
  const std::size_t n = m.rank();
  REQUIRE(r.projectors.size() == r.weights.size());
  Matrix sum(zp, n, n);
  for (std::size_t a = 0; a < r.projectors.size(); ++a) {
    const Matrix& pa = r.projectors[a];
    sum += pa;
    CHECK(pa * pa == pa);
    for (std::size_t b = 0; b < r.projectors.size(); ++b)
      if (a != b) CHECK((pa * r.projectors[b]).is_zero());
    // image(pi_a) = span(M_a), compared over Q and with ranks over F_p
    const Matrix coords = lattice_coordinates(m.lattice, r.pieces[a]).base_change(zp);
    CHECK(rank(pa.base_change(Q)) == r.pieces[a].cols());
    CHECK(rank(pa.base_change(Q).hstack(coords.base_change(Q))) == r.pieces[a].cols());
    CHECK(pa * coords == coords);
    // pieces are the saturations M cap M_{iQ}
    CHECK(r.pieces[a] == saturate(m.lattice, m.pieces[a], m.p));
    if (m.action) {
      CHECK(m.action->h * pa == pa * m.action->h);
      CHECK(m.action->h * coords == coords.scaled(Scalar(zp, static_cast<long long>(r.weights[a]))));
    }
  }
  CHECK(sum == Matrix::identity(zp, n));
  // sum of the M_i is all of M: assembled coordinates invertible over Z_(p)
  CHECK(determinant(assembled_coordinates(m, r).base_change(zp)).is_unit());
}

}  // namespace

TEST_CASE("chain modules") {
  const WeightedModule c13 = chain_from_highest(1, 3);
  CHECK(c13.rank() == 2);
  CHECK(c13.weights == std::vector<std::int64_t>{1, -1});
  const WeightedModule c23 = chain_from_highest(2, 3);
  CHECK(c23.weights == std::vector<std::int64_t>{2, 0, -2});
  REQUIRE(c23.action);
  CHECK(c23.action->x(0, 1).rational() == 2);
  CHECK(error_of([] { chain_from_highest(0, 3); }) == ErrorCode::OutOfRange);
  CHECK(error_of([] { chain_from_highest(3, 3); }) == ErrorCode::OutOfRange);
}

TEST_CASE("chain formulas for every (j, p)") {
  for (std::int64_t p : {2, 3, 5, 7}) {
    for (std::int64_t j = 1; j <= p - 1; ++j) {
      CAPTURE(p);
      CAPTURE(j);
      const WeightedModule m = chain_from_highest(j, p);
      REQUIRE(m.action);
      const auto& [h, x, y] = *m.action;
      const RingSpec zp = m.ring();
      const std::size_t n = static_cast<std::size_t>(j + 1);
      CHECK(m.lattice == Matrix::identity(Q, n));
      CHECK(commutator(h, x) == x.scaled(Scalar(zp, 2)));
      CHECK(commutator(h, y) == y.scaled(Scalar(zp, -2)));
      CHECK(commutator(x, y) == h);
      for (std::size_t i = 0; i < n; ++i) {
        const long long li = static_cast<long long>(i);
        for (std::size_t r = 0; r < n; ++r) {
          CHECK(h(r, i) == (r == i ? Scalar(zp, j - 2 * li) : Scalar(zp)));
          CHECK(x(r, i) == (i >= 1 && r == i - 1 ? Scalar(zp, j - li + 1) : Scalar(zp)));
        }
        // x^i y^i z_0 = c z_0 with c a unit of Z_(p)
        const Matrix v = pow(x, static_cast<int>(i)) * pow(y, static_cast<int>(i)) * Matrix::identity(zp, n).column(0);
        CHECK(v(0, 0).is_unit());
        for (std::size_t r = 1; r < n; ++r) CHECK(v(r, 0).is_zero());
      }
    }
  }
  const WeightedModule m = chain_from_highest(4, 5);
  const Matrix v = pow(m.action->x, 4) * pow(m.action->y, 4);
  CHECK(v(0, 0).is_unit());
}

TEST_CASE("extend_torus on chain modules") {
  const WeightedModule m = chain_from_highest(2, 3);
  const DecompositionResult r = extend_torus(m);
  CHECK(r.path == "lagrange");
  CHECK(r.pieces.size() == 3);
  for (const auto& pc : r.pieces) CHECK(pc.cols() == 1);
  check_success_postconditions(m, r);
  for (std::int64_t p : {2, 3, 5, 7})
    for (std::int64_t j = 1; j <= p - 1; ++j) {
      CAPTURE(p);
      CAPTURE(j);
      const WeightedModule c = chain_from_highest(j, p);
      check_success_postconditions(c, extend_torus(c));
    }
}

TEST_CASE("a 0/1 grading without action") {
  for (std::int64_t p : {2, 3, 5}) {
    const WeightedModule m{p,
                           Matrix::identity(Q, 2),
                           {0, 1},
                           {Matrix::from_rows(Q, {{1}, {0}}), Matrix::from_rows(Q, {{0}, {1}})},
                           std::nullopt,
                           {"e0", "e1"}};
    const DecompositionResult r = extend_torus(m);
    REQUIRE(r.success);
    const RingSpec zp = m.ring();
    const Matrix h = Matrix::from_rows(zp, {{0, 0}, {0, 1}});
    CHECK(r.projectors[0] == Matrix::identity(zp, 2) - h);
    CHECK(r.projectors[1] == h);
    check_success_postconditions(m, r);
  }
}

TEST_CASE("saturation path on a p-type 2 module") {
  // weights {2, 0, -2} mod 2 all collide: type 2 needs p >= 3, so use p = 3 and
  // the weight pair {1, -2} in a module with a trivial action.
  const WeightedModule pair{3,
                            Matrix::identity(Q, 2),
                            {1, -2},
                            {Matrix::from_rows(Q, {{1}, {0}}), Matrix::from_rows(Q, {{0}, {1}})},
                            std::nullopt,
                            {}};
  CHECK(error_of([&] { extend_torus(pair); }) == ErrorCode::ActionMissing);
  // chain(1) + chain(2) at p = 3: weights {1,-1,2,0,-2} collide mod 3 but lie in [-2, 2]
  const WeightedModule sum = direct_sum({chain_from_highest(1, 3), chain_from_highest(2, 3)});
  const PTypeReport pt = classify_p_type(std::set<std::int64_t>(sum.weights.begin(), sum.weights.end()), 3);
  CHECK((!pt.is_type1 && pt.is_type2));
  const std::size_t n = sum.rank();
  Matrix change = Matrix::identity(sum.ring(), n);
  for (std::size_t c = 1; c < n; ++c) change.set(0, c, Scalar(sum.ring(), 1));
  const WeightedModule rebased = change_lattice_basis(sum, change);
  const DecompositionResult r = extend_torus(rebased, ExtendOptions{true});
  CHECK(r.path == "saturation");
  check_success_postconditions(rebased, r);
}

TEST_CASE("random direct sums of chains with p-type 1 weights (seeded)") {
  oracle::Rng rng(73);
  int done = 0;
  while (done < 50) {
    const std::int64_t p = std::vector<std::int64_t>{5, 7, 11}[static_cast<std::size_t>(rng.uniform(0, 2))];
    std::vector<WeightedModule> parts;
    const int k = static_cast<int>(rng.uniform(1, 3));
    for (int i = 0; i < k; ++i) parts.push_back(chain_from_highest(rng.uniform(1, p - 1), p));
    const WeightedModule sum = direct_sum(parts);
    const std::set<std::int64_t> ws(sum.weights.begin(), sum.weights.end());
    if (!classify_p_type(ws, p).is_type1) continue;
    // random unimodular change of lattice basis over Z_(p)
    const std::size_t n = sum.rank();
    Matrix change = Matrix::identity(sum.ring(), n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = r + 1; c < n; ++c) change.set(r, c, Scalar(sum.ring(), rng.uniform(-2, 2)));
    const WeightedModule m = change_lattice_basis(sum, change);
    CAPTURE(done);
    check_success_postconditions(m, extend_torus(m));
    ++done;
  }
}

TEST_CASE("the counterexample module") {
  for (std::int64_t p : {2, 3, 5}) {
    CAPTURE(p);
    const WeightedModule m = counterexample_module(p);
    CHECK(m.rank() == static_cast<std::size_t>(p + 1));
    REQUIRE(m.action);
    m.validate();
    // closed under h, x, y: action matrices have Z_(p) entries in lattice coordinates
    const auto& [h, x, y] = *m.action;
    CHECK(commutator(x, y) == h);
    const PTypeReport pt = classify_p_type(std::set<std::int64_t>(m.weights.begin(), m.weights.end()), p);
    CHECK((!pt.is_type1 && !pt.is_type2 && !pt.is_type3));
    CHECK(error_of([&] { extend_torus(m, ExtendOptions{true}); }) == ErrorCode::HypothesisNotMet);
    const DecompositionResult r = extend_torus(m);
    CHECK_FALSE(r.success);
    REQUIRE(r.failure_witness);
    const Matrix& w = r.failure_witness->vector;
    CHECK_FALSE(w.is_zero());
    // w is in M ...
    CHECK(is_p_integral(lattice_coordinates(m.lattice, w), p));
    // ... but not a Z_(p)-combination of the M_i
    Matrix pieces(Q, m.rank(), 0);
    for (const auto& pc : r.pieces) pieces = pieces.hstack(pc);
    CHECK_FALSE(is_p_integral(lattice_coordinates(pieces, w), p));
    const std::string top = std::to_string(p);
    CHECK(r.failure_witness->text == "(a" + top + "+a-" + top + ")/" + top);
  }
  const WeightedModule m2 = counterexample_module(2);
  // h (a2 + a-2)/2 = a2 - a-2 lies in M_1
  const Matrix v = Matrix::from_rationals(Q, 3, 1, {mpq_class(1, 2), 0, mpq_class(1, 2)});
  const Matrix hv = m2.lattice * m2.action->h.base_change(Q) * lattice_coordinates(m2.lattice, v);
  CHECK(hv == Matrix::from_rows(Q, {{1}, {0}, {-1}}));
}

TEST_CASE("module validation") {
  WeightedModule m = chain_from_highest(2, 3);
  m.pieces.pop_back();
  m.weights.pop_back();
  CHECK(error_of([&] { m.validate(); }) == ErrorCode::InvalidModule);
  WeightedModule bad_h = chain_from_highest(1, 5);
  bad_h.action->h = bad_h.action->h.scaled(Scalar(bad_h.ring(), 2));
  CHECK(error_of([&] { bad_h.validate(); }) == ErrorCode::InvalidModule);
}

TEST_CASE("truncated exponential examples") {
  const RingSpec f5 = RingSpec::prime_field(5);
  const Matrix u = Matrix::from_rows(f5, {{0, 1}, {0, 0}});
  CHECK(exp_nilpotent(u, 5) == Matrix::identity(f5, 2) + u);
  const RingSpec f3 = RingSpec::prime_field(3);
  const LieAlgebra g = LieAlgebra::chevalley(DynkinType::parse("A1"), f3);
  const Matrix adx = ad_basis(g, 1);
  CHECK_FALSE((adx * adx).is_zero());
  CHECK((adx * adx * adx).is_zero());
  CHECK(exp_nilpotent(adx, 3) == Matrix::identity(f3, 3) + adx + (adx * adx).scaled(Scalar(f3, 2)));
  const Matrix big = Matrix::from_rows(f3, {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}});
  CHECK(error_of([&] { exp_nilpotent(big, 3); }) == ErrorCode::NotNilpotentEnough);
}

TEST_CASE("Exp is a homomorphism and is rescaled by the torus") {
  for (std::int64_t p : {3, 5, 7}) {
    const RingSpec fp = RingSpec::prime_field(p);
    for (std::int64_t j = 1; j <= p - 1; ++j) {
      CAPTURE(p);
      CAPTURE(j);
      const WeightedModule m = chain_from_highest(j, p);
      const Matrix u = m.action->x.base_change(fp);
      const std::size_t n = u.rows();
      CHECK(pow(u, static_cast<int>(p)).is_zero());
      CHECK(exp_nilpotent(u, p) * exp_nilpotent(u.scaled(Scalar(fp, -1)), p) == Matrix::identity(fp, n));
      for (std::int64_t s = 0; s < p; ++s)
        for (std::int64_t t = 0; t < p; ++t) {
          const Matrix lhs = exp_nilpotent(u.scaled(Scalar(fp, s)), p) * exp_nilpotent(u.scaled(Scalar(fp, t)), p);
          CHECK(lhs == exp_nilpotent(u.scaled(Scalar(fp, s + t)), p));
        }
      for (std::int64_t t = 1; t < p; ++t) {
        Matrix d(fp, n, n), dinv(fp, n, n);
        for (std::size_t i = 0; i < n; ++i) {
          const std::int64_t w = j - 2 * static_cast<std::int64_t>(i);
          Scalar tw(fp, 1);
          const Scalar base = w >= 0 ? Scalar(fp, t) : Scalar(fp, t).inverse();
          for (std::int64_t e = 0; e < std::abs(w); ++e) tw *= base;
          d.set(i, i, tw);
          dinv.set(i, i, tw.inverse());
        }
        const Matrix lhs = d * exp_nilpotent(u, p) * dinv;
        CHECK(lhs == exp_nilpotent(u.scaled(Scalar(fp, t * t)), p));
      }
    }
  }
}
