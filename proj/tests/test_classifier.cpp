#include <doctest.h>

#include <numeric>

#include "lieform/classifier.hpp"
#include "support.hpp"

using namespace lieform;

namespace {

const std::vector<std::int64_t> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23};

PerfectnessVerdict predict(const char* name, std::int64_t p) { return predict_perfect(DynkinType::parse(name), p); }

}  // namespace

TEST_CASE("prediction examples") {
  auto v = predict("E8", 5);
  CHECK_FALSE(v.predicted);
  CHECK(v.reason == Reason::E8_P5);
  CHECK_FALSE(v.oracle.has_value());
  v = predict("A4", 5);
  CHECK((!v.predicted && v.reason == Reason::A_DIV));
  v = predict("G2", 2);
  CHECK((!v.predicted && v.reason == Reason::P_EQ_2));
  v = predict("B2", 3);
  CHECK((!v.predicted && v.reason == Reason::B_DIV));
  v = predict("E8", 3);
  CHECK((!v.predicted && v.reason == Reason::EXC_P3));
  v = predict("E8", 7);
  CHECK((v.predicted && v.reason == Reason::PERFECT));
  CHECK(predict("C5", 3).reason == Reason::C_DIV);
  CHECK(predict("D4", 3).reason == Reason::D_DIV);
  CHECK(predict("F4", 3).reason == Reason::EXC_P3);
  CHECK(reason_name(Reason::E8_P5) == "E8_P5");
}

TEST_CASE("oracle examples") {
  CHECK(oracle_perfect(DynkinType::parse("A1"), 3));
  CHECK_FALSE(oracle_perfect(DynkinType::parse("A2"), 3));
  for (const auto& t : all_types(8, true)) CHECK_FALSE(oracle_perfect(t, 2));
  const auto v = verdict_with_oracle(DynkinType::parse("E8"), 5);
  CHECK(v.oracle == false);
  CHECK(v.agree == true);
}

TEST_CASE("prediction equals oracle on the full table") {
  for (const auto& t : all_types(8, true))
    for (std::int64_t p : kPrimes) {
      CAPTURE(t.name());
      CAPTURE(p);
      const auto v = verdict_with_oracle(t, p);
      CHECK(*v.agree);
      CHECK(v.predicted == *v.oracle);
    }
}

TEST_CASE("verdicts agree across the low-rank identifications") {
  for (std::int64_t p : kPrimes) {
    if (p == 2) continue;
    CHECK(predict("A1", p).predicted == predict("B1", p).predicted);
    CHECK(predict("A1", p).predicted == predict("C1", p).predicted);
    CHECK(predict("B2", p).predicted == predict("C2", p).predicted);
    CHECK(predict("A3", p).predicted == predict("D3", p).predicted);
    CHECK(oracle_perfect(DynkinType::parse("B2"), p) == oracle_perfect(DynkinType::parse("C2"), p));
    CHECK(oracle_perfect(DynkinType::parse("A3"), p) == oracle_perfect(DynkinType::parse("D3"), p));
  }
}

TEST_CASE("perfect at odd p implies p does not divide the center order") {
  for (const auto& t : all_types(8, true))
    for (std::int64_t p : kPrimes)
      if (p != 2 && predict_perfect(t, p).predicted) CHECK(std::gcd(center_order(t), p) == 1);
}

TEST_CASE("trace-form ratios") {
  CHECK(ratio_check(DynkinType::parse("A1")) == 4);
  CHECK(ratio_check(DynkinType::parse("B2")) == 3);
  CHECK(ratio_check(DynkinType::parse("C3")) == 8);
  for (const auto& t : all_types(8, true)) {
    if (!t.is_classical()) {
      CHECK(error_of([&] { ratio_check(t); }) == ErrorCode::NotClassical);
      continue;
    }
    CAPTURE(t.name());
    const std::int64_t n = t.rank;
    const std::int64_t expect = t.series == Series::A   ? 2 * (n + 1)
                                : t.series == Series::B ? 2 * n - 1
                                : t.series == Series::C ? 2 * n + 2
                                                        : 2 * n - 2;
    const std::int64_t c = ratio_check(t);
    CHECK(c == expect);
    for (std::int64_t p : kPrimes)
      if (p != 2) CHECK((c % p == 0) == !predict_perfect(t, p).predicted);
  }
}

TEST_CASE("matrix Lie algebra recovers sl2") {
  const MatrixRealization r = matrix_realization(DynkinType::parse("A1"));
  const LieAlgebra g = matrix_lie_algebra(r.matrices, RingSpec::integers());
  const LieAlgebra ref = LieAlgebra::chevalley(DynkinType::parse("A1"), RingSpec::integers());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const Vec a = g.bracket(g.basis_vector(i), g.basis_vector(j));
      const Vec b = ref.bracket(ref.basis_vector(i), ref.basis_vector(j));
      CHECK(a == b);
    }
}

TEST_CASE("B_n kernel witness in characteristic 2") {
  for (int n = 1; n <= 3; ++n) {
    CAPTURE(n);
    const KernelWitness w = b_series_kernel_witness(n);
    CHECK(w.vectors.size() == static_cast<std::size_t>(2 * n));
    CHECK(w.is_ideal);
    CHECK(w.is_nilpotent);
    CHECK(w.in_killing_kernel);
    // recheck membership in the radical directly from the Gram matrix
    const Matrix gram = killing_form(w.algebra).gram;
    for (const auto& v : w.vectors) CHECK((gram * to_column(w.algebra.ring(), v)).is_zero());
    // recheck the ideal property: [b, v] stays in span(vectors)
    Matrix span(w.algebra.ring(), w.algebra.dim(), 0);
    for (const auto& v : w.vectors) span = span.hstack(to_column(w.algebra.ring(), v));
    const std::size_t r = rank(span);
    CHECK(r == w.vectors.size());
    for (std::size_t b = 0; b < w.algebra.dim(); ++b)
      for (const auto& v : w.vectors)
        CHECK(rank(span.hstack(to_column(w.algebra.ring(), w.algebra.bracket(w.algebra.basis_vector(b), v)))) == r);
  }
  CHECK(error_of([] { b_series_kernel_witness(0); }) == ErrorCode::InvalidRank);
  CHECK(error_of([] { b_series_kernel_witness(9); }) == ErrorCode::InvalidRank);
}
