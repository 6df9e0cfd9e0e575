#include "lieform/classifier.hpp"

#include "lieform/chevalley.hpp"

namespace lieform {

std::string reason_name(Reason r) {
  switch (r) {
    case Reason::P_EQ_2: return "P_EQ_2";
    case Reason::A_DIV: return "A_DIV";
    case Reason::B_DIV: return "B_DIV";
    case Reason::C_DIV: return "C_DIV";
    case Reason::D_DIV: return "D_DIV";
    case Reason::EXC_P3: return "EXC_P3";
    case Reason::E8_P5: return "E8_P5";
    case Reason::PERFECT: return "PERFECT";
  }
  return "?";
}

PerfectnessVerdict predict_perfect(DynkinType t, std::int64_t p) {
  t = DynkinType::make(t.series, t.rank);
  if (!is_prime(p)) fail(ErrorCode::InvalidRing, "p must be prime");
  const std::int64_t r = t.rank;
  auto verdict = [&](Reason why) { return PerfectnessVerdict{t, p, why == Reason::PERFECT, why, std::nullopt, std::nullopt}; };
  if (p == 2) return verdict(Reason::P_EQ_2);
  switch (t.series) {
    case Series::A:
      if ((r + 1) % p == 0) return verdict(Reason::A_DIV);
      break;
    case Series::B:
      if ((2 * r - 1) % p == 0) return verdict(Reason::B_DIV);
      break;
    case Series::C:
      if ((r + 1) % p == 0) return verdict(Reason::C_DIV);
      break;
    case Series::D:
      if ((r - 1) % p == 0) return verdict(Reason::D_DIV);
      break;
    case Series::E:
    case Series::F:
    case Series::G:
      if (p == 3) return verdict(Reason::EXC_P3);
      if (t.series == Series::E && r == 8 && p == 5) return verdict(Reason::E8_P5);
      break;
  }
  return verdict(Reason::PERFECT);
}

bool oracle_perfect(DynkinType t, std::int64_t p) {
  if (!is_prime(p)) fail(ErrorCode::InvalidRing, "p must be prime");
  const LieAlgebra g = LieAlgebra::chevalley(DynkinType::make(t.series, t.rank), RingSpec::prime_field(p));
  return rank(killing_form(g).gram) == g.dim();
}

PerfectnessVerdict verdict_with_oracle(DynkinType t, std::int64_t p) {
  PerfectnessVerdict v = predict_perfect(t, p);
  v.oracle = oracle_perfect(t, p);
  v.agree = *v.oracle == v.predicted;
  return v;
}

std::int64_t ratio_check(DynkinType t) {
  const MatrixRealization r = matrix_realization(t);
  const RingSpec z = RingSpec::integers();
  const Matrix k = killing_form(LieAlgebra::from_presentation(r.presentation, z)).gram;
  const Matrix tr = trace_form(r, z).gram;
  std::optional<mpz_class> c;
  for (std::size_t i = 0; i < k.rows(); ++i)
    for (std::size_t j = 0; j < k.cols(); ++j) {
      const mpz_class kv = k(i, j).rational().get_num();
      const mpz_class tv = tr(i, j).rational().get_num();
      if (tv == 0) {
        if (kv != 0) fail(ErrorCode::NoConstantRatio, "Killing entry nonzero where trace entry vanishes");
        continue;
      }
      if (kv % tv != 0) fail(ErrorCode::NoConstantRatio, "entry ratio is not an integer");
      const mpz_class q = kv / tv;
      if (c && *c != q) fail(ErrorCode::NoConstantRatio, "entry ratios differ");
      c = q;
    }
  if (!c) fail(ErrorCode::NoConstantRatio, "trace form vanishes");
  return c->get_si();
}

LieAlgebra matrix_lie_algebra(const std::vector<Matrix>& basis, const RingSpec& ring) {
  const std::size_t n = basis.size();
  if (n == 0) fail(ErrorCode::DimensionMismatch, "empty basis");
  const std::size_t size = basis[0].rows();
  const std::size_t m = size * size;
  // Solve over F_p when the basis stays independent mod p, else over Q.
  RingSpec work = RingSpec::rationals();
  auto flat_over = [&](const RingSpec& r) {
    Matrix flat(r, m, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t a = 0; a < size; ++a)
        for (std::size_t b = 0; b < size; ++b)
          if (!basis[k](a, b).is_zero()) flat.set(a * size + b, k, map_scalar(basis[k](a, b), r));
    return flat;
  };
  Matrix flat = flat_over(work);
  if (ring.kind() == RingKind::PrimeField) {
    Matrix fp = flat_over(ring);
    if (rank(fp) == n) {
      work = ring;
      flat = std::move(fp);
    }
  }
  const std::vector<std::size_t> rows = echelon_form(flat.transpose()).pivot_columns;
  if (rows.size() != n) fail(ErrorCode::DimensionMismatch, "basis matrices are dependent");
  Matrix square(work, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (!flat(rows[i], k).is_zero()) square.set(i, k, flat(rows[i], k));
  const Matrix inv = inverse(square);
  std::vector<std::size_t> row_slot(m, n);
  for (std::size_t i = 0; i < n; ++i) row_slot[rows[i]] = i;

  struct Entry {
    std::size_t a, b;
    std::int64_t v;
  };
  std::vector<std::vector<Entry>> sparse(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t a = 0; a < size; ++a)
      for (std::size_t b = 0; b < size; ++b)
        if (!basis[k](a, b).is_zero()) {
          const mpq_class v = basis[k](a, b).rational();
          if (v.get_den() != 1) fail(ErrorCode::NonIntegralDenominator, "matrix_lie_algebra needs integer matrices");
          sparse[k].push_back({a, b, v.get_num().get_si()});
        }

  std::vector<std::vector<Term>> table(n * n);
  std::vector<std::int64_t> comm(m, 0);
  std::vector<std::size_t> touched;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      touched.clear();
      auto bump = [&](std::size_t idx, std::int64_t v) {
        if (comm[idx] == 0) touched.push_back(idx);
        comm[idx] += v;
      };
      for (const auto& x : sparse[i])
        for (const auto& y : sparse[j]) {
          if (x.b == y.a) bump(x.a * size + y.b, x.v * y.v);
          if (y.b == x.a) bump(y.a * size + x.b, -x.v * y.v);
        }
      Vec coords(n, Scalar(work));
      for (std::size_t idx : touched) {
        if (comm[idx] == 0 || row_slot[idx] == n) continue;
        const Scalar v(work, static_cast<long long>(comm[idx]));
        const std::size_t slot = row_slot[idx];
        for (std::size_t k = 0; k < n; ++k)
          if (!inv(k, slot).is_zero()) coords[k] += inv(k, slot) * v;
      }
      // Closure: the combination must reproduce the commutator exactly.
      std::vector<std::pair<std::size_t, Scalar>> extra;
      for (std::size_t k = 0; k < n; ++k) {
        if (coords[k].is_zero()) continue;
        for (const auto& e : sparse[k]) {
          const std::size_t idx = e.a * size + e.b;
          const Scalar c = coords[k] * Scalar(work, static_cast<long long>(e.v));
          extra.emplace_back(idx, c);
        }
      }
      std::vector<Scalar> diff(m, Scalar(work));
      for (const auto& [idx, c] : extra) diff[idx] += c;
      for (std::size_t idx : touched) diff[idx] -= Scalar(work, static_cast<long long>(comm[idx]));
      for (const auto& [idx, c] : extra)
        if (!diff[idx].is_zero()) fail(ErrorCode::NotALieAlgebra, "matrix span is not closed under commutator");
      for (std::size_t idx : touched)
        if (!diff[idx].is_zero()) fail(ErrorCode::NotALieAlgebra, "matrix span is not closed under commutator");
      for (std::size_t idx : touched) comm[idx] = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (coords[k].is_zero()) continue;
        Scalar s = work == ring ? coords[k] : Scalar::from_rational(ring, coords[k].rational());
        if (!s.is_zero()) table[i * n + j].push_back({k, s});
      }
    }
  return LieAlgebra(ring, n, std::move(table), std::nullopt, true);
}

namespace {

// Column span as a reduced row basis (rows = vectors).
Matrix span_rows(const RingSpec& ring, std::size_t dim, const std::vector<Vec>& vs) {
  Matrix m(ring, vs.size(), dim);
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (!vs[i][j].is_zero()) m.set(i, j, vs[i][j]);
  return m;
}

bool in_span(const Matrix& rows, const Vec& v) {
  const std::size_t r = rank(rows);
  Matrix ext = rows.vstack(span_rows(rows.ring(), rows.cols(), {v}));
  return rank(ext) == r;
}

}  // namespace

KernelWitness b_series_kernel_witness(int n) {
  const DynkinType t = DynkinType::make(Series::B, n);
  if (n > 8) fail(ErrorCode::InvalidRank, "b_series_kernel_witness supports n <= 8");
  const MatrixRealization real = matrix_realization(t);
  const RingSpec z = RingSpec::integers();
  const RingSpec f2 = RingSpec::prime_field(2);
  const std::size_t size = real.module_rank;
  const std::size_t r = static_cast<std::size_t>(n);

  // Lie(SO_{2n+1}): diagonal h_i = e_ii - e_{n+i,n+i} plus the root matrices.
  std::vector<Matrix> basis;
  std::vector<std::string> labels;
  for (std::size_t i = 1; i <= r; ++i) {
    Matrix h(z, size, size);
    h.set(i, i, Scalar(z, 1LL));
    h.set(r + i, r + i, Scalar(z, -1LL));
    basis.push_back(h);
    labels.push_back("h" + std::to_string(i));
  }
  for (std::size_t k = r; k < real.matrices.size(); ++k) {
    basis.push_back(real.matrices[k]);
    labels.push_back(real.presentation.basis_labels()[k]);
  }
  LieAlgebra g = matrix_lie_algebra(basis, f2);
  const std::size_t dim = g.dim();

  // Coordinates of e_{0,j} (j = 1..2n) in this basis over F_2.
  Matrix flat(f2, size * size, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const Vec v = flatten(basis[k].base_change(f2));
    for (std::size_t a = 0; a < v.size(); ++a)
      if (!v[a].is_zero()) flat.set(a, k, v[a]);
  }
  KernelWitness w{n, g, labels, {}, {}, false, false, false};
  for (std::size_t j = 1; j <= 2 * r; ++j) {
    Matrix target(f2, size * size, 1);
    target.set(j, 0, Scalar(f2, 1LL));  // entry (0, j)
    auto x = solve_linear(flat, target);
    if (!x) fail(ErrorCode::NotALieAlgebra, "e_{0,j} is not in the span of the realization mod 2");
    w.vectors.push_back(column_of(*x, 0));
    w.vector_labels.push_back("e_{0," + std::to_string(j) + "}");
  }

  const Matrix span = span_rows(f2, dim, w.vectors);
  w.is_ideal = true;
  for (std::size_t b = 0; b < dim && w.is_ideal; ++b)
    for (const auto& v : w.vectors)
      if (!in_span(span, g.bracket(g.basis_vector(b), v))) {
        w.is_ideal = false;
        break;
      }

  // Lower central series of the span reaches zero.
  std::vector<Vec> current = w.vectors;
  w.is_nilpotent = false;
  for (std::size_t step = 0; step <= dim; ++step) {
    std::vector<Vec> next;
    for (const auto& a : w.vectors)
      for (const auto& c : current) {
        Vec b = g.bracket(a, c);
        bool zero = true;
        for (const auto& x : b)
          if (!x.is_zero()) zero = false;
        if (!zero) next.push_back(std::move(b));
      }
    if (next.empty()) {
      w.is_nilpotent = true;
      break;
    }
    current = std::move(next);
  }

  const Matrix kgram = killing_form(g).gram;
  w.in_killing_kernel = true;
  for (const auto& v : w.vectors)
    if (!(kgram * to_column(f2, v)).is_zero()) w.in_killing_kernel = false;
  return w;
}

}  // namespace lieform
