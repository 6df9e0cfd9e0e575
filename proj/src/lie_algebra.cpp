#include "lieform/lie_algebra.hpp"

namespace lieform {

LieAlgebra::LieAlgebra(const RingSpec& ring, std::size_t dim, std::vector<std::vector<Term>> table,
                       std::optional<DynkinType> dynkin, bool verify)
    : ring_(ring), dim_(dim), table_(std::move(table)), dynkin_(dynkin) {
  if (table_.size() != dim * dim) fail(ErrorCode::DimensionMismatch, "structure table must have dim^2 entries");
  for (const auto& cell : table_)
    for (const auto& t : cell) {
      if (t.coeff.ring() != ring_) fail(ErrorCode::RingMismatch, "structure constant outside the algebra's ring");
      if (t.index >= dim) fail(ErrorCode::DimensionMismatch, "structure constant index out of range");
    }
  if (verify && dim <= 20 && !satisfies_jacobi())
    fail(ErrorCode::NotALieAlgebra, "structure constants violate antisymmetry or the Jacobi identity");
}

LieAlgebra LieAlgebra::from_presentation(const ChevalleyPresentation& p, const RingSpec& ring) {
  const std::size_t n = p.dim();
  std::vector<std::vector<Term>> table(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& t : p.bracket(i, j)) {
        Scalar c(ring, static_cast<long long>(t.coeff));
        if (!c.is_zero()) table[i * n + j].push_back({t.index, c});
      }
  // The integral presentation is Jacobi-checked on its own; images inherit it.
  return LieAlgebra(ring, n, std::move(table), p.dynkin(), false);
}

LieAlgebra LieAlgebra::chevalley(DynkinType t, const RingSpec& ring) {
  return from_presentation(ChevalleyPresentation(t), ring);
}

LieAlgebra LieAlgebra::abelian(const RingSpec& ring, std::size_t dim) {
  return LieAlgebra(ring, dim, std::vector<std::vector<Term>>(dim * dim));
}

Vec LieAlgebra::bracket(const Vec& a, const Vec& b) const {
  if (a.size() != dim_ || b.size() != dim_) fail(ErrorCode::DimensionMismatch, "bracket: vector length");
  Vec out = zero_vector();
  for (std::size_t i = 0; i < dim_; ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (b[j].is_zero()) continue;
      const Scalar ab = a[i] * b[j];
      for (const auto& t : bracket(i, j)) out[t.index] += ab * t.coeff;
    }
  }
  return out;
}

Vec LieAlgebra::basis_vector(std::size_t i) const {
  Vec v = zero_vector();
  v[i] = Scalar(ring_, 1LL);
  return v;
}

bool LieAlgebra::satisfies_jacobi() const {
  for (std::size_t i = 0; i < dim_; ++i) {
    if (!bracket(i, i).empty()) {
      for (const auto& t : bracket(i, i))
        if (!t.coeff.is_zero()) return false;
    }
    for (std::size_t j = i + 1; j < dim_; ++j) {
      Vec s = zero_vector();
      for (const auto& t : bracket(i, j)) s[t.index] += t.coeff;
      for (const auto& t : bracket(j, i)) s[t.index] += t.coeff;
      for (const auto& x : s)
        if (!x.is_zero()) return false;
    }
  }
  Vec acc = zero_vector();
  auto add_outer = [&](std::size_t i, const std::vector<Term>& inner) {
    for (const auto& t : inner)
      for (const auto& u : bracket(i, t.index)) acc[u.index] += t.coeff * u.coeff;
  };
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i + 1; j < dim_; ++j)
      for (std::size_t k = j + 1; k < dim_; ++k) {
        add_outer(i, bracket(j, k));
        add_outer(j, bracket(k, i));
        add_outer(k, bracket(i, j));
        for (auto& x : acc) {
          if (!x.is_zero()) return false;
        }
      }
  return true;
}

Matrix to_column(const RingSpec& ring, const Vec& v) { return Matrix::column_vector(ring, v); }

Vec column_of(const Matrix& m, std::size_t c) {
  Vec v;
  v.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) v.push_back(m(i, c));
  return v;
}

Matrix ad_matrix(const LieAlgebra& g, const Vec& v) {
  if (v.size() != g.dim()) fail(ErrorCode::DimensionMismatch, "ad_matrix: vector length");
  for (const auto& x : v)
    if (x.ring() != g.ring()) fail(ErrorCode::RingMismatch, "ad_matrix: vector ring differs from algebra ring");
  Matrix m(g.ring(), g.dim(), g.dim());
  for (std::size_t i = 0; i < g.dim(); ++i) {
    if (v[i].is_zero()) continue;
    for (std::size_t k = 0; k < g.dim(); ++k)
      for (const auto& t : g.bracket(i, k)) m.add_to(t.index, k, v[i] * t.coeff);
  }
  return m;
}

Matrix ad_basis(const LieAlgebra& g, std::size_t i) {
  Matrix m(g.ring(), g.dim(), g.dim());
  for (std::size_t k = 0; k < g.dim(); ++k)
    for (const auto& t : g.bracket(i, k)) m.add_to(t.index, k, t.coeff);
  return m;
}

BilinearForm killing_form(const LieAlgebra& g) {
  const std::size_t n = g.dim();
  // rev[l*n + k] lists (j, c_{jl}^k) = entries of ad(b_j) at (k, l).
  std::vector<std::vector<std::pair<std::size_t, const Scalar*>>> rev(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l)
      for (const auto& t : g.bracket(j, l)) rev[l * n + t.index].emplace_back(j, &t.coeff);
  std::vector<Scalar> k(n * n, Scalar(g.ring()));
  // K(i,j) = tr(ad_i ad_j) = sum_{k,l} c_{ik}^l c_{jl}^k
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t kk = 0; kk < n; ++kk)
      for (const auto& t : g.bracket(i, kk))
        for (const auto& [j, c] : rev[t.index * n + kk]) k[i * n + j] += t.coeff * *c;
  Matrix gram(g.ring(), n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!k[i * n + j].is_zero()) gram.set(i, j, k[i * n + j]);
  return {gram};
}

BilinearForm trace_form(const MatrixRealization& r, const RingSpec& ring) {
  const std::size_t n = r.matrices.size();
  const std::size_t m = r.module_rank;
  std::vector<std::vector<std::int64_t>> dense(n, std::vector<std::int64_t>(m * m, 0));
  std::vector<std::vector<std::tuple<std::size_t, std::size_t, std::int64_t>>> sparse(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        const std::int64_t v = r.matrices[i](a, b).rational().get_num().get_si();
        dense[i][a * m + b] = v;
        if (v != 0) sparse[i].emplace_back(a, b, v);
      }
  Matrix gram(ring, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::int64_t t = 0;
      for (const auto& [a, b, v] : sparse[i]) t += v * dense[j][b * m + a];
      if (t != 0) gram.set(i, j, Scalar(ring, static_cast<long long>(t)));
    }
  return {gram};
}

bool is_perfect(const BilinearForm& f) { return determinant(f.gram).is_unit(); }

Matrix form_kernel(const BilinearForm& f) {
  if (!f.gram.ring().is_field()) fail(ErrorCode::UnsupportedRing, "form_kernel needs a field-kind ring");
  return kernel_basis(f.gram);
}

Vec flatten(const Matrix& endo) {
  Vec v;
  v.reserve(endo.rows() * endo.cols());
  for (std::size_t a = 0; a < endo.rows(); ++a)
    for (std::size_t b = 0; b < endo.cols(); ++b) v.push_back(endo(a, b));
  return v;
}

Matrix derivation_algebra(const LieAlgebra& g) {
  const std::size_t n = g.dim();
  const RingSpec& ring = g.ring();
  if (!ring.is_field()) fail(ErrorCode::UnsupportedRing, "derivation_algebra needs a field-kind ring");
  RowReducer eqs(ring, n * n);
  // D[b_i,b_j] - [D b_i, b_j] - [b_i, D b_j] = 0, coordinate m.
  std::vector<std::vector<std::pair<std::size_t, Scalar>>> rows(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      for (auto& r : rows) r.clear();
      for (const auto& t : g.bracket(i, j))
        for (std::size_t m = 0; m < n; ++m) rows[m].emplace_back(m * n + t.index, t.coeff);
      for (std::size_t a = 0; a < n; ++a) {
        for (const auto& t : g.bracket(a, j)) rows[t.index].emplace_back(a * n + i, -t.coeff);
        for (const auto& t : g.bracket(i, a)) rows[t.index].emplace_back(a * n + j, -t.coeff);
      }
      for (const auto& r : rows)
        if (!r.empty()) eqs.add_row(r);
    }
  return eqs.kernel();
}

Matrix center(const LieAlgebra& g) {
  const std::size_t n = g.dim();
  if (!g.ring().is_field()) fail(ErrorCode::UnsupportedRing, "center needs a field-kind ring");
  RowReducer eqs(g.ring(), n);
  // sum_i v_i c_{ij}^m = 0 for every j, m.
  std::vector<std::vector<std::pair<std::size_t, Scalar>>> rows(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (auto& r : rows) r.clear();
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& t : g.bracket(i, j)) rows[t.index].emplace_back(i, t.coeff);
    for (const auto& r : rows)
      if (!r.empty()) eqs.add_row(r);
  }
  return eqs.kernel();
}

CasimirTensor casimir(const LieAlgebra& g) {
  const BilinearForm k = killing_form(g);
  if (!is_perfect(k)) fail(ErrorCode::NotPerfect, "Killing form is not perfect over " + g.ring().to_string());
  return {inverse(k.gram)};
}

Matrix casimir_operator(const LieAlgebra& g, const CasimirTensor& t) {
  const std::size_t n = g.dim();
  const Matrix& c = t.coefficients;
  Matrix op(g.ring(), n, n);
  // column k: sum_ij C_ij [b_i, [b_j, b_k]]
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Scalar& cij = c(i, j);
      if (cij.is_zero()) continue;
      for (std::size_t k = 0; k < n; ++k)
        for (const auto& u : g.bracket(j, k))
          for (const auto& w : g.bracket(i, u.index)) op.add_to(w.index, k, cij * u.coeff * w.coeff);
    }
  return op;
}

Matrix apply_endo_to_casimir(const CasimirTensor& t, const Matrix& s) {
  if (!determinant(s).is_unit()) fail(ErrorCode::Singular, "endomorphism is not invertible");
  return s * t.coefficients * s.transpose();
}

LieAlgebra base_change(const LieAlgebra& g, const RingSpec& target) {
  if (!has_canonical_morphism(g.ring(), target))
    fail(ErrorCode::NoCanonicalMorphism, "no canonical morphism " + g.ring().to_string() + " -> " + target.to_string());
  const std::size_t n = g.dim();
  std::vector<std::vector<Term>> table(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& t : g.bracket(i, j)) {
        Scalar c = map_scalar(t.coeff, target);
        if (!c.is_zero()) table[i * n + j].push_back({t.index, c});
      }
  return LieAlgebra(target, n, std::move(table), g.dynkin(), false);
}

bool preserves_bracket(const LieAlgebra& g, const Matrix& s) {
  const std::size_t n = g.dim();
  if (s.rows() != n || s.cols() != n) fail(ErrorCode::DimensionMismatch, "automorphism matrix shape");
  if (s.ring() != g.ring()) fail(ErrorCode::RingMismatch, "automorphism matrix ring");
  std::vector<Vec> cols;
  for (std::size_t i = 0; i < n; ++i) cols.push_back(column_of(s, i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Vec lhs = g.zero_vector();
      for (const auto& t : g.bracket(i, j))
        for (std::size_t m = 0; m < n; ++m) lhs[m] += t.coeff * cols[t.index][m];
      if (lhs != g.bracket(cols[i], cols[j])) return false;
    }
  return true;
}

bool is_automorphism(const LieAlgebra& g, const Matrix& s) {
  return preserves_bracket(g, s) && determinant(s).is_unit();
}

}  // namespace lieform

namespace lieform {

Matrix torus_automorphism(const ChevalleyPresentation& p, const RingSpec& ring, const std::vector<Scalar>& t) {
  if (t.size() != p.rank()) fail(ErrorCode::DimensionMismatch, "one torus parameter per simple root");
  for (const auto& x : t)
    if (!x.is_unit()) fail(ErrorCode::NotInvertible, "torus parameters must be units");
  const std::size_t r = p.rank();
  Matrix s = Matrix::identity(ring, p.dim());
  const auto& rts = p.roots().roots();
  for (std::size_t k = 0; k < rts.size(); ++k) {
    Scalar v(ring, 1LL);
    for (std::size_t i = 0; i < r; ++i) {
      const int a = rts[k][i];
      const Scalar base = a >= 0 ? t[i] : t[i].inverse();
      for (int e = 0; e < std::abs(a); ++e) v *= base;
    }
    s.set(r + k, r + k, v);
  }
  return s;
}

Matrix chevalley_involution(const ChevalleyPresentation& p, const RingSpec& ring) {
  const std::size_t r = p.rank();
  const Scalar minus_one(ring, -1LL);
  Matrix s(ring, p.dim(), p.dim());
  for (std::size_t i = 0; i < r; ++i) s.set(i, i, minus_one);
  for (const auto& a : p.roots().roots()) {
    Root neg = a;
    for (auto& x : neg) x = -x;
    s.set(p.root_index(neg), p.root_index(a), minus_one);
  }
  return s;
}

Matrix triple_flip(const ChevalleyPresentation& p, const RingSpec& ring, const Root& alpha) {
  std::size_t odd = alpha.size();
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i] % 2 != 0) {
      odd = i;
      break;
    }
  if (odd == alpha.size()) fail(ErrorCode::OutOfRange, "root has no odd coordinate");
  std::vector<Scalar> t(p.rank(), Scalar(ring, 1LL));
  t[odd] = Scalar(ring, -1LL);
  return chevalley_involution(p, ring) * torus_automorphism(p, ring, t);
}

}  // namespace lieform
