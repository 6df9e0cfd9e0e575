#include "lieform/matrix.hpp"

#include <algorithm>
#include <sstream>

namespace lieform {

namespace {

// Dense residue matrix used for PrimeField fast paths.
struct Residues {
  std::int64_t mod;
  std::size_t rows;
  std::size_t cols;
  std::vector<std::int64_t> a;

  std::int64_t& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  std::int64_t at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

std::int64_t mulm(std::int64_t x, std::int64_t y, std::int64_t m) {
  return static_cast<std::int64_t>((static_cast<__int128>(x) * y) % m);
}

std::int64_t invm(std::int64_t a, std::int64_t m) {
  __int128 t = 0, nt = 1, r = m, nr = a;
  while (nr != 0) {
    __int128 q = r / nr;
    __int128 tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (t < 0) t += m;
  return static_cast<std::int64_t>(t);
}

Residues to_residues(const Matrix& m) {
  Residues r{m.ring().modulus(), m.rows(), m.cols(), std::vector<std::int64_t>(m.rows() * m.cols())};
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r.at(i, j) = m(i, j).residue();
  return r;
}

Matrix from_residues(const RingSpec& ring, const Residues& r) {
  Matrix out(ring, r.rows, r.cols);
  for (std::size_t i = 0; i < r.rows; ++i)
    for (std::size_t j = 0; j < r.cols; ++j)
      if (r.at(i, j) != 0) out.set(i, j, Scalar(ring, static_cast<long long>(r.at(i, j))));
  return out;
}

// In-place reduced row echelon form over F_p; returns pivot columns.
// `limit_cols` restricts pivot search to the first columns (augmented solves).
std::vector<std::size_t> rref_residues(Residues& r, std::size_t limit_cols) {
  const std::int64_t p = r.mod;
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < limit_cols && row < r.rows; ++col) {
    std::size_t piv = r.rows;
    for (std::size_t i = row; i < r.rows; ++i) {
      if (r.at(i, col) != 0) {
        piv = i;
        break;
      }
    }
    if (piv == r.rows) continue;
    if (piv != row)
      for (std::size_t j = 0; j < r.cols; ++j) std::swap(r.at(piv, j), r.at(row, j));
    const std::int64_t inv = invm(r.at(row, col), p);
    for (std::size_t j = col; j < r.cols; ++j) r.at(row, j) = mulm(r.at(row, j), inv, p);
    for (std::size_t i = 0; i < r.rows; ++i) {
      if (i == row) continue;
      const std::int64_t f = r.at(i, col);
      if (f == 0) continue;
      for (std::size_t j = col; j < r.cols; ++j) {
        const std::int64_t v = r.at(row, j);
        if (v == 0) continue;
        std::int64_t x = r.at(i, j) - mulm(f, v, p);
        if (x < 0) x += p;
        r.at(i, j) = x;
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

// Generic elimination over a field-kind ring with Scalar arithmetic.
std::vector<std::size_t> rref_generic(Matrix& m, std::size_t limit_cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  const RingSpec ring = m.ring();
  for (std::size_t col = 0; col < limit_cols && row < m.rows(); ++col) {
    std::size_t piv = m.rows();
    for (std::size_t i = row; i < m.rows(); ++i) {
      if (!m(i, col).is_zero()) {
        piv = i;
        break;
      }
    }
    if (piv == m.rows()) continue;
    if (piv != row) {
      for (std::size_t j = 0; j < m.cols(); ++j) {
        Scalar tmp = m(piv, j);
        m.set(piv, j, m(row, j));
        m.set(row, j, tmp);
      }
    }
    const Scalar inv = m(row, col).inverse();
    for (std::size_t j = col; j < m.cols(); ++j) m.set(row, j, m(row, j) * inv);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      const Scalar f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) {
        if (m(row, j).is_zero()) continue;
        m.set(i, j, m(i, j) - f * m(row, j));
      }
    }
    pivots.push_back(col);
    ++row;
  }
  (void)ring;
  return pivots;
}

void require_field(const Matrix& m, const char* op) {
  if (!m.ring().is_field())
    fail(ErrorCode::UnsupportedRing, std::string(op) + " needs a field-kind ring, got " + m.ring().to_string());
}

EchelonForm echelon_limited(const Matrix& m, std::size_t limit_cols) {
  require_field(m, "elimination");
  if (m.ring().kind() == RingKind::PrimeField) {
    Residues r = to_residues(m);
    auto piv = rref_residues(r, limit_cols);
    return {from_residues(m.ring(), r), std::move(piv)};
  }
  Matrix work = m;
  auto piv = rref_generic(work, limit_cols);
  return {std::move(work), std::move(piv)};
}

// Fraction-free (Bareiss) determinant of an integer matrix.
mpz_class bareiss(std::vector<mpz_class> a, std::size_t n) {
  if (n == 0) return 1;
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t swap_row = n;
      for (std::size_t i = k + 1; i < n; ++i) {
        if (a[i * n + k] != 0) {
          swap_row = i;
          break;
        }
      }
      if (swap_row == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[swap_row * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class v = a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[i * n + j] = v;
      }
    }
    prev = a[k * n + k];
  }
  mpz_class d = a[n * n - 1];
  return sign < 0 ? mpz_class(-d) : d;
}

// Gauss-Jordan inverse choosing the first unit pivot in each column. Valid over
// fields and local rings, where an invertible matrix always offers one.
Matrix inverse_local(const Matrix& m) {
  const std::size_t n = m.rows();
  const RingSpec ring = m.ring();
  Matrix aug = m.hstack(Matrix::identity(ring, n));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = n;
    for (std::size_t i = col; i < n; ++i) {
      if (aug(i, col).is_unit()) {
        piv = i;
        break;
      }
    }
    if (piv == n) fail(ErrorCode::Singular, "matrix is not invertible over " + ring.to_string());
    if (piv != col) {
      for (std::size_t j = 0; j < 2 * n; ++j) {
        Scalar tmp = aug(piv, j);
        aug.set(piv, j, aug(col, j));
        aug.set(col, j, tmp);
      }
    }
    const Scalar inv = aug(col, col).inverse();
    for (std::size_t j = 0; j < 2 * n; ++j) aug.set(col, j, aug(col, j) * inv);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || aug(i, col).is_zero()) continue;
      const Scalar f = aug(i, col);
      for (std::size_t j = 0; j < 2 * n; ++j) {
        if (aug(col, j).is_zero()) continue;
        aug.set(i, j, aug(i, j) - f * aug(col, j));
      }
    }
  }
  return aug.columns(n, 2 * n);
}

}  // namespace

Matrix::Matrix(const RingSpec& ring, std::size_t rows, std::size_t cols)
    : ring_(ring), rows_(rows), cols_(cols), data_(rows * cols, Scalar(ring)) {}

Matrix Matrix::identity(const RingSpec& ring, std::size_t n) {
  Matrix m(ring, n, n);
  const Scalar one(ring, 1LL);
  for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = one;
  return m;
}

Matrix Matrix::from_rows(const RingSpec& ring, std::initializer_list<std::initializer_list<long long>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  Matrix m(ring, r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) fail(ErrorCode::DimensionMismatch, "ragged matrix literal");
    std::size_t j = 0;
    for (long long v : row) m.data_[i * c + j++] = Scalar(ring, v);
    ++i;
  }
  return m;
}

Matrix Matrix::from_ints(const RingSpec& ring, std::size_t rows, std::size_t cols, const std::vector<long long>& values) {
  if (values.size() != rows * cols) fail(ErrorCode::DimensionMismatch, "from_ints: wrong entry count");
  Matrix m(ring, rows, cols);
  for (std::size_t k = 0; k < values.size(); ++k)
    if (values[k] != 0) m.data_[k] = Scalar(ring, values[k]);
  return m;
}

Matrix Matrix::from_rationals(const RingSpec& ring, std::size_t rows, std::size_t cols,
                              const std::vector<mpq_class>& values) {
  if (values.size() != rows * cols) fail(ErrorCode::DimensionMismatch, "from_rationals: wrong entry count");
  Matrix m(ring, rows, cols);
  for (std::size_t k = 0; k < values.size(); ++k) m.data_[k] = Scalar::from_rational(ring, values[k]);
  return m;
}

Matrix Matrix::column_vector(const RingSpec& ring, const std::vector<Scalar>& entries) {
  Matrix m(ring, entries.size(), 1);
  for (std::size_t i = 0; i < entries.size(); ++i) m.set(i, 0, entries[i]);
  return m;
}

void Matrix::set(std::size_t r, std::size_t c, const Scalar& value) {
  if (value.ring() != ring_)
    fail(ErrorCode::RingMismatch, "entry ring " + value.ring().to_string() + " differs from matrix ring " + ring_.to_string());
  data_[r * cols_ + c] = value;
}

void Matrix::add_to(std::size_t r, std::size_t c, const Scalar& value) { data_[r * cols_ + c] += value; }

Matrix Matrix::row(std::size_t r) const {
  Matrix out(ring_, 1, cols_);
  for (std::size_t j = 0; j < cols_; ++j) out.data_[j] = (*this)(r, j);
  return out;
}

Matrix Matrix::column(std::size_t c) const { return columns(c, c + 1); }

Matrix Matrix::columns(std::size_t begin, std::size_t end) const {
  Matrix out(ring_, rows_, end - begin);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = begin; j < end; ++j) out.data_[i * (end - begin) + (j - begin)] = (*this)(i, j);
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(ring_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out.data_[j * rows_ + i] = (*this)(i, j);
  return out;
}

Matrix Matrix::hstack(const Matrix& right) const {
  if (right.ring_ != ring_) fail(ErrorCode::RingMismatch, "hstack ring mismatch");
  if (right.rows_ != rows_) fail(ErrorCode::DimensionMismatch, "hstack row count mismatch");
  Matrix out(ring_, rows_, cols_ + right.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out.data_[i * out.cols_ + j] = (*this)(i, j);
    for (std::size_t j = 0; j < right.cols_; ++j) out.data_[i * out.cols_ + cols_ + j] = right(i, j);
  }
  return out;
}

Matrix Matrix::vstack(const Matrix& below) const {
  if (below.ring_ != ring_) fail(ErrorCode::RingMismatch, "vstack ring mismatch");
  if (below.cols_ != cols_) fail(ErrorCode::DimensionMismatch, "vstack column count mismatch");
  Matrix out(ring_, rows_ + below.rows_, cols_);
  std::copy(data_.begin(), data_.end(), out.data_.begin());
  std::copy(below.data_.begin(), below.data_.end(), out.data_.begin() + static_cast<std::ptrdiff_t>(data_.size()));
  return out;
}

Matrix Matrix::scaled(const Scalar& s) const {
  Matrix out = *this;
  for (auto& e : out.data_)
    if (!e.is_zero()) e *= s;
  return out;
}

Scalar Matrix::trace() const {
  if (!is_square()) fail(ErrorCode::DimensionMismatch, "trace of a non-square matrix");
  Scalar t(ring_);
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

bool Matrix::is_zero() const {
  for (const auto& e : data_)
    if (!e.is_zero()) return false;
  return true;
}

bool Matrix::is_symmetric() const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

Matrix Matrix::base_change(const RingSpec& target) const {
  Matrix out(target, rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k)
    if (!data_[k].is_zero()) out.data_[k] = map_scalar(data_[k], target);
  return out;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).to_string();
    os << "]";
  }
  os << "]";
  return os.str();
}

void Matrix::check_shape_and_ring(const Matrix& other) const {
  if (other.ring_ != ring_) fail(ErrorCode::RingMismatch, "matrix ring mismatch");
  if (other.rows_ != rows_ || other.cols_ != cols_) fail(ErrorCode::DimensionMismatch, "matrix shape mismatch");
}

Matrix& Matrix::operator+=(const Matrix& other) {
  check_shape_and_ring(other);
  for (std::size_t k = 0; k < data_.size(); ++k)
    if (!other.data_[k].is_zero()) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  check_shape_and_ring(other);
  for (std::size_t k = 0; k < data_.size(); ++k)
    if (!other.data_[k].is_zero()) data_[k] -= other.data_[k];
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.ring_ != b.ring_) fail(ErrorCode::RingMismatch, "matrix product ring mismatch");
  if (a.cols_ != b.rows_) fail(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
  if (a.ring_.kind() == RingKind::PrimeField) {
    const Residues ra = to_residues(a);
    const Residues rb = to_residues(b);
    const std::int64_t p = ra.mod;
    Residues rc{p, a.rows_, b.cols_, std::vector<std::int64_t>(a.rows_ * b.cols_, 0)};
    std::vector<__int128> acc(b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      std::fill(acc.begin(), acc.end(), 0);
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const std::int64_t x = ra.at(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          acc[j] += static_cast<__int128>(x) * rb.at(k, j);
          if (acc[j] >= (static_cast<__int128>(1) << 120)) acc[j] %= p;
        }
      }
      for (std::size_t j = 0; j < b.cols_; ++j) rc.at(i, j) = static_cast<std::int64_t>(acc[j] % p);
    }
    return from_residues(a.ring_, rc);
  }
  Matrix c(a.ring_, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& x = a(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Scalar& y = b(k, j);
        if (y.is_zero()) continue;
        c.data_[i * c.cols_ + j] += x * y;
      }
    }
  }
  return c;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.ring_ == b.ring_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

// ---------------------------------------------------------------------------

EchelonForm echelon_form(const Matrix& m) { return echelon_limited(m, m.cols()); }

std::size_t rank(const Matrix& m) {
  require_field(m, "rank");
  if (m.ring().kind() == RingKind::PrimeField) {
    Residues r = to_residues(m);
    return rref_residues(r, r.cols).size();
  }
  return echelon_form(m).pivot_columns.size();
}

Matrix kernel_basis(const Matrix& m) {
  const EchelonForm ef = echelon_form(m);
  const RingSpec& ring = m.ring();
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : ef.pivot_columns) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Matrix basis(ring, n, free_cols.size());
  const Scalar one(ring, 1LL);
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const std::size_t f = free_cols[k];
    basis.set(f, k, one);
    for (std::size_t r = 0; r < ef.pivot_columns.size(); ++r) {
      const Scalar& v = ef.reduced(r, f);
      if (!v.is_zero()) basis.set(ef.pivot_columns[r], k, -v);
    }
  }
  return basis;
}

std::optional<Matrix> solve_linear(const Matrix& m, const Matrix& rhs) {
  if (m.rows() != rhs.rows()) fail(ErrorCode::DimensionMismatch, "solve_linear: row counts differ");
  if (m.ring() != rhs.ring()) fail(ErrorCode::RingMismatch, "solve_linear: ring mismatch");
  require_field(m, "solve_linear");
  const std::size_t n = m.cols();
  const EchelonForm ef = echelon_limited(m.hstack(rhs), n);
  const std::size_t r = ef.pivot_columns.size();
  for (std::size_t i = r; i < m.rows(); ++i)
    for (std::size_t j = n; j < n + rhs.cols(); ++j)
      if (!ef.reduced(i, j).is_zero()) return std::nullopt;
  Matrix x(m.ring(), n, rhs.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < rhs.cols(); ++j) {
      const Scalar& v = ef.reduced(i, n + j);
      if (!v.is_zero()) x.set(ef.pivot_columns[i], j, v);
    }
  return x;
}

Scalar determinant(const Matrix& m) {
  if (!m.is_square()) fail(ErrorCode::DimensionMismatch, "determinant of a non-square matrix");
  const RingSpec& ring = m.ring();
  const std::size_t n = m.rows();
  switch (ring.kind()) {
    case RingKind::PrimeField: {
      Residues r = to_residues(m);
      const std::int64_t p = r.mod;
      std::int64_t det = 1;
      for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = n;
        for (std::size_t i = col; i < n; ++i)
          if (r.at(i, col) != 0) {
            piv = i;
            break;
          }
        if (piv == n) return Scalar(ring);
        if (piv != col) {
          for (std::size_t j = 0; j < n; ++j) std::swap(r.at(piv, j), r.at(col, j));
          det = (p - det) % p;
        }
        det = mulm(det, r.at(col, col), p);
        const std::int64_t inv = invm(r.at(col, col), p);
        for (std::size_t i = col + 1; i < n; ++i) {
          const std::int64_t f = mulm(r.at(i, col), inv, p);
          if (f == 0) continue;
          for (std::size_t j = col; j < n; ++j) {
            std::int64_t x = r.at(i, j) - mulm(f, r.at(col, j), p);
            if (x < 0) x += p;
            r.at(i, j) = x;
          }
        }
      }
      return Scalar(ring, static_cast<long long>(det));
    }
    case RingKind::Rationals:
    case RingKind::LocalizedAtP: {
      // Clear denominators row by row, then Bareiss over Z.
      std::vector<mpz_class> a(n * n);
      mpq_class scale = 1;
      for (std::size_t i = 0; i < n; ++i) {
        mpz_class l = 1;
        for (std::size_t j = 0; j < n; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).rational().get_den_mpz_t());
        for (std::size_t j = 0; j < n; ++j) {
          mpq_class v = m(i, j).rational() * l;
          a[i * n + j] = v.get_num();
        }
        scale /= l;
      }
      mpq_class d(bareiss(std::move(a), n));
      d *= scale;
      d.canonicalize();
      return Scalar::from_rational(ring, d);
    }
    case RingKind::Integers:
    case RingKind::IntegersModPk: {
      std::vector<mpz_class> a(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          a[i * n + j] = ring.kind() == RingKind::Integers ? mpz_class(m(i, j).rational().get_num())
                                                           : mpz_class(static_cast<long>(m(i, j).residue()));
      return Scalar(ring, bareiss(std::move(a), n));
    }
    case RingKind::DualNumbers: {
      // det(A + eps B) = det A + eps * sum_j det(A with column j taken from B).
      const RingSpec base = ring.base();
      Matrix a(base, n, n), b(base, n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          a.set(i, j, m(i, j).real_part());
          b.set(i, j, m(i, j).eps_part());
        }
      Scalar eps(base);
      for (std::size_t j = 0; j < n; ++j) {
        Matrix aj = a;
        for (std::size_t i = 0; i < n; ++i) aj.set(i, j, b(i, j));
        eps += determinant(aj);
      }
      return Scalar::dual(ring, determinant(a), eps);
    }
  }
  fail(ErrorCode::UnsupportedRing, "determinant: unknown ring");
}

Matrix inverse(const Matrix& m) {
  if (!m.is_square()) fail(ErrorCode::DimensionMismatch, "inverse of a non-square matrix");
  const RingSpec& ring = m.ring();
  const std::size_t n = m.rows();
  if (ring.kind() == RingKind::PrimeField) {
    Residues aug{ring.modulus(), n, 2 * n, std::vector<std::int64_t>(2 * n * n, 0)};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = m(i, j).residue();
      aug.at(i, n + i) = 1;
    }
    auto piv = rref_residues(aug, n);
    if (piv.size() != n) fail(ErrorCode::Singular, "matrix is singular over " + ring.to_string());
    Residues inv{aug.mod, n, n, std::vector<std::int64_t>(n * n)};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
    return from_residues(ring, inv);
  }
  if (ring.kind() == RingKind::Integers) {
    Matrix q = inverse_local(m.base_change(RingSpec::rationals()));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (q(i, j).rational().get_den() != 1) fail(ErrorCode::Singular, "matrix is not invertible over Integers");
    return q.base_change(ring);
  }
  return inverse_local(m);
}

}  // namespace lieform

namespace lieform {

RowReducer::RowReducer(const RingSpec& ring, std::size_t cols) : ring_(ring), cols_(cols), basis_(ring, 0, cols) {
  if (!ring.is_field()) fail(ErrorCode::UnsupportedRing, "RowReducer needs a field-kind ring");
}

void RowReducer::add_row(const std::vector<std::pair<std::size_t, Scalar>>& entries) {
  if (ring_.kind() == RingKind::PrimeField) {
    const std::int64_t p = ring_.modulus();
    std::vector<std::int64_t> row(cols_, 0);
    for (const auto& [k, v] : entries) row[k] = (row[k] + v.residue()) % p;
    insert_residues(std::move(row));
    return;
  }
  std::vector<Scalar> row(cols_, Scalar(ring_));
  for (const auto& [k, v] : entries) row[k] += v;
  bool nonzero = false;
  for (const auto& v : row)
    if (!v.is_zero()) nonzero = true;
  if (!nonzero) return;
  pending_.push_back(std::move(row));
  if (pending_.size() >= std::max<std::size_t>(cols_, 16)) flush();
}

void RowReducer::insert_residues(std::vector<std::int64_t> row) {
  const std::int64_t p = ring_.modulus();
  std::size_t pos = 0;
  for (; pos < residue_rows_.size(); ++pos) {
    const auto& [pivot, b] = residue_rows_[pos];
    // Rows with smaller pivots have already been cleared; find our leading entry.
    std::size_t lead = 0;
    while (lead < cols_ && row[lead] == 0) ++lead;
    if (lead == cols_) return;
    if (lead < pivot) break;
    if (lead > pivot) continue;
    const std::int64_t f = row[pivot];
    for (std::size_t j = pivot; j < cols_; ++j) {
      if (b[j] == 0) continue;
      std::int64_t x = row[j] - mulm(f, b[j], p);
      if (x < 0) x += p;
      row[j] = x;
    }
  }
  std::size_t lead = 0;
  while (lead < cols_ && row[lead] == 0) ++lead;
  if (lead == cols_) return;
  // Later rows have larger pivots; the entries at those pivots stay as is.
  const std::int64_t inv = invm(row[lead], p);
  for (std::size_t j = lead; j < cols_; ++j)
    if (row[j] != 0) row[j] = mulm(row[j], inv, p);
  std::size_t at = 0;
  while (at < residue_rows_.size() && residue_rows_[at].first < lead) ++at;
  residue_rows_.insert(residue_rows_.begin() + static_cast<std::ptrdiff_t>(at), {lead, std::move(row)});
}

void RowReducer::flush() {
  if (pending_.empty()) return;
  Matrix block(ring_, pending_.size(), cols_);
  for (std::size_t i = 0; i < pending_.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (!pending_[i][j].is_zero()) block.set(i, j, pending_[i][j]);
  pending_.clear();
  const EchelonForm ef = echelon_form(basis_.vstack(block));
  Matrix kept(ring_, ef.pivot_columns.size(), cols_);
  for (std::size_t i = 0; i < ef.pivot_columns.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (!ef.reduced(i, j).is_zero()) kept.set(i, j, ef.reduced(i, j));
  basis_ = std::move(kept);
}

std::size_t RowReducer::rank() {
  if (ring_.kind() == RingKind::PrimeField) return residue_rows_.size();
  flush();
  return basis_.rows();
}

Matrix RowReducer::kernel() {
  if (ring_.kind() == RingKind::PrimeField) {
    Residues r{ring_.modulus(), residue_rows_.size(), cols_, std::vector<std::int64_t>(residue_rows_.size() * cols_)};
    for (std::size_t i = 0; i < residue_rows_.size(); ++i)
      std::copy(residue_rows_[i].second.begin(), residue_rows_[i].second.end(), r.a.begin() + static_cast<std::ptrdiff_t>(i * cols_));
    if (r.rows == 0) return Matrix::identity(ring_, cols_);
    return kernel_basis(from_residues(ring_, r));
  }
  flush();
  if (basis_.rows() == 0) return Matrix::identity(ring_, cols_);
  return kernel_basis(basis_);
}

SparseMatrix::SparseMatrix(const RingSpec& ring, std::size_t rows, std::size_t cols)
    : ring_(ring), rows_(rows), cols_(cols), data_(rows) {}

void SparseMatrix::add_to(std::size_t r, std::size_t c, const Scalar& v) {
  if (v.is_zero()) return;
  for (auto& [col, x] : data_[r])
    if (col == c) {
      x += v;
      return;
    }
  data_[r].emplace_back(c, v);
}

Matrix SparseMatrix::operator*(const Matrix& m) const {
  if (m.rows() != cols_) fail(ErrorCode::DimensionMismatch, "sparse product shape mismatch");
  Matrix out(ring_, rows_, m.cols());
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& [k, v] : data_[i]) {
      if (v.is_zero()) continue;
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (!m(k, j).is_zero()) out.add_to(i, j, v * m(k, j));
    }
  return out;
}

Matrix SparseMatrix::to_dense() const {
  Matrix out(ring_, rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& [k, v] : data_[i]) out.add_to(i, k, v);
  return out;
}

std::size_t SparseMatrix::rank() const {
  RowReducer r(ring_, cols_);
  for (const auto& row : data_)
    if (!row.empty()) r.add_row(row);
  return r.rank();
}

}  // namespace lieform
