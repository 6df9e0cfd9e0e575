#pragma once

#include <cstddef>
#include <initializer_list>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lieform/ring.hpp"

namespace lieform {

/// Dense row-major matrix over a RingSpec. Every entry shares the matrix's
/// ring; `set` enforces that.
class Matrix {
 public:
  Matrix(const RingSpec& ring, std::size_t rows, std::size_t cols);

  static Matrix identity(const RingSpec& ring, std::size_t n);
  static Matrix from_rows(const RingSpec& ring, std::initializer_list<std::initializer_list<long long>> rows);
  static Matrix from_ints(const RingSpec& ring, std::size_t rows, std::size_t cols, const std::vector<long long>& values);
  static Matrix from_rationals(const RingSpec& ring, std::size_t rows, std::size_t cols,
                               const std::vector<mpq_class>& values);
  /// Column vector from scalars (all in `ring`).
  static Matrix column_vector(const RingSpec& ring, const std::vector<Scalar>& entries);

  const RingSpec& ring() const noexcept { return ring_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, const Scalar& value);
  void add_to(std::size_t r, std::size_t c, const Scalar& value);

  Matrix row(std::size_t r) const;
  Matrix column(std::size_t c) const;
  Matrix columns(std::size_t begin, std::size_t end) const;
  Matrix transpose() const;
  Matrix hstack(const Matrix& right) const;
  Matrix vstack(const Matrix& below) const;

  Matrix scaled(const Scalar& s) const;
  Scalar trace() const;
  bool is_zero() const;
  bool is_square() const noexcept { return rows_ == cols_; }
  bool is_symmetric() const;

  /// Entrywise image under the canonical morphism to `target`.
  Matrix base_change(const RingSpec& target) const;

  std::string to_string() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b);
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

 private:
  void check_shape_and_ring(const Matrix& other) const;

  RingSpec ring_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Scalar> data_;
};

/// Row rank by exact elimination; field-kind rings only.
std::size_t rank(const Matrix& m);

/// Reduced row echelon form and pivot columns (field-kind rings only).
/// Pivot choice is the first nonzero entry scanning columns left to right.
struct EchelonForm {
  Matrix reduced;
  std::vector<std::size_t> pivot_columns;
};
EchelonForm echelon_form(const Matrix& m);

/// Basis of {x : m x = 0} as the columns of the result (rows = m.cols()).
/// Each basis vector has a 1 in one free column and 0 in the other free columns.
Matrix kernel_basis(const Matrix& m);

/// One solution of m x = rhs with free variables set to 0, or nullopt.
std::optional<Matrix> solve_linear(const Matrix& m, const Matrix& rhs);

Scalar determinant(const Matrix& m);

/// Inverse over the matrix's ring; throws Singular when det is not a unit.
Matrix inverse(const Matrix& m);

/// Accumulates linear equations row by row and keeps only an echelon basis
/// of their span, so tall sparse systems never materialize. Field-kind rings.
class RowReducer {
 public:
  RowReducer(const RingSpec& ring, std::size_t cols);

  /// Adds the row sum_k coeff_k e_{index_k}; repeated indices accumulate.
  void add_row(const std::vector<std::pair<std::size_t, Scalar>>& entries);
  std::size_t rank();
  /// Basis of the common solution space, as columns.
  Matrix kernel();

 private:
  void insert_residues(std::vector<std::int64_t> row);
  void flush();

  RingSpec ring_;
  std::size_t cols_;
  // PrimeField: echelon rows as residues, sorted by pivot column.
  std::vector<std::pair<std::size_t, std::vector<std::int64_t>>> residue_rows_;
  // Rationals: blocks of pending rows merged into basis_ by elimination.
  Matrix basis_;
  std::vector<std::vector<Scalar>> pending_;
};

/// Row-sparse matrix for large differentials.
class SparseMatrix {
 public:
  SparseMatrix(const RingSpec& ring, std::size_t rows, std::size_t cols);

  const RingSpec& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  void add_to(std::size_t r, std::size_t c, const Scalar& v);
  const std::vector<std::pair<std::size_t, Scalar>>& row(std::size_t r) const { return data_[r]; }

  Matrix operator*(const Matrix& m) const;
  Matrix to_dense() const;
  std::size_t rank() const;

 private:
  RingSpec ring_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::vector<std::pair<std::size_t, Scalar>>> data_;
};

}  // namespace lieform
