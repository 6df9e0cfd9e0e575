#pragma once

#include <cstdint>

#include "lieform/matrix.hpp"

namespace lieform {

/// Basis (columns, ambient coordinates, over Rationals) of the Z_(p)-lattice
/// span(lattice_basis) ∩ span(subspace_basis). Each returned vector has
/// primitive integer coordinates in the lattice basis with first nonzero
/// coordinate positive.
Matrix saturate(const Matrix& lattice_basis, const Matrix& subspace_basis, std::int64_t p);

/// Coordinates of the columns of `vectors` in the (independent) columns of
/// `basis`, over Rationals. Throws NotASubspace when some column is outside
/// the span.
Matrix lattice_coordinates(const Matrix& basis, const Matrix& vectors);

/// True when every entry is a Z_(p) element (denominator prime to p).
bool is_p_integral(const Matrix& m, std::int64_t p);

/// Columns of `m` (over Rationals) that form a basis of its column span,
/// chosen greedily left to right.
Matrix independent_columns(const Matrix& m);

}  // namespace lieform
