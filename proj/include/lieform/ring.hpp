#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include <gmpxx.h>

#include "lieform/errors.hpp"

namespace lieform {

enum class RingKind {
  Integers,
  Rationals,
  PrimeField,
  IntegersModPk,
  LocalizedAtP,
  DualNumbers,
};

bool is_prime(std::int64_t n);

/// p-adic valuation of a nonzero rational; zero has valuation "infinity",
/// reported here as INT32_MAX.
int p_valuation(const mpq_class& q, std::int64_t p);

/// Coefficient ring descriptor. DualNumbers carries its base (PrimeField(p)
/// or Rationals) inline, so the whole thing is a small comparable value.
class RingSpec {
 public:
  static RingSpec integers();
  static RingSpec rationals();
  static RingSpec prime_field(std::int64_t p);
  static RingSpec integers_mod_pk(std::int64_t p, int k);
  static RingSpec localized_at(std::int64_t p);
  static RingSpec dual_numbers(const RingSpec& base);

  RingKind kind() const noexcept { return kind_; }
  std::int64_t prime() const noexcept { return p_; }
  int exponent() const noexcept { return k_; }

  /// Modulus of a residue representation: p for PrimeField, p^k for
  /// IntegersModPk, and the base modulus for DualNumbers over PrimeField.
  /// Zero for rational representations.
  std::int64_t modulus() const noexcept { return modulus_; }

  bool is_field() const noexcept {
    return kind_ == RingKind::Rationals || kind_ == RingKind::PrimeField;
  }
  bool uses_residues() const noexcept { return modulus_ != 0; }

  /// Base ring of DualNumbers; throws for other kinds.
  RingSpec base() const;

  std::string to_string() const;

  friend bool operator==(const RingSpec& a, const RingSpec& b) noexcept {
    return a.kind_ == b.kind_ && a.p_ == b.p_ && a.k_ == b.k_ &&
           a.base_kind_ == b.base_kind_;
  }
  friend bool operator!=(const RingSpec& a, const RingSpec& b) noexcept {
    return !(a == b);
  }

 private:
  RingSpec(RingKind kind, std::int64_t p, int k, RingKind base_kind,
           std::int64_t modulus)
      : kind_(kind), p_(p), k_(k), base_kind_(base_kind), modulus_(modulus) {}

  RingKind kind_;
  std::int64_t p_;
  int k_;
  RingKind base_kind_;
  std::int64_t modulus_;
};

/// Exact element of a RingSpec, always in canonical form: reduced fractions
/// with positive denominator, residues in [0, modulus).
class Scalar {
 public:
  explicit Scalar(const RingSpec& ring);
  Scalar(const RingSpec& ring, long long value);
  Scalar(const RingSpec& ring, const mpz_class& value);

  /// Image of a rational; throws NonIntegralDenominator when the denominator
  /// is not invertible in the ring.
  static Scalar from_rational(const RingSpec& ring, const mpq_class& value);
  /// a + b*eps in DualNumbers(base); a and b must live in the base ring.
  static Scalar dual(const RingSpec& ring, const Scalar& a, const Scalar& b);

  const RingSpec& ring() const noexcept { return ring_; }

  bool is_zero() const;
  bool is_one() const;
  bool is_unit() const;
  Scalar inverse() const;

  /// Exact rational value for Integers, Rationals and LocalizedAtP.
  mpq_class rational() const;
  /// Residue in [0, modulus) for PrimeField and IntegersModPk.
  std::int64_t residue() const;
  /// Components of a dual number, as base-ring scalars.
  Scalar real_part() const;
  Scalar eps_part() const;

  std::string to_string() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& other);
  Scalar& operator-=(const Scalar& other);
  Scalar& operator*=(const Scalar& other);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

 private:
  struct DualResidue {
    std::int64_t a;
    std::int64_t b;
  };
  struct DualRational {
    mpq_class a;
    mpq_class b;
  };
  using Value = std::variant<std::int64_t, mpq_class, DualResidue, DualRational>;

  Scalar(const RingSpec& ring, Value value) : ring_(ring), value_(std::move(value)) {}
  void check_same_ring(const Scalar& other) const;

  RingSpec ring_;
  Value value_;
};

/// Canonical ring morphism applied to one scalar (Integers -> anything,
/// Z_(p) -> F_p, Z/p^k -> F_p, Q -> F_p when the denominator is a unit, ...).
Scalar map_scalar(const Scalar& s, const RingSpec& target);
bool has_canonical_morphism(const RingSpec& from, const RingSpec& to);

}  // namespace lieform
