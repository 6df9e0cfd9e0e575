#include "lieform/ring.hpp"

#include <climits>
#include <sstream>

namespace lieform {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidRing: return "InvalidRing";
    case ErrorCode::RingMismatch: return "RingMismatch";
    case ErrorCode::UnsupportedRing: return "UnsupportedRing";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::NotASubspace: return "NotASubspace";
    case ErrorCode::NoCanonicalMorphism: return "NoCanonicalMorphism";
    case ErrorCode::NonIntegralDenominator: return "NonIntegralDenominator";
    case ErrorCode::InvalidRank: return "InvalidRank";
    case ErrorCode::NotClassical: return "NotClassical";
    case ErrorCode::NotPerfect: return "NotPerfect";
    case ErrorCode::NoConstantRatio: return "NoConstantRatio";
    case ErrorCode::NotALieAlgebra: return "NotALieAlgebra";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::NotACocycle: return "NotACocycle";
    case ErrorCode::NotAutomorphism: return "NotAutomorphism";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::HypothesisNotMet: return "HypothesisNotMet";
    case ErrorCode::ActionMissing: return "ActionMissing";
    case ErrorCode::InvalidModule: return "InvalidModule";
    case ErrorCode::NotNilpotentEnough: return "NotNilpotentEnough";
    case ErrorCode::Schema: return "Schema";
  }
  return "Unknown";
}

namespace {

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

std::int64_t add_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  std::int64_t s = a + b;
  return s >= m ? s - m : s;
}

std::int64_t sub_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  std::int64_t s = a - b;
  return s < 0 ? s + m : s;
}

// Inverse of a modulo m, or -1 when gcd(a, m) != 1.
std::int64_t inv_mod(std::int64_t a, std::int64_t m) {
  __int128 t = 0, new_t = 1, r = m, new_r = a;
  while (new_r != 0) {
    __int128 q = r / new_r;
    __int128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) return -1;
  if (t < 0) t += m;
  return static_cast<std::int64_t>(t);
}

std::int64_t reduce(const mpz_class& z, std::int64_t m) {
  return static_cast<std::int64_t>(mpz_fdiv_ui(z.get_mpz_t(), static_cast<unsigned long>(m)));
}

bool divisible(const mpz_class& z, std::int64_t p) {
  return mpz_divisible_ui_p(z.get_mpz_t(), static_cast<unsigned long>(p)) != 0;
}

}  // namespace

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

int p_valuation(const mpq_class& q, std::int64_t p) {
  if (q == 0) return INT_MAX;
  int v = 0;
  mpz_class num = q.get_num();
  mpz_class den = q.get_den();
  while (divisible(num, p)) {
    num /= p;
    ++v;
  }
  while (divisible(den, p)) {
    den /= p;
    --v;
  }
  return v;
}

RingSpec RingSpec::integers() {
  return RingSpec(RingKind::Integers, 0, 0, RingKind::Integers, 0);
}

RingSpec RingSpec::rationals() {
  return RingSpec(RingKind::Rationals, 0, 0, RingKind::Rationals, 0);
}

RingSpec RingSpec::prime_field(std::int64_t p) {
  if (!is_prime(p)) fail(ErrorCode::InvalidRing, "PrimeField modulus " + std::to_string(p) + " is not prime");
  if (p >= (std::int64_t{1} << 62)) fail(ErrorCode::InvalidRing, "prime too large");
  return RingSpec(RingKind::PrimeField, p, 1, RingKind::PrimeField, p);
}

RingSpec RingSpec::integers_mod_pk(std::int64_t p, int k) {
  if (!is_prime(p)) fail(ErrorCode::InvalidRing, "IntegersModPk base " + std::to_string(p) + " is not prime");
  if (k < 1) fail(ErrorCode::InvalidRing, "IntegersModPk exponent must be positive");
  __int128 m = 1;
  for (int i = 0; i < k; ++i) {
    m *= p;
    if (m >= (static_cast<__int128>(1) << 62)) fail(ErrorCode::InvalidRing, "p^k does not fit a residue word");
  }
  return RingSpec(RingKind::IntegersModPk, p, k, RingKind::IntegersModPk, static_cast<std::int64_t>(m));
}

RingSpec RingSpec::localized_at(std::int64_t p) {
  if (!is_prime(p)) fail(ErrorCode::InvalidRing, "LocalizedAtP prime " + std::to_string(p) + " is not prime");
  return RingSpec(RingKind::LocalizedAtP, p, 0, RingKind::LocalizedAtP, 0);
}

RingSpec RingSpec::dual_numbers(const RingSpec& base) {
  if (!base.is_field()) fail(ErrorCode::InvalidRing, "DualNumbers base must be PrimeField or Rationals");
  return RingSpec(RingKind::DualNumbers, base.p_, base.k_, base.kind_, base.modulus_);
}

RingSpec RingSpec::base() const {
  if (kind_ != RingKind::DualNumbers) fail(ErrorCode::UnsupportedRing, "base() is only defined for DualNumbers");
  if (base_kind_ == RingKind::PrimeField) return prime_field(p_);
  return rationals();
}

std::string RingSpec::to_string() const {
  switch (kind_) {
    case RingKind::Integers: return "Integers";
    case RingKind::Rationals: return "Rationals";
    case RingKind::PrimeField: return "PrimeField(" + std::to_string(p_) + ")";
    case RingKind::IntegersModPk:
      return "IntegersModPk(" + std::to_string(p_) + "," + std::to_string(k_) + ")";
    case RingKind::LocalizedAtP: return "LocalizedAtP(" + std::to_string(p_) + ")";
    case RingKind::DualNumbers: return "DualNumbers(" + base().to_string() + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------

Scalar::Scalar(const RingSpec& ring) : ring_(ring) {
  if (ring.kind() == RingKind::DualNumbers) {
    if (ring.uses_residues()) value_ = DualResidue{0, 0};
    else value_ = DualRational{};
  } else if (ring.uses_residues()) {
    value_ = std::int64_t{0};
  } else {
    value_ = mpq_class(0);
  }
}

Scalar::Scalar(const RingSpec& ring, long long value) : ring_(ring) {
  const std::int64_t m = ring.modulus();
  if (m == 0) {
    if (ring.kind() == RingKind::DualNumbers) value_ = DualRational{mpq_class(static_cast<long>(value)), mpq_class(0)};
    else value_ = mpq_class(static_cast<long>(value));
    return;
  }
  std::int64_t r = value % m;
  if (r < 0) r += m;
  if (ring.kind() == RingKind::DualNumbers) value_ = DualResidue{r, 0};
  else value_ = r;
}

Scalar::Scalar(const RingSpec& ring, const mpz_class& value) : ring_(ring) {
  const std::int64_t m = ring.modulus();
  if (ring.kind() == RingKind::DualNumbers) {
    if (m != 0) value_ = DualResidue{reduce(value, m), 0};
    else value_ = DualRational{mpq_class(value), mpq_class(0)};
  } else if (m != 0) {
    value_ = reduce(value, m);
  } else {
    value_ = mpq_class(value);
  }
}

Scalar Scalar::from_rational(const RingSpec& ring, const mpq_class& raw) {
  if (raw.get_den() == 0) fail(ErrorCode::NonIntegralDenominator, "zero denominator");
  mpq_class value = raw;
  value.canonicalize();
  const mpz_class& num = value.get_num();
  const mpz_class& den = value.get_den();
  switch (ring.kind()) {
    case RingKind::Integers:
      if (den != 1) fail(ErrorCode::NonIntegralDenominator, "value " + value.get_str() + " is not an integer");
      return Scalar(ring, Value(value));
    case RingKind::Rationals:
      return Scalar(ring, Value(value));
    case RingKind::LocalizedAtP:
      if (divisible(den, ring.prime()))
        fail(ErrorCode::NonIntegralDenominator,
             "denominator of " + value.get_str() + " is divisible by " + std::to_string(ring.prime()));
      return Scalar(ring, Value(value));
    case RingKind::PrimeField:
    case RingKind::IntegersModPk: {
      const std::int64_t m = ring.modulus();
      std::int64_t d = inv_mod(reduce(den, m), m);
      if (d < 0)
        fail(ErrorCode::NonIntegralDenominator,
             "denominator of " + value.get_str() + " is not a unit in " + ring.to_string());
      return Scalar(ring, Value(mul_mod(reduce(num, m), d, m)));
    }
    case RingKind::DualNumbers: {
      Scalar a = from_rational(ring.base(), value);
      return dual(ring, a, Scalar(ring.base()));
    }
  }
  fail(ErrorCode::InvalidRing, "unknown ring kind");
}

Scalar Scalar::dual(const RingSpec& ring, const Scalar& a, const Scalar& b) {
  if (ring.kind() != RingKind::DualNumbers) fail(ErrorCode::RingMismatch, "dual() needs a DualNumbers ring");
  const RingSpec base = ring.base();
  if (a.ring() != base || b.ring() != base) fail(ErrorCode::RingMismatch, "dual components must lie in the base ring");
  if (ring.uses_residues()) return Scalar(ring, Value(DualResidue{a.residue(), b.residue()}));
  return Scalar(ring, Value(DualRational{a.rational(), b.rational()}));
}

void Scalar::check_same_ring(const Scalar& other) const {
  if (ring_ != other.ring_)
    fail(ErrorCode::RingMismatch, "ring mismatch: " + ring_.to_string() + " vs " + other.ring_.to_string());
}

bool Scalar::is_zero() const {
  switch (value_.index()) {
    case 0: return std::get<0>(value_) == 0;
    case 1: return std::get<1>(value_) == 0;
    case 2: return std::get<2>(value_).a == 0 && std::get<2>(value_).b == 0;
    default: return std::get<3>(value_).a == 0 && std::get<3>(value_).b == 0;
  }
}

bool Scalar::is_one() const {
  switch (value_.index()) {
    case 0: return std::get<0>(value_) == 1 % ring_.modulus();
    case 1: return std::get<1>(value_) == 1;
    case 2: return std::get<2>(value_).a == 1 % ring_.modulus() && std::get<2>(value_).b == 0;
    default: return std::get<3>(value_).a == 1 && std::get<3>(value_).b == 0;
  }
}

bool Scalar::is_unit() const {
  switch (ring_.kind()) {
    case RingKind::Integers: {
      const mpq_class& q = std::get<1>(value_);
      return q == 1 || q == -1;
    }
    case RingKind::Rationals: return std::get<1>(value_) != 0;
    case RingKind::PrimeField: return std::get<0>(value_) != 0;
    case RingKind::IntegersModPk: return std::get<0>(value_) % ring_.prime() != 0;
    case RingKind::LocalizedAtP: {
      const mpq_class& q = std::get<1>(value_);
      return q != 0 && !divisible(q.get_num(), ring_.prime());
    }
    case RingKind::DualNumbers:
      if (ring_.uses_residues()) return std::get<2>(value_).a != 0;
      return std::get<3>(value_).a != 0;
  }
  return false;
}

Scalar Scalar::inverse() const {
  if (!is_unit()) fail(ErrorCode::NotInvertible, to_string() + " is not a unit in " + ring_.to_string());
  switch (value_.index()) {
    case 0: return Scalar(ring_, Value(inv_mod(std::get<0>(value_), ring_.modulus())));
    case 1: {
      mpq_class inv = 1 / std::get<1>(value_);
      return Scalar(ring_, Value(inv));
    }
    case 2: {
      const auto& d = std::get<2>(value_);
      const std::int64_t m = ring_.modulus();
      std::int64_t ia = inv_mod(d.a, m);
      std::int64_t ib = sub_mod(0, mul_mod(d.b, mul_mod(ia, ia, m), m), m);
      return Scalar(ring_, Value(DualResidue{ia, ib}));
    }
    default: {
      const auto& d = std::get<3>(value_);
      mpq_class ia = 1 / d.a;
      mpq_class ib = -d.b * ia * ia;
      return Scalar(ring_, Value(DualRational{ia, ib}));
    }
  }
}

mpq_class Scalar::rational() const {
  if (value_.index() != 1) fail(ErrorCode::UnsupportedRing, "rational() on " + ring_.to_string());
  return std::get<1>(value_);
}

std::int64_t Scalar::residue() const {
  if (value_.index() != 0) fail(ErrorCode::UnsupportedRing, "residue() on " + ring_.to_string());
  return std::get<0>(value_);
}

Scalar Scalar::real_part() const {
  if (value_.index() == 2) return Scalar(ring_.base(), Value(std::get<2>(value_).a));
  if (value_.index() == 3) return Scalar(ring_.base(), Value(std::get<3>(value_).a));
  fail(ErrorCode::UnsupportedRing, "real_part() on " + ring_.to_string());
}

Scalar Scalar::eps_part() const {
  if (value_.index() == 2) return Scalar(ring_.base(), Value(std::get<2>(value_).b));
  if (value_.index() == 3) return Scalar(ring_.base(), Value(std::get<3>(value_).b));
  fail(ErrorCode::UnsupportedRing, "eps_part() on " + ring_.to_string());
}

std::string Scalar::to_string() const {
  switch (value_.index()) {
    case 0: return std::to_string(std::get<0>(value_));
    case 1: return std::get<1>(value_).get_str();
    case 2: {
      const auto& d = std::get<2>(value_);
      if (d.b == 0) return std::to_string(d.a);
      return std::to_string(d.a) + "+" + std::to_string(d.b) + "*eps";
    }
    default: {
      const auto& d = std::get<3>(value_);
      if (d.b == 0) return d.a.get_str();
      return d.a.get_str() + (d.b < 0 ? "" : "+") + d.b.get_str() + "*eps";
    }
  }
}

Scalar Scalar::operator-() const {
  const std::int64_t m = ring_.modulus();
  switch (value_.index()) {
    case 0: return Scalar(ring_, Value(sub_mod(0, std::get<0>(value_), m)));
    case 1: return Scalar(ring_, Value(mpq_class(-std::get<1>(value_))));
    case 2: {
      const auto& d = std::get<2>(value_);
      return Scalar(ring_, Value(DualResidue{sub_mod(0, d.a, m), sub_mod(0, d.b, m)}));
    }
    default: {
      const auto& d = std::get<3>(value_);
      return Scalar(ring_, Value(DualRational{-d.a, -d.b}));
    }
  }
}

Scalar& Scalar::operator+=(const Scalar& other) {
  check_same_ring(other);
  const std::int64_t m = ring_.modulus();
  switch (value_.index()) {
    case 0: {
      auto& v = std::get<0>(value_);
      v = add_mod(v, std::get<0>(other.value_), m);
      break;
    }
    case 1: std::get<1>(value_) += std::get<1>(other.value_); break;
    case 2: {
      auto& d = std::get<2>(value_);
      const auto& e = std::get<2>(other.value_);
      d.a = add_mod(d.a, e.a, m);
      d.b = add_mod(d.b, e.b, m);
      break;
    }
    default: {
      auto& d = std::get<3>(value_);
      const auto& e = std::get<3>(other.value_);
      d.a += e.a;
      d.b += e.b;
    }
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& other) {
  check_same_ring(other);
  const std::int64_t m = ring_.modulus();
  switch (value_.index()) {
    case 0: {
      auto& v = std::get<0>(value_);
      v = sub_mod(v, std::get<0>(other.value_), m);
      break;
    }
    case 1: std::get<1>(value_) -= std::get<1>(other.value_); break;
    case 2: {
      auto& d = std::get<2>(value_);
      const auto& e = std::get<2>(other.value_);
      d.a = sub_mod(d.a, e.a, m);
      d.b = sub_mod(d.b, e.b, m);
      break;
    }
    default: {
      auto& d = std::get<3>(value_);
      const auto& e = std::get<3>(other.value_);
      d.a -= e.a;
      d.b -= e.b;
    }
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& other) {
  check_same_ring(other);
  const std::int64_t m = ring_.modulus();
  switch (value_.index()) {
    case 0: {
      auto& v = std::get<0>(value_);
      v = mul_mod(v, std::get<0>(other.value_), m);
      break;
    }
    case 1: std::get<1>(value_) *= std::get<1>(other.value_); break;
    case 2: {
      auto& d = std::get<2>(value_);
      const auto& e = std::get<2>(other.value_);
      std::int64_t b = add_mod(mul_mod(d.a, e.b, m), mul_mod(d.b, e.a, m), m);
      d.a = mul_mod(d.a, e.a, m);
      d.b = b;
      break;
    }
    default: {
      auto& d = std::get<3>(value_);
      const auto& e = std::get<3>(other.value_);
      mpq_class b = d.a * e.b + d.b * e.a;
      d.a *= e.a;
      d.b = b;
    }
  }
  return *this;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.ring_ != b.ring_) return false;
  switch (a.value_.index()) {
    case 0: return std::get<0>(a.value_) == std::get<0>(b.value_);
    case 1: return std::get<1>(a.value_) == std::get<1>(b.value_);
    case 2:
      return std::get<2>(a.value_).a == std::get<2>(b.value_).a &&
             std::get<2>(a.value_).b == std::get<2>(b.value_).b;
    default:
      return std::get<3>(a.value_).a == std::get<3>(b.value_).a &&
             std::get<3>(a.value_).b == std::get<3>(b.value_).b;
  }
}

// ---------------------------------------------------------------------------

bool has_canonical_morphism(const RingSpec& from, const RingSpec& to) {
  if (from == to) return true;
  if (to.kind() == RingKind::DualNumbers) {
    return from.kind() != RingKind::DualNumbers && has_canonical_morphism(from, to.base());
  }
  switch (from.kind()) {
    case RingKind::Integers: return true;
    case RingKind::Rationals:
      // Partial: defined on values whose denominators are units in the target.
      return true;
    case RingKind::LocalizedAtP:
      switch (to.kind()) {
        case RingKind::Rationals: return true;
        case RingKind::PrimeField:
        case RingKind::IntegersModPk: return to.prime() == from.prime();
        default: return false;
      }
    case RingKind::PrimeField: return false;
    case RingKind::IntegersModPk:
      if (to.kind() == RingKind::PrimeField) return to.prime() == from.prime();
      if (to.kind() == RingKind::IntegersModPk) return to.prime() == from.prime() && to.exponent() <= from.exponent();
      return false;
    case RingKind::DualNumbers: return to == from.base();
  }
  return false;
}

Scalar map_scalar(const Scalar& s, const RingSpec& target) {
  const RingSpec& from = s.ring();
  if (from == target) return s;
  if (!has_canonical_morphism(from, target))
    fail(ErrorCode::NoCanonicalMorphism, "no canonical morphism " + from.to_string() + " -> " + target.to_string());
  if (target.kind() == RingKind::DualNumbers) {
    return Scalar::dual(target, map_scalar(s, target.base()), Scalar(target.base()));
  }
  switch (from.kind()) {
    case RingKind::Integers:
    case RingKind::Rationals:
    case RingKind::LocalizedAtP:
      return Scalar::from_rational(target, s.rational());
    case RingKind::IntegersModPk:
      return Scalar(target, mpz_class(static_cast<long>(s.residue())));
    case RingKind::DualNumbers:
      return s.real_part();
    case RingKind::PrimeField:
      break;
  }
  fail(ErrorCode::NoCanonicalMorphism, "no canonical morphism " + from.to_string() + " -> " + target.to_string());
}

}  // namespace lieform
