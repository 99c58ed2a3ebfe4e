#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "syzygy/errors.hpp"

namespace syz {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

constexpr std::uint64_t kDefaultPrime = 32003;
constexpr std::uint64_t kSecondPrime = 65537;

/// Which exact field scalars live in.  Prime moduli are capped at 2^31 so
/// products fit in 64 bits without widening.
struct FieldSpec {
  enum class Kind { prime_field, rationals };

  Kind kind = Kind::prime_field;
  std::uint64_t modulus = kDefaultPrime;

  static FieldSpec prime(std::uint64_t p) {
    FieldSpec f;
    f.kind = Kind::prime_field;
    f.modulus = p;
    f.validate();
    return f;
  }
  static FieldSpec rationals() {
    FieldSpec f;
    f.kind = Kind::rationals;
    f.modulus = 0;
    return f;
  }

  void validate() const {
    if (kind == Kind::prime_field) {
      if (modulus >= (1ull << 31))
        throw config_error("field modulus too large (must be < 2^31)");
      if (!is_prime(modulus))
        throw config_error("field modulus " + std::to_string(modulus) +
                           " is not prime");
    }
  }

  std::string describe() const {
    return kind == Kind::rationals ? "QQ" : "GF(" + std::to_string(modulus) + ")";
  }
};

class PrimeField {
public:
  using Elt = std::uint32_t;

  explicit PrimeField(std::uint64_t p) : p_(static_cast<std::uint32_t>(p)) {
    FieldSpec::prime(p);  // validates, p < 2^31
    // floor(2^64 / p); for a 62-bit product the estimated quotient is off
    // by at most one, fixed by a single conditional subtract
    barrett_ = static_cast<std::uint64_t>(~0ull) / p_;
  }

  std::uint64_t modulus() const { return p_; }

  Elt zero() const { return 0; }
  Elt one() const { return 1; }
  bool is_zero(Elt a) const { return a == 0; }
  bool is_minus_one(Elt a) const { return a + 1 == p_; }
  Elt add(Elt a, Elt b) const {
    Elt s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Elt sub(Elt a, Elt b) const { return a >= b ? a - b : a + p_ - b; }
  Elt neg(Elt a) const { return a == 0 ? 0 : p_ - a; }
  Elt mul(Elt a, Elt b) const {
    // Barrett reduction of the 62-bit product
    std::uint64_t t = static_cast<std::uint64_t>(a) * b;
    std::uint64_t q = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(t) * barrett_) >> 64);
    std::uint64_t r = t - q * p_;
    if (r >= p_) r -= p_;
    return static_cast<Elt>(r);
  }
  Elt inv(Elt a) const {
    // extended Euclid; a != 0
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(p_), new_r = static_cast<std::int64_t>(a);
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      std::int64_t tmp = t - q * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - q * new_r;
      r = new_r;
      new_r = tmp;
    }
    if (t < 0) t += static_cast<std::int64_t>(p_);
    return static_cast<Elt>(t);
  }
  Elt from_int(std::int64_t v) const {
    std::int64_t m = v % static_cast<std::int64_t>(p_);
    if (m < 0) m += static_cast<std::int64_t>(p_);
    return static_cast<Elt>(m);
  }

private:
  std::uint32_t p_;
  std::uint64_t barrett_;
};

class RationalField {
public:
  using Elt = Rational;

  Elt zero() const { return Elt(0); }
  Elt one() const { return Elt(1); }
  bool is_zero(const Elt& a) const { return a == 0; }
  bool is_minus_one(const Elt& a) const { return a == -1; }
  Elt add(const Elt& a, const Elt& b) const { return a + b; }
  Elt sub(const Elt& a, const Elt& b) const { return a - b; }
  Elt neg(const Elt& a) const { return -a; }
  Elt mul(const Elt& a, const Elt& b) const { return a * b; }
  Elt inv(const Elt& a) const { return 1 / a; }
  Elt from_int(std::int64_t v) const { return Elt(v); }
};

/// How ranks are computed: over one field, or over two primes with a
/// rational fallback when they disagree.
struct FieldMode {
  enum class Kind { single, certified };

  Kind kind = Kind::single;
  FieldSpec spec;                         // single mode
  std::uint64_t prime_a = kDefaultPrime;  // certified mode
  std::uint64_t prime_b = kSecondPrime;

  static FieldMode single(FieldSpec f) {
    FieldMode m;
    m.kind = Kind::single;
    m.spec = f;
    return m;
  }
  static FieldMode certified(std::uint64_t a = kDefaultPrime,
                             std::uint64_t b = kSecondPrime) {
    if (a == b) throw config_error("certified mode needs two distinct primes");
    FieldMode m;
    m.kind = Kind::certified;
    m.prime_a = a;
    m.prime_b = b;
    m.spec = FieldSpec::prime(a);
    FieldSpec::prime(b);
    return m;
  }

  std::string describe() const {
    if (kind == Kind::single) return spec.describe();
    return "certified(GF(" + std::to_string(prime_a) + "),GF(" +
           std::to_string(prime_b) + "))";
  }
};

}  // namespace syz
