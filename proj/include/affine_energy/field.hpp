#pragma once

// Exact scalar backends: the prime field F_p (p odd, p < 2^63) and the
// rationals. Both expose the same value-type interface so that every
// algorithm in the library is written once as a template over the scalar.

#include <gmpxx.h>

#include <cassert>
#include <charconv>
#include <compare>
#include <concepts>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>

#include "affine_energy/error.hpp"

namespace affine_energy {

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (e != 0) {
    if (e & 1U) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    e >>= 1U;
  }
  return r;
}

// Deterministic Miller-Rabin; these witnesses are exact for all n < 2^64.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline std::uint64_t hash_mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31U);
}

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return static_cast<std::size_t>(hash_mix(seed ^ (v + 0x9E3779B97F4A7C15ULL + (seed << 6U) + (seed >> 2U))));
}

inline std::size_t hash_mpz(const mpz_class& z) {
  const mpz_srcptr raw = z.get_mpz_t();
  std::size_t h = static_cast<std::size_t>(mpz_sgn(raw) + 1);
  const std::size_t limbs = mpz_size(raw);
  for (std::size_t i = 0; i < limbs; ++i) {
    h = hash_combine(h, static_cast<std::size_t>(mpz_getlimbn(raw, static_cast<mp_size_t>(i))));
  }
  return h;
}

// Parses an optionally signed decimal integer of arbitrary length.
inline mpz_class parse_integer(std::string_view text) {
  std::string_view digits = text;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  if (digits.empty()) throw Error(ErrorCode::parse_error, "empty integer in '" + std::string(text) + "'");
  for (char c : digits) {
    if (c < '0' || c > '9') throw Error(ErrorCode::parse_error, "not a decimal integer: '" + std::string(text) + "'");
  }
  std::string s(text);
  if (s.front() == '+') s.erase(0, 1);
  return mpz_class(s, 10);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\n')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

class PrimeScalar;

/// Which field the scalars of a computation live in.
class FieldSpec {
 public:
  enum class Kind { prime, rational };

  static FieldSpec rational() { return FieldSpec(Kind::rational, 0); }

  static FieldSpec prime(std::uint64_t p) {
    if (p < 3 || p % 2 == 0 || p >= (1ULL << 63U) || !detail::is_prime_u64(p)) {
      throw Error(ErrorCode::invalid_field, "modulus must be an odd prime below 2^63, got " + std::to_string(p));
    }
    return FieldSpec(Kind::prime, p);
  }

  /// Accepts "Q" or "Fp:<p>".
  static FieldSpec parse(std::string_view text) {
    text = detail::trim(text);
    if (text == "Q" || text == "q") return rational();
    if (text.substr(0, 3) == "Fp:" || text.substr(0, 3) == "fp:") {
      std::string_view num = text.substr(3);
      std::uint64_t p = 0;
      auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), p);
      if (ec != std::errc() || ptr != num.data() + num.size()) {
        throw Error(ErrorCode::parse_error, "bad field modulus in '" + std::string(text) + "'");
      }
      return prime(p);
    }
    throw Error(ErrorCode::parse_error, "unknown field '" + std::string(text) + "' (expected Q or Fp:<p>)");
  }

  Kind kind() const noexcept { return kind_; }
  bool is_prime() const noexcept { return kind_ == Kind::prime; }
  std::uint64_t characteristic() const noexcept { return p_; }
  std::uint64_t modulus() const noexcept { return p_; }

  std::string to_string() const { return is_prime() ? "Fp:" + std::to_string(p_) : std::string("Q"); }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  friend class PrimeScalar;
  FieldSpec(Kind kind, std::uint64_t p) : kind_(kind), p_(p) {}

  Kind kind_;
  std::uint64_t p_;
};

/// Residue class modulo an odd prime, stored as its representative in [0, p).
class PrimeScalar {
 public:
  PrimeScalar(std::uint64_t residue, std::uint64_t modulus) : value_(residue % modulus), modulus_(modulus) {}

  static PrimeScalar from_int(const FieldSpec& field, std::int64_t n) {
    assert(field.is_prime());
    const std::uint64_t p = field.modulus();
    const auto mag = static_cast<std::uint64_t>(n < 0 ? -(n + 1) : n) + (n < 0 ? 1 : 0);
    const std::uint64_t r = mag % p;
    return PrimeScalar(n < 0 && r != 0 ? p - r : r, p);
  }

  static PrimeScalar from_mpz(const FieldSpec& field, const mpz_class& n) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), n.get_mpz_t(), field.modulus());
    return PrimeScalar(r.get_ui(), field.modulus());
  }

  /// "7", "-3" or "num/den"; integers are reduced mod p, fractions must
  /// have a denominator invertible mod p.
  static PrimeScalar parse(std::string_view text, const FieldSpec& field) {
    text = detail::trim(text);
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return from_mpz(field, detail::parse_integer(text));
    const mpz_class num = detail::parse_integer(text.substr(0, slash));
    const mpz_class den = detail::parse_integer(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::zero_denominator, "'" + std::string(text) + "'");
    const PrimeScalar d = from_mpz(field, den);
    if (d.is_zero()) {
      throw Error(ErrorCode::not_in_field, "denominator of '" + std::string(text) + "' vanishes in " + field.to_string());
    }
    return from_mpz(field, num) / d;
  }

  FieldSpec field() const { return FieldSpec(FieldSpec::Kind::prime, modulus_); }
  std::uint64_t residue() const noexcept { return value_; }
  std::uint64_t modulus() const noexcept { return modulus_; }
  bool is_zero() const noexcept { return value_ == 0; }
  bool is_one() const noexcept { return value_ == 1; }

  PrimeScalar inv() const {
    if (value_ == 0) throw Error(ErrorCode::zero_inverse, "0 has no inverse in Fp:" + std::to_string(modulus_));
    // Extended Euclid on signed 128-bit to stay exact for p < 2^63.
    __int128 t = 0, new_t = 1;
    __int128 r = modulus_, new_r = value_;
    while (new_r != 0) {
      const __int128 q = r / new_r;
      t = std::exchange(new_t, t - q * new_t);
      r = std::exchange(new_r, r - q * new_r);
    }
    if (t < 0) t += modulus_;
    return PrimeScalar(static_cast<std::uint64_t>(t), modulus_);
  }

  std::string to_string() const { return std::to_string(value_); }

  friend PrimeScalar operator+(const PrimeScalar& x, const PrimeScalar& y) {
    assert(x.modulus_ == y.modulus_);
    std::uint64_t s = x.value_ + y.value_;
    if (s >= x.modulus_) s -= x.modulus_;
    return PrimeScalar(s, x.modulus_, Raw{});
  }
  friend PrimeScalar operator-(const PrimeScalar& x, const PrimeScalar& y) {
    assert(x.modulus_ == y.modulus_);
    return PrimeScalar(x.value_ >= y.value_ ? x.value_ - y.value_ : x.value_ + x.modulus_ - y.value_, x.modulus_, Raw{});
  }
  friend PrimeScalar operator-(const PrimeScalar& x) {
    return PrimeScalar(x.value_ == 0 ? 0 : x.modulus_ - x.value_, x.modulus_, Raw{});
  }
  friend PrimeScalar operator*(const PrimeScalar& x, const PrimeScalar& y) {
    assert(x.modulus_ == y.modulus_);
    return PrimeScalar(detail::mulmod(x.value_, y.value_, x.modulus_), x.modulus_, Raw{});
  }
  friend PrimeScalar operator/(const PrimeScalar& x, const PrimeScalar& y) { return x * y.inv(); }

  PrimeScalar& operator+=(const PrimeScalar& y) { return *this = *this + y; }
  PrimeScalar& operator-=(const PrimeScalar& y) { return *this = *this - y; }
  PrimeScalar& operator*=(const PrimeScalar& y) { return *this = *this * y; }

  friend bool operator==(const PrimeScalar&, const PrimeScalar&) = default;
  /// Canonical order: by residue.
  friend std::strong_ordering operator<=>(const PrimeScalar& x, const PrimeScalar& y) {
    assert(x.modulus_ == y.modulus_);
    return x.value_ <=> y.value_;
  }

  std::size_t hash() const noexcept { return static_cast<std::size_t>(detail::hash_mix(value_)); }

 private:
  struct Raw {};
  PrimeScalar(std::uint64_t v, std::uint64_t m, Raw) : value_(v), modulus_(m) {}

  std::uint64_t value_;
  std::uint64_t modulus_;
};

/// Rational number, always reduced with a positive denominator (GMP mpq).
class RationalScalar {
 public:
  explicit RationalScalar(mpq_class q) : value_(std::move(q)) { value_.canonicalize(); }
  RationalScalar(long num, long den) : value_(num, den) { value_.canonicalize(); }

  static RationalScalar from_int(const FieldSpec& /*field*/, std::int64_t n) {
    return RationalScalar(mpq_class(mpz_class(static_cast<long>(n))));
  }
  static RationalScalar from_mpz(const FieldSpec& /*field*/, const mpz_class& n) { return RationalScalar(mpq_class(n)); }

  static RationalScalar parse(std::string_view text, const FieldSpec& /*field*/) {
    text = detail::trim(text);
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return RationalScalar(mpq_class(detail::parse_integer(text)));
    const mpz_class num = detail::parse_integer(text.substr(0, slash));
    const mpz_class den = detail::parse_integer(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::zero_denominator, "'" + std::string(text) + "'");
    return RationalScalar(mpq_class(num, den));
  }

  FieldSpec field() const { return FieldSpec::rational(); }
  const mpq_class& value() const noexcept { return value_; }
  bool is_zero() const noexcept { return sgn(value_) == 0; }
  bool is_one() const noexcept { return value_ == 1; }

  RationalScalar inv() const {
    if (is_zero()) throw Error(ErrorCode::zero_inverse, "0 has no inverse in Q");
    return RationalScalar(1 / value_);
  }

  std::string to_string() const { return value_.get_str(); }

  friend RationalScalar operator+(const RationalScalar& x, const RationalScalar& y) { return RationalScalar(x.value_ + y.value_); }
  friend RationalScalar operator-(const RationalScalar& x, const RationalScalar& y) { return RationalScalar(x.value_ - y.value_); }
  friend RationalScalar operator-(const RationalScalar& x) { return RationalScalar(mpq_class(-x.value_)); }
  friend RationalScalar operator*(const RationalScalar& x, const RationalScalar& y) { return RationalScalar(x.value_ * y.value_); }
  friend RationalScalar operator/(const RationalScalar& x, const RationalScalar& y) {
    if (y.is_zero()) throw Error(ErrorCode::zero_inverse, "division by zero in Q");
    return RationalScalar(x.value_ / y.value_);
  }

  RationalScalar& operator+=(const RationalScalar& y) { value_ += y.value_; return *this; }
  RationalScalar& operator-=(const RationalScalar& y) { value_ -= y.value_; return *this; }
  RationalScalar& operator*=(const RationalScalar& y) { value_ *= y.value_; return *this; }

  friend bool operator==(const RationalScalar& x, const RationalScalar& y) { return x.value_ == y.value_; }
  friend std::strong_ordering operator<=>(const RationalScalar& x, const RationalScalar& y) {
    const int c = cmp(x.value_, y.value_);
    return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::size_t hash() const noexcept {
    return detail::hash_combine(detail::hash_mpz(value_.get_num()), detail::hash_mpz(value_.get_den()));
  }

 private:
  mpq_class value_;
};

template <class S>
concept FieldScalar = std::copy_constructible<S> && std::totally_ordered<S> && requires(const S& x, const FieldSpec& f, std::string_view t) {
  { S::from_int(f, std::int64_t{0}) } -> std::same_as<S>;
  { S::parse(t, f) } -> std::same_as<S>;
  { x.field() } -> std::same_as<FieldSpec>;
  { x.is_zero() } -> std::same_as<bool>;
  { x.inv() } -> std::same_as<S>;
  { x + x } -> std::same_as<S>;
  { x - x } -> std::same_as<S>;
  { x * x } -> std::same_as<S>;
  { x / x } -> std::same_as<S>;
  { -x } -> std::same_as<S>;
  { x.hash() } -> std::convertible_to<std::size_t>;
  { x.to_string() } -> std::same_as<std::string>;
};

template <FieldScalar S>
S zero_like(const S& x) { return S::from_int(x.field(), 0); }

template <FieldScalar S>
S one_like(const S& x) { return S::from_int(x.field(), 1); }

template <FieldScalar S>
S field_inv(const S& x) { return x.inv(); }

template <FieldScalar S>
S parse_scalar(std::string_view text, const FieldSpec& field) { return S::parse(text, field); }

/// Calls `fn(S{})`-style with a type tag for the backend matching `field`.
template <class T>
struct ScalarTag { using type = T; };

template <class Fn>
decltype(auto) dispatch_field(const FieldSpec& field, Fn&& fn) {
  if (field.is_prime()) return std::forward<Fn>(fn)(ScalarTag<PrimeScalar>{});
  return std::forward<Fn>(fn)(ScalarTag<RationalScalar>{});
}

}  // namespace affine_energy

template <>
struct std::hash<affine_energy::PrimeScalar> {
  std::size_t operator()(const affine_energy::PrimeScalar& x) const noexcept { return x.hash(); }
};

template <>
struct std::hash<affine_energy::RationalScalar> {
  std::size_t operator()(const affine_energy::RationalScalar& x) const noexcept { return x.hash(); }
};
