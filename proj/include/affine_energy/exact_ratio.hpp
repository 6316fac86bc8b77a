#pragma once

// Bound ratios LHS / RHS where RHS is a sum of radicals such as
// m^{1/2}|A|^{5/2} + M|A|^2. LHS is an exact rational; RHS is enclosed in
// rational bounds through exact integer k-th roots, and the stored ratio is
// the smallest multiple of 10^-12 that is provably >= LHS/RHS. No floating
// point is involved anywhere, so stored ratios are reproducible bit-for-bit
// and a stored value below a ceiling certifies the true ratio is below it.

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "affine_energy/error.hpp"

namespace affine_energy {

/// radicand^(1/degree), radicand >= 0.
struct RadicalTerm {
  mpq_class radicand;
  unsigned degree = 1;

  struct Factor {
    mpq_class base;
    long exp_num;
    long exp_den;
  };

  /// prod base_i^(exp_num_i / exp_den_i), bases > 0 (or >= 0 for positive
  /// exponents).
  static RadicalTerm power_product(const std::vector<Factor>& factors) {
    unsigned long degree = 1;
    for (const auto& f : factors) degree = std::lcm(degree, static_cast<unsigned long>(f.exp_den));
    mpq_class r = 1;
    for (const auto& f : factors) {
      const long e = f.exp_num * static_cast<long>(degree / static_cast<unsigned long>(f.exp_den));
      if (e == 0) continue;
      mpq_class b = f.base;
      if (e < 0) {
        if (sgn(b) == 0) throw Error(ErrorCode::invalid_spec, "negative power of zero in bound term");
        b = 1 / b;
      }
      mpz_class num, den;
      mpz_pow_ui(num.get_mpz_t(), b.get_num_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
      mpz_pow_ui(den.get_mpz_t(), b.get_den_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
      r *= mpq_class(num, den);
      r.canonicalize();
    }
    return RadicalTerm{r, static_cast<unsigned>(degree)};
  }

  static RadicalTerm rational(mpq_class q) { return RadicalTerm{std::move(q), 1}; }
};

namespace detail {

inline constexpr unsigned kRootBits = 96;

// Rational enclosure [lo, hi] of radicand^(1/degree) with 2^-kRootBits
// relative resolution.
inline std::pair<mpq_class, mpq_class> enclose(const RadicalTerm& t) {
  if (sgn(t.radicand) < 0) throw Error(ErrorCode::invalid_spec, "negative radicand in bound term");
  if (t.degree == 1) return {t.radicand, t.radicand};
  const mpz_class& n = t.radicand.get_num();
  const mpz_class& d = t.radicand.get_den();
  // (n/d)^(1/k) = (n d^(k-1))^(1/k) / d
  mpz_class x;
  mpz_pow_ui(x.get_mpz_t(), d.get_mpz_t(), t.degree - 1);
  x *= n;
  mpz_mul_2exp(x.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(kRootBits) * t.degree);
  mpz_class root;
  const int exact = mpz_root(root.get_mpz_t(), x.get_mpz_t(), t.degree);
  mpz_class scale = d;
  mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), kRootBits);
  mpq_class lo(root, scale);
  lo.canonicalize();
  if (exact != 0) return {lo, lo};
  mpq_class hi(root + 1, scale);
  hi.canonicalize();
  return {lo, hi};
}

inline mpz_class ceil_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace detail

inline const mpz_class& ratio_grid() {
  static const mpz_class grid("1000000000000");
  return grid;
}

/// A certified upper bound on lhs / sum(rhs_terms), on the 10^-12 grid.
class BoundRatio {
 public:
  BoundRatio() = default;

  BoundRatio(mpq_class lhs, std::vector<RadicalTerm> rhs) : lhs_(std::move(lhs)), rhs_(std::move(rhs)) {
    mpq_class lo = 0, hi = 0;
    for (const auto& t : rhs_) {
      auto [l, h] = detail::enclose(t);
      lo += l;
      hi += h;
    }
    rhs_lower_ = lo;
    rhs_upper_ = hi;
    if (sgn(hi) == 0) throw Error(ErrorCode::invalid_spec, "bound ratio with zero right-hand side");
    // lhs >= 0: divide by the smallest RHS; lhs < 0: by the largest.
    const mpq_class& denom = sgn(lhs_) >= 0 ? lo : hi;
    if (sgn(denom) == 0) throw Error(ErrorCode::invalid_spec, "bound ratio right-hand side not separated from zero");
    const mpq_class scaled = lhs_ * ratio_grid() / denom;
    upper_ = mpq_class(detail::ceil_div(scaled.get_num(), scaled.get_den()), ratio_grid());
    upper_.canonicalize();
  }

  const mpq_class& lhs() const noexcept { return lhs_; }
  const std::vector<RadicalTerm>& rhs_terms() const noexcept { return rhs_; }
  const mpq_class& rhs_lower() const noexcept { return rhs_lower_; }
  const mpq_class& rhs_upper() const noexcept { return rhs_upper_; }
  /// Certified upper bound of the ratio.
  const mpq_class& value() const noexcept { return upper_; }

  /// "num/den" of the certified bound.
  std::string fraction() const { return upper_.get_str(); }

  /// Exact decimal rendering of the bound (12 fractional digits).
  std::string decimal() const {
    const mpq_class scaled = upper_ * ratio_grid();
    mpz_class units = scaled.get_num() / scaled.get_den();
    const bool neg = sgn(units) < 0;
    if (neg) units = -units;
    mpz_class whole, frac;
    mpz_tdiv_qr(whole.get_mpz_t(), frac.get_mpz_t(), units.get_mpz_t(), ratio_grid().get_mpz_t());
    std::string f = frac.get_str();
    f.insert(0, 12 - f.size(), '0');
    return (neg ? "-" : "") + whole.get_str() + "." + f;
  }

  /// True when the certified bound is at most `ceiling`.
  bool at_most(const mpq_class& ceiling) const { return upper_ <= ceiling; }

 private:
  mpq_class lhs_;
  std::vector<RadicalTerm> rhs_;
  mpq_class rhs_lower_;
  mpq_class rhs_upper_;
  mpq_class upper_;
};

inline mpq_class parse_rational(const std::string& text) {
  mpq_class q;
  if (q.set_str(text, 10) != 0) throw Error(ErrorCode::parse_error, "bad rational '" + text + "'");
  q.canonicalize();
  return q;
}

}  // namespace affine_energy
