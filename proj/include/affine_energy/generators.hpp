#pragma once

// Test configurations: progressions, [n] x [n], products C x D of scalar
// sets read as affine maps, parabolas, and seeded random sets.
//
// Spec strings:
//   grid:<n>                       slopes 1..n, intercepts 1..n
//   affprod:<set>x<set>            {(c, d) : c in C, d in D}
//   parabola:<set>                 planar points (a, a^2)
//   randaff:<n>:seed=<s>           n random affine maps
//   randplanar:<n>:seed=<s>        n random planar points off the y-axis
// with <set> one of ap(start,step,n), gp(start,ratio,n) or set(v1,v2,...).
// Scalars may be written as integers or fractions "p/q".

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "affine_energy/affine.hpp"
#include "affine_energy/error.hpp"
#include "affine_energy/field.hpp"
#include "affine_energy/incidence3d.hpp"
#include "affine_energy/plane.hpp"
#include "affine_energy/prng.hpp"

namespace affine_energy {

struct ScalarSetSpec {
  enum class Kind { ap, gp, list };
  Kind kind = Kind::list;
  mpq_class start;
  mpq_class step;  // common difference or ratio
  std::size_t n = 0;
  std::vector<mpq_class> values;

  std::string to_string() const;
};

struct GenSpec {
  enum class Kind { grid, affprod, parabola, random_affine, random_planar };
  Kind kind = Kind::grid;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  ScalarSetSpec first;   // C for affprod, A for parabola
  ScalarSetSpec second;  // D for affprod

  static GenSpec parse(std::string_view text);
  std::string to_string() const;
  bool planar() const { return kind == Kind::parabola || kind == Kind::random_planar; }
};

namespace detail {

inline mpq_class parse_q(std::string_view text) {
  const std::string t(trim(text));
  if (t.empty()) throw Error(ErrorCode::parse_error, "empty number");
  const auto slash = t.find('/');
  mpq_class q;
  if (slash == std::string::npos) {
    q = mpq_class(parse_integer(t));
  } else {
    const mpz_class den = parse_integer(std::string_view(t).substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::zero_denominator, "zero denominator in '" + t + "'");
    q = mpq_class(parse_integer(std::string_view(t).substr(0, slash)), den);
  }
  q.canonicalize();
  return q;
}

inline std::size_t parse_count(std::string_view text) {
  const mpz_class z = parse_integer(trim(text));
  if (z < 1 || !z.fits_ulong_p()) throw Error(ErrorCode::invalid_spec, "count must be a positive integer, got '" + std::string(text) + "'");
  return z.get_ui();
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

inline ScalarSetSpec parse_scalar_set(std::string_view text) {
  text = trim(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw Error(ErrorCode::invalid_spec, "expected ap(..), gp(..) or set(..), got '" + std::string(text) + "'");
  }
  const std::string_view name = text.substr(0, open);
  const auto args = split(text.substr(open + 1, text.size() - open - 2), ',');
  ScalarSetSpec s;
  if (name == "set") {
    s.kind = ScalarSetSpec::Kind::list;
    for (auto a : args) s.values.push_back(parse_q(a));
    return s;
  }
  if (name != "ap" && name != "gp") throw Error(ErrorCode::invalid_spec, "unknown scalar set '" + std::string(name) + "'");
  if (args.size() != 3) throw Error(ErrorCode::invalid_spec, std::string(name) + " takes (start, step, n)");
  s.kind = name == "ap" ? ScalarSetSpec::Kind::ap : ScalarSetSpec::Kind::gp;
  s.start = parse_q(args[0]);
  s.step = parse_q(args[1]);
  s.n = parse_count(args[2]);
  if (s.kind == ScalarSetSpec::Kind::ap && s.step == 0) throw Error(ErrorCode::invalid_spec, "ap step must be nonzero");
  if (s.kind == ScalarSetSpec::Kind::gp && (s.start == 0 || s.step == 0)) {
    throw Error(ErrorCode::invalid_spec, "gp start and ratio must be nonzero");
  }
  return s;
}

inline std::uint64_t parse_seed(std::string_view text) {
  text = trim(text);
  if (text.substr(0, 5) != "seed=") throw Error(ErrorCode::invalid_spec, "expected seed=<s>, got '" + std::string(text) + "'");
  const mpz_class z = parse_integer(text.substr(5));
  if (z < 0 || !z.fits_ulong_p()) throw Error(ErrorCode::invalid_spec, "seed must be a non-negative 64-bit integer");
  return z.get_ui();
}

template <FieldScalar S>
S scalar_from_q(const mpq_class& q, const FieldSpec& f) {
  const S num = S::from_mpz(f, q.get_num());
  const S den = S::from_mpz(f, q.get_den());
  if (den.is_zero()) throw Error(ErrorCode::not_in_field, q.get_str() + " is not defined in " + f.to_string());
  return num / den;
}

}  // namespace detail

inline std::string ScalarSetSpec::to_string() const {
  if (kind == Kind::list) {
    std::string out = "set(";
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + values[i].get_str();
    return out + ")";
  }
  return std::string(kind == Kind::ap ? "ap(" : "gp(") + start.get_str() + "," + step.get_str() + "," + std::to_string(n) + ")";
}

inline GenSpec GenSpec::parse(std::string_view text) {
  text = detail::trim(text);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw Error(ErrorCode::invalid_spec, "generator spec needs 'kind:args', got '" + std::string(text) + "'");
  const std::string_view kind = text.substr(0, colon);
  const std::string_view rest = text.substr(colon + 1);
  GenSpec g;
  if (kind == "grid") {
    g.kind = Kind::grid;
    g.n = detail::parse_count(rest);
  } else if (kind == "affprod") {
    g.kind = Kind::affprod;
    const auto x = rest.find(")x");
    if (x == std::string_view::npos) throw Error(ErrorCode::invalid_spec, "affprod needs <set>x<set>");
    g.first = detail::parse_scalar_set(rest.substr(0, x + 1));
    g.second = detail::parse_scalar_set(rest.substr(x + 2));
  } else if (kind == "parabola") {
    g.kind = Kind::parabola;
    g.first = detail::parse_scalar_set(rest);
  } else if (kind == "randaff" || kind == "randplanar") {
    g.kind = kind == "randaff" ? Kind::random_affine : Kind::random_planar;
    const auto parts = detail::split(rest, ':');
    if (parts.size() != 2) throw Error(ErrorCode::invalid_spec, std::string(kind) + " needs <n>:seed=<s>");
    g.n = detail::parse_count(parts[0]);
    g.seed = detail::parse_seed(parts[1]);
  } else {
    throw Error(ErrorCode::invalid_spec, "unknown generator '" + std::string(kind) + "'");
  }
  return g;
}

inline std::string GenSpec::to_string() const {
  switch (kind) {
    case Kind::grid: return "grid:" + std::to_string(n);
    case Kind::affprod: return "affprod:" + first.to_string() + "x" + second.to_string();
    case Kind::parabola: return "parabola:" + first.to_string();
    case Kind::random_affine: return "randaff:" + std::to_string(n) + ":seed=" + std::to_string(seed);
    case Kind::random_planar: return "randplanar:" + std::to_string(n) + ":seed=" + std::to_string(seed);
  }
  return {};
}

template <FieldScalar S>
struct ScalarSetResult {
  std::vector<S> values;  // sorted, distinct
  std::size_t requested = 0;
  /// Terms that coincided after reduction into the field.
  std::size_t collisions = 0;
};

template <FieldScalar S>
ScalarSetResult<S> generate_scalars(const ScalarSetSpec& spec, const FieldSpec& f) {
  std::vector<S> raw;
  if (spec.kind == ScalarSetSpec::Kind::list) {
    for (const auto& q : spec.values) raw.push_back(detail::scalar_from_q<S>(q, f));
  } else {
    S x = detail::scalar_from_q<S>(spec.start, f);
    const S step = detail::scalar_from_q<S>(spec.step, f);
    if (step.is_zero() || (spec.kind == ScalarSetSpec::Kind::gp && x.is_zero())) {
      throw Error(ErrorCode::invalid_spec, spec.to_string() + " degenerates in " + f.to_string());
    }
    for (std::size_t i = 0; i < spec.n; ++i) {
      raw.push_back(x);
      x = spec.kind == ScalarSetSpec::Kind::ap ? x + step : x * step;
    }
  }
  ScalarSetResult<S> r;
  r.requested = raw.size();
  r.values = sorted_unique(std::move(raw));
  r.collisions = r.requested - r.values.size();
  return r;
}

template <FieldScalar S>
struct GenResult {
  std::variant<AffineSet<S>, std::vector<PlanePoint<S>>> value;
  std::size_t requested = 0;
  std::size_t collisions = 0;

  bool planar() const { return value.index() == 1; }

  /// The configuration as affine maps; planar points must avoid the y-axis.
  AffineSet<S> affine(const FieldSpec& f) const {
    if (const auto* a = std::get_if<0>(&value)) return *a;
    return as_affine_set(std::get<1>(value), f);
  }

  /// The configuration as points of the plane.
  std::vector<PlanePoint<S>> points() const {
    if (const auto* p = std::get_if<1>(&value)) return *p;
    return as_plane_points(std::get<0>(value));
  }
};

enum class RandomKind { affine, planar };

namespace detail {

// One random scalar. Over F_p: uniform on the field (or on F_p^* when
// nonzero is set). Over Q: numerator uniform in [-radius, radius] and
// denominator uniform in [1, 3], redrawn while zero is forbidden.
template <FieldScalar S>
S random_scalar(Xorshift64Star& rng, const FieldSpec& f, std::int64_t radius, bool nonzero) {
  if (f.is_prime()) {
    const std::uint64_t p = f.characteristic();
    return nonzero ? S::from_mpz(f, mpz_class(static_cast<unsigned long>(1 + rng.below(p - 1))))
                   : S::from_mpz(f, mpz_class(static_cast<unsigned long>(rng.below(p))));
  }
  for (;;) {
    const std::int64_t num = rng.between(-radius, radius);
    const std::int64_t den = rng.between(1, 3);
    if (nonzero && num == 0) continue;
    return S::from_int(f, num) / S::from_int(f, den);
  }
}

}  // namespace detail

/// Exactly n distinct random maps (slope != 0), or n distinct planar points
/// off the y-axis, drawn from Xorshift64Star(seed) with rejection of
/// repeats. Over Q the numerator radius is 8 + n/8.
template <FieldScalar S>
GenResult<S> seeded_random(std::size_t n, std::uint64_t seed, const FieldSpec& f, RandomKind kind) {
  if (n < 1) throw Error(ErrorCode::invalid_spec, "random set size must be at least 1");
  if (f.is_prime()) {
    const mpz_class p = static_cast<unsigned long>(f.characteristic());
    if (mpz_class(static_cast<unsigned long>(n)) > p * (p - 1)) {
      throw Error(ErrorCode::cannot_fill, std::to_string(n) + " distinct elements do not exist in Aff(" + f.to_string() + ")");
    }
  }
  Xorshift64Star rng(seed);
  const auto radius = static_cast<std::int64_t>(8 + n / 8);
  std::unordered_set<AffineMap<S>> seen;
  std::vector<AffineMap<S>> maps;
  while (maps.size() < n) {
    S a = detail::random_scalar<S>(rng, f, radius, true);
    S b = detail::random_scalar<S>(rng, f, radius, false);
    AffineMap<S> g(std::move(a), std::move(b));
    if (seen.insert(g).second) maps.push_back(std::move(g));
  }
  AffineSet<S> set(f, std::move(maps));
  GenResult<S> r{.value = AffineSet<S>(f), .requested = n, .collisions = 0};
  if (kind == RandomKind::planar) {
    r.value = as_plane_points(set);
  } else {
    r.value = std::move(set);
  }
  return r;
}

template <FieldScalar S>
GenResult<S> generate(const GenSpec& spec, const FieldSpec& f) {
  switch (spec.kind) {
    case GenSpec::Kind::grid: {
      std::vector<AffineMap<S>> maps;
      for (std::size_t a = 1; a <= spec.n; ++a) {
        for (std::size_t b = 1; b <= spec.n; ++b) {
          const S sa = S::from_int(f, static_cast<std::int64_t>(a));
          if (sa.is_zero()) throw Error(ErrorCode::zero_slope, "grid slope " + std::to_string(a) + " vanishes in " + f.to_string());
          maps.emplace_back(sa, S::from_int(f, static_cast<std::int64_t>(b)));
        }
      }
      const std::size_t requested = maps.size();
      AffineSet<S> set(f, std::move(maps));
      const std::size_t collisions = requested - set.size();
      return GenResult<S>{.value = std::move(set), .requested = requested, .collisions = collisions};
    }
    case GenSpec::Kind::affprod: {
      const auto c = generate_scalars<S>(spec.first, f);
      const auto d = generate_scalars<S>(spec.second, f);
      std::vector<AffineMap<S>> maps;
      for (const auto& x : c.values) {
        if (x.is_zero()) throw Error(ErrorCode::zero_slope, "affprod slope set contains 0");
        for (const auto& y : d.values) maps.emplace_back(x, y);
      }
      return GenResult<S>{.value = AffineSet<S>(f, std::move(maps)),
                          .requested = c.requested * d.requested,
                          .collisions = c.requested * d.requested - c.values.size() * d.values.size()};
    }
    case GenSpec::Kind::parabola: {
      const auto a = generate_scalars<S>(spec.first, f);
      std::vector<PlanePoint<S>> pts;
      for (const auto& x : a.values) pts.push_back(affine_point(x, x * x));
      return GenResult<S>{.value = sorted_unique(std::move(pts)), .requested = a.requested, .collisions = a.collisions};
    }
    case GenSpec::Kind::random_affine: return seeded_random<S>(spec.n, spec.seed, f, RandomKind::affine);
    case GenSpec::Kind::random_planar: return seeded_random<S>(spec.n, spec.seed, f, RandomKind::planar);
  }
  throw Error(ErrorCode::invalid_spec, "unknown generator kind");
}

}  // namespace affine_energy
