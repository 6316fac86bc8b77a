#pragma once

#include <cstdint>
#include <vector>

#include "affine_energy.hpp"

namespace testing_helpers {

namespace ae = affine_energy;

template <class S>
S I(const ae::FieldSpec& f, std::int64_t n) {
  return S::from_int(f, n);
}

template <class S>
ae::AffineMap<S> M(const ae::FieldSpec& f, std::int64_t a, std::int64_t b) {
  return ae::AffineMap<S>(S::from_int(f, a), S::from_int(f, b));
}

template <class S>
ae::AffineSet<S> set_of(const ae::FieldSpec& f, std::initializer_list<std::pair<std::int64_t, std::int64_t>> elems) {
  std::vector<ae::AffineMap<S>> v;
  for (const auto& [a, b] : elems) v.push_back(M<S>(f, a, b));
  return ae::AffineSet<S>(f, std::move(v));
}

/// [n] x [n]: slopes and intercepts 1..n.
template <class S>
ae::AffineSet<S> grid(const ae::FieldSpec& f, int n) {
  std::vector<ae::AffineMap<S>> v;
  for (int a = 1; a <= n; ++a) {
    for (int b = 1; b <= n; ++b) v.push_back(M<S>(f, a, b));
  }
  return ae::AffineSet<S>(f, std::move(v));
}

template <class S>
ae::AffineSet<S> random_set(const ae::FieldSpec& f, std::size_t n, std::uint64_t seed) {
  return std::get<0>(ae::seeded_random<S>(n, seed, f, ae::RandomKind::affine).value);
}

template <class S>
ae::PlanePoint<S> P(const ae::FieldSpec& f, std::int64_t x, std::int64_t y) {
  return ae::affine_point(S::from_int(f, x), S::from_int(f, y));
}

template <class S>
ae::PlaneLine<S> L(const ae::FieldSpec& f, std::int64_t a, std::int64_t b, std::int64_t c) {
  return ae::PlaneLine<S>({S::from_int(f, a), S::from_int(f, b), S::from_int(f, c)});
}

inline const ae::FieldSpec& Q() {
  static const ae::FieldSpec f = ae::FieldSpec::rational();
  return f;
}

inline ae::FieldSpec Fp(std::uint64_t p) { return ae::FieldSpec::prime(p); }

}  // namespace testing_helpers
