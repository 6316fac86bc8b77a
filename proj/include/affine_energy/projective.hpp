#pragma once

// Homogeneous coordinate vectors for P^2, P^3 and their duals. A vector is
// stored scaled so that its first nonzero coordinate is 1, which makes
// projective equality structural equality.

#include <array>
#include <compare>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "affine_energy/error.hpp"
#include "affine_energy/field.hpp"

namespace affine_energy {

template <FieldScalar S, std::size_t N, class Tag>
class Homogeneous {
 public:
  static constexpr std::size_t dimension = N;

  explicit Homogeneous(std::array<S, N> coords) : coords_(std::move(coords)) {
    std::size_t lead = 0;
    while (lead < N && coords_[lead].is_zero()) ++lead;
    if (lead == N) throw Error(ErrorCode::invalid_spec, "homogeneous coordinates are all zero");
    if (!coords_[lead].is_one()) {
      const S inv = coords_[lead].inv();
      for (std::size_t i = lead; i < N; ++i) coords_[i] *= inv;
    }
  }

  const S& operator[](std::size_t i) const { return coords_[i]; }
  const std::array<S, N>& coords() const noexcept { return coords_; }
  FieldSpec field() const { return coords_[0].field(); }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < N; ++i) {
      if (i != 0) out += ':';
      out += coords_[i].to_string();
    }
    return out;
  }

  friend bool operator==(const Homogeneous&, const Homogeneous&) = default;
  friend auto operator<=>(const Homogeneous&, const Homogeneous&) = default;

  std::size_t hash() const noexcept {
    std::size_t h = N;
    for (const auto& c : coords_) h = detail::hash_combine(h, c.hash());
    return h;
  }

 private:
  std::array<S, N> coords_;
};

struct HomogeneousHash {
  template <class H>
  std::size_t operator()(const H& x) const noexcept { return x.hash(); }
};

template <FieldScalar S, std::size_t N, class TagA, class TagB>
S dot(const Homogeneous<S, N, TagA>& x, const Homogeneous<S, N, TagB>& y) {
  S s = x[0] * y[0];
  for (std::size_t i = 1; i < N; ++i) s += x[i] * y[i];
  return s;
}

/// Pairing of a point with a hyperplane (or line) is zero.
template <FieldScalar S, std::size_t N, class TagA, class TagB>
bool incident(const Homogeneous<S, N, TagA>& x, const Homogeneous<S, N, TagB>& y) {
  return dot(x, y).is_zero();
}

namespace detail {

/// Canonical key of span{p, q}: the reduced row echelon form of [p; q],
/// flattened. Two pairs span the same projective line iff keys are equal.
template <FieldScalar S, std::size_t N>
std::vector<S> span_key(const std::array<S, N>& p, const std::array<S, N>& q) {
  std::array<std::vector<S>, 2> rows{std::vector<S>(p.begin(), p.end()), std::vector<S>(q.begin(), q.end())};
  std::size_t r = 0;
  for (std::size_t col = 0; col < N && r < 2; ++col) {
    std::size_t piv = r;
    while (piv < 2 && rows[piv][col].is_zero()) ++piv;
    if (piv == 2) continue;
    std::swap(rows[r], rows[piv]);
    const S inv = rows[r][col].inv();
    for (auto& x : rows[r]) x *= inv;
    for (std::size_t o = 0; o < 2; ++o) {
      if (o == r || rows[o][col].is_zero()) continue;
      const S f = rows[o][col];
      for (std::size_t c = 0; c < N; ++c) rows[o][c] -= f * rows[r][c];
    }
    ++r;
  }
  if (r != 2) throw Error(ErrorCode::invalid_spec, "span of two equal projective points");
  std::vector<S> key = std::move(rows[0]);
  key.insert(key.end(), rows[1].begin(), rows[1].end());
  return key;
}

template <class S>
struct VectorKeyHash {
  std::size_t operator()(const std::vector<S>& v) const noexcept {
    std::size_t h = v.size();
    for (const auto& x : v) h = hash_combine(h, x.hash());
    return h;
  }
};

}  // namespace detail

}  // namespace affine_energy

template <affine_energy::FieldScalar S, std::size_t N, class Tag>
struct std::hash<affine_energy::Homogeneous<S, N, Tag>> {
  std::size_t operator()(const affine_energy::Homogeneous<S, N, Tag>& x) const noexcept { return x.hash(); }
};
