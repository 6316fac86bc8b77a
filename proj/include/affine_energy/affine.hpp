#pragma once

// The affine group Aff(F) = F x| F^*. An element x -> a*x + b is stored as
// the pair (a, b) and drawn as the point (a, b) of the parameter plane with
// the line a = 0 removed. Composition is (g o h)(x) = g(h(x)), so
//   g o h = (g.a*h.a, g.a*h.b + g.b),   g^-1 = (1/g.a, -g.b/g.a).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "affine_energy/error.hpp"
#include "affine_energy/field.hpp"

namespace affine_energy {

/// Exact counts of tuples (quadruples, incidences, pairs).
using Count = std::uint64_t;

template <FieldScalar S>
class AffineMap {
 public:
  AffineMap(S slope, S intercept) : slope_(std::move(slope)), intercept_(std::move(intercept)) {
    if (slope_.is_zero()) throw Error(ErrorCode::zero_slope, "affine map needs a nonzero slope");
  }

  static AffineMap identity(const FieldSpec& field) { return AffineMap(S::from_int(field, 1), S::from_int(field, 0)); }

  const S& slope() const noexcept { return slope_; }
  const S& intercept() const noexcept { return intercept_; }
  FieldSpec field() const { return slope_.field(); }

  bool is_identity() const { return slope_ == one_like(slope_) && intercept_.is_zero(); }

  /// Value at x.
  S operator()(const S& x) const { return slope_ * x + intercept_; }

  std::string to_string() const { return slope_.to_string() + " " + intercept_.to_string(); }

  friend bool operator==(const AffineMap&, const AffineMap&) = default;
  friend auto operator<=>(const AffineMap&, const AffineMap&) = default;

  std::size_t hash() const noexcept { return detail::hash_combine(slope_.hash(), intercept_.hash()); }

 private:
  S slope_;
  S intercept_;
};

template <FieldScalar S>
AffineMap<S> compose(const AffineMap<S>& g, const AffineMap<S>& h) {
  return AffineMap<S>(g.slope() * h.slope(), g.slope() * h.intercept() + g.intercept());
}

template <FieldScalar S>
AffineMap<S> inverse(const AffineMap<S>& g) {
  const S inv_a = g.slope().inv();
  return AffineMap<S>(inv_a, -(g.intercept() * inv_a));
}

/// g^-1 o h, computed without forming the inverse: x -> (h(x) - g.b) / g.a.
template <FieldScalar S>
AffineMap<S> quotient(const AffineMap<S>& g, const AffineMap<S>& h) {
  const S inv_a = g.slope().inv();
  return AffineMap<S>(h.slope() * inv_a, (h.intercept() - g.intercept()) * inv_a);
}

struct AffineMapHash {
  template <class S>
  std::size_t operator()(const AffineMap<S>& g) const noexcept { return g.hash(); }
};

/// Finite set of affine maps over one field, kept sorted and deduplicated.
template <FieldScalar S>
class AffineSet {
 public:
  using value_type = AffineMap<S>;
  using const_iterator = typename std::vector<AffineMap<S>>::const_iterator;

  explicit AffineSet(const FieldSpec& field) : field_(field) {}

  AffineSet(const FieldSpec& field, std::vector<AffineMap<S>> elems) : field_(field), elems_(std::move(elems)) {
    for (const auto& g : elems_) {
      if (!(g.field() == field_)) throw Error(ErrorCode::field_mismatch, "element " + g.to_string() + " is not over " + field_.to_string());
    }
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
  }

  const FieldSpec& field() const noexcept { return field_; }
  std::size_t size() const noexcept { return elems_.size(); }
  bool empty() const noexcept { return elems_.empty(); }
  const_iterator begin() const noexcept { return elems_.begin(); }
  const_iterator end() const noexcept { return elems_.end(); }
  const AffineMap<S>& operator[](std::size_t i) const { return elems_[i]; }
  const std::vector<AffineMap<S>>& elements() const noexcept { return elems_; }

  bool contains(const AffineMap<S>& g) const { return std::binary_search(elems_.begin(), elems_.end(), g); }

  friend bool operator==(const AffineSet&, const AffineSet&) = default;

 private:
  FieldSpec field_;
  std::vector<AffineMap<S>> elems_;
};

enum class ProductMode { product, quotient };

/// {a o b} (product) or {a^-1 o b} (quotient) over A x B.
template <FieldScalar S>
AffineSet<S> product_set(const AffineSet<S>& a, const AffineSet<S>& b, ProductMode mode) {
  if (!(a.field() == b.field())) throw Error(ErrorCode::field_mismatch, "product_set over different fields");
  std::vector<AffineMap<S>> out;
  out.reserve(a.size() * b.size());
  for (const auto& g : a) {
    for (const auto& h : b) out.push_back(mode == ProductMode::product ? compose(g, h) : quotient(g, h));
  }
  return AffineSet<S>(a.field(), std::move(out));
}

/// m: the largest number of elements sharing a slope (a coset of U, a
/// vertical line of the parameter plane).
template <FieldScalar S>
std::size_t max_on_vertical(const AffineSet<S>& a) {
  std::size_t best = 0;
  // Elements are sorted by slope first, so columns are contiguous runs.
  for (std::size_t i = 0; i < a.size();) {
    std::size_t j = i;
    while (j < a.size() && a[j].slope() == a[i].slope()) ++j;
    best = std::max(best, j - i);
    i = j;
  }
  return best;
}

namespace detail {

// Direction from p to q in the parameter plane: nullopt for vertical.
template <FieldScalar S>
std::optional<S> direction(const AffineMap<S>& p, const AffineMap<S>& q) {
  if (p.slope() == q.slope()) return std::nullopt;
  return (q.intercept() - p.intercept()) / (q.slope() - p.slope());
}

template <class S>
struct OptionalScalarHash {
  std::size_t operator()(const std::optional<S>& x) const noexcept { return x ? x->hash() : 0x51ED270B27A3F2C1ULL; }
};

}  // namespace detail

/// M: the largest number of elements on one line of the parameter plane,
/// vertical lines included. O(|A|^2) slope bucketing around each anchor.
template <FieldScalar S>
std::size_t max_on_line(const AffineSet<S>& a) {
  if (a.size() <= 2) return a.size();
  std::size_t best = 1;
  std::unordered_map<std::optional<S>, std::size_t, detail::OptionalScalarHash<S>> buckets;
  for (std::size_t i = 0; i < a.size(); ++i) {
    // Collinear sets through a[i] with an earlier anchor were already seen.
    if (a.size() - i <= best - 1) break;
    buckets.clear();
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const std::size_t c = ++buckets[detail::direction(a[i], a[j])];
      best = std::max(best, c + 1);
    }
  }
  return best;
}

}  // namespace affine_energy

template <class S>
struct std::hash<affine_energy::AffineMap<S>> {
  std::size_t operator()(const affine_energy::AffineMap<S>& g) const noexcept { return g.hash(); }
};
