#pragma once

// Energies of finite sets of affine maps.
//
//   E(A)   = #{(g,h,u,v) in A^4 : g^-1 o h = u^-1 o v}
//   E*(A)  = #{(g,h,u,v) in A^4 : g o h = u o v}
//   E(A,B) = #{g,u in A; h,v in B : g^-1 o h = u^-1 o v}
//
// The fast paths hash the pair-representation function r(t) and return
// sum r(t)^2. The brute-force oracles enumerate quadruples directly and share
// nothing with the fast paths beyond compose/quotient.
//
// Decomposition by C: an energy quadruple satisfies g.a*v.a = h.a*u.a, so
// E(A) = sum_C Q_C with Q_C the quadruples whose common product is C.

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "affine_energy/affine.hpp"
#include "affine_energy/error.hpp"
#include "affine_energy/field.hpp"

namespace affine_energy {

inline constexpr std::size_t kDefaultOracleCap = 64;

/// r(t) = #{(g,h) in A x B : g^-1 o h = t} (quotient) or g o h = t (product).
template <FieldScalar S>
class QuotientTable {
 public:
  QuotientTable(const AffineSet<S>& a, const AffineSet<S>& b, ProductMode mode) : mode_(mode) {
    if (!(a.field() == b.field())) throw Error(ErrorCode::field_mismatch, "quotient table over different fields");
    entries_.reserve(a.size() * b.size());
    for (const auto& g : a) {
      for (const auto& h : b) ++entries_[mode == ProductMode::quotient ? quotient(g, h) : compose(g, h)];
    }
    total_ = static_cast<Count>(a.size()) * b.size();
  }

  ProductMode mode() const noexcept { return mode_; }
  const std::unordered_map<AffineMap<S>, Count>& entries() const noexcept { return entries_; }
  std::size_t distinct() const noexcept { return entries_.size(); }
  Count total() const noexcept { return total_; }

  Count count(const AffineMap<S>& t) const {
    auto it = entries_.find(t);
    return it == entries_.end() ? 0 : it->second;
  }

  Count sum_of_squares() const {
    Count s = 0;
    for (const auto& [t, r] : entries_) s += r * r;
    return s;
  }

 private:
  ProductMode mode_;
  std::unordered_map<AffineMap<S>, Count> entries_;
  Count total_ = 0;
};

template <FieldScalar S>
Count energy(const AffineSet<S>& a) {
  return QuotientTable<S>(a, a, ProductMode::quotient).sum_of_squares();
}

template <FieldScalar S>
Count energy_star(const AffineSet<S>& a) {
  return QuotientTable<S>(a, a, ProductMode::product).sum_of_squares();
}

/// E(A,B): g,u range over A and h,v over B.
template <FieldScalar S>
Count energy_asym(const AffineSet<S>& a, const AffineSet<S>& b) {
  return QuotientTable<S>(a, b, ProductMode::quotient).sum_of_squares();
}

enum class EnergyKind { quotient, product };

namespace detail {

inline void check_oracle_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw Error(ErrorCode::oracle_cap_exceeded, "set of size " + std::to_string(n) + " exceeds oracle cap " + std::to_string(cap));
  }
}


// All |X|*|Y| pair values, row-major; the oracles compare these directly.
template <FieldScalar S>
std::vector<AffineMap<S>> pair_values(const AffineSet<S>& x, const AffineSet<S>& y, EnergyKind kind) {
  std::vector<AffineMap<S>> out;
  out.reserve(x.size() * y.size());
  for (const auto& g : x) {
    for (const auto& h : y) out.push_back(kind == EnergyKind::quotient ? quotient(g, h) : compose(g, h));
  }
  return out;
}

}  // namespace detail

/// Direct quadruple enumeration, O(|A|^4).
template <FieldScalar S>
Count energy_bruteforce(const AffineSet<S>& a, EnergyKind kind, std::size_t cap = kDefaultOracleCap) {
  detail::check_oracle_cap(a.size(), cap);
  const auto values = detail::pair_values(a, a, kind);
  Count count = 0;
  for (const auto& lhs : values) {
    for (const auto& rhs : values) {
      if (lhs == rhs) ++count;
    }
  }
  return count;
}

template <FieldScalar S>
Count energy_asym_bruteforce(const AffineSet<S>& a, const AffineSet<S>& b, std::size_t cap = kDefaultOracleCap) {
  detail::check_oracle_cap(std::max(a.size(), b.size()), cap);
  const auto values = detail::pair_values(a, b, EnergyKind::quotient);
  Count count = 0;
  for (const auto& lhs : values) {
    for (const auto& rhs : values) {
      if (lhs == rhs) ++count;
    }
  }
  return count;
}

/// The slice {(g, v) in A x A : g.a * v.a = C}.
template <FieldScalar S>
struct CSlice {
  S c;
  std::vector<std::pair<AffineMap<S>, AffineMap<S>>> pairs;

  std::size_t size() const noexcept { return pairs.size(); }
};

template <FieldScalar S>
CSlice<S> c_slice(const AffineSet<S>& a, const S& c) {
  if (c.is_zero()) throw Error(ErrorCode::zero_c, "slice constant must be nonzero");
  CSlice<S> out{c, {}};
  for (const auto& g : a) {
    for (const auto& v : a) {
      if (g.slope() * v.slope() == c) out.pairs.emplace_back(g, v);
    }
  }
  return out;
}

/// |C_C| for every realized C; sums to |A|^2.
template <FieldScalar S>
std::map<S, Count> slice_sizes(const AffineSet<S>& a) {
  std::unordered_map<S, Count> slopes;
  for (const auto& g : a) ++slopes[g.slope()];
  std::unordered_map<S, Count> sizes;
  for (const auto& [x, cx] : slopes) {
    for (const auto& [y, cy] : slopes) sizes[x * y] += cx * cy;
  }
  return {sizes.begin(), sizes.end()};
}

/// Q_C for every realized C. Quadruples are grouped by their common quotient
/// t; a pair (g,h) and a pair (u,v) in the class of t give C = g.a*u.a*t.a,
/// so each class contributes the product-convolution of its slope histogram.
template <FieldScalar S>
std::map<S, Count> decompose_by_c(const AffineSet<S>& a) {
  struct Entry {
    AffineMap<S> t;
    S g_slope;
  };
  std::vector<Entry> pairs;
  pairs.reserve(a.size() * a.size());
  for (const auto& g : a) {
    for (const auto& h : a) pairs.push_back({quotient(g, h), g.slope()});
  }
  std::sort(pairs.begin(), pairs.end(), [](const Entry& x, const Entry& y) {
    if (x.t != y.t) return x.t < y.t;
    return x.g_slope < y.g_slope;
  });

  std::unordered_map<S, Count> q;
  std::vector<std::pair<S, Count>> hist;
  for (std::size_t i = 0; i < pairs.size();) {
    std::size_t j = i;
    hist.clear();
    while (j < pairs.size() && pairs[j].t == pairs[i].t) {
      if (!hist.empty() && hist.back().first == pairs[j].g_slope) {
        ++hist.back().second;
      } else {
        hist.emplace_back(pairs[j].g_slope, 1);
      }
      ++j;
    }
    const S& t_slope = pairs[i].t.slope();
    for (const auto& [x, cx] : hist) {
      const S xt = x * t_slope;
      for (const auto& [y, cy] : hist) q[xt * y] += cx * cy;
    }
    i = j;
  }
  return {q.begin(), q.end()};
}

/// Oracle for decompose_by_c: enumerate energy quadruples, bucket by g.a*v.a.
template <FieldScalar S>
std::map<S, Count> decompose_by_c_bruteforce(const AffineSet<S>& a, std::size_t cap = kDefaultOracleCap) {
  detail::check_oracle_cap(a.size(), cap);
  const auto values = detail::pair_values(a, a, EnergyKind::quotient);
  const std::size_t n = a.size();
  std::map<S, Count> q;
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t h = 0; h < n; ++h) {
      const auto& lhs = values[g * n + h];
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
          if (values[u * n + v] == lhs) ++q[a[g].slope() * a[v].slope()];
        }
      }
    }
  }
  return q;
}

namespace detail {

template <FieldScalar S>
std::vector<S> dedup(std::span<const S> xs) {
  std::vector<S> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

template <class Map>
Count squares(const Map& m) {
  Count s = 0;
  for (const auto& [k, r] : m) s += r * r;
  return s;
}

}  // namespace detail

/// E+(S) = #{(a,b,c,d) in S^4 : a + b = c + d}.
template <FieldScalar S>
Count scalar_energy_add(std::span<const S> set) {
  const auto xs = detail::dedup(set);
  std::unordered_map<S, Count> sums;
  for (const auto& x : xs) {
    for (const auto& y : xs) ++sums[x + y];
  }
  return detail::squares(sums);
}

/// sum_beta r_{X - Y}(beta)^2 = #{x - y = x' - y'}; equals E+(X) when Y = X.
template <FieldScalar S>
Count difference_energy(std::span<const S> xset, std::span<const S> yset) {
  const auto xs = detail::dedup(xset);
  const auto ys = detail::dedup(yset);
  std::unordered_map<S, Count> diffs;
  for (const auto& x : xs) {
    for (const auto& y : ys) ++diffs[x - y];
  }
  return detail::squares(diffs);
}

struct ShiftedEnergy {
  Count energy = 0;
  /// Elements equal to the shift, dropped because 0 has no multiplicative
  /// representation.
  std::size_t dropped = 0;
};

/// E^x({x - shift : x in S, x != shift}).
template <FieldScalar S>
ShiftedEnergy scalar_energy_mul(std::span<const S> set, const S& shift) {
  std::vector<S> shifted;
  ShiftedEnergy out;
  for (const auto& x : detail::dedup(set)) {
    if (x == shift) {
      ++out.dropped;
    } else {
      shifted.push_back(x - shift);
    }
  }
  std::unordered_map<S, Count> prods;
  for (const auto& x : shifted) {
    for (const auto& y : shifted) ++prods[x * y];
  }
  out.energy = detail::squares(prods);
  return out;
}

/// sum_beta r_{X / Y}(beta)^2 over nonzero x, y: the mixed multiplicative
/// energy #{x*y' = x'*y}.
template <FieldScalar S>
Count ratio_energy(std::span<const S> xset, std::span<const S> yset) {
  std::unordered_map<S, Count> ratios;
  const auto xs = detail::dedup(xset);
  const auto ys = detail::dedup(yset);
  for (const auto& x : xs) {
    if (x.is_zero()) continue;
    for (const auto& y : ys) {
      if (!y.is_zero()) ++ratios[x / y];
    }
  }
  return detail::squares(ratios);
}

}  // namespace affine_energy
