#pragma once

// Lines y = a*x + b against grids S x T: incidence counts, rich lines,
// parallel families and concurrent pencils among them, and the exact
// Cauchy-Schwarz chains tying those structures to additive and
// multiplicative energies of A when S = T = A.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "affine_energy/affine.hpp"
#include "affine_energy/energy.hpp"
#include "affine_energy/exact_ratio.hpp"
#include "affine_energy/incidence3d.hpp"

namespace affine_energy {

template <FieldScalar S>
struct GridInstance {
  std::vector<S> s;
  std::vector<S> t;
  /// Each map (a, b) is the line y = a*x + b.
  AffineSet<S> lines;
  mpq_class alpha;
  /// Input rows dropped because their slope was 0.
  std::size_t rejected_horizontal = 0;

  GridInstance(std::vector<S> s_in, std::vector<S> t_in, AffineSet<S> lines_in, mpq_class alpha_in)
      : s(sorted_unique(std::move(s_in))), t(sorted_unique(std::move(t_in))), lines(std::move(lines_in)), alpha(std::move(alpha_in)) {
    alpha.canonicalize();
    if (s.empty() || t.empty()) throw Error(ErrorCode::invalid_spec, "grid sides must be nonempty");
    if (sgn(alpha) <= 0 || alpha > 1) throw Error(ErrorCode::invalid_spec, "alpha must lie in (0, 1]");
    for (const auto& x : s) check_field(x);
    for (const auto& x : t) check_field(x);
  }

  /// Builds the instance from raw (a, b) rows, skipping rows with a = 0.
  static GridInstance from_rows(const FieldSpec& f, std::vector<S> s_in, std::vector<S> t_in,
                                const std::vector<std::pair<S, S>>& rows, mpq_class alpha_in) {
    std::vector<AffineMap<S>> maps;
    std::size_t rejected = 0;
    for (const auto& [a, b] : rows) {
      if (a.is_zero()) {
        ++rejected;
        continue;
      }
      maps.emplace_back(a, b);
    }
    GridInstance g(std::move(s_in), std::move(t_in), AffineSet<S>(f, std::move(maps)), std::move(alpha_in));
    g.rejected_horizontal = rejected;
    return g;
  }

  /// S = T = A.
  bool symmetric() const { return s == t; }

 private:
  void check_field(const S& x) const {
    if (!(x.field() == lines.field())) throw Error(ErrorCode::field_mismatch, "grid scalar over a different field");
  }
};

struct GridIncidences {
  /// counts[i] belongs to lines[i].
  std::vector<Count> counts;
  Count total = 0;
};

template <FieldScalar S>
GridIncidences grid_incidences(std::span<const S> s, std::span<const S> t, const AffineSet<S>& lines) {
  const std::unordered_set<S> tset(t.begin(), t.end());
  const auto xs = detail::dedup(s);
  GridIncidences out;
  out.counts.reserve(lines.size());
  for (const auto& l : lines) {
    Count c = 0;
    for (const auto& x : xs) {
      if (tset.contains(l(x))) ++c;
    }
    out.counts.push_back(c);
    out.total += c;
  }
  return out;
}

template <FieldScalar S>
GridIncidences grid_incidences(const GridInstance<S>& inst) {
  return grid_incidences<S>(inst.s, inst.t, inst.lines);
}

/// ceil(alpha * min(|S|, |T|)).
template <FieldScalar S>
Count rich_threshold(const GridInstance<S>& inst) {
  const mpq_class x = inst.alpha * static_cast<unsigned long>(std::min(inst.s.size(), inst.t.size()));
  return detail::ceil_div(x.get_num(), x.get_den()).get_ui();
}

template <FieldScalar S>
AffineSet<S> rich_lines(const GridInstance<S>& inst) {
  const auto inc = grid_incidences(inst);
  const Count threshold = rich_threshold(inst);
  std::vector<AffineMap<S>> out;
  for (std::size_t i = 0; i < inst.lines.size(); ++i) {
    if (inc.counts[i] >= threshold) out.push_back(inst.lines[i]);
  }
  return AffineSet<S>(inst.lines.field(), std::move(out));
}

template <FieldScalar S>
struct ParallelFamily {
  S gamma;
  std::vector<S> intercepts;
};

/// The most populated slope class; ties go to the smallest slope.
template <FieldScalar S>
std::optional<ParallelFamily<S>> max_parallel_family(const AffineSet<S>& lines) {
  std::optional<ParallelFamily<S>> best;
  // Lines are sorted by (slope, intercept), so slope classes are runs.
  for (std::size_t i = 0; i < lines.size();) {
    std::size_t j = i;
    while (j < lines.size() && lines[j].slope() == lines[i].slope()) ++j;
    if (!best || j - i > best->intercepts.size()) {
      ParallelFamily<S> fam{lines[i].slope(), {}};
      for (std::size_t k = i; k < j; ++k) fam.intercepts.push_back(lines[k].intercept());
      best = std::move(fam);
    }
    i = j;
  }
  return best;
}

template <class S>
struct PairHash {
  std::size_t operator()(const std::pair<S, S>& p) const noexcept { return detail::hash_combine(p.first.hash(), p.second.hash()); }
};

template <FieldScalar S>
struct Pencil {
  S x0;
  S y0;
  /// Slopes of the lines through (x0, y0), sorted.
  std::vector<S> slopes;
};

namespace detail {

template <FieldScalar S>
std::pair<S, S> intersection(const AffineMap<S>& l, const AffineMap<S>& m) {
  const S x = (m.intercept() - l.intercept()) / (l.slope() - m.slope());
  return {x, l(x)};
}

template <FieldScalar S>
Pencil<S> pencil_through(const AffineSet<S>& lines, const S& x0, const S& y0) {
  Pencil<S> p{x0, y0, {}};
  for (const auto& l : lines) {
    if (l(x0) == y0) p.slopes.push_back(l.slope());
  }
  return p;
}

// No two lines meet: every pencil has one line. Canonical choice is the
// first line's point above x = 0.
template <FieldScalar S>
Pencil<S> single_line_pencil(const AffineSet<S>& lines) {
  const auto& l = lines[0];
  return Pencil<S>{zero_like(l.slope()), l.intercept(), {l.slope()}};
}

}  // namespace detail

/// The affine point on the most lines, by exact pairwise-intersection
/// voting. A point on k lines receives k(k-1)/2 votes. Ties go to the
/// smallest (x0, y0).
template <FieldScalar S>
Pencil<S> max_concurrent_pencil(const AffineSet<S>& lines) {
  if (lines.size() < 2) throw Error(ErrorCode::too_few_lines, "a pencil needs at least two lines");
  std::unordered_map<std::pair<S, S>, Count, PairHash<S>> votes;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      if (lines[i].slope() == lines[j].slope()) continue;
      ++votes[detail::intersection(lines[i], lines[j])];
    }
  }
  if (votes.empty()) return detail::single_line_pencil(lines);
  const std::pair<S, S>* best = nullptr;
  Count best_votes = 0;
  for (const auto& [pt, v] : votes) {
    if (best == nullptr || v > best_votes || (v == best_votes && pt < *best)) {
      best = &pt;
      best_votes = v;
    }
  }
  return detail::pencil_through(lines, best->first, best->second);
}

/// Oracle: every pairwise intersection, then every line tested against it.
template <FieldScalar S>
Pencil<S> max_concurrent_pencil_bruteforce(const AffineSet<S>& lines, std::size_t cap = 60) {
  if (lines.size() < 2) throw Error(ErrorCode::too_few_lines, "a pencil needs at least two lines");
  detail::check_oracle_cap(lines.size(), cap);
  std::optional<std::pair<S, S>> best;
  std::size_t best_count = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      if (lines[i].slope() == lines[j].slope()) continue;
      const S x = (lines[j].intercept() - lines[i].intercept()) / (lines[i].slope() - lines[j].slope());
      const S y = lines[i].slope() * x + lines[i].intercept();
      std::size_t c = 0;
      for (const auto& l : lines) {
        if (l.slope() * x + l.intercept() == y) ++c;
      }
      const std::pair<S, S> pt{x, y};
      if (!best || c > best_count || (c == best_count && pt < *best)) {
        best = pt;
        best_count = c;
      }
    }
  }
  if (!best) return detail::single_line_pencil(lines);
  return detail::pencil_through(lines, best->first, best->second);
}

struct FamilyChain {
  std::size_t family_size = 0;
  /// sum over beta in B of r_{A - gamma A}(beta).
  mpz_class sum_r;
  /// sum over beta in B of r_{A - gamma A}(beta)^2.
  mpz_class sum_r_squared;
  /// E+(A, gamma A) = sum over all beta of r_{A - gamma A}(beta)^2.
  mpz_class mixed_energy;
  mpz_class additive_energy;
  bool lower_holds = false;   // ceil(alpha n) |B| <= sum_r
  bool cs_holds = false;      // sum_r^2 <= |B| sum_r_squared
  bool mixed_holds = false;   // sum_r_squared <= mixed_energy
  bool energy_holds = false;  // mixed_energy <= additive_energy
  bool holds() const { return cs_holds && mixed_holds && energy_holds; }
};

struct PencilChain {
  std::size_t pencil_size = 0;
  /// sum over beta in B of r_{(A - y0)/(A - x0)}(beta).
  mpz_class sum_r;
  mpz_class sum_r_squared;
  /// #{(t - y0)(s' - x0) = (t' - y0)(s - x0)} over s, s' != x0 and t, t' != y0.
  mpz_class ratio_energy;
  mpz_class mul_energy_x;
  mpz_class mul_energy_y;
  std::size_t dropped_x = 0;
  std::size_t dropped_y = 0;
  bool lower_holds = false;      // ceil(alpha n) |B| <= sum_r + |B| [x0, y0 in A]
  bool cs_holds = false;         // sum_r^2 <= |B| sum_r_squared
  bool ratio_holds = false;      // sum_r_squared <= ratio_energy
  bool product_holds = false;    // ratio_energy^2 <= mul_energy_x mul_energy_y
  bool fourth_power_holds = false;  // sum_r^4 <= |B|^2 mul_energy_x mul_energy_y
  bool holds() const { return cs_holds && ratio_holds && product_holds && fourth_power_holds; }
};

/// Measured constants of the rich-lines theorem; each ratio is observed
/// value over its predicted order with the implicit constant set to 1.
struct RichLineRatios {
  unsigned exponent = 12;
  std::optional<BoundRatio> parallel_count;   // |B| / (alpha^C n^-2 k^3)
  std::optional<BoundRatio> parallel_energy;  // E+(A) / (alpha^(2+C) k^3)
  std::optional<BoundRatio> pencil_count;     // |B| / (alpha^(C/2) n^-1 k^2)
  std::optional<BoundRatio> pencil_energy;    // max E^x(A - s) / (alpha^(2+C/2) n k^2)
};

struct RichLineGuards {
  /// alpha^2 n < 1, i.e. alpha below n^-1/2.
  bool alpha_too_small = false;
  /// 1 <= alpha^2 n < 4: inside the warning band above n^-1/2.
  bool alpha_warning = false;
  /// Positive characteristic with p < max{k, alpha^-2 n}.
  bool characteristic_too_small = false;
};

template <FieldScalar S>
struct RichLineReport {
  std::vector<Count> counts;
  Count total_incidences = 0;
  Count threshold = 0;
  AffineSet<S> rich;
  std::optional<ParallelFamily<S>> family;
  std::optional<Pencil<S>> pencil;
  std::optional<FamilyChain> family_chain;
  std::optional<PencilChain> pencil_chain;
  Count additive_energy = 0;
  RichLineGuards guards;
  RichLineRatios ratios;
  bool chains_hold() const {
    return (!family_chain || family_chain->holds()) && (!pencil_chain || pencil_chain->holds());
  }
};

namespace detail {

inline mpz_class to_mpz(Count c) { return mpz_class(static_cast<unsigned long>(c)); }

inline mpq_class to_mpq(Count c) { return mpq_class(to_mpz(c)); }

inline mpq_class pow_q(const mpq_class& base, long e) {
  mpq_class r = 1;
  const mpq_class b = e < 0 ? mpq_class(1 / base) : base;
  for (long i = 0; i < (e < 0 ? -e : e); ++i) r *= b;
  r.canonicalize();
  return r;
}

template <FieldScalar S>
FamilyChain family_chain(const std::vector<S>& a, const ParallelFamily<S>& fam, Count threshold) {
  FamilyChain c;
  c.family_size = fam.intercepts.size();
  std::vector<S> scaled;
  for (const auto& x : a) scaled.push_back(fam.gamma * x);
  std::unordered_map<S, Count> r;
  for (const auto& t : a) {
    for (const auto& x : scaled) ++r[t - x];
  }
  for (const auto& beta : fam.intercepts) {
    auto it = r.find(beta);
    const Count v = it == r.end() ? 0 : it->second;
    c.sum_r += to_mpz(v);
    c.sum_r_squared += to_mpz(v) * to_mpz(v);
  }
  c.mixed_energy = to_mpz(squares(r));
  c.additive_energy = to_mpz(scalar_energy_add<S>(a));
  const mpz_class b = static_cast<unsigned long>(c.family_size);
  c.lower_holds = to_mpz(threshold) * b <= c.sum_r;
  c.cs_holds = c.sum_r * c.sum_r <= b * c.sum_r_squared;
  c.mixed_holds = c.sum_r_squared <= c.mixed_energy;
  c.energy_holds = c.mixed_energy <= c.additive_energy;
  return c;
}

template <FieldScalar S>
PencilChain pencil_chain(const std::vector<S>& a, const Pencil<S>& p, Count threshold) {
  PencilChain c;
  c.pencil_size = p.slopes.size();
  std::vector<S> xs, ys;
  for (const auto& v : a) {
    if (v != p.x0) xs.push_back(v - p.x0);
    if (v != p.y0) ys.push_back(v - p.y0);
  }
  std::unordered_map<S, Count> r;
  for (const auto& y : ys) {
    for (const auto& x : xs) ++r[y / x];
  }
  for (const auto& beta : p.slopes) {
    auto it = r.find(beta);
    const Count v = it == r.end() ? 0 : it->second;
    c.sum_r += to_mpz(v);
    c.sum_r_squared += to_mpz(v) * to_mpz(v);
  }
  c.ratio_energy = to_mpz(squares(r));
  const auto ex = scalar_energy_mul<S>(a, p.x0);
  const auto ey = scalar_energy_mul<S>(a, p.y0);
  c.mul_energy_x = to_mpz(ex.energy);
  c.mul_energy_y = to_mpz(ey.energy);
  c.dropped_x = ex.dropped;
  c.dropped_y = ey.dropped;
  const mpz_class b = static_cast<unsigned long>(c.pencil_size);
  // (x0, y0) itself is on every line of the pencil but is not counted by r.
  const mpz_class corner = (c.dropped_x != 0 && c.dropped_y != 0) ? b : mpz_class(0);
  c.lower_holds = to_mpz(threshold) * b <= c.sum_r + corner;
  c.cs_holds = c.sum_r * c.sum_r <= b * c.sum_r_squared;
  c.ratio_holds = c.sum_r_squared <= c.ratio_energy;
  c.product_holds = c.ratio_energy * c.ratio_energy <= c.mul_energy_x * c.mul_energy_y;
  const mpz_class s2 = c.sum_r * c.sum_r;
  c.fourth_power_holds = s2 * s2 <= b * b * c.mul_energy_x * c.mul_energy_y;
  return c;
}

}  // namespace detail

/// Rich lines of an S = T = A instance with their parallel and concurrent
/// structure, energy chains, hypothesis guards and measured constants.
template <FieldScalar S>
RichLineReport<S> structure_report(const GridInstance<S>& inst) {
  if (!inst.symmetric()) throw Error(ErrorCode::invalid_spec, "structure report needs S = T");
  const FieldSpec f = inst.lines.field();
  const auto inc = grid_incidences(inst);
  RichLineReport<S> r{.counts = inc.counts, .total_incidences = inc.total, .threshold = rich_threshold(inst), .rich = rich_lines(inst),
                      .family = {}, .pencil = {}, .family_chain = {}, .pencil_chain = {}, .additive_energy = 0, .guards = {}, .ratios = {}};
  const std::vector<S>& a = inst.s;
  r.additive_energy = scalar_energy_add<S>(a);

  const mpq_class n = static_cast<unsigned long>(a.size());
  const mpq_class k = static_cast<unsigned long>(r.rich.size());
  const mpq_class a2n = inst.alpha * inst.alpha * n;
  r.guards.alpha_too_small = a2n < 1;
  r.guards.alpha_warning = !r.guards.alpha_too_small && a2n < 4;
  if (f.is_prime()) {
    const mpq_class p = static_cast<unsigned long>(f.characteristic());
    r.guards.characteristic_too_small = p < k || p < n / (inst.alpha * inst.alpha);
  }

  const unsigned cexp = f.is_prime() ? 16 : 12;
  r.ratios.exponent = cexp;
  r.family = max_parallel_family(r.rich);
  if (r.family) {
    r.family_chain = detail::family_chain(a, *r.family, r.threshold);
    const mpq_class b = static_cast<unsigned long>(r.family->intercepts.size());
    r.ratios.parallel_count = BoundRatio(b, {RadicalTerm::rational(detail::pow_q(inst.alpha, cexp) * detail::pow_q(k, 3) / (n * n))});
    r.ratios.parallel_energy = BoundRatio(detail::to_mpq(r.additive_energy),
                                          {RadicalTerm::rational(detail::pow_q(inst.alpha, 2 + cexp) * detail::pow_q(k, 3))});
  }
  if (r.rich.size() >= 2) {
    r.pencil = max_concurrent_pencil(r.rich);
    r.pencil_chain = detail::pencil_chain(a, *r.pencil, r.threshold);
    const mpq_class b = static_cast<unsigned long>(r.pencil->slopes.size());
    r.ratios.pencil_count = BoundRatio(b, {RadicalTerm::rational(detail::pow_q(inst.alpha, cexp / 2) * k * k / n)});
    const mpz_class best_mul = std::max(r.pencil_chain->mul_energy_x, r.pencil_chain->mul_energy_y);
    r.ratios.pencil_energy = BoundRatio(mpq_class(best_mul), {RadicalTerm::rational(detail::pow_q(inst.alpha, 2 + cexp / 2) * n * k * k)});
  }
  return r;
}

enum class IncidenceBoundForm { characteristic_zero, positive_characteristic };

struct ElekesBoundReport {
  IncidenceBoundForm form = IncidenceBoundForm::characteristic_zero;
  std::size_t s_size = 0;
  std::size_t t_size = 0;
  std::size_t lines = 0;
  Count incidences = 0;
  Count energy = 0;
  BoundRatio ratio;
};

/// I(S x T, A) against the grid incidence bound in terms of E(A):
///   char 0: |T|^1/2 |S|^2/3 E^1/6 |A|^1/3 + |T|^1/2 |A|
///   char p: |T|^1/2 |S|^5/8 E^1/8 |A|^1/2 + |T|^1/2 |A| max{1, |S|^2/p}^1/2
template <FieldScalar S>
ElekesBoundReport elekes_incidence_bound_check(std::span<const S> s, std::span<const S> t, const AffineSet<S>& a) {
  if (a.empty()) throw Error(ErrorCode::too_few_lines, "incidence bound needs at least one line");
  ElekesBoundReport r;
  const auto xs = detail::dedup(s);
  const auto ys = detail::dedup(t);
  if (xs.empty() || ys.empty()) throw Error(ErrorCode::invalid_spec, "grid sides must be nonempty");
  r.s_size = xs.size();
  r.t_size = ys.size();
  r.lines = a.size();
  r.incidences = grid_incidences<S>(xs, ys, a).total;
  r.energy = energy(a);
  const mpq_class qs = static_cast<unsigned long>(r.s_size);
  const mpq_class qt = static_cast<unsigned long>(r.t_size);
  const mpq_class qa = static_cast<unsigned long>(r.lines);
  const mpq_class qe = detail::to_mpq(r.energy);
  std::vector<RadicalTerm> rhs;
  const FieldSpec f = a.field();
  if (!f.is_prime()) {
    r.form = IncidenceBoundForm::characteristic_zero;
    rhs.push_back(RadicalTerm::power_product({{qt, 1, 2}, {qs, 2, 3}, {qe, 1, 6}, {qa, 1, 3}}));
    rhs.push_back(RadicalTerm::power_product({{qt, 1, 2}, {qa, 1, 1}}));
  } else {
    r.form = IncidenceBoundForm::positive_characteristic;
    const mpq_class p = static_cast<unsigned long>(f.characteristic());
    const mpq_class spread = std::max(mpq_class(1), mpq_class(qs * qs / p));
    rhs.push_back(RadicalTerm::power_product({{qt, 1, 2}, {qs, 5, 8}, {qe, 1, 8}, {qa, 1, 2}}));
    rhs.push_back(RadicalTerm::power_product({{qt, 1, 2}, {qa, 1, 1}, {spread, 1, 2}}));
  }
  r.ratio = BoundRatio(detail::to_mpq(r.incidences), std::move(rhs));
  return r;
}

}  // namespace affine_energy
