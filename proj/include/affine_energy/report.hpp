#pragma once

// Energy reports and their JSON / CSV renderings. Every ratio is carried as
// an exact certified bound ("num/den") with a 12-digit decimal beside it.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"

#include "affine_energy/affine.hpp"
#include "affine_energy/energy.hpp"
#include "affine_energy/exact_ratio.hpp"
#include "affine_energy/incidence3d.hpp"
#include "affine_energy/plane.hpp"
#include "affine_energy/richlines.hpp"

namespace affine_energy {

using Json = nlohmann::ordered_json;

struct SliceRow {
  std::string c;
  Count slice_size = 0;
  Count q_c = 0;
};

struct EnergyReport {
  std::string field;
  std::size_t size = 0;
  std::size_t m = 0;  // most elements on a vertical line (coset of U)
  std::size_t M = 0;  // most elements on any line
  Count energy = 0;
  Count energy_star = 0;
  std::size_t product_size = 0;   // |AA|
  std::size_t quotient_size = 0;  // |A^-1 A|
  std::vector<SliceRow> slices;
  /// max{E, E*} / (m^1/2 |A|^5/2 + M |A|^2)
  BoundRatio ratio_main;
  /// min{|AA|, |A^-1 A|} / (m^-1/2 |A|^3/2 + M^-1 |A|^2)
  BoundRatio ratio_growth;
  /// E / (M |A|^2), exact.
  mpq_class energy_over_m_a2;
  bool decomposition_sums = false;  // sum_C Q_C = E
  bool slices_sum = false;          // sum_C |C_C| = |A|^2
  bool slices_bounded = false;      // |C_C| <= m |A| for all C
  bool star_at_most_energy = false;  // E* <= E
  bool cs_quotient = false;          // E |A^-1 A| >= |A|^4
  bool cs_product = false;           // E* |AA| >= |A|^4
  /// Positive characteristic only: m |A| <= p^2, and m |A| |A|^2 / p.
  std::optional<bool> slice_constraint;
  std::optional<mpq_class> correction_term;

  bool identities_hold() const {
    return decomposition_sums && slices_sum && slices_bounded && star_at_most_energy && cs_quotient && cs_product;
  }
};

template <FieldScalar S>
EnergyReport main_bound_report(const AffineSet<S>& a) {
  if (a.empty()) throw Error(ErrorCode::invalid_spec, "energy report of an empty set");
  EnergyReport r;
  const FieldSpec f = a.field();
  r.field = f.to_string();
  r.size = a.size();
  r.m = max_on_vertical(a);
  r.M = max_on_line(a);
  r.energy = energy(a);
  r.energy_star = energy_star(a);
  r.product_size = product_set(a, a, ProductMode::product).size();
  r.quotient_size = product_set(a, a, ProductMode::quotient).size();

  const auto q = decompose_by_c(a);
  const auto sizes = slice_sizes(a);
  Count q_total = 0, slice_total = 0;
  r.slices_bounded = true;
  const Count slice_cap = static_cast<Count>(r.m) * r.size;
  for (const auto& [c, size] : sizes) {
    auto it = q.find(c);
    const Count qc = it == q.end() ? 0 : it->second;
    r.slices.push_back({c.to_string(), size, qc});
    q_total += qc;
    slice_total += size;
    if (size > slice_cap) r.slices_bounded = false;
  }
  // Every quadruple's C is realized by a slice, so q has no other keys.
  for (const auto& [c, qc] : q) {
    if (!sizes.contains(c)) q_total += qc;
  }
  const mpz_class n = static_cast<unsigned long>(r.size);
  const mpz_class n4 = n * n * n * n;
  r.decomposition_sums = q_total == r.energy;
  r.slices_sum = slice_total == static_cast<Count>(r.size) * r.size;
  r.star_at_most_energy = r.energy_star <= r.energy;
  r.cs_quotient = mpz_class(static_cast<unsigned long>(r.energy)) * static_cast<unsigned long>(r.quotient_size) >= n4;
  r.cs_product = mpz_class(static_cast<unsigned long>(r.energy_star)) * static_cast<unsigned long>(r.product_size) >= n4;

  const mpq_class qn(n), qm(static_cast<unsigned long>(r.m)), qM(static_cast<unsigned long>(r.M));
  r.ratio_main = BoundRatio(mpq_class(static_cast<unsigned long>(std::max(r.energy, r.energy_star))),
                            {RadicalTerm::power_product({{qm, 1, 2}, {qn, 5, 2}}), RadicalTerm::power_product({{qM, 1, 1}, {qn, 2, 1}})});
  r.ratio_growth = BoundRatio(mpq_class(static_cast<unsigned long>(std::min(r.product_size, r.quotient_size))),
                              {RadicalTerm::power_product({{qm, -1, 2}, {qn, 3, 2}}), RadicalTerm::power_product({{qM, -1, 1}, {qn, 2, 1}})});
  r.energy_over_m_a2 = mpq_class(static_cast<unsigned long>(r.energy)) / (qM * qn * qn);
  r.energy_over_m_a2.canonicalize();
  if (f.is_prime()) {
    r.slice_constraint = slice_constraint_holds(a);
    mpq_class corr = qm * qn * qn * qn / mpq_class(static_cast<unsigned long>(f.characteristic()));
    corr.canonicalize();
    r.correction_term = corr;
  }
  return r;
}

// ---------------------------------------------------------------- JSON

inline Json ratio_json(const BoundRatio& r) {
  Json j;
  j["fraction"] = r.fraction();
  j["decimal"] = r.decimal();
  return j;
}

inline Json to_json(const EnergyReport& r) {
  Json j;
  j["field"] = r.field;
  j["size"] = r.size;
  j["m"] = r.m;
  j["M"] = r.M;
  j["E"] = r.energy;
  j["E_star"] = r.energy_star;
  j["AA"] = r.product_size;
  j["AinvA"] = r.quotient_size;
  j["ratio_main"] = ratio_json(r.ratio_main);
  j["ratio_growth"] = ratio_json(r.ratio_growth);
  j["E_over_M_A2"] = r.energy_over_m_a2.get_str();
  Json checks;
  checks["sum_Q_C_equals_E"] = r.decomposition_sums;
  checks["sum_slices_equals_A2"] = r.slices_sum;
  checks["slices_at_most_mA"] = r.slices_bounded;
  checks["E_star_at_most_E"] = r.star_at_most_energy;
  checks["cs_quotient"] = r.cs_quotient;
  checks["cs_product"] = r.cs_product;
  j["checks"] = checks;
  if (r.slice_constraint) {
    j["mA_at_most_p2"] = *r.slice_constraint;
    j["correction_term"] = r.correction_term->get_str();
  } else {
    j["mA_at_most_p2"] = nullptr;
    j["correction_term"] = nullptr;
  }
  Json rows = Json::array();
  for (const auto& s : r.slices) {
    Json row;
    row["C"] = s.c;
    row["slice_size"] = s.slice_size;
    row["Q_C"] = s.q_c;
    rows.push_back(row);
  }
  j["decomposition"] = rows;
  return j;
}

inline Json to_json(const PointPlaneReport& r) {
  Json j;
  j["points"] = r.points;
  j["planes"] = r.planes;
  j["swapped"] = r.swapped;
  j["incidences"] = r.incidences;
  j["k"] = r.k;
  j["ratio"] = ratio_json(r.ratio);
  j["ratio_asymptotic"] = r.ratio_asymptotic ? ratio_json(*r.ratio_asymptotic) : Json(nullptr);
  j["exceeds_p_squared"] = r.exceeds_p_squared;
  return j;
}

inline Json to_json(const ElekesBoundReport& r) {
  Json j;
  j["form"] = r.form == IncidenceBoundForm::characteristic_zero ? "characteristic_zero" : "positive_characteristic";
  j["S"] = r.s_size;
  j["T"] = r.t_size;
  j["lines"] = r.lines;
  j["incidences"] = r.incidences;
  j["E"] = r.energy;
  j["ratio"] = ratio_json(r.ratio);
  return j;
}

inline Json to_json(const QuadrangleCorrespondence& r) {
  Json j;
  j["energy_quadruples"] = r.energy_quadruples;
  j["quadrangles"] = r.quadrangles;
  j["quadrangles_in_energy"] = r.quadrangles_in_energy;
  j["quadrangles_outside_energy"] = r.quadrangles_outside_energy;
  j["trivial"] = r.trivial;
  j["collinear"] = r.collinear;
  j["unclassified"] = r.unclassified;
  j["exhaustive"] = r.exhaustive();
  return j;
}

template <FieldScalar S>
Json scalars_json(const std::vector<S>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(x.to_string());
  return a;
}

template <FieldScalar S>
Json to_json(const ShadowIncidenceReport<S>& r) {
  Json j;
  j["removed"] = r.removed;
  j["points"] = r.normalized.size();
  j["shadow_infinity"] = r.shadow_infinity;
  j["shadow_y_axis"] = r.shadow_y_axis;
  j["S"] = r.slopes.size();
  j["T"] = r.intercepts.size();
  j["vertical_lines"] = r.vertical_lines;
  j["I_spanned"] = r.spanned_incidences;
  j["I_spanned_nonvertical"] = r.spanned_incidences_nonvertical;
  j["I_grid"] = r.grid_incidences;
  j["holds"] = r.holds;
  j["holds_nonvertical"] = r.holds_nonvertical;
  return j;
}

inline Json to_json(const FamilyChain& c) {
  Json j;
  j["B"] = c.family_size;
  j["sum_r"] = c.sum_r.get_str();
  j["sum_r2"] = c.sum_r_squared.get_str();
  j["E_plus_mixed"] = c.mixed_energy.get_str();
  j["E_plus"] = c.additive_energy.get_str();
  j["lower_holds"] = c.lower_holds;
  j["cs_holds"] = c.cs_holds;
  j["mixed_holds"] = c.mixed_holds;
  j["energy_holds"] = c.energy_holds;
  return j;
}

inline Json to_json(const PencilChain& c) {
  Json j;
  j["B"] = c.pencil_size;
  j["sum_r"] = c.sum_r.get_str();
  j["sum_r2"] = c.sum_r_squared.get_str();
  j["ratio_energy"] = c.ratio_energy.get_str();
  j["E_mul_x0"] = c.mul_energy_x.get_str();
  j["E_mul_y0"] = c.mul_energy_y.get_str();
  j["dropped_x0"] = c.dropped_x;
  j["dropped_y0"] = c.dropped_y;
  j["lower_holds"] = c.lower_holds;
  j["cs_holds"] = c.cs_holds;
  j["ratio_holds"] = c.ratio_holds;
  j["product_holds"] = c.product_holds;
  j["fourth_power_holds"] = c.fourth_power_holds;
  return j;
}

inline Json optional_ratio(const std::optional<BoundRatio>& r) { return r ? ratio_json(*r) : Json(nullptr); }

template <FieldScalar S>
Json to_json(const RichLineReport<S>& r) {
  Json j;
  j["lines"] = r.counts.size();
  j["incidences"] = r.total_incidences;
  j["threshold"] = r.threshold;
  j["rich"] = r.rich.size();
  Json rich = Json::array();
  for (const auto& l : r.rich) rich.push_back(l.to_string());
  j["rich_lines"] = rich;
  if (r.family) {
    Json f;
    f["gamma"] = r.family->gamma.to_string();
    f["intercepts"] = scalars_json(r.family->intercepts);
    f["chain"] = to_json(*r.family_chain);
    j["family"] = f;
  } else {
    j["family"] = nullptr;
  }
  if (r.pencil) {
    Json p;
    p["x0"] = r.pencil->x0.to_string();
    p["y0"] = r.pencil->y0.to_string();
    p["slopes"] = scalars_json(r.pencil->slopes);
    p["chain"] = to_json(*r.pencil_chain);
    j["pencil"] = p;
  } else {
    j["pencil"] = nullptr;
  }
  j["E_plus"] = r.additive_energy;
  Json g;
  g["alpha_too_small"] = r.guards.alpha_too_small;
  g["alpha_warning"] = r.guards.alpha_warning;
  g["characteristic_too_small"] = r.guards.characteristic_too_small;
  j["guards"] = g;
  Json q;
  q["C"] = r.ratios.exponent;
  q["parallel_count"] = optional_ratio(r.ratios.parallel_count);
  q["parallel_energy"] = optional_ratio(r.ratios.parallel_energy);
  q["pencil_count"] = optional_ratio(r.ratios.pencil_count);
  q["pencil_energy"] = optional_ratio(r.ratios.pencil_energy);
  j["measured"] = q;
  j["chains_hold"] = r.chains_hold();
  return j;
}

// ----------------------------------------------------------------- CSV

/// RFC 4180 quoting for fields containing separators or quotes.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  return out + "\n";
}

inline constexpr const char* kEnergyCsvSchema = "# affine-energy energy-report v1";

inline std::vector<std::string> energy_csv_header() {
  return {"field", "size", "m", "M", "E", "E_star", "AA", "AinvA", "ratio_main", "ratio_main_decimal", "ratio_growth",
          "ratio_growth_decimal", "E_over_M_A2", "identities_hold", "mA_at_most_p2", "correction_term", "decomposition"};
}

inline std::vector<std::string> energy_csv_fields(const EnergyReport& r) {
  std::string decomposition;
  for (const auto& s : r.slices) {
    if (!decomposition.empty()) decomposition += ';';
    decomposition += s.c + "=" + std::to_string(s.slice_size) + "/" + std::to_string(s.q_c);
  }
  return {r.field,
          std::to_string(r.size),
          std::to_string(r.m),
          std::to_string(r.M),
          std::to_string(r.energy),
          std::to_string(r.energy_star),
          std::to_string(r.product_size),
          std::to_string(r.quotient_size),
          r.ratio_main.fraction(),
          r.ratio_main.decimal(),
          r.ratio_growth.fraction(),
          r.ratio_growth.decimal(),
          r.energy_over_m_a2.get_str(),
          r.identities_hold() ? "1" : "0",
          r.slice_constraint ? (*r.slice_constraint ? "1" : "0") : "",
          r.correction_term ? r.correction_term->get_str() : "",
          decomposition};
}

}  // namespace affine_energy
