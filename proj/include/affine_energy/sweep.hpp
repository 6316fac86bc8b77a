#pragma once

// Size sweeps over a generator template. Instances are computed on a worker
// pool and rows are emitted in parameter order, so output does not depend
// on the number of workers.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "affine_energy/energy.hpp"
#include "affine_energy/generators.hpp"
#include "affine_energy/incidence3d.hpp"
#include "affine_energy/report.hpp"
#include "affine_energy/richlines.hpp"

namespace affine_energy {

struct SweepRow {
  std::string spec;
  std::string field;
  long param = 0;
  std::size_t collisions = 0;
  EnergyReport energy;
  /// Point-plane report on the slice with the largest Q_C.
  std::string pointplane_c;
  PointPlaneReport pointplane;
  ElekesBoundReport elekes;
};

/// Replaces every 'N' in the template with the parameter.
inline std::string substitute_parameter(const std::string& templ, long value) {
  std::string out;
  for (char c : templ) {
    if (c == 'N') {
      out += std::to_string(value);
    } else {
      out += c;
    }
  }
  return out;
}

/// The slice carrying the most energy quadruples (smallest C on ties).
template <FieldScalar S>
S heaviest_slice(const AffineSet<S>& a) {
  std::optional<std::pair<S, Count>> best;
  for (const auto& [c, q] : decompose_by_c(a)) {
    if (!best || q > best->second) best.emplace(c, q);
  }
  return best->first;
}

/// S = T = {0, ..., k-1} with k = max(2, ceil(sqrt|A|)).
template <FieldScalar S>
std::vector<S> sweep_grid_side(const AffineSet<S>& a) {
  std::size_t k = 2;
  while (k * k < a.size()) ++k;
  std::vector<S> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(S::from_int(a.field(), static_cast<std::int64_t>(i)));
  return sorted_unique(std::move(out));
}

template <FieldScalar S>
SweepRow sweep_instance(const std::string& spec, const FieldSpec& f, long param) {
  const GenSpec g = GenSpec::parse(spec);
  const GenResult<S> gen = generate<S>(g, f);
  const AffineSet<S> a = gen.affine(f);
  SweepRow row;
  row.spec = spec;
  row.field = f.to_string();
  row.param = param;
  row.collisions = gen.collisions;
  row.energy = main_bound_report(a);
  const S c = heaviest_slice(a);
  row.pointplane_c = c.to_string();
  row.pointplane = pointplane_bound_report(slice_instance(a, c), f.characteristic());
  const auto side = sweep_grid_side(a);
  row.elekes = elekes_incidence_bound_check<S>(side, side, a);
  return row;
}

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. The first
/// exception thrown by any task is rethrown after all workers finish.
template <class Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline std::vector<SweepRow> run_sweep(const std::string& templ, const FieldSpec& f, long lo, long hi, std::size_t jobs) {
  if (hi < lo) throw Error(ErrorCode::invalid_spec, "empty sweep range");
  const auto count = static_cast<std::size_t>(hi - lo + 1);
  std::vector<SweepRow> rows(count);
  parallel_for(count, jobs, [&](std::size_t i) {
    const long param = lo + static_cast<long>(i);
    const std::string spec = substitute_parameter(templ, param);
    rows[i] = dispatch_field(f, [&](auto tag) {
      using S = typename decltype(tag)::type;
      return sweep_instance<S>(spec, f, param);
    });
  });
  return rows;
}

inline constexpr const char* kSweepCsvSchema = "# affine-energy sweep v1";

inline std::vector<std::string> sweep_csv_header() {
  return {"spec",          "field",        "N",
          "collisions",    "size",         "m",
          "M",             "E",            "E_star",
          "AA",            "AinvA",        "ratio_main",
          "ratio_main_decimal", "ratio_growth", "ratio_growth_decimal",
          "E_over_M_A2",   "identities_hold", "mA_at_most_p2",
          "pp_C",          "pp_points",    "pp_planes",
          "pp_k",          "pp_incidences", "ratio_pointplane",
          "ratio_pointplane_decimal", "elekes_S", "elekes_T",
          "elekes_I",      "ratio_elekes", "ratio_elekes_decimal"};
}

inline std::vector<std::string> sweep_csv_fields(const SweepRow& r) {
  const EnergyReport& e = r.energy;
  return {r.spec,
          r.field,
          std::to_string(r.param),
          std::to_string(r.collisions),
          std::to_string(e.size),
          std::to_string(e.m),
          std::to_string(e.M),
          std::to_string(e.energy),
          std::to_string(e.energy_star),
          std::to_string(e.product_size),
          std::to_string(e.quotient_size),
          e.ratio_main.fraction(),
          e.ratio_main.decimal(),
          e.ratio_growth.fraction(),
          e.ratio_growth.decimal(),
          e.energy_over_m_a2.get_str(),
          e.identities_hold() ? "1" : "0",
          e.slice_constraint ? (*e.slice_constraint ? "1" : "0") : "",
          r.pointplane_c,
          std::to_string(r.pointplane.points),
          std::to_string(r.pointplane.planes),
          std::to_string(r.pointplane.k),
          std::to_string(r.pointplane.incidences),
          r.pointplane.ratio.fraction(),
          r.pointplane.ratio.decimal(),
          std::to_string(r.elekes.s_size),
          std::to_string(r.elekes.t_size),
          std::to_string(r.elekes.incidences),
          r.elekes.ratio.fraction(),
          r.elekes.ratio.decimal()};
}

inline Json to_json(const SweepRow& r) {
  Json j;
  j["spec"] = r.spec;
  j["field"] = r.field;
  j["N"] = r.param;
  j["collisions"] = r.collisions;
  j["energy"] = to_json(r.energy);
  j["pointplane_C"] = r.pointplane_c;
  j["pointplane"] = to_json(r.pointplane);
  j["elekes"] = to_json(r.elekes);
  return j;
}

}  // namespace affine_energy
