// affenergy: batch front end for the affine_energy library.
//
// Exit codes: 0 ok, 2 configuration or input error, 3 oracle mismatch,
// 4 invariant violation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "affine_energy.hpp"

namespace ae = affine_energy;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitOracle = 3;
constexpr int kExitInvariant = 4;

struct Options {
  std::string gen;
  std::string input;
  std::string field;
  std::string format;  // empty: csv for sweep, json otherwise
  std::string output;
  std::string alpha = "1/2";
  std::size_t cthresh = 4;
  std::string theta = "1/2";
  std::size_t oracle_cap = ae::kDefaultOracleCap;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string range;
  std::string line;
  std::string l1;
  std::string l2;
  std::string scalars;
  std::string c;
};

/// A command's result: the report and the exit status it implies.
struct Outcome {
  ae::Json json;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  int status = kExitOk;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ae::FieldSpec resolve_field(const Options& o, const std::optional<ae::InputText>& text) {
  std::optional<ae::FieldSpec> flag;
  if (!o.field.empty()) {
    flag = ae::FieldSpec::parse(o.field);
  } else if (const char* env = std::getenv("AFFINE_ENERGY_FIELD"); env != nullptr && *env != '\0') {
    flag = ae::FieldSpec::parse(env);
  }
  if (text && text->field) {
    if (flag && !(*flag == *text->field)) {
      throw ConfigError("input file declares field " + text->field->to_string() + " but " + flag->to_string() + " was requested");
    }
    return *text->field;
  }
  return flag.value_or(ae::FieldSpec::rational());
}

/// Random generator specs without an explicit seed take --seed.
std::string with_seed(std::string spec, std::uint64_t seed) {
  const bool random = spec.rfind("randaff:", 0) == 0 || spec.rfind("randplanar:", 0) == 0;
  if (random && spec.find("seed=") == std::string::npos) spec += ":seed=" + std::to_string(seed);
  return spec;
}

struct Source {
  ae::FieldSpec field = ae::FieldSpec::rational();
  std::string label;
  std::optional<ae::GenSpec> gen;
  std::optional<ae::InputText> text;
};

Source load_source(const Options& o) {
  if (o.gen.empty() == o.input.empty()) throw ConfigError("exactly one of --gen or --input is required");
  Source s;
  if (!o.gen.empty()) {
    const std::string spec = with_seed(o.gen, o.seed);
    s.gen = ae::GenSpec::parse(spec);
    s.label = spec;
  } else {
    s.text = ae::read_input_file(o.input);
    s.label = o.input;
  }
  s.field = resolve_field(o, s.text);
  return s;
}

// Generated sets arrive in their native shape; files are read as affine
// rows unless points are wanted, in which case "x:y:z" rows are allowed.
template <ae::FieldScalar S>
ae::AffineSet<S> load_affine(const Source& s, std::size_t* collisions = nullptr) {
  if (s.gen) {
    const auto g = ae::generate<S>(*s.gen, s.field);
    if (collisions) *collisions = g.collisions;
    return g.affine(s.field);
  }
  return ae::parse_affine_rows<S>(s.text->rows, s.field);
}

template <ae::FieldScalar S>
std::vector<ae::PlanePoint<S>> load_points(const Source& s, std::size_t* collisions = nullptr) {
  if (s.gen) {
    const auto g = ae::generate<S>(*s.gen, s.field);
    if (collisions) *collisions = g.collisions;
    return ae::sorted_unique(g.points());
  }
  return ae::parse_point_rows<S>(s.text->rows, s.field);
}

mpq_class parse_fraction(const std::string& text, const char* what) {
  try {
    return ae::parse_rational(text);
  } catch (const ae::Error&) {
    throw ConfigError(std::string("bad ") + what + " '" + text + "'");
  }
}

ae::Json envelope(const char* command, const Source& s) {
  ae::Json j;
  j["command"] = command;
  j["source"] = s.label;
  j["field"] = s.field.to_string();
  return j;
}

std::string flag(bool b) { return b ? "1" : "0"; }

// ------------------------------------------------------------ commands

template <ae::FieldScalar S>
Outcome cmd_energy(const Options&, const Source& src) {
  Outcome out;
  std::size_t collisions = 0;
  const auto a = load_affine<S>(src, &collisions);
  const auto rep = ae::main_bound_report(a);
  out.json = envelope("energy", src);
  out.json["collisions"] = collisions;
  out.json["report"] = ae::to_json(rep);
  out.csv_header = ae::energy_csv_header();
  out.csv_header.insert(out.csv_header.begin(), "source");
  auto row = ae::energy_csv_fields(rep);
  row.insert(row.begin(), src.label);
  out.csv_rows.push_back(row);
  if (!rep.identities_hold()) out.status = kExitInvariant;
  return out;
}

template <ae::FieldScalar S>
Outcome cmd_decompose(const Options&, const Source& src) {
  Outcome out;
  const auto a = load_affine<S>(src);
  const auto q = ae::decompose_by_c(a);
  const auto sizes = ae::slice_sizes(a);
  const ae::Count e = ae::energy(a);
  ae::Count total = 0;
  bool agree = true;
  ae::Json rows = ae::Json::array();
  out.csv_header = {"C", "slice_size", "Q_C", "Q_C_incidence"};
  for (const auto& [c, size] : sizes) {
    const auto it = q.find(c);
    const ae::Count qc = it == q.end() ? 0 : it->second;
    const ae::Count via = ae::q_c_via_incidence(a, c);
    total += qc;
    agree = agree && via == qc;
    ae::Json r;
    r["C"] = c.to_string();
    r["slice_size"] = size;
    r["Q_C"] = qc;
    r["Q_C_incidence"] = via;
    rows.push_back(r);
    out.csv_rows.push_back({c.to_string(), std::to_string(size), std::to_string(qc), std::to_string(via)});
  }
  out.json = envelope("decompose", src);
  out.json["E"] = e;
  out.json["sum_Q_C"] = total;
  out.json["incidence_route_agrees"] = agree;
  out.json["slices"] = rows;
  if (total != e || !agree) out.status = kExitInvariant;
  return out;
}

template <ae::FieldScalar S>
Outcome cmd_incidence(const Options& o, const Source& src) {
  Outcome out;
  const auto a = load_affine<S>(src);
  std::vector<S> cs;
  if (!o.c.empty()) {
    cs.push_back(S::parse(o.c, src.field));
  } else {
    for (const auto& [c, size] : ae::slice_sizes(a)) cs.push_back(c);
  }
  const std::uint64_t p = src.field.characteristic();
  ae::Json rows = ae::Json::array();
  out.csv_header = {"C", "points", "planes", "swapped", "incidences", "k", "ratio", "ratio_decimal", "ratio_asymptotic",
                    "single_line_planes", "short_lines_planes"};
  for (const auto& c : cs) {
    const auto inst = ae::slice_instance(a, c);
    if (inst.points.empty()) {
      ae::Json r;
      r["C"] = c.to_string();
      r["empty"] = true;
      rows.push_back(r);
      continue;
    }
    const auto rep = ae::pointplane_bound_report(inst, p);
    const auto beck = ae::beck_plane_classification(inst.points, inst.planes, o.cthresh);
    std::size_t single = 0;
    for (const auto& b : beck) single += b.type == ae::BeckType::single_line ? 1 : 0;
    ae::Json r;
    r["C"] = c.to_string();
    r["report"] = ae::to_json(rep);
    r["single_line_planes"] = single;
    r["short_lines_planes"] = beck.size() - single;
    rows.push_back(r);
    out.csv_rows.push_back({c.to_string(), std::to_string(rep.points), std::to_string(rep.planes), flag(rep.swapped),
                            std::to_string(rep.incidences), std::to_string(rep.k), rep.ratio.fraction(), rep.ratio.decimal(),
                            rep.ratio_asymptotic ? rep.ratio_asymptotic->fraction() : "", std::to_string(single),
                            std::to_string(beck.size() - single)});
  }
  out.json = envelope("incidence", src);
  out.json["cthresh"] = o.cthresh;
  out.json["slices"] = rows;
  return out;
}

template <ae::FieldScalar S>
Outcome cmd_shadow(const Options& o, const Source& src) {
  Outcome out;
  const auto pts = load_points<S>(src);
  out.json = envelope("shadow", src);
  const auto beck = ae::beck_point_stats(pts, parse_fraction(o.theta, "theta"));
  out.json["points"] = pts.size();
  out.json["spanned_lines"] = beck.spanned_lines;
  out.json["beck_rich_points"] = beck.rich_points;
  out.json["beck_rich_fraction"] = beck.rich_fraction.get_str();
  out.csv_header = {"kind", "line", "value"};
  if (!o.line.empty()) {
    const auto l = ae::parse_line<S>(o.line, src.field);
    const auto sh = ae::shadow(pts, l);
    ae::Json shadow_pts = ae::Json::array();
    for (const auto& p : sh) {
      shadow_pts.push_back(p.to_string());
      out.csv_rows.push_back({"shadow_point", l.to_string(), p.to_string()});
    }
    out.json["line"] = l.to_string();
    out.json["shadow_size"] = sh.size();
    out.json["shadow"] = shadow_pts;
  }
  if (!o.l1.empty() || !o.l2.empty()) {
    if (o.l1.empty() || o.l2.empty()) throw ConfigError("--l1 and --l2 must be given together");
    const auto l1 = ae::parse_line<S>(o.l1, src.field);
    const auto l2 = ae::parse_line<S>(o.l2, src.field);
    const auto rep = ae::shadow_incidence_check(pts, l1, l2);
    out.json["l1"] = l1.to_string();
    out.json["l2"] = l2.to_string();
    const ae::Json check = ae::to_json(rep);
    out.json["check"] = check;
    const std::string lines = l1.to_string() + "|" + l2.to_string();
    for (const auto& [k, v] : check.items()) out.csv_rows.push_back({k, lines, v.dump()});
    if (!rep.holds_nonvertical) out.status = kExitInvariant;
  }
  if (o.line.empty() && o.l1.empty()) throw ConfigError("shadow needs --line or --l1/--l2");
  return out;
}

template <ae::FieldScalar S>
Outcome cmd_quadrangles(const Options& o, const Source& src) {
  Outcome out;
  const auto pts = load_points<S>(src);
  const ae::Count fast = ae::quadrangles(pts);
  out.json = envelope("quadrangles", src);
  out.json["points"] = pts.size();
  out.json["quadrangles"] = fast;
  out.json["energy"] = pts.empty() ? 0 : ae::energy(ae::as_affine_set(pts, src.field));
  out.csv_header = {"points", "quadrangles", "energy", "exhaustive"};
  std::string exhaustive;
  if (pts.size() <= o.oracle_cap) {
    const auto corr = ae::quadrangle_energy_correspondence(pts, o.oracle_cap);
    out.json["correspondence"] = ae::to_json(corr);
    exhaustive = flag(corr.exhaustive());
    if (!corr.exhaustive() || corr.quadrangles != fast) out.status = kExitInvariant;
  } else {
    out.json["correspondence"] = nullptr;
  }
  out.csv_rows.push_back({std::to_string(pts.size()), std::to_string(fast), out.json["energy"].dump(), exhaustive});
  return out;
}

template <ae::FieldScalar S>
ae::GridInstance<S> load_grid(const Options& o, const Source& src) {
  if (src.text) {
    if (src.text->alpha) return ae::parse_grid<S>(*src.text, src.field);
    if (o.scalars.empty()) throw ConfigError("a line file without a grid header needs --scalars");
  }
  if (o.scalars.empty()) throw ConfigError("richlines with --gen needs --scalars for A");
  const auto a = ae::generate_scalars<S>(ae::detail::parse_scalar_set(o.scalars), src.field).values;
  return ae::GridInstance<S>(a, a, load_affine<S>(src), parse_fraction(o.alpha, "alpha"));
}

template <ae::FieldScalar S>
Outcome cmd_richlines(const Options& o, const Source& src) {
  Outcome out;
  const auto inst = load_grid<S>(o, src);
  out.json = envelope("richlines", src);
  out.json["alpha"] = inst.alpha.get_str();
  out.json["rejected_horizontal"] = inst.rejected_horizontal;
  ae::Json j;
  if (inst.symmetric()) {
    j = ae::to_json(ae::structure_report(inst));
  } else {
    // General S x T: counts and rich lines only.
    j["incidences"] = ae::grid_incidences(inst).total;
    j["threshold"] = ae::rich_threshold(inst);
    j["rich"] = ae::rich_lines(inst).size();
  }
  out.json["report"] = j;
  out.csv_header = {"key", "value"};
  for (const auto& [k, v] : j.items()) out.csv_rows.push_back({k, v.dump()});
  if (inst.symmetric() && !j["chains_hold"].get<bool>()) out.status = kExitInvariant;
  return out;
}

template <ae::FieldScalar S>
Outcome cmd_boundcheck(const Options& o, const Source& src) {
  Outcome out;
  const auto a = load_affine<S>(src);
  const auto side = o.scalars.empty() ? ae::sweep_grid_side(a)
                                      : ae::generate_scalars<S>(ae::detail::parse_scalar_set(o.scalars), src.field).values;
  const auto energy = ae::main_bound_report(a);
  const auto elekes = ae::elekes_incidence_bound_check<S>(side, side, a);
  out.json = envelope("boundcheck", src);
  out.json["ratio_main"] = ae::ratio_json(energy.ratio_main);
  out.json["ratio_growth"] = ae::ratio_json(energy.ratio_growth);
  out.json["elekes"] = ae::to_json(elekes);
  out.csv_header = {"ratio_main", "ratio_main_decimal", "ratio_growth", "ratio_growth_decimal", "elekes_I", "ratio_elekes",
                    "ratio_elekes_decimal"};
  out.csv_rows.push_back({energy.ratio_main.fraction(), energy.ratio_main.decimal(), energy.ratio_growth.fraction(),
                          energy.ratio_growth.decimal(), std::to_string(elekes.incidences), elekes.ratio.fraction(),
                          elekes.ratio.decimal()});
  if (!energy.identities_hold()) out.status = kExitInvariant;
  return out;
}

struct OracleLine {
  std::string name;
  std::string fast;
  std::string oracle;
};

template <ae::FieldScalar S>
std::string decomposition_string(const std::map<S, ae::Count>& m) {
  std::string s;
  for (const auto& [c, q] : m) s += (s.empty() ? "" : ";") + c.to_string() + "=" + std::to_string(q);
  return s;
}

template <ae::FieldScalar S>
std::string pencil_string(const ae::Pencil<S>& p) {
  std::string s = p.x0.to_string() + "," + p.y0.to_string() + ":";
  for (const auto& b : p.slopes) s += " " + b.to_string();
  return s;
}

template <ae::FieldScalar S>
Outcome cmd_oracle(const Options& o, const Source& src) {
  Outcome out;
  const auto a = load_affine<S>(src);
  if (a.size() > o.oracle_cap) throw ConfigError("set of size " + std::to_string(a.size()) + " exceeds --oracle-cap");
  std::vector<OracleLine> lines;
  lines.push_back({"energy", std::to_string(ae::energy(a)), std::to_string(ae::energy_bruteforce(a, ae::EnergyKind::quotient, o.oracle_cap))});
  lines.push_back({"energy_star", std::to_string(ae::energy_star(a)), std::to_string(ae::energy_bruteforce(a, ae::EnergyKind::product, o.oracle_cap))});
  // Asymmetric energy against the first half of A.
  const ae::AffineSet<S> half(a.field(), std::vector<ae::AffineMap<S>>(a.begin(), a.begin() + static_cast<long>((a.size() + 1) / 2)));
  lines.push_back({"energy_asym", std::to_string(ae::energy_asym(a, half)), std::to_string(ae::energy_asym_bruteforce(a, half, o.oracle_cap))});
  lines.push_back({"decompose_by_C", decomposition_string(ae::decompose_by_c(a)), decomposition_string(ae::decompose_by_c_bruteforce(a, o.oracle_cap))});
  const auto pts = ae::as_plane_points(a);
  lines.push_back({"quadrangles", std::to_string(ae::quadrangles(pts)), std::to_string(ae::quadrangles_bruteforce(pts, o.oracle_cap))});
  if (a.size() >= 2) {
    lines.push_back({"max_concurrent_pencil", pencil_string(ae::max_concurrent_pencil(a)),
                     pencil_string(ae::max_concurrent_pencil_bruteforce(a, o.oracle_cap))});
  }
  out.json = envelope("oracle", src);
  out.json["size"] = a.size();
  ae::Json checks = ae::Json::array();
  out.csv_header = {"check", "fast", "oracle", "equal"};
  bool all = true;
  for (const auto& l : lines) {
    const bool eq = l.fast == l.oracle;
    all = all && eq;
    ae::Json c;
    c["check"] = l.name;
    c["fast"] = l.fast;
    c["oracle"] = l.oracle;
    c["equal"] = eq;
    checks.push_back(c);
    out.csv_rows.push_back({l.name, l.fast, l.oracle, flag(eq)});
  }
  out.json["checks"] = checks;
  out.json["all_equal"] = all;
  if (!all) out.status = kExitOracle;
  return out;
}

std::pair<long, long> parse_range(const std::string& text) {
  const auto eq = text.find('=');
  const auto dots = text.find("..");
  if (eq == std::string::npos || dots == std::string::npos || text.substr(0, eq) != "N") {
    throw ConfigError("--range must look like N=a..b");
  }
  try {
    return {std::stol(text.substr(eq + 1, dots - eq - 1)), std::stol(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw ConfigError("--range must look like N=a..b");
  }
}

Outcome cmd_sweep(const Options& o) {
  if (o.gen.empty() || !o.input.empty()) throw ConfigError("sweep takes a --gen template");
  if (o.range.empty()) throw ConfigError("sweep needs --range N=a..b");
  if (o.gen.find('N') == std::string::npos) throw ConfigError("sweep template has no N placeholder");
  const auto [lo, hi] = parse_range(o.range);
  Source src;
  src.field = resolve_field(o, std::nullopt);
  src.label = with_seed(o.gen, o.seed);
  const auto rows = ae::run_sweep(src.label, src.field, lo, hi, o.jobs);
  Outcome out;
  out.json = envelope("sweep", src);
  out.json["range"] = o.range;
  ae::Json arr = ae::Json::array();
  out.csv_header = ae::sweep_csv_header();
  for (const auto& r : rows) {
    arr.push_back(ae::to_json(r));
    out.csv_rows.push_back(ae::sweep_csv_fields(r));
    if (!r.energy.identities_hold()) out.status = kExitInvariant;
  }
  out.json["rows"] = arr;
  return out;
}

std::string render(const Outcome& out, const std::string& command, const std::string& format) {
  if (format == "json") return out.json.dump(2) + "\n";
  std::string s = command == "sweep" ? std::string(ae::kSweepCsvSchema) : "# affine-energy " + command + " v1";
  s += "\n" + ae::csv_row(out.csv_header);
  for (const auto& r : out.csv_rows) s += ae::csv_row(r);
  return s;
}

template <ae::FieldScalar S>
Outcome run_typed(const std::string& name, const Options& o, const Source& src) {
  if (name == "energy") return cmd_energy<S>(o, src);
  if (name == "decompose") return cmd_decompose<S>(o, src);
  if (name == "incidence") return cmd_incidence<S>(o, src);
  if (name == "shadow") return cmd_shadow<S>(o, src);
  if (name == "quadrangles") return cmd_quadrangles<S>(o, src);
  if (name == "richlines") return cmd_richlines<S>(o, src);
  if (name == "boundcheck") return cmd_boundcheck<S>(o, src);
  if (name == "oracle") return cmd_oracle<S>(o, src);
  throw ConfigError("unknown subcommand " + name);
}

Outcome run_command(const std::string& name, const Options& o) {
  if (name == "sweep") return cmd_sweep(o);
  const Source src = load_source(o);
  return ae::dispatch_field(src.field, [&](auto tag) {
    using S = typename decltype(tag)::type;
    return run_typed<S>(name, o, src);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energies, incidences and rich lines for finite sets of affine maps"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"energy", "E, E*, growth and the C-decomposition of a set of affine maps"},
      {"decompose", "Q_C per slice, by quotient classes and by point-plane incidences"},
      {"incidence", "point-plane bound report for each slice (or --c)"},
      {"shadow", "shadows of a planar set on a line, or the two-line incidence check"},
      {"quadrangles", "quadrangles rooted on the y-axis and the line at infinity"},
      {"richlines", "rich lines in A x A with parallel and concurrent structure"},
      {"boundcheck", "energy bound ratios and the grid incidence bound"},
      {"sweep", "one row per size of a generator template"},
      {"oracle", "compare fast paths with brute-force counterparts"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* gen = sub->add_option("--gen", o.gen, "generator spec, e.g. grid:5 or randaff:100:seed=7");
    auto* input = sub->add_option("--input", o.input, "input file");
    gen->excludes(input);
    sub->add_option("--field", o.field, "Q or Fp:<p> (default: $AFFINE_ENERGY_FIELD, else Q)");
    sub->add_option("--format", o.format, "csv or json (default: csv for sweep, json otherwise)")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", o.output, "output path (default stdout)");
    sub->add_option("--alpha", o.alpha, "rich-line threshold in (0, 1]");
    sub->add_option("--cthresh", o.cthresh, "short-line threshold for plane statistics")->check(CLI::Range(2, 1 << 30));
    sub->add_option("--theta", o.theta, "Beck point threshold");
    sub->add_option("--oracle-cap", o.oracle_cap, "largest set handed to brute-force oracles")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "seed for random generators without one");
    sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--range", o.range, "sweep range N=a..b");
    sub->add_option("--line", o.line, "line a:b:c for shadows");
    sub->add_option("--l1", o.l1, "first line a:b:c (sent to the y-axis)");
    sub->add_option("--l2", o.l2, "second line a:b:c (sent to infinity)");
    sub->add_option("--scalars", o.scalars, "scalar set A, e.g. ap(0,1,10)");
    sub->add_option("--c", o.c, "a single slice constant");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  if (o.format.empty()) o.format = name == "sweep" ? "csv" : "json";
  try {
    const Outcome out = run_command(name, o);
    const std::string text = render(out, name, o.format);
    if (o.output.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(o.output, std::ios::binary);
      if (!f) throw ConfigError("cannot write " + o.output);
      f << text;
    }
    if (out.status == kExitOracle) std::cerr << "oracle mismatch\n";
    if (out.status == kExitInvariant) std::cerr << "invariant violation\n";
    return out.status;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ae::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
