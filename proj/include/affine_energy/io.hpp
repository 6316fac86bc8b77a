#pragma once

// Text input formats. Blank lines and lines starting with '#' are ignored.
// Header lines:
//   field Q | field Fp:<p>
//   alpha <rational>            (grid files)
//   S: <x1> <x2> ...            (grid files)
//   T: <y1> <y2> ...            (grid files)
// Data rows are "a b" (an affine map, or the line y = a*x + b in a grid
// file), "x y" (an affine point) or "x:y:z" (a homogeneous point).

#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "affine_energy/affine.hpp"
#include "affine_energy/error.hpp"
#include "affine_energy/field.hpp"
#include "affine_energy/generators.hpp"
#include "affine_energy/plane.hpp"
#include "affine_energy/richlines.hpp"

namespace affine_energy {

struct InputText {
  std::optional<FieldSpec> field;
  std::optional<mpq_class> alpha;
  std::optional<std::string> s_row;
  std::optional<std::string> t_row;
  std::vector<std::string> rows;
};

namespace detail {

inline std::vector<std::string> tokens(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

inline bool starts_with_word(std::string_view line, std::string_view word) {
  return line.substr(0, word.size()) == word && (line.size() == word.size() || line[word.size()] == ' ' || line[word.size()] == '\t');
}

}  // namespace detail

inline InputText parse_input(std::istream& in) {
  InputText out;
  std::string raw;
  while (std::getline(in, raw)) {
    const std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (detail::starts_with_word(line, "field")) {
      out.field = FieldSpec::parse(detail::trim(line.substr(5)));
    } else if (detail::starts_with_word(line, "alpha")) {
      mpq_class a;
      const std::string text(detail::trim(line.substr(5)));
      if (a.set_str(text, 10) != 0) throw Error(ErrorCode::parse_error, "bad alpha '" + text + "'");
      a.canonicalize();
      out.alpha = a;
    } else if (line.substr(0, 2) == "S:") {
      out.s_row = std::string(line.substr(2));
    } else if (line.substr(0, 2) == "T:") {
      out.t_row = std::string(line.substr(2));
    } else {
      out.rows.emplace_back(line);
    }
  }
  return out;
}

inline InputText read_input_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::invalid_spec, "cannot open input file '" + path + "'");
  return parse_input(in);
}

template <FieldScalar S>
std::vector<S> parse_scalar_row(std::string_view row, const FieldSpec& f) {
  std::vector<S> out;
  for (const auto& t : detail::tokens(row)) out.push_back(S::parse(t, f));
  return out;
}

template <FieldScalar S>
std::pair<S, S> parse_pair_row(std::string_view row, const FieldSpec& f) {
  const auto t = detail::tokens(row);
  if (t.size() != 2) throw Error(ErrorCode::parse_error, "expected two scalars in row '" + std::string(row) + "'");
  return {S::parse(t[0], f), S::parse(t[1], f)};
}

template <FieldScalar S>
AffineSet<S> parse_affine_rows(const std::vector<std::string>& rows, const FieldSpec& f) {
  std::vector<AffineMap<S>> maps;
  for (const auto& r : rows) {
    auto [a, b] = parse_pair_row<S>(r, f);
    maps.emplace_back(std::move(a), std::move(b));
  }
  return AffineSet<S>(f, std::move(maps));
}

template <FieldScalar S, class Tag>
Homogeneous<S, 3, Tag> parse_homogeneous3(std::string_view text, const FieldSpec& f) {
  const auto parts = detail::split(detail::trim(text), ':');
  if (parts.size() != 3) throw Error(ErrorCode::parse_error, "expected x:y:z, got '" + std::string(text) + "'");
  return Homogeneous<S, 3, Tag>({S::parse(parts[0], f), S::parse(parts[1], f), S::parse(parts[2], f)});
}

template <FieldScalar S>
PlanePoint<S> parse_point(std::string_view row, const FieldSpec& f) {
  if (row.find(':') != std::string_view::npos) return parse_homogeneous3<S, PlanePointTag>(row, f);
  auto [x, y] = parse_pair_row<S>(row, f);
  return affine_point(x, y);
}

template <FieldScalar S>
std::vector<PlanePoint<S>> parse_point_rows(const std::vector<std::string>& rows, const FieldSpec& f) {
  std::vector<PlanePoint<S>> out;
  for (const auto& r : rows) out.push_back(parse_point<S>(r, f));
  return sorted_unique(std::move(out));
}

/// "a:b:c" for the line a*x + b*y + c*z = 0.
template <FieldScalar S>
PlaneLine<S> parse_line(std::string_view text, const FieldSpec& f) {
  return parse_homogeneous3<S, PlaneLineTag>(text, f);
}

template <FieldScalar S>
GridInstance<S> parse_grid(const InputText& in, const FieldSpec& f) {
  if (!in.alpha || !in.s_row || !in.t_row) throw Error(ErrorCode::parse_error, "grid file needs alpha, S: and T: lines");
  std::vector<std::pair<S, S>> rows;
  for (const auto& r : in.rows) rows.push_back(parse_pair_row<S>(r, f));
  return GridInstance<S>::from_rows(f, parse_scalar_row<S>(*in.s_row, f), parse_scalar_row<S>(*in.t_row, f), rows, *in.alpha);
}

template <FieldScalar S>
std::string format_affine_set(const AffineSet<S>& a) {
  std::string out = "field " + a.field().to_string() + "\n";
  for (const auto& g : a) out += g.to_string() + "\n";
  return out;
}

}  // namespace affine_energy
