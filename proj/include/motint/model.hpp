#pragma once

// Line-oriented model files:
//
//   kind = resolution
//   d = 2
//   divisor E nu = 2; N = 1
//   stratum {} class = L^2 - 1
//   stratum {E} class = L + 1; restricted = true
//
// Every line is `key = value`, `divisor ...` or `stratum ...`; `#` starts a
// comment. Unknown keys are rejected.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "motint/jets.hpp"
#include "motint/motvol.hpp"
#include "motint/presburger.hpp"
#include "motint/series.hpp"

namespace motint {

struct JobParams {
  std::optional<long> q, n_max, j_max, n, threads;
  std::optional<std::uint64_t> budget;
  std::optional<std::string> output;
};

struct PolyhedralModel {
  long d = 1;
  std::vector<PolyhedralStratum> strata;
  /// A lone polyhedron (for zdelta) instead of strata.
  std::optional<NewtonPolyhedron> delta;
};

struct VarietyModel {
  JetVariety x;
  std::optional<std::string> condition_text;
  std::optional<SemiAlgCondition> condition;
  std::vector<long> params;
};

struct SeriesModel {
  RationalMotSeries p;
  std::optional<long> d;
};

struct PresburgerModel {
  PresburgerSet set{1, Condition::truth(true)};
  std::optional<std::vector<std::vector<long>>> phi;
  std::optional<long> degree;
};

struct ModelFile {
  enum class Kind { Resolution, Polyhedral, Variety, Series, Presburger };

  Kind kind = Kind::Resolution;
  ResolutionData resolution;
  PolyhedralModel polyhedral;
  VarietyModel variety;
  SeriesModel series;
  PresburgerModel presburger;
  JobParams job;
};

std::string_view kind_name(ModelFile::Kind kind);

/// Throws ParseError (with line and column) or Error(ValidationError).
ModelFile parse_model(std::string_view text);

/// Canonical text; parse_model(print_model(m)) prints back identically.
std::string print_model(const ModelFile& model);

}  // namespace motint
