#pragma once

// Motivic volumes from user-supplied resolution combinatorics.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "motint/hodge.hpp"
#include "motint/mot_class.hpp"
#include "motint/polyhedra.hpp"

namespace motint {

struct Divisor {
  std::string name;
  long nu = 1;
  std::optional<long> N;
};

/// [E_I^o] (already intersected with h^-1(W) when `restricted`). Either an
/// exact class or realization-only data (chi and/or H).
struct Stratum {
  std::vector<std::size_t> subset;  // indices into divisors, sorted
  std::optional<MotClass> cls;
  std::optional<mpq_class> chi;
  std::optional<HodgeRational> hodge;
  bool restricted = false;

  bool exact() const { return cls.has_value(); }
};

struct ResolutionData {
  long d = 1;
  std::vector<Divisor> divisors;
  std::vector<Stratum> strata;
  /// Declared [Y], used by the partition check.
  std::optional<MotClass> total;

  /// Throws Error(ValidationError) on bad indices, duplicate subsets, nu < 1,
  /// N < 0, d < 1 or inconsistent realization-only data.
  void validate() const;
  std::optional<std::size_t> divisor_index(const std::string& name) const;
  bool has_realization_only() const;
};

struct PolyhedralStratum {
  MotClass cls;
  /// nullopt for the stratum with I empty, where Z = 1.
  std::optional<NewtonPolyhedron> delta;
};

/// L^-d sum_I [E_I^o] prod (L-1)/(L^nu_i - 1).
/// Throws Error(RealizationOnlyStrata) if a stratum has no exact class.
MotClass volume_from_resolution(const ResolutionData& res);

/// As above with nu_i replaced by nu_i + N_i; Error(MissingN) if some N is absent.
MotClass volume_with_ideal(const ResolutionData& res);

/// L^-d sum_C [C] Z(Delta_C).
MotClass volume_from_polyhedra(long d, const std::vector<PolyhedralStratum>& strata);

/// Requires a declared total; Error(StrataNotPartition) when the strata do not
/// sum to it.
MotClass kontsevich_invariant(const ResolutionData& res);

/// chi of the volume; realization-only strata contribute their chi.
mpq_class realize_volume_chi(const ResolutionData& res, bool with_ideal = false);
/// H of the volume, as a rational function of u, v.
HodgeRational realize_volume_hodge(const ResolutionData& res, bool with_ideal = false);

mpq_class realize_polyhedra_chi(long d, const std::vector<PolyhedralStratum>& strata);
HodgeRational realize_polyhedra_hodge(long d, const std::vector<PolyhedralStratum>& strata);

/// True when a lies in M_loc[(L-1)/(L^i-1)], i.e. (L-1)^|den| divides the numerator.
bool in_geometric_subring(const MotClass& a);

}  // namespace motint
