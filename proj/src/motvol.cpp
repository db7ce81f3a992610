#include "motint/motvol.hpp"

#include <set>
#include <stdexcept>

#include "motint/error.hpp"

namespace motint {

namespace {

std::string subset_name(const ResolutionData& res, const Stratum& s) {
  std::string out = "{";
  for (std::size_t k = 0; k < s.subset.size(); ++k) {
    if (k) out += ",";
    out += s.subset[k] < res.divisors.size() ? res.divisors[s.subset[k]].name : "?";
  }
  return out + "}";
}

std::vector<long> multiplicities(const ResolutionData& res, bool with_ideal) {
  std::vector<long> nu;
  for (const auto& div : res.divisors) {
    if (with_ideal && !div.N)
      throw Error(ErrorCode::MissingN, "divisor " + div.name + " has no N; the ideal twist needs N for every divisor");
    nu.push_back(div.nu + (with_ideal ? *div.N : 0));
  }
  return nu;
}

MotClass checked(MotClass a) {
  if (!in_geometric_subring(a)) throw std::logic_error("volume left the subring generated by (L-1)/(L^i-1)");
  return a;
}

MotClass resolution_sum(const ResolutionData& res, bool with_ideal) {
  res.validate();
  auto nu = multiplicities(res, with_ideal);
  MotClass total;
  for (const auto& s : res.strata) {
    if (!s.exact())
      throw Error(ErrorCode::RealizationOnlyStrata,
                  "stratum " + subset_name(res, s) + " has only chi/H data; request a realization instead");
    MotClass term = *s.cls;
    for (std::size_t i : s.subset) term *= MotClass::geometric(nu[i]);
    total += term;
  }
  return checked(MotClass::L_pow(-res.d) * total);
}

}  // namespace

bool in_geometric_subring(const MotClass& a) {
  LaurentPoly num = a.num();
  const LaurentPoly factor = LaurentPoly::power_minus_one(1);
  for (std::size_t k = 0; k < a.den().size(); ++k) {
    auto q = num.divide_exact(factor);
    if (!q) return false;
    num = std::move(*q);
  }
  return true;
}

std::optional<std::size_t> ResolutionData::divisor_index(const std::string& name) const {
  for (std::size_t i = 0; i < divisors.size(); ++i)
    if (divisors[i].name == name) return i;
  return std::nullopt;
}

bool ResolutionData::has_realization_only() const {
  for (const auto& s : strata)
    if (!s.exact()) return true;
  return false;
}

void ResolutionData::validate() const {
  auto fail = [](const std::string& message) { throw Error(ErrorCode::ValidationError, message); };
  if (d < 1) fail("dimension d must be >= 1");
  std::set<std::string> names;
  for (const auto& div : divisors) {
    if (!names.insert(div.name).second) fail("divisor " + div.name + " is declared twice");
    if (div.nu < 1) fail("divisor " + div.name + " has nu < 1");
    if (div.N && *div.N < 0) fail("divisor " + div.name + " has N < 0");
  }
  std::set<std::vector<std::size_t>> seen;
  for (const auto& s : strata) {
    for (std::size_t k = 0; k < s.subset.size(); ++k) {
      if (s.subset[k] >= divisors.size()) fail("stratum refers to an unknown divisor");
      if (k && s.subset[k] <= s.subset[k - 1]) fail("stratum subset " + subset_name(*this, s) + " is not a set");
    }
    if (!seen.insert(s.subset).second) fail("stratum " + subset_name(*this, s) + " is declared twice");
    if (!s.cls && !s.chi && !s.hodge) fail("stratum " + subset_name(*this, s) + " has no class");
    if (s.chi && s.hodge && s.hodge->euler_characteristic() != *s.chi)
      fail("stratum " + subset_name(*this, s) + ": chi does not equal H(1,1)");
  }
}

MotClass volume_from_resolution(const ResolutionData& res) { return resolution_sum(res, false); }

MotClass volume_with_ideal(const ResolutionData& res) { return resolution_sum(res, true); }

MotClass volume_from_polyhedra(long d, const std::vector<PolyhedralStratum>& strata) {
  if (d < 1) throw Error(ErrorCode::ValidationError, "dimension d must be >= 1");
  MotClass total;
  for (const auto& s : strata) total += s.delta ? s.cls * z_of_delta(*s.delta) : s.cls;
  return checked(MotClass::L_pow(-d) * total);
}

MotClass kontsevich_invariant(const ResolutionData& res) {
  if (!res.total) throw Error(ErrorCode::ValidationError, "the Kontsevich invariant needs a declared total [Y]");
  res.validate();
  MotClass sum;
  for (const auto& s : res.strata) {
    if (!s.exact())
      throw Error(ErrorCode::RealizationOnlyStrata, "stratum " + subset_name(res, s) + " has no exact class");
    sum += *s.cls;
  }
  if (!(sum == *res.total))
    throw Error(ErrorCode::StrataNotPartition,
                "strata sum to " + sum.to_string() + " but [Y] is declared as " + res.total->to_string());
  return volume_from_resolution(res);
}

mpq_class realize_volume_chi(const ResolutionData& res, bool with_ideal) {
  res.validate();
  auto nu = multiplicities(res, with_ideal);
  mpq_class total = 0;
  for (const auto& s : res.strata) {
    mpq_class term;
    if (s.cls) {
      term = chi_realize(*s.cls);
    } else if (s.chi) {
      term = *s.chi;
    } else {
      term = s.hodge->euler_characteristic();
    }
    for (std::size_t i : s.subset) term /= nu[i];
    total += term;
  }
  return total;
}

HodgeRational realize_volume_hodge(const ResolutionData& res, bool with_ideal) {
  res.validate();
  auto nu = multiplicities(res, with_ideal);
  HodgeRational total;
  for (const auto& s : res.strata) {
    HodgeRational term;
    if (s.cls) {
      term = hodge_realize(*s.cls);
    } else if (s.hodge) {
      term = *s.hodge;
    } else {
      throw Error(ErrorCode::RealizationOnlyStrata, "stratum " + subset_name(res, s) + " has chi but no H data");
    }
    for (std::size_t i : s.subset) term = term * hodge_realize(MotClass::geometric(nu[i]));
    total += term;
  }
  return total * hodge_realize(MotClass::L_pow(-res.d));
}

mpq_class realize_polyhedra_chi(long d, const std::vector<PolyhedralStratum>& strata) {
  return chi_realize(volume_from_polyhedra(d, strata));
}

HodgeRational realize_polyhedra_hodge(long d, const std::vector<PolyhedralStratum>& strata) {
  return hodge_realize(volume_from_polyhedra(d, strata));
}

}  // namespace motint
