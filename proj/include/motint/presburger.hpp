#pragma once

// Quantifier-free Presburger sets in N^m and their rational generating
// functions sum X^i, as numerators over products of (1 - X^c).

#include <gmpxx.h>

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace motint {

using Exponent = std::vector<long>;
/// Integer polynomial: exponent vector -> nonzero coefficient.
using MultiPoly = std::map<Exponent, mpz_class>;

struct LinearForm {
  std::vector<long> coeffs;
  long constant = 0;

  long eval(const std::vector<long>& point) const;
};

struct Condition {
  enum class Kind { True, False, Ge, Cong, And, Or, Not };

  Kind kind = Kind::True;
  LinearForm form;     // Ge: form >= 0; Cong: form = residue mod modulus
  long modulus = 1;
  long residue = 0;
  std::vector<Condition> children;

  static Condition truth(bool value);
  static Condition ge(LinearForm form);
  static Condition cong(LinearForm form, long modulus, long residue);
  static Condition all(std::vector<Condition> children);
  static Condition any(std::vector<Condition> children);
  static Condition negate(Condition child);

  bool eval(const std::vector<long>& point) const;
};

class PresburgerSet {
 public:
  /// Throws Error(InvalidArgument) for m < 1, moduli < 1 or forms of the wrong arity.
  PresburgerSet(long m, Condition condition);

  long m() const noexcept { return m_; }
  const Condition& condition() const noexcept { return condition_; }
  bool member(const std::vector<long>& point) const;
  /// S-expression form, accepted by parse_presburger.
  std::string to_string() const;

 private:
  long m_;
  Condition condition_;
};

PresburgerSet set_union(const PresburgerSet& p, const PresburgerSet& q);
PresburgerSet set_intersection(const PresburgerSet& p, const PresburgerSet& q);

/// Variables are i, j, k (or x1, x2, x3) for m <= 3.
PresburgerSet parse_presburger(long m, std::string_view text);

/// base + N*g_1 + ... + N*g_e with linearly independent g's.
struct LatticePiece {
  Exponent base;
  std::vector<Exponent> generators;
};

/// Disjoint lattice pieces covering P within N^m; m in {1, 2}.
std::vector<LatticePiece> decompose(const PresburgerSet& p);

class RationalGF {
 public:
  explicit RationalGF(long vars = 1);
  /// num / prod (1 - X^c); every c must be nonzero with entries >= 0.
  RationalGF(long vars, MultiPoly num, std::vector<Exponent> den);
  static RationalGF lattice_piece(const LatticePiece& piece);

  long vars() const noexcept { return vars_; }
  const MultiPoly& num() const noexcept { return num_; }
  const std::vector<Exponent>& den() const noexcept { return den_; }

  friend RationalGF operator+(const RationalGF& a, const RationalGF& b);
  friend RationalGF operator-(const RationalGF& a, const RationalGF& b);
  friend RationalGF operator*(const RationalGF& a, const RationalGF& b);
  friend bool operator==(const RationalGF& a, const RationalGF& b);

  /// Series coefficients of total degree <= d.
  MultiPoly expand(long d) const;
  std::string to_string() const;

 private:
  void reduce();

  long vars_;
  MultiPoly num_;
  std::vector<Exponent> den_;  // sorted multiset
};

/// Throws Error(DimensionUnsupported) for m > 2.
RationalGF genfun(const PresburgerSet& p);

/// sum over P of X^{phi(i)}; phi[r] holds the coefficients of the r-th
/// coordinate map. Throws Error(InfiniteFibers) when a fiber is infinite.
RationalGF genfun_image(const PresburgerSet& p, const std::vector<std::vector<long>>& phi);

/// Points of P in N^m with total degree <= d, each with coefficient 1; m <= 3.
MultiPoly genfun_truncated(const PresburgerSet& p, long d);

std::string multipoly_to_string(const MultiPoly& poly, long vars);

}  // namespace motint
