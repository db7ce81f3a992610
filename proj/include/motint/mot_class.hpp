#pragma once

// Exact arithmetic in Z[L, L^-1][(L^i - 1)^-1 : i >= 1], the coefficient ring
// for every volume, zeta function and series in the library.

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "motint/laurent_poly.hpp"

namespace motint {

/// A fraction num / prod_{i in den} (L^i - 1).
///
/// The stored form is canonical in a weak sense: no denominator factor
/// (L^i - 1), and no cyclotomic block (L^i - 1)/(L^j - 1) with j | i, divides
/// the numerator. Distinct canonical forms can still denote the same class,
/// so equality is decided by cross-multiplication (mot_eq / operator==).
class MotClass {
 public:
  MotClass() = default;
  MotClass(long constant) : num_(constant) {}  // NOLINT(google-explicit-constructor)
  MotClass(LaurentPoly num) : num_(std::move(num)) {}  // NOLINT(google-explicit-constructor)
  /// Throws Error(InvalidArgument) if some denominator index is < 1.
  MotClass(LaurentPoly num, std::vector<long> den);

  static MotClass L() { return LaurentPoly::monomial(1, 1); }
  static MotClass L_pow(long k) { return LaurentPoly::monomial(1, k); }
  /// (L - 1)/(L^i - 1)
  static MotClass geometric(long i);

  const LaurentPoly& num() const noexcept { return num_; }
  /// Sorted multiset of denominator indices i, each standing for (L^i - 1).
  const std::vector<long>& den() const noexcept { return den_; }
  LaurentPoly den_poly() const;

  bool is_zero() const noexcept { return num_.is_zero(); }
  /// deg num - sum(den). Precondition: nonzero.
  long virtual_dimension() const;

  MotClass divided_by_power_minus_one(long i) const;

  MotClass& operator+=(const MotClass& other);
  MotClass& operator-=(const MotClass& other);
  MotClass& operator*=(const MotClass& other);

  friend MotClass operator+(MotClass a, const MotClass& b) { return a += b; }
  friend MotClass operator-(MotClass a, const MotClass& b) { return a -= b; }
  friend MotClass operator*(MotClass a, const MotClass& b) { return a *= b; }
  friend MotClass operator-(MotClass a) {
    a.num_ = -a.num_;
    return a;
  }

  /// Class equality; independent of the stored form.
  friend bool operator==(const MotClass& a, const MotClass& b);

  /// Same stored numerator and denominator.
  bool identical(const MotClass& other) const { return num_ == other.num_ && den_ == other.den_; }

  /// Value at L = x. Precondition: no denominator factor vanishes at x.
  mpq_class evaluate(const mpq_class& x) const;

  std::string to_string(std::string_view var = "L") const;

 private:
  void canonicalize();

  LaurentPoly num_;
  std::vector<long> den_;
};

inline bool mot_eq(const MotClass& a, const MotClass& b) { return a == b; }

/// Parses the MotClass literal syntax, e.g. "(L - 1)/(L^2 - 1)" or "L^-2*(L + 1)".
/// `var` names the generator (L for classes, w for Hodge pieces).
MotClass parse_mot_class(std::string_view text, std::string_view var = "L");

/// Inverse of a when its numerator is +-L^e * prod (L^i - 1); nullopt otherwise.
std::optional<MotClass> invert(const MotClass& a);

/// a^k; negative k requires invert(a) to exist (throws Error(InvalidArgument)).
MotClass power(const MotClass& a, long k);

/// Largest m with a in F^m, i.e. -virtual_dimension; nullopt stands for +infinity (a = 0).
std::optional<long> filtration_degree(const MotClass& a);

/// Truncated expansion sum_n c_n L^-n, valid for n <= order.
struct CompletionExpansion {
  std::map<long, mpz_class> coeffs;  // n -> c_n, zero entries omitted
  long order = 0;

  mpz_class coefficient(long n) const;
  CompletionExpansion truncated(long m) const;
  std::string to_string() const;

  friend bool operator==(const CompletionExpansion&, const CompletionExpansion&) = default;
};

CompletionExpansion expand_completion(const MotClass& a, long order);
CompletionExpansion operator*(const CompletionExpansion& a, const CompletionExpansion& b);
CompletionExpansion operator+(const CompletionExpansion& a, const CompletionExpansion& b);
CompletionExpansion operator-(const CompletionExpansion& a, const CompletionExpansion& b);

/// Euler characteristic realization, extended by chi((L-1)/(L^i-1)) = 1/i.
/// Throws Error(ChiUndefined) when (L-1)^|den| does not divide the numerator.
mpq_class chi_realize(const MotClass& a);

}  // namespace motint
