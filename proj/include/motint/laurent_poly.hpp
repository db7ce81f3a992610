#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace motint {

/// Integer Laurent polynomial in one variable. Zero coefficients are never stored.
class LaurentPoly {
 public:
  using Terms = std::map<long, mpz_class>;

  LaurentPoly() = default;
  LaurentPoly(long constant);  // NOLINT(google-explicit-constructor)
  explicit LaurentPoly(Terms terms);

  static LaurentPoly monomial(const mpz_class& coefficient, long exponent);
  /// x^i - 1
  static LaurentPoly power_minus_one(long i);

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Highest exponent. Precondition: nonzero.
  long degree() const;
  /// Lowest exponent. Precondition: nonzero.
  long low_degree() const;
  mpz_class coefficient(long exponent) const;

  LaurentPoly shifted(long by) const;

  LaurentPoly& operator+=(const LaurentPoly& other);
  LaurentPoly& operator-=(const LaurentPoly& other);
  LaurentPoly& operator*=(const LaurentPoly& other);
  LaurentPoly& operator*=(const mpz_class& scalar);

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator-(LaurentPoly a);
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }

  /// Exact quotient by a divisor whose leading coefficient is a unit (+-1),
  /// or nullopt when the division leaves a remainder.
  std::optional<LaurentPoly> divide_exact(const LaurentPoly& divisor) const;

  /// Remainder-free test for x^i - 1, using x^i == 1 in the quotient ring.
  bool divisible_by_power_minus_one(long i) const;

  mpq_class evaluate(const mpq_class& x) const;

  std::string to_string(std::string_view var = "L") const;

 private:
  void add_term(long exponent, const mpz_class& coefficient);

  Terms terms_;
};

}  // namespace motint
