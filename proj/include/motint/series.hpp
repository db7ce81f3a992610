#pragma once

// Rational power series in T over the localized Grothendieck ring:
// num(T) / prod (1 - L^a T^b), b >= 1.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "motint/mot_class.hpp"

namespace motint {

/// Polynomial in T with MotClass coefficients; index = power of T.
using TPoly = std::vector<MotClass>;

/// The factor (1 - L^a T^b).
struct DenFactor {
  long a = 0;
  long b = 1;
  friend auto operator<=>(const DenFactor&, const DenFactor&) = default;
};

class RationalMotSeries {
 public:
  RationalMotSeries() = default;
  /// Throws Error(InvalidArgument) if some factor has b < 1.
  RationalMotSeries(TPoly num, std::vector<DenFactor> den);

  /// c / (1 - L^a T^b)
  static RationalMotSeries geometric(const MotClass& c, DenFactor factor);

  const TPoly& num() const noexcept { return num_; }
  /// Sorted multiset of factors.
  const std::vector<DenFactor>& den() const noexcept { return den_; }
  TPoly den_poly() const;

  friend RationalMotSeries operator+(const RationalMotSeries& p, const RationalMotSeries& q);
  friend RationalMotSeries operator-(const RationalMotSeries& p, const RationalMotSeries& q);
  friend RationalMotSeries operator*(const RationalMotSeries& p, const RationalMotSeries& q);
  friend RationalMotSeries operator*(const MotClass& c, const RationalMotSeries& p);
  /// Equality as formal series (cross-multiplied).
  friend bool operator==(const RationalMotSeries& p, const RationalMotSeries& q);

  std::string num_to_string() const;
  std::string den_to_string() const;

 private:
  TPoly num_;
  std::vector<DenFactor> den_;
};

TPoly tpoly_mul(const TPoly& a, const TPoly& b);
TPoly tpoly_add(const TPoly& a, const TPoly& b);
void tpoly_trim(TPoly& p);

/// Coefficients a_0..a_N.
std::vector<MotClass> expand(const RationalMotSeries& p, long n_max);

/// lim a_n L^{-(n+1)d} = L^{-d} ((1 - L^d T) P)(L^{-d}).
/// Throws Error(NoLimit) naming the offending factor when the dominant
/// factor is repeated, or another factor has a - b*d >= 0.
MotClass limit_of_coefficients(const RationalMotSeries& p, long d);

/// sum_n a_n in the completion, i.e. P(1); requires every factor to have a < 0
/// (otherwise Error(NoLimit)).
MotClass sum_coefficients(const RationalMotSeries& p);

/// a_n evaluated at L = q for n = 0..N.
std::vector<mpq_class> specialize_at_q(const RationalMotSeries& p, long q, long n_max);

struct CountComparison {
  struct Row {
    long n;
    mpq_class expected;
    mpz_class observed;
    bool match;
  };
  std::vector<Row> rows;
  bool pass = true;
  std::optional<long> first_mismatch;
};

CountComparison compare_counts(const RationalMotSeries& p, long q, const std::vector<mpz_class>& counts);

/// Parses `num` (polynomial in T and L, with MotClass division rules) and
/// `den` (a list "[(a,b), ...]").
RationalMotSeries parse_series(std::string_view num_text, std::string_view den_text);
TPoly parse_tpoly(std::string_view text);
std::vector<DenFactor> parse_den_factors(std::string_view text);

}  // namespace motint
