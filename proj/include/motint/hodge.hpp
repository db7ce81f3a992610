#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <string_view>

#include "motint/mot_class.hpp"

namespace motint {

/// Hodge realization values: rational functions in u, v whose denominators
/// are products of ((uv)^i - 1) and powers of uv.
///
/// Stored graded by delta = (u-degree) - (v-degree): the value is
/// sum_delta piece_delta(w) * u^delta (v^-delta for delta < 0), with w = uv
/// and each piece a MotClass in w.
class HodgeRational {
 public:
  HodgeRational() = default;
  HodgeRational(const MotClass& w_piece);  // NOLINT(google-explicit-constructor)

  static HodgeRational u();
  static HodgeRational v();

  const std::map<long, MotClass>& pieces() const noexcept { return pieces_; }
  bool is_zero() const noexcept { return pieces_.empty(); }

  HodgeRational& operator+=(const HodgeRational& other);
  HodgeRational& operator-=(const HodgeRational& other);
  friend HodgeRational operator+(HodgeRational a, const HodgeRational& b) { return a += b; }
  friend HodgeRational operator-(HodgeRational a, const HodgeRational& b) { return a -= b; }
  friend HodgeRational operator*(const HodgeRational& a, const HodgeRational& b);
  friend HodgeRational operator-(HodgeRational a);
  friend bool operator==(const HodgeRational& a, const HodgeRational& b);

  /// Substitute u = v = 1 through the chi extension of each piece.
  mpq_class euler_characteristic() const;

  std::string to_string() const;

 private:
  void add_piece(long delta, const MotClass& piece);

  std::map<long, MotClass> pieces_;  // zero pieces omitted
};

/// L -> uv. A ring morphism.
HodgeRational hodge_realize(const MotClass& a);

/// Parses polynomial-style text in u, v, w (w = uv) with the same division
/// rules as MotClass literals, e.g. "u*v - 2*u - 2*v + 1".
HodgeRational parse_hodge(std::string_view text);

}  // namespace motint
