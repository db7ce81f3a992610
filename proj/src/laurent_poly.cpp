#include "motint/laurent_poly.hpp"

#include <cassert>
#include <stdexcept>
#include <vector>

namespace motint {

LaurentPoly::LaurentPoly(long constant) {
  if (constant != 0) terms_.emplace(0, mpz_class(constant));
}

LaurentPoly::LaurentPoly(Terms terms) {
  for (auto& [e, c] : terms)
    if (c != 0) terms_.emplace(e, std::move(c));
}

LaurentPoly LaurentPoly::monomial(const mpz_class& coefficient, long exponent) {
  LaurentPoly p;
  if (coefficient != 0) p.terms_.emplace(exponent, coefficient);
  return p;
}

LaurentPoly LaurentPoly::power_minus_one(long i) {
  LaurentPoly p = monomial(1, i);
  p.add_term(0, -1);
  return p;
}

long LaurentPoly::degree() const {
  assert(!terms_.empty());
  return terms_.rbegin()->first;
}

long LaurentPoly::low_degree() const {
  assert(!terms_.empty());
  return terms_.begin()->first;
}

mpz_class LaurentPoly::coefficient(long exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? mpz_class(0) : it->second;
}

LaurentPoly LaurentPoly::shifted(long by) const {
  LaurentPoly out;
  for (const auto& [e, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), e + by, c);
  return out;
}

void LaurentPoly::add_term(long exponent, const mpz_class& coefficient) {
  if (coefficient == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponent, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
  return out;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& other) { return *this = *this * other; }

LaurentPoly& LaurentPoly::operator*=(const mpz_class& scalar) {
  if (scalar == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= scalar;
  return *this;
}

LaurentPoly operator-(LaurentPoly a) {
  for (auto& [e, c] : a.terms_) c = -c;
  return a;
}

std::optional<LaurentPoly> LaurentPoly::divide_exact(const LaurentPoly& divisor) const {
  if (divisor.is_zero()) throw std::invalid_argument("division by zero polynomial");
  if (is_zero()) return LaurentPoly{};
  const mpz_class& lead = divisor.terms_.rbegin()->second;
  if (lead != 1 && lead != -1) throw std::invalid_argument("divisor must have unit leading coefficient");

  // Dense long division on the shifted polynomials.
  const long low_n = low_degree(), low_d = divisor.low_degree();
  const long deg_n = degree() - low_n, deg_d = divisor.degree() - low_d;
  if (deg_n < deg_d) return std::nullopt;
  std::vector<mpz_class> rem(deg_n + 1), den(deg_d + 1);
  for (const auto& [e, c] : terms_) rem[e - low_n] = c;
  for (const auto& [e, c] : divisor.terms_) den[e - low_d] = c;
  std::vector<mpz_class> quot(deg_n - deg_d + 1);
  for (long k = deg_n - deg_d; k >= 0; --k) {
    mpz_class q = rem[k + deg_d] * lead;  // lead is its own inverse
    if (q == 0) continue;
    quot[k] = q;
    for (long j = 0; j <= deg_d; ++j) rem[k + j] -= q * den[j];
  }
  for (const auto& r : rem)
    if (r != 0) return std::nullopt;
  LaurentPoly out;
  for (long k = 0; k <= deg_n - deg_d; ++k) out.add_term(k + low_n - low_d, quot[k]);
  return out;
}

bool LaurentPoly::divisible_by_power_minus_one(long i) const {
  std::map<long, mpz_class> residues;
  for (const auto& [e, c] : terms_) {
    long r = ((e % i) + i) % i;
    residues[r] += c;
  }
  for (const auto& [r, c] : residues)
    if (c != 0) return false;
  return true;
}

mpq_class LaurentPoly::evaluate(const mpq_class& x) const {
  mpq_class sum = 0;
  for (const auto& [e, c] : terms_) {
    mpq_class power = 1;
    mpq_class base = e >= 0 ? x : mpq_class(1) / x;
    for (long k = 0; k < (e >= 0 ? e : -e); ++k) power *= base;
    sum += mpq_class(c) * power;
  }
  return sum;
}

std::string LaurentPoly::to_string(std::string_view var) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    mpz_class mag = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    std::string power;
    if (e == 1) {
      power = std::string(var);
    } else if (e != 0) {
      power = std::string(var) + "^" + std::to_string(e);
    }
    if (power.empty()) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += power;
    } else {
      out += mag.get_str() + "*" + power;
    }
  }
  return out;
}

}  // namespace motint
