#include "motint/mot_class.hpp"

#include <algorithm>
#include <numeric>

#include "motint/error.hpp"
#include "motint/expr.hpp"

namespace motint {

namespace {

// (x^i - 1)/(x^j - 1) for j | i.
LaurentPoly cyclotomic_block(long i, long j) {
  LaurentPoly::Terms terms;
  for (long k = 0; k < i; k += j) terms.emplace(k, 1);
  return LaurentPoly(std::move(terms));
}

LaurentPoly product_of_factors(const std::vector<long>& factors) {
  LaurentPoly out(1);
  for (long i : factors) out *= LaurentPoly::power_minus_one(i);
  return out;
}

// Multiset difference a - b of sorted vectors.
std::vector<long> multiset_minus(const std::vector<long>& a, const std::vector<long>& b) {
  std::vector<long> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<long> multiset_max(const std::vector<long>& a, const std::vector<long>& b) {
  std::vector<long> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

MotClass::MotClass(LaurentPoly num, std::vector<long> den) : num_(std::move(num)), den_(std::move(den)) {
  for (long i : den_)
    if (i < 1) throw Error(ErrorCode::InvalidArgument, "denominator factor L^" + std::to_string(i) + " - 1 needs i >= 1");
  std::sort(den_.begin(), den_.end());
  canonicalize();
}

MotClass MotClass::geometric(long i) { return MotClass(LaurentPoly::power_minus_one(1), {i}); }

LaurentPoly MotClass::den_poly() const { return product_of_factors(den_); }

long MotClass::virtual_dimension() const {
  return num_.degree() - std::accumulate(den_.begin(), den_.end(), 0L);
}

void MotClass::canonicalize() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  bool changed = true;
  while (changed && !den_.empty()) {
    changed = false;
    for (std::size_t idx = den_.size(); idx-- > 0 && !changed;) {
      const long i = den_[idx];
      if (idx + 1 < den_.size() && den_[idx + 1] == i) continue;  // same factor already tried
      if (num_.divisible_by_power_minus_one(i)) {
        num_ = *num_.divide_exact(LaurentPoly::power_minus_one(i));
        den_.erase(den_.begin() + static_cast<long>(idx));
        changed = true;
        break;
      }
      for (long j = 1; j < i && !changed; ++j) {
        if (i % j != 0) continue;
        if (auto q = num_.divide_exact(cyclotomic_block(i, j))) {
          num_ = std::move(*q);
          den_[idx] = j;
          std::sort(den_.begin(), den_.end());
          changed = true;
        }
      }
    }
  }
}

MotClass MotClass::divided_by_power_minus_one(long i) const {
  std::vector<long> den = den_;
  den.push_back(i);
  return MotClass(num_, std::move(den));
}

MotClass& MotClass::operator+=(const MotClass& other) {
  if (other.is_zero()) return *this;
  if (is_zero()) return *this = other;
  std::vector<long> common = multiset_max(den_, other.den_);
  LaurentPoly lhs = num_ * product_of_factors(multiset_minus(common, den_));
  LaurentPoly rhs = other.num_ * product_of_factors(multiset_minus(common, other.den_));
  num_ = lhs + rhs;
  den_ = std::move(common);
  canonicalize();
  return *this;
}

MotClass& MotClass::operator-=(const MotClass& other) { return *this += -other; }

MotClass& MotClass::operator*=(const MotClass& other) {
  num_ = num_ * other.num_;
  den_.insert(den_.end(), other.den_.begin(), other.den_.end());
  std::sort(den_.begin(), den_.end());
  canonicalize();
  return *this;
}

bool operator==(const MotClass& a, const MotClass& b) {
  std::vector<long> shared;
  std::set_intersection(a.den_.begin(), a.den_.end(), b.den_.begin(), b.den_.end(),
                        std::back_inserter(shared));
  LaurentPoly lhs = a.num_ * product_of_factors(multiset_minus(b.den_, shared));
  LaurentPoly rhs = b.num_ * product_of_factors(multiset_minus(a.den_, shared));
  return lhs == rhs;
}

mpq_class MotClass::evaluate(const mpq_class& x) const {
  mpq_class value = num_.evaluate(x);
  for (long i : den_) {
    mpq_class power = 1;
    for (long k = 0; k < i; ++k) power *= x;
    power -= 1;
    if (power == 0) throw Error(ErrorCode::InvalidArgument, "denominator vanishes at the evaluation point");
    value /= power;
  }
  return value;
}

std::string MotClass::to_string(std::string_view var) const {
  std::string num = num_.to_string(var);
  if (den_.empty()) return num;
  std::string out = num_.terms().size() > 1 ? "(" + num + ")" : num;
  for (long i : den_) out += "/(" + LaurentPoly::power_minus_one(i).to_string(var) + ")";
  return out;
}

namespace {

// Writes p = sign * x^shift * prod (x^i - 1), or returns false.
bool factor_as_power_minus_one_product(const LaurentPoly& p, std::vector<long>& factors, long& shift,
                                       int& sign) {
  if (p.is_zero()) return false;
  shift = p.low_degree();
  LaurentPoly rest = p.shifted(-shift);
  factors.clear();
  while (rest.degree() > 0) {
    bool found = false;
    for (long i = rest.degree(); i >= 1; --i) {
      if (!rest.divisible_by_power_minus_one(i)) continue;
      if (auto q = rest.divide_exact(LaurentPoly::power_minus_one(i))) {
        rest = std::move(*q);
        factors.push_back(i);
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  const mpz_class c = rest.coefficient(0);
  if (c != 1 && c != -1) return false;
  sign = c > 0 ? 1 : -1;
  return true;
}

MotClass evaluate_class(const expr::Node& node, std::string_view var) {
  using expr::Kind;
  switch (node.kind) {
    case Kind::Number:
      return MotClass(LaurentPoly::monomial(node.number, 0));
    case Kind::Symbol:
      if (node.symbol != var) expr::fail(node, "unknown symbol '" + node.symbol + "' (expected " + std::string(var) + ")");
      return MotClass(LaurentPoly::monomial(1, 1));
    case Kind::Add:
      return evaluate_class(*node.children[0], var) + evaluate_class(*node.children[1], var);
    case Kind::Sub:
      return evaluate_class(*node.children[0], var) - evaluate_class(*node.children[1], var);
    case Kind::Neg:
      return -evaluate_class(*node.children[0], var);
    case Kind::Mul:
      return evaluate_class(*node.children[0], var) * evaluate_class(*node.children[1], var);
    case Kind::Pow: {
      MotClass base = evaluate_class(*node.children[0], var);
      if (node.exponent < 0 && !invert(base))
        expr::fail(node, "negative exponents need a base of the form L^e * prod (L^i - 1)");
      return power(base, node.exponent);
    }
    case Kind::Div: {
      MotClass numerator = evaluate_class(*node.children[0], var);
      auto inverse = invert(evaluate_class(*node.children[1], var));
      if (!inverse)
        expr::fail(*node.children[1],
                   "denominator must be a product of factors (" + std::string(var) + "^i - 1) and powers of " +
                       std::string(var));
      return numerator * *inverse;
    }
  }
  expr::fail(node, "unsupported expression");
}

}  // namespace

std::optional<MotClass> invert(const MotClass& a) {
  std::vector<long> factors;
  long shift = 0;
  int sign = 1;
  if (!factor_as_power_minus_one_product(a.num(), factors, shift, sign)) return std::nullopt;
  LaurentPoly num = a.den_poly().shifted(-shift);
  if (sign < 0) num = -num;
  return MotClass(std::move(num), std::move(factors));
}

MotClass power(const MotClass& a, long k) {
  MotClass base = a;
  if (k < 0) {
    auto inv = invert(a);
    if (!inv) throw Error(ErrorCode::InvalidArgument, a.to_string() + " is not invertible");
    base = *inv;
    k = -k;
  }
  MotClass out(1);
  for (long i = 0; i < k; ++i) out *= base;
  return out;
}

MotClass parse_mot_class(std::string_view text, std::string_view var) {
  auto root = expr::parse(text);
  return evaluate_class(*root, var);
}

std::optional<long> filtration_degree(const MotClass& a) {
  if (a.is_zero()) return std::nullopt;
  return -a.virtual_dimension();
}

mpz_class CompletionExpansion::coefficient(long n) const {
  auto it = coeffs.find(n);
  return it == coeffs.end() ? mpz_class(0) : it->second;
}

CompletionExpansion CompletionExpansion::truncated(long m) const {
  CompletionExpansion out;
  out.order = std::min(m, order);
  for (const auto& [n, c] : coeffs)
    if (n <= out.order) out.coeffs.emplace(n, c);
  return out;
}

std::string CompletionExpansion::to_string() const {
  LaurentPoly::Terms terms;
  for (const auto& [n, c] : coeffs) terms.emplace(-n, c);
  std::string body = LaurentPoly(std::move(terms)).to_string("L");
  return body + " + O(L^" + std::to_string(-(order + 1)) + ")";
}

namespace {

long lowest_index(const CompletionExpansion& a) {
  return a.coeffs.empty() ? a.order + 1 : a.coeffs.begin()->first;
}

}  // namespace

CompletionExpansion expand_completion(const MotClass& a, long order) {
  CompletionExpansion out;
  out.order = order;
  for (const auto& [e, c] : a.num().terms())
    if (-e <= order) out.coeffs.emplace(-e, c);
  for (long i : a.den()) {
    // multiply by 1/(L^i - 1) = sum_{k>=1} L^{-ik}
    std::map<long, mpz_class> next;
    for (const auto& [n, c] : out.coeffs)
      for (long m = n + i; m <= order; m += i) next[m] += c;
    out.coeffs.clear();
    for (auto& [n, c] : next)
      if (c != 0) out.coeffs.emplace(n, std::move(c));
  }
  return out;
}

CompletionExpansion operator*(const CompletionExpansion& a, const CompletionExpansion& b) {
  CompletionExpansion out;
  out.order = std::min(a.order + lowest_index(b), b.order + lowest_index(a));
  std::map<long, mpz_class> acc;
  for (const auto& [na, ca] : a.coeffs)
    for (const auto& [nb, cb] : b.coeffs)
      if (na + nb <= out.order) acc[na + nb] += ca * cb;
  for (auto& [n, c] : acc)
    if (c != 0) out.coeffs.emplace(n, std::move(c));
  return out;
}

CompletionExpansion operator+(const CompletionExpansion& a, const CompletionExpansion& b) {
  CompletionExpansion out;
  out.order = std::min(a.order, b.order);
  std::map<long, mpz_class> acc;
  for (const auto& [n, c] : a.coeffs)
    if (n <= out.order) acc[n] += c;
  for (const auto& [n, c] : b.coeffs)
    if (n <= out.order) acc[n] += c;
  for (auto& [n, c] : acc)
    if (c != 0) out.coeffs.emplace(n, std::move(c));
  return out;
}

CompletionExpansion operator-(const CompletionExpansion& a, const CompletionExpansion& b) {
  CompletionExpansion neg = b;
  for (auto& [n, c] : neg.coeffs) c = -c;
  return a + neg;
}

mpq_class chi_realize(const MotClass& a) {
  LaurentPoly reduced = a.num();
  const LaurentPoly l_minus_one = LaurentPoly::power_minus_one(1);
  for (std::size_t k = 0; k < a.den().size(); ++k) {
    auto q = reduced.divide_exact(l_minus_one);
    if (!q)
      throw Error(ErrorCode::ChiUndefined,
                  "chi is undefined for " + a.to_string() + ": (L - 1)^" + std::to_string(a.den().size()) +
                      " does not divide the numerator");
    reduced = std::move(*q);
  }
  mpq_class value = reduced.evaluate(1);
  for (long i : a.den()) value /= i;
  return value;
}

}  // namespace motint
