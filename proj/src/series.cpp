#include "motint/series.hpp"

#include <algorithm>
#include <cctype>

#include "motint/error.hpp"
#include "motint/expr.hpp"

namespace motint {

void tpoly_trim(TPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

TPoly tpoly_mul(const TPoly& a, const TPoly& b) {
  if (a.empty() || b.empty()) return {};
  TPoly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!b[j].is_zero()) out[i + j] += a[i] * b[j];
  }
  tpoly_trim(out);
  return out;
}

TPoly tpoly_add(const TPoly& a, const TPoly& b) {
  TPoly out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  tpoly_trim(out);
  return out;
}

namespace {

TPoly factor_poly(DenFactor f) {
  TPoly p(f.b + 1);
  p[0] = MotClass(1);
  p[f.b] = -MotClass::L_pow(f.a);
  return p;
}

TPoly product(const std::vector<DenFactor>& factors) {
  TPoly out{MotClass(1)};
  for (const auto& f : factors) out = tpoly_mul(out, factor_poly(f));
  return out;
}

std::vector<DenFactor> minus(const std::vector<DenFactor>& a, const std::vector<DenFactor>& b) {
  std::vector<DenFactor> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string factor_text(DenFactor f) { return "(" + std::to_string(f.a) + "," + std::to_string(f.b) + ")"; }

}  // namespace

RationalMotSeries::RationalMotSeries(TPoly num, std::vector<DenFactor> den)
    : num_(std::move(num)), den_(std::move(den)) {
  for (const auto& f : den_)
    if (f.b < 1) throw Error(ErrorCode::InvalidArgument, "series factor " + factor_text(f) + " needs b >= 1");
  tpoly_trim(num_);
  std::sort(den_.begin(), den_.end());
}

RationalMotSeries RationalMotSeries::geometric(const MotClass& c, DenFactor factor) {
  return RationalMotSeries({c}, {factor});
}

TPoly RationalMotSeries::den_poly() const { return product(den_); }

RationalMotSeries operator+(const RationalMotSeries& p, const RationalMotSeries& q) {
  std::vector<DenFactor> common;
  std::set_union(p.den_.begin(), p.den_.end(), q.den_.begin(), q.den_.end(), std::back_inserter(common));
  TPoly lhs = tpoly_mul(p.num_, product(minus(common, p.den_)));
  TPoly rhs = tpoly_mul(q.num_, product(minus(common, q.den_)));
  return RationalMotSeries(tpoly_add(lhs, rhs), std::move(common));
}

RationalMotSeries operator*(const MotClass& c, const RationalMotSeries& p) {
  return RationalMotSeries(tpoly_mul({c}, p.num_), p.den_);
}

RationalMotSeries operator-(const RationalMotSeries& p, const RationalMotSeries& q) {
  return p + MotClass(-1) * q;
}

RationalMotSeries operator*(const RationalMotSeries& p, const RationalMotSeries& q) {
  std::vector<DenFactor> den = p.den_;
  den.insert(den.end(), q.den_.begin(), q.den_.end());
  return RationalMotSeries(tpoly_mul(p.num_, q.num_), std::move(den));
}

bool operator==(const RationalMotSeries& p, const RationalMotSeries& q) {
  TPoly lhs = tpoly_mul(p.num_, q.den_poly());
  TPoly rhs = tpoly_mul(q.num_, p.den_poly());
  if (lhs.size() != rhs.size()) return false;
  for (std::size_t i = 0; i < lhs.size(); ++i)
    if (!(lhs[i] == rhs[i])) return false;
  return true;
}

std::string RationalMotSeries::num_to_string() const {
  if (num_.empty()) return "0";
  std::string out;
  for (std::size_t k = 0; k < num_.size(); ++k) {
    if (num_[k].is_zero()) continue;
    std::string coeff = num_[k].to_string();
    std::string t = k == 0 ? "" : (k == 1 ? "T" : "T^" + std::to_string(k));
    std::string term;
    if (t.empty()) {
      term = "(" + coeff + ")";
    } else if (coeff == "1") {
      term = t;
    } else {
      term = "(" + coeff + ")*" + t;
    }
    if (!out.empty()) out += " + ";
    out += term;
  }
  return out;
}

std::string RationalMotSeries::den_to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < den_.size(); ++i) {
    if (i) out += ", ";
    out += factor_text(den_[i]);
  }
  return out + "]";
}

std::vector<MotClass> expand(const RationalMotSeries& p, long n_max) {
  if (n_max < 0) throw Error(ErrorCode::InvalidArgument, "expansion order must be >= 0");
  std::vector<MotClass> coeffs(n_max + 1);
  for (std::size_t k = 0; k < p.num().size() && static_cast<long>(k) <= n_max; ++k) coeffs[k] = p.num()[k];
  for (const auto& f : p.den()) {
    // multiply by sum_k L^{ak} T^{bk}, in place from high degree down
    for (long n = n_max; n >= f.b; --n) {
      MotClass acc = coeffs[n];
      for (long k = 1; k * f.b <= n; ++k) {
        const MotClass& c = coeffs[n - k * f.b];
        if (!c.is_zero()) acc += c * MotClass::L_pow(f.a * k);
      }
      coeffs[n] = acc;
    }
  }
  return coeffs;
}

namespace {

// 1 / (1 - L^c) for c < 0, as L^{|c|} / (L^{|c|} - 1).
MotClass inverse_one_minus(long c) { return MotClass(LaurentPoly::monomial(1, -c), {-c}); }

MotClass evaluate_at_L_power(const TPoly& p, long exponent) {
  MotClass sum;
  for (std::size_t k = 0; k < p.size(); ++k) sum += p[k] * MotClass::L_pow(exponent * static_cast<long>(k));
  return sum;
}

}  // namespace

MotClass limit_of_coefficients(const RationalMotSeries& p, long d) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "limit dimension must be >= 1");
  const DenFactor dominant{d, 1};
  int dominant_count = 0;
  MotClass scale(1);
  for (const auto& f : p.den()) {
    if (f == dominant) {
      if (++dominant_count > 1)
        throw Error(ErrorCode::NoLimit, "factor (1 - L^" + std::to_string(d) + " T) is repeated; coefficients grow");
      continue;
    }
    const long excess = f.a - f.b * d;
    if (excess >= 0)
      throw Error(ErrorCode::NoLimit, "factor " + factor_text(f) + " has a - b*d = " + std::to_string(excess) +
                                          " >= 0; scaled coefficients do not converge");
    scale *= inverse_one_minus(excess);
  }
  if (dominant_count == 0) return MotClass(0);
  return MotClass::L_pow(-d) * evaluate_at_L_power(p.num(), -d) * scale;
}

MotClass sum_coefficients(const RationalMotSeries& p) {
  MotClass scale(1);
  for (const auto& f : p.den()) {
    if (f.a >= 0)
      throw Error(ErrorCode::NoLimit, "factor " + factor_text(f) + " has a >= 0; the coefficient sum diverges");
    scale *= inverse_one_minus(f.a);
  }
  return evaluate_at_L_power(p.num(), 0) * scale;
}

std::vector<mpq_class> specialize_at_q(const RationalMotSeries& p, long q, long n_max) {
  if (q < 2) throw Error(ErrorCode::InvalidArgument, "q must be >= 2");
  std::vector<mpq_class> out;
  for (const auto& c : expand(p, n_max)) out.push_back(c.evaluate(mpq_class(q)));
  return out;
}

CountComparison compare_counts(const RationalMotSeries& p, long q, const std::vector<mpz_class>& counts) {
  if (counts.empty()) throw Error(ErrorCode::InvalidArgument, "count table is empty");
  CountComparison report;
  auto expected = specialize_at_q(p, q, static_cast<long>(counts.size()) - 1);
  for (std::size_t n = 0; n < counts.size(); ++n) {
    bool match = expected[n] == mpq_class(counts[n]);
    report.rows.push_back({static_cast<long>(n), expected[n], counts[n], match});
    if (!match && report.pass) {
      report.pass = false;
      report.first_mismatch = static_cast<long>(n);
    }
  }
  return report;
}

namespace {

TPoly evaluate_tpoly(const expr::Node& node) {
  using expr::Kind;
  switch (node.kind) {
    case Kind::Number:
      return tpoly_add({MotClass(LaurentPoly::monomial(node.number, 0))}, {});
    case Kind::Symbol:
      if (node.symbol == "L") return {MotClass::L()};
      if (node.symbol == "T") return {MotClass(0), MotClass(1)};
      expr::fail(node, "unknown symbol '" + node.symbol + "' (expected L or T)");
    case Kind::Add:
      return tpoly_add(evaluate_tpoly(*node.children[0]), evaluate_tpoly(*node.children[1]));
    case Kind::Sub:
      return tpoly_add(evaluate_tpoly(*node.children[0]),
                       tpoly_mul({MotClass(-1)}, evaluate_tpoly(*node.children[1])));
    case Kind::Neg:
      return tpoly_mul({MotClass(-1)}, evaluate_tpoly(*node.children[0]));
    case Kind::Mul:
      return tpoly_mul(evaluate_tpoly(*node.children[0]), evaluate_tpoly(*node.children[1]));
    case Kind::Pow: {
      TPoly base = evaluate_tpoly(*node.children[0]);
      if (node.exponent < 0) {
        if (base.size() != 1 || !invert(base[0]))
          expr::fail(node, "negative exponents need a T-free base of the form L^e * prod (L^i - 1)");
        return {power(base[0], node.exponent)};
      }
      TPoly out{MotClass(1)};
      for (long i = 0; i < node.exponent; ++i) out = tpoly_mul(out, base);
      return out;
    }
    case Kind::Div: {
      TPoly numerator = evaluate_tpoly(*node.children[0]);
      TPoly divisor = evaluate_tpoly(*node.children[1]);
      std::optional<MotClass> inverse;
      if (divisor.size() == 1) inverse = invert(divisor[0]);
      if (!inverse)
        expr::fail(*node.children[1],
                   "denominator must be T-free and a product of (L^i - 1) and powers of L; "
                   "put T-factors in the den list");
      return tpoly_mul(numerator, {*inverse});
    }
  }
  expr::fail(node, "unsupported expression");
}

}  // namespace

TPoly parse_tpoly(std::string_view text) { return evaluate_tpoly(*expr::parse(text)); }

std::vector<DenFactor> parse_den_factors(std::string_view text) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& message) -> void { throw ParseError(0, pos + 1, message); };
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto expect = [&](char c) {
    skip();
    if (pos >= text.size() || text[pos] != c) fail(std::string("expected '") + c + "'");
    ++pos;
  };
  auto integer = [&] {
    skip();
    std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start || !std::isdigit(static_cast<unsigned char>(text[pos - 1]))) fail("expected an integer");
    return std::stol(std::string(text.substr(start, pos - start)));
  };
  std::vector<DenFactor> out;
  expect('[');
  skip();
  if (pos < text.size() && text[pos] == ']') {
    ++pos;
  } else {
    while (true) {
      expect('(');
      long a = integer();
      expect(',');
      std::size_t b_pos = pos;
      long b = integer();
      expect(')');
      if (b < 1) throw ParseError(0, b_pos + 1, "factor exponent b must be >= 1");
      out.push_back({a, b});
      skip();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      expect(']');
      break;
    }
  }
  skip();
  if (pos != text.size()) fail("trailing input after factor list");
  return out;
}

RationalMotSeries parse_series(std::string_view num_text, std::string_view den_text) {
  return RationalMotSeries(parse_tpoly(num_text), parse_den_factors(den_text));
}

}  // namespace motint
