#include "motint/presburger.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>
#include <optional>
#include <set>

#include "motint/error.hpp"
#include "motint/sexpr.hpp"

namespace motint {

namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long ceil_div(long a, long b) { return -floor_div(-a, b); }

long mod(long a, long d) { return ((a % d) + d) % d; }

long total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0L); }

}  // namespace

long LinearForm::eval(const std::vector<long>& point) const {
  long v = constant;
  for (std::size_t i = 0; i < coeffs.size(); ++i) v += coeffs[i] * point[i];
  return v;
}

Condition Condition::truth(bool value) {
  Condition c;
  c.kind = value ? Kind::True : Kind::False;
  return c;
}

Condition Condition::ge(LinearForm form) {
  Condition c;
  c.kind = Kind::Ge;
  c.form = std::move(form);
  return c;
}

Condition Condition::cong(LinearForm form, long modulus, long residue) {
  if (modulus < 1) throw Error(ErrorCode::InvalidArgument, "congruence modulus must be >= 1");
  Condition c;
  c.kind = Kind::Cong;
  c.form = std::move(form);
  c.modulus = modulus;
  c.residue = mod(residue, modulus);
  return c;
}

Condition Condition::all(std::vector<Condition> children) {
  Condition c;
  c.kind = Kind::And;
  c.children = std::move(children);
  return c;
}

Condition Condition::any(std::vector<Condition> children) {
  Condition c;
  c.kind = Kind::Or;
  c.children = std::move(children);
  return c;
}

Condition Condition::negate(Condition child) {
  Condition c;
  c.kind = Kind::Not;
  c.children.push_back(std::move(child));
  return c;
}

bool Condition::eval(const std::vector<long>& point) const {
  switch (kind) {
    case Kind::True:
      return true;
    case Kind::False:
      return false;
    case Kind::Ge:
      return form.eval(point) >= 0;
    case Kind::Cong:
      return mod(form.eval(point) - residue, modulus) == 0;
    case Kind::And:
      return std::all_of(children.begin(), children.end(), [&](const Condition& c) { return c.eval(point); });
    case Kind::Or:
      return std::any_of(children.begin(), children.end(), [&](const Condition& c) { return c.eval(point); });
    case Kind::Not:
      return !children[0].eval(point);
  }
  return false;
}

namespace {

void validate(const Condition& c, long m) {
  if (c.kind == Condition::Kind::Ge || c.kind == Condition::Kind::Cong) {
    if (static_cast<long>(c.form.coeffs.size()) != m)
      throw Error(ErrorCode::InvalidArgument, "linear form arity differs from m = " + std::to_string(m));
    if (c.modulus < 1) throw Error(ErrorCode::InvalidArgument, "congruence modulus must be >= 1");
  }
  if (c.kind == Condition::Kind::Not && c.children.size() != 1)
    throw Error(ErrorCode::InvalidArgument, "not takes exactly one condition");
  for (const auto& child : c.children) validate(child, m);
}

const char* const kVarNames[] = {"i", "j", "k"};

std::string linear_to_string(const LinearForm& f) {
  std::vector<std::string> terms;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    if (f.coeffs[i] == 0) continue;
    std::string var = f.coeffs.size() <= 3 ? kVarNames[i] : "x" + std::to_string(i + 1);
    terms.push_back(f.coeffs[i] == 1 ? var : "(* " + std::to_string(f.coeffs[i]) + " " + var + ")");
  }
  if (f.constant != 0 || terms.empty()) terms.push_back(std::to_string(f.constant));
  if (terms.size() == 1) return terms[0];
  std::string out = "(+";
  for (const auto& t : terms) out += " " + t;
  return out + ")";
}

std::string condition_to_string(const Condition& c) {
  using Kind = Condition::Kind;
  switch (c.kind) {
    case Kind::True:
      return "true";
    case Kind::False:
      return "false";
    case Kind::Ge:
      return "(>= " + linear_to_string(c.form) + " 0)";
    case Kind::Cong:
      return "(mod " + linear_to_string(c.form) + " " + std::to_string(c.modulus) + " " + std::to_string(c.residue) + ")";
    case Kind::And:
    case Kind::Or:
    case Kind::Not: {
      std::string out = c.kind == Kind::And ? "(and" : (c.kind == Kind::Or ? "(or" : "(not");
      for (const auto& child : c.children) out += " " + condition_to_string(child);
      return out + ")";
    }
  }
  return "false";
}

}  // namespace

PresburgerSet::PresburgerSet(long m, Condition condition) : m_(m), condition_(std::move(condition)) {
  if (m_ < 1) throw Error(ErrorCode::InvalidArgument, "Presburger arity m must be >= 1");
  validate(condition_, m_);
}

bool PresburgerSet::member(const std::vector<long>& point) const {
  if (static_cast<long>(point.size()) != m_) throw Error(ErrorCode::InvalidArgument, "point arity differs from m");
  return condition_.eval(point);
}

std::string PresburgerSet::to_string() const { return condition_to_string(condition_); }

PresburgerSet set_union(const PresburgerSet& p, const PresburgerSet& q) {
  if (p.m() != q.m()) throw Error(ErrorCode::InvalidArgument, "union of sets with different arity");
  return PresburgerSet(p.m(), Condition::any({p.condition(), q.condition()}));
}

PresburgerSet set_intersection(const PresburgerSet& p, const PresburgerSet& q) {
  if (p.m() != q.m()) throw Error(ErrorCode::InvalidArgument, "intersection of sets with different arity");
  return PresburgerSet(p.m(), Condition::all({p.condition(), q.condition()}));
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class ConditionParser {
 public:
  explicit ConditionParser(long m) : m_(m) {}

  Condition condition(const sexpr::Value& v) {
    if (!v.is_list) {
      if (v.atom == "true") return Condition::truth(true);
      if (v.atom == "false") return Condition::truth(false);
      fail(v, "expected a condition, got '" + v.atom + "'");
    }
    if (v.items.empty() || v.items[0].is_list) fail(v, "expected an operator after '('");
    const std::string& op = v.items[0].atom;
    const std::size_t argc = v.items.size() - 1;
    if (op == "and" || op == "or") {
      std::vector<Condition> children;
      for (std::size_t i = 1; i < v.items.size(); ++i) children.push_back(condition(v.items[i]));
      return op == "and" ? Condition::all(std::move(children)) : Condition::any(std::move(children));
    }
    if (op == "not") {
      if (argc != 1) fail(v, "not takes exactly one condition");
      return Condition::negate(condition(v.items[1]));
    }
    if (op == "mod") {
      if (argc != 3) fail(v, "mod takes an expression, a modulus and a residue");
      LinearForm f = linear(v.items[1]);
      long d = constant(v.items[2]);
      if (d < 1) fail(v.items[2], "modulus must be >= 1");
      return Condition::cong(std::move(f), d, constant(v.items[3]));
    }
    if (op == ">=" || op == "<=" || op == ">" || op == "<" || op == "=") {
      if (argc != 2) fail(v, op + " takes two expressions");
      LinearForm diff = combine(linear(v.items[1]), linear(v.items[2]), -1);
      LinearForm neg = scale(diff, -1);
      if (op == ">=") return Condition::ge(diff);
      if (op == "<=") return Condition::ge(neg);
      if (op == ">") {
        diff.constant -= 1;
        return Condition::ge(diff);
      }
      if (op == "<") {
        neg.constant -= 1;
        return Condition::ge(neg);
      }
      return Condition::all({Condition::ge(diff), Condition::ge(neg)});
    }
    fail(v.items[0], "unknown condition operator '" + op + "'");
  }

 private:
  [[noreturn]] void fail(const sexpr::Value& v, const std::string& message) {
    throw ParseError(0, v.column, message);
  }

  LinearForm zero() const { return LinearForm{std::vector<long>(m_, 0), 0}; }

  static LinearForm combine(LinearForm a, const LinearForm& b, long sign) {
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) a.coeffs[i] += sign * b.coeffs[i];
    a.constant += sign * b.constant;
    return a;
  }

  static LinearForm scale(LinearForm a, long c) {
    for (long& x : a.coeffs) x *= c;
    a.constant *= c;
    return a;
  }

  static bool is_constant(const LinearForm& f) {
    return std::all_of(f.coeffs.begin(), f.coeffs.end(), [](long x) { return x == 0; });
  }

  long constant(const sexpr::Value& v) {
    LinearForm f = linear(v);
    if (!is_constant(f)) fail(v, "expected an integer constant");
    return f.constant;
  }

  LinearForm linear(const sexpr::Value& v) {
    if (!v.is_list) {
      const std::string& a = v.atom;
      if (!a.empty() && (std::isdigit(static_cast<unsigned char>(a[0])) ||
                         ((a[0] == '-' || a[0] == '+') && a.size() > 1))) {
        std::size_t used = 0;
        long value = 0;
        try {
          value = std::stol(a, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != a.size()) fail(v, "malformed integer '" + a + "'");
        LinearForm f = zero();
        f.constant = value;
        return f;
      }
      for (long i = 0; i < m_; ++i) {
        bool named = (m_ <= 3 && a == kVarNames[i]) || a == "x" + std::to_string(i + 1);
        if (named) {
          LinearForm f = zero();
          f.coeffs[i] = 1;
          return f;
        }
      }
      fail(v, "unknown variable '" + a + "' for m = " + std::to_string(m_));
    }
    if (v.items.empty() || v.items[0].is_list) fail(v, "expected an operator after '('");
    const std::string& op = v.items[0].atom;
    if (v.items.size() < 2) fail(v, op + " needs arguments");
    if (op == "+") {
      LinearForm f = zero();
      for (std::size_t i = 1; i < v.items.size(); ++i) f = combine(f, linear(v.items[i]), 1);
      return f;
    }
    if (op == "-") {
      LinearForm f = linear(v.items[1]);
      if (v.items.size() == 2) return scale(f, -1);
      for (std::size_t i = 2; i < v.items.size(); ++i) f = combine(f, linear(v.items[i]), -1);
      return f;
    }
    if (op == "*") {
      LinearForm f = linear(v.items[1]);
      for (std::size_t i = 2; i < v.items.size(); ++i) {
        LinearForm g = linear(v.items[i]);
        if (is_constant(g)) {
          f = scale(f, g.constant);
        } else if (is_constant(f)) {
          f = scale(g, f.constant);
        } else {
          fail(v.items[i], "product of two non-constant terms is not linear");
        }
      }
      return f;
    }
    fail(v.items[0], "unknown expression operator '" + op + "'");
  }

  long m_;
};

}  // namespace

PresburgerSet parse_presburger(long m, std::string_view text) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "Presburger arity m must be >= 1");
  return PresburgerSet(m, ConditionParser(m).condition(sexpr::parse(text)));
}

// ---------------------------------------------------------------------------
// Decomposition

namespace {

void collect_atoms(const Condition& c, std::vector<LinearForm>& forms, long& modulus_lcm) {
  if (c.kind == Condition::Kind::Ge) forms.push_back(c.form);
  if (c.kind == Condition::Kind::Cong) modulus_lcm = std::lcm(modulus_lcm, c.modulus);
  for (const auto& child : c.children) collect_atoms(child, forms, modulus_lcm);
}

// j' >= u s + w (or j' < u s + w), as an affine function of s.
struct Threshold {
  long u = 0;
  long w = 0;
  long at(long s) const { return u * s + w; }
  friend auto operator<=>(const Threshold&, const Threshold&) = default;
};

void decompose_1d(const PresburgerSet& p, const std::vector<LinearForm>& forms, long D, std::vector<LatticePiece>& out) {
  for (long a = 0; a < D; ++a) {
    long s0 = 0;
    for (const auto& f : forms) {
      long c = f.coeffs[0];
      if (c != 0) s0 = std::max(s0, std::labs(c * a + f.constant) / std::labs(c * D) + 1);
    }
    for (long s = 0; s < s0; ++s)
      if (p.member({D * s + a})) out.push_back({{D * s + a}, {}});
    if (p.member({D * s0 + a})) out.push_back({{D * s0 + a}, {{D}}});
  }
}

void decompose_2d(const PresburgerSet& p, const std::vector<LinearForm>& forms, long D, std::vector<LatticePiece>& out) {
  long M = 1;
  for (const auto& f : forms)
    if (f.coeffs[1] != 0) M = std::lcm(M, std::labs(f.coeffs[1]));
  const long A = D * M;
  for (long a = 0; a < D; ++a) {
    for (long b = 0; b < D; ++b) {
      for (long r = 0; r < M; ++r) {
        const long i0 = D * r + a;
        auto point = [&](long s, long jp) { return std::vector<long>{A * s + i0, D * jp + b}; };
        std::set<Threshold> thresholds{{0, 0}};
        long s0 = 0;
        for (const auto& f : forms) {
          const long alpha = f.coeffs[0] * A;
          const long beta = f.coeffs[1] * D;
          const long gamma = f.coeffs[0] * i0 + f.coeffs[1] * b + f.constant;
          if (beta == 0) {
            if (alpha != 0) s0 = std::max(s0, std::labs(gamma) / std::labs(alpha) + 1);
          } else if (beta > 0) {
            thresholds.insert({-alpha / beta, ceil_div(-gamma, beta)});
          } else {
            thresholds.insert({alpha / -beta, floor_div(gamma, -beta) + 1});
          }
        }
        std::vector<Threshold> ts(thresholds.begin(), thresholds.end());
        for (std::size_t x = 0; x < ts.size(); ++x)
          for (std::size_t y = x + 1; y < ts.size(); ++y)
            if (ts[x].u != ts[y].u)
              s0 = std::max(s0, std::labs(ts[x].w - ts[y].w) / std::labs(ts[x].u - ts[y].u) + 1);

        // Rows below s0, one at a time.
        for (long s = 0; s < s0; ++s) {
          std::set<long> cuts{0};
          for (const auto& t : ts)
            if (t.at(s) > 0) cuts.insert(t.at(s));
          std::vector<long> tau(cuts.begin(), cuts.end());
          for (std::size_t k = 0; k < tau.size(); ++k) {
            if (!p.member(point(s, tau[k]))) continue;
            if (k + 1 < tau.size()) {
              for (long jp = tau[k]; jp < tau[k + 1]; ++jp) out.push_back({point(s, jp), {}});
            } else {
              out.push_back({point(s, tau[k]), {{0, D}}});
            }
          }
        }

        // From s0 on the order of the thresholds is fixed.
        std::vector<Threshold> live;
        for (const auto& t : ts)
          if (t.at(s0) >= 0) live.push_back(t);
        std::sort(live.begin(), live.end(), [&](const Threshold& x, const Threshold& y) { return x.at(s0) < y.at(s0); });
        for (std::size_t k = 0; k < live.size(); ++k) {
          const long lo = live[k].at(s0);
          if (!p.member(point(s0, lo))) continue;
          const long uk = live[k].u;
          if (k + 1 == live.size()) {
            out.push_back({point(s0, lo), {{A, D * uk}, {0, D}}});
            continue;
          }
          const long width = live[k + 1].at(s0) - lo;
          const long delta = live[k + 1].u - uk;
          for (long t0 = 0; t0 < width; ++t0) out.push_back({point(s0, lo + t0), {{A, D * uk}}});
          for (long rho = 0; rho < delta; ++rho) {
            std::vector<long> base = point(s0 + 1, lo + uk + width + rho);
            out.push_back({base, {{A, D * live[k + 1].u}, {A, D * uk}}});
          }
        }
      }
    }
  }
}

}  // namespace

std::vector<LatticePiece> decompose(const PresburgerSet& p) {
  if (p.m() > 2)
    throw Error(ErrorCode::DimensionUnsupported,
                "closed-form generating functions support m <= 2 (got m = " + std::to_string(p.m()) + ")");
  std::vector<LinearForm> forms;
  long D = 1;
  collect_atoms(p.condition(), forms, D);
  std::vector<LatticePiece> out;
  if (p.m() == 1) {
    decompose_1d(p, forms, D, out);
  } else {
    decompose_2d(p, forms, D, out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rational generating functions

namespace {

Exponent vec_add(const Exponent& a, const Exponent& b) {
  Exponent out(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

void add_term(MultiPoly& p, const Exponent& e, const mpz_class& c) {
  if (c == 0) return;
  auto [it, inserted] = p.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

// p * (1 - X^c)
MultiPoly times_factor(const MultiPoly& p, const Exponent& c) {
  MultiPoly out = p;
  for (const auto& [e, coeff] : p) add_term(out, vec_add(e, c), -coeff);
  return out;
}

MultiPoly times_factors(MultiPoly p, const std::vector<Exponent>& factors) {
  for (const auto& c : factors) p = times_factor(p, c);
  return p;
}

// p / (1 - X^c) when exact.
std::optional<MultiPoly> divide_factor(const MultiPoly& p, const Exponent& c) {
  // Group monomials into chains e0 + t c with e0 - c outside N^m.
  std::map<Exponent, std::map<long, mpz_class>> chains;
  for (const auto& [e, coeff] : p) {
    long t = std::numeric_limits<long>::max();
    for (std::size_t i = 0; i < e.size(); ++i)
      if (c[i] > 0) t = std::min(t, e[i] / c[i]);
    Exponent root = e;
    for (std::size_t i = 0; i < e.size(); ++i) root[i] -= t * c[i];
    chains[root][t] += coeff;
  }
  MultiPoly q;
  for (const auto& [root, entries] : chains) {
    mpz_class running = 0;
    long prev = entries.begin()->first;
    for (const auto& [t, coeff] : entries) {
      // Positions prev..t-1 carry the running sum.
      if (running != 0)
        for (long s = prev; s < t; ++s) {
          Exponent e = root;
          for (std::size_t i = 0; i < e.size(); ++i) e[i] += s * c[i];
          add_term(q, e, running);
        }
      running += coeff;
      prev = t;
    }
    if (running != 0) return std::nullopt;
  }
  return q;
}

std::vector<Exponent> multiset_minus(const std::vector<Exponent>& a, const std::vector<Exponent>& b) {
  std::vector<Exponent> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string monomial_to_string(const Exponent& e, long vars) {
  static const char* names[] = {"X", "Y", "Z"};
  std::string out;
  for (long i = 0; i < vars; ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += vars <= 3 ? names[i] : "X" + std::to_string(i + 1);
    if (e[i] != 1) out += "^" + std::to_string(e[i]);
  }
  return out;
}

}  // namespace

std::string multipoly_to_string(const MultiPoly& poly, long vars) {
  if (poly.empty()) return "0";
  std::string out;
  for (const auto& [e, c] : poly) {
    std::string mono = monomial_to_string(e, vars);
    mpz_class mag = abs(c);
    bool negative = c < 0;
    std::string body = mono.empty() ? mag.get_str() : (mag == 1 ? mono : mag.get_str() + "*" + mono);
    if (out.empty()) {
      out = (negative ? "-" : "") + body;
    } else {
      out += (negative ? " - " : " + ") + body;
    }
  }
  return out;
}

RationalGF::RationalGF(long vars) : vars_(vars) {}

RationalGF::RationalGF(long vars, MultiPoly num, std::vector<Exponent> den)
    : vars_(vars), num_(std::move(num)), den_(std::move(den)) {
  for (const auto& c : den_) {
    if (static_cast<long>(c.size()) != vars_)
      throw Error(ErrorCode::InvalidArgument, "denominator exponent has the wrong length");
    if (total_degree(c) == 0 || std::any_of(c.begin(), c.end(), [](long x) { return x < 0; }))
      throw Error(ErrorCode::InvalidArgument, "denominator exponents must be nonzero with entries >= 0");
  }
  for (auto it = num_.begin(); it != num_.end();) it = it->second == 0 ? num_.erase(it) : std::next(it);
  std::sort(den_.begin(), den_.end());
  reduce();
}

RationalGF RationalGF::lattice_piece(const LatticePiece& piece) {
  MultiPoly num;
  num.emplace(piece.base, 1);
  return RationalGF(static_cast<long>(piece.base.size()), std::move(num), piece.generators);
}

void RationalGF::reduce() {
  if (num_.empty()) {
    den_.clear();
    return;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < den_.size(); ++i) {
      if (auto q = divide_factor(num_, den_[i])) {
        num_ = std::move(*q);
        den_.erase(den_.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }
}

RationalGF operator+(const RationalGF& a, const RationalGF& b) {
  if (a.vars_ != b.vars_) throw Error(ErrorCode::InvalidArgument, "generating functions in different variables");
  std::vector<Exponent> common;
  std::set_union(a.den_.begin(), a.den_.end(), b.den_.begin(), b.den_.end(), std::back_inserter(common));
  MultiPoly num = times_factors(a.num_, multiset_minus(common, a.den_));
  for (const auto& [e, c] : times_factors(b.num_, multiset_minus(common, b.den_))) add_term(num, e, c);
  return RationalGF(a.vars_, std::move(num), std::move(common));
}

RationalGF operator*(const RationalGF& a, const RationalGF& b) {
  if (a.vars_ != b.vars_) throw Error(ErrorCode::InvalidArgument, "generating functions in different variables");
  MultiPoly num;
  for (const auto& [ea, ca] : a.num_)
    for (const auto& [eb, cb] : b.num_) add_term(num, vec_add(ea, eb), ca * cb);
  std::vector<Exponent> den = a.den_;
  den.insert(den.end(), b.den_.begin(), b.den_.end());
  return RationalGF(a.vars_, std::move(num), std::move(den));
}

RationalGF operator-(const RationalGF& a, const RationalGF& b) {
  MultiPoly neg = b.num_;
  for (auto& [e, c] : neg) c = -c;
  return a + RationalGF(b.vars_, std::move(neg), b.den_);
}

bool operator==(const RationalGF& a, const RationalGF& b) {
  if (a.vars_ != b.vars_) return false;
  std::vector<Exponent> shared;
  std::set_intersection(a.den_.begin(), a.den_.end(), b.den_.begin(), b.den_.end(), std::back_inserter(shared));
  return times_factors(a.num_, multiset_minus(b.den_, shared)) == times_factors(b.num_, multiset_minus(a.den_, shared));
}

MultiPoly RationalGF::expand(long d) const {
  MultiPoly out;
  for (const auto& [e, c] : num_)
    if (total_degree(e) <= d) add_term(out, e, c);
  for (const auto& c : den_) {
    const long step = total_degree(c);
    MultiPoly next;
    for (const auto& [e, coeff] : out) {
      Exponent cur = e;
      for (long deg = total_degree(e); deg <= d; deg += step) {
        add_term(next, cur, coeff);
        cur = vec_add(cur, c);
      }
    }
    out = std::move(next);
  }
  return out;
}

std::string RationalGF::to_string() const {
  std::string num = multipoly_to_string(num_, vars_);
  if (den_.empty()) return num;
  if (num_.size() > 1) num = "(" + num + ")";
  std::string den;
  for (const auto& c : den_) {
    if (!den.empty()) den += "*";
    den += "(1 - " + monomial_to_string(c, vars_) + ")";
  }
  if (den_.size() > 1) den = "(" + den + ")";
  return num + "/" + den;
}

namespace {

RationalGF sum_pieces(long vars, const std::vector<LatticePiece>& pieces) {
  std::map<std::vector<Exponent>, MultiPoly> groups;
  for (const auto& piece : pieces) {
    auto gens = piece.generators;
    std::sort(gens.begin(), gens.end());
    add_term(groups[gens], piece.base, 1);
  }
  // One common denominator and a single reduction at the end.
  std::vector<Exponent> common;
  for (const auto& [gens, num] : groups) {
    std::vector<Exponent> merged;
    std::set_union(common.begin(), common.end(), gens.begin(), gens.end(), std::back_inserter(merged));
    common = std::move(merged);
  }
  MultiPoly total;
  for (const auto& [gens, num] : groups)
    for (const auto& [e, c] : times_factors(num, multiset_minus(common, gens))) add_term(total, e, c);
  return RationalGF(vars, std::move(total), std::move(common));
}

}  // namespace

RationalGF genfun(const PresburgerSet& p) { return sum_pieces(p.m(), decompose(p)); }

RationalGF genfun_image(const PresburgerSet& p, const std::vector<std::vector<long>>& phi) {
  if (phi.empty()) throw Error(ErrorCode::InvalidArgument, "phi needs at least one coordinate map");
  for (const auto& row : phi) {
    if (static_cast<long>(row.size()) != p.m())
      throw Error(ErrorCode::InvalidArgument, "each map in phi needs " + std::to_string(p.m()) + " coefficients");
    if (std::any_of(row.begin(), row.end(), [](long x) { return x < 0; }))
      throw Error(ErrorCode::InvalidArgument, "phi must map N^m to N^r (coefficients >= 0)");
  }
  auto apply = [&](const Exponent& v) {
    Exponent out(phi.size(), 0);
    for (std::size_t r = 0; r < phi.size(); ++r)
      for (std::size_t i = 0; i < v.size(); ++i) out[r] += phi[r][i] * v[i];
    return out;
  };
  std::vector<LatticePiece> image;
  for (const auto& piece : decompose(p)) {
    LatticePiece mapped{apply(piece.base), {}};
    for (const auto& g : piece.generators) {
      Exponent pg = apply(g);
      if (total_degree(pg) == 0) {
        std::string base;
        for (long x : piece.base) base += (base.empty() ? "" : ",") + std::to_string(x);
        throw Error(ErrorCode::InfiniteFibers, "phi is constant along a ray of P through (" + base + ")");
      }
      mapped.generators.push_back(pg);
    }
    image.push_back(std::move(mapped));
  }
  return sum_pieces(static_cast<long>(phi.size()), image);
}

MultiPoly genfun_truncated(const PresburgerSet& p, long d) {
  if (p.m() > 3) throw Error(ErrorCode::DimensionUnsupported, "truncated enumeration supports m <= 3");
  MultiPoly out;
  if (d < 0) return out;
  std::vector<long> x(p.m(), 0);
  while (true) {
    if (p.member(x)) out.emplace(x, 1);
    long i = 0;
    for (; i < p.m(); ++i) {
      ++x[i];
      if (total_degree(x) <= d) break;
      x[i] = 0;
    }
    if (i == p.m()) break;
  }
  return out;
}

}  // namespace motint
