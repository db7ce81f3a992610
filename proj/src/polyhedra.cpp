#include "motint/polyhedra.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>

#include "motint/error.hpp"

namespace motint {

namespace {

long dot(const IntVec& a, const IntVec& b) {
  long s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool dominates(const IntVec& w, const IntVec& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (w[i] < v[i]) return false;
  return true;
}

IntVec primitive(IntVec v) {
  long g = 0;
  for (long x : v) g = std::gcd(g, std::labs(x));
  if (g > 1)
    for (long& x : v) x /= g;
  return v;
}

bool is_zero(const IntVec& v) {
  return std::all_of(v.begin(), v.end(), [](long x) { return x == 0; });
}

IntVec cross(const IntVec& a, const IntVec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

long det2(const IntVec& a, const IntVec& b) { return a[0] * b[1] - a[1] * b[0]; }

long det3(const IntVec& a, const IntVec& b, const IntVec& c) { return dot(a, cross(b, c)); }

// Adjugate-based solve: returns n with R * n = det(R) * x, R = columns r0 r1 r2.
IntVec adjugate_apply(const IntVec& r0, const IntVec& r1, const IntVec& r2, const IntVec& x) {
  return {det3(x, r1, r2), det3(r0, x, r2), det3(r0, r1, x)};
}

std::string vec_string(const IntVec& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out + "]";
}

// Extreme rays of {xi >= 0 : xi . (w - v) >= 0 for every vertex w}, or empty
// when the chamber is not full-dimensional.
std::vector<IntVec> chamber_rays(long k, const std::vector<IntVec>& vertices, const IntVec& v) {
  std::vector<IntVec> normals;
  for (long i = 0; i < k; ++i) {
    IntVec e(k, 0);
    e[i] = 1;
    normals.push_back(e);
  }
  for (const auto& w : vertices) {
    if (w == v) continue;
    IntVec n(k);
    for (long i = 0; i < k; ++i) n[i] = w[i] - v[i];
    normals.push_back(primitive(n));
  }
  auto feasible = [&](const IntVec& r) {
    return std::all_of(normals.begin(), normals.end(), [&](const IntVec& n) { return dot(n, r) >= 0; });
  };
  std::set<IntVec> rays;
  auto consider = [&](const IntVec& r) {
    if (is_zero(r)) return;
    IntVec p = primitive(r);
    if (feasible(p)) rays.insert(p);
    IntVec neg = p;
    for (long& x : neg) x = -x;
    if (feasible(neg)) rays.insert(neg);
  };
  if (k == 2) {
    for (const auto& n : normals) consider({n[1], -n[0]});
  } else {
    for (std::size_t a = 0; a < normals.size(); ++a)
      for (std::size_t b = a + 1; b < normals.size(); ++b) consider(cross(normals[a], normals[b]));
  }
  std::vector<IntVec> out(rays.begin(), rays.end());
  bool full = false;
  if (k == 2) {
    full = out.size() == 2 && det2(out[0], out[1]) != 0;
  } else {
    for (std::size_t a = 0; a < out.size() && !full; ++a)
      for (std::size_t b = a + 1; b < out.size() && !full; ++b)
        for (std::size_t c = b + 1; c < out.size() && !full; ++c)
          if (det3(out[a], out[b], out[c]) != 0) full = true;
  }
  if (!full) out.clear();
  return out;
}

// x*a + y*b = gcd(a, b)
long extended_gcd(long a, long b, long& x, long& y) {
  if (b == 0) {
    x = a >= 0 ? 1 : -1;
    y = 0;
    return std::labs(a);
  }
  long x1, y1;
  long g = extended_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Continued-fraction subdivision of the 2-cone (a, b), det(a, b) > 0.
void hirzebruch_jung(IntVec a, const IntVec& b, std::vector<std::pair<IntVec, IntVec>>& out) {
  while (true) {
    const long d = det2(a, b);
    if (d == 1) {
      out.emplace_back(a, b);
      return;
    }
    long x, y;
    extended_gcd(a[0], a[1], x, y);
    IntVec c{-y, x};
    const long t = -floor_div(det2(c, b), d);
    c = {c[0] + t * a[0], c[1] + t * a[1]};
    out.emplace_back(a, c);
    a = c;
  }
}

struct Fan {
  std::vector<IntVec> rays;
  std::map<IntVec, int> index;
  std::vector<std::vector<int>> cones;

  int ray(const IntVec& r) {
    auto [it, inserted] = index.try_emplace(r, static_cast<int>(rays.size()));
    if (inserted) rays.push_back(r);
    return it->second;
  }
};

// Chamber rays in cyclic order around their sum.
std::vector<IntVec> cyclic_order(std::vector<IntVec> rays) {
  IntVec s(3, 0);
  for (const auto& r : rays)
    for (int i = 0; i < 3; ++i) s[i] += r[i];
  const IntVec r0 = rays[0];
  auto half = [&](const IntVec& r) {
    if (r == r0) return 0;
    long o = det3(s, r0, r);
    if (o > 0) return 1;
    if (o == 0) return 2;
    return 3;
  };
  std::sort(rays.begin(), rays.end(), [&](const IntVec& p, const IntVec& q) {
    int hp = half(p), hq = half(q);
    if (hp != hq) return hp < hq;
    return det3(s, p, q) > 0;
  });
  return rays;
}

void stellar_refine(Fan& fan) {
  while (true) {
    auto bad = std::find_if(fan.cones.begin(), fan.cones.end(), [&](const std::vector<int>& c) {
      return std::labs(det3(fan.rays[c[0]], fan.rays[c[1]], fan.rays[c[2]])) > 1;
    });
    if (bad == fan.cones.end()) return;
    const IntVec r0 = fan.rays[(*bad)[0]], r1 = fan.rays[(*bad)[1]], r2 = fan.rays[(*bad)[2]];
    const long d = det3(r0, r1, r2);
    const long ad = std::labs(d);
    IntVec best;
    long best_weight = 0;
    for (int i = 0; i < 3; ++i) {
      for (long t = 1; t < ad; ++t) {
        IntVec x(3, 0);
        x[i] = t;
        IntVec n = adjugate_apply(r0, r1, r2, x);
        IntVec f(3);
        long weight = 0;
        for (int j = 0; j < 3; ++j) {
          long nj = d > 0 ? n[j] : -n[j];
          f[j] = ((nj % ad) + ad) % ad;
          weight += f[j];
        }
        if (weight == 0) continue;
        if (best.empty() || weight < best_weight) {
          best_weight = weight;
          best = {(f[0] * r0[0] + f[1] * r1[0] + f[2] * r2[0]) / ad, (f[0] * r0[1] + f[1] * r1[1] + f[2] * r2[1]) / ad,
                  (f[0] * r0[2] + f[1] * r1[2] + f[2] * r2[2]) / ad};
        }
      }
    }
    const IntVec w = primitive(best);
    const int wi = fan.ray(w);
    std::vector<std::vector<int>> next;
    for (const auto& cone : fan.cones) {
      const IntVec &a = fan.rays[cone[0]], &b = fan.rays[cone[1]], &c = fan.rays[cone[2]];
      const long dc = det3(a, b, c);
      IntVec n = adjugate_apply(a, b, c, w);
      bool inside = true;
      for (long& x : n) {
        if (dc < 0) x = -x;
        if (x < 0) inside = false;
      }
      if (!inside) {
        next.push_back(cone);
        continue;
      }
      for (int j = 0; j < 3; ++j) {
        if (n[j] == 0) continue;
        auto replaced = cone;
        replaced[j] = wi;
        next.push_back(replaced);
      }
    }
    fan.cones = std::move(next);
  }
}

Fan unimodular_fan(const NewtonPolyhedron& delta) {
  const long k = delta.k();
  Fan fan;
  if (k == 1) {
    fan.cones.push_back({fan.ray({1})});
    return fan;
  }
  for (const auto& v : delta.vertices()) {
    auto rays = chamber_rays(k, delta.vertices(), v);
    if (rays.empty()) continue;
    if (k == 2) {
      IntVec a = rays[0], b = rays[1];
      if (det2(a, b) < 0) std::swap(a, b);
      std::vector<std::pair<IntVec, IntVec>> pieces;
      hirzebruch_jung(a, b, pieces);
      for (const auto& [p, q] : pieces) fan.cones.push_back({fan.ray(p), fan.ray(q)});
    } else {
      auto ordered = cyclic_order(rays);
      for (std::size_t i = 1; i + 1 < ordered.size(); ++i)
        fan.cones.push_back({fan.ray(ordered[0]), fan.ray(ordered[i]), fan.ray(ordered[i + 1])});
    }
  }
  if (k == 3) stellar_refine(fan);
  return fan;
}

void require_supported(const NewtonPolyhedron& delta) {
  if (delta.k() > 3)
    throw Error(ErrorCode::DimensionUnsupported,
                "closed forms support k <= 3 (got k = " + std::to_string(delta.k()) + "); use z_truncated");
}

}  // namespace

NewtonPolyhedron::NewtonPolyhedron(long k, std::vector<IntVec> generators) : k_(k), generators_(std::move(generators)) {
  if (k_ < 1) throw Error(ErrorCode::InvalidArgument, "polyhedron dimension k must be >= 1");
  if (generators_.empty()) throw Error(ErrorCode::InvalidArgument, "polyhedron needs at least one generator");
  for (const auto& g : generators_) {
    if (static_cast<long>(g.size()) != k_)
      throw Error(ErrorCode::InvalidArgument, "generator " + vec_string(g) + " does not have length " + std::to_string(k_));
    for (long x : g)
      if (x < 1) throw Error(ErrorCode::InvalidArgument, "generator " + vec_string(g) + " has an entry < 1");
  }
  std::set<IntVec> unique(generators_.begin(), generators_.end());
  for (const auto& v : unique) {
    bool dominated = std::any_of(unique.begin(), unique.end(), [&](const IntVec& w) { return w != v && dominates(v, w); });
    if (!dominated) vertices_.push_back(v);
  }
}

std::string NewtonPolyhedron::to_string() const {
  std::string out = "{ k = " + std::to_string(k_) + ", generators = [";
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (i) out += ",";
    out += vec_string(generators_[i]);
  }
  return out + "] }";
}

long HalfOpenCone::value_at(const IntVec& coeffs) const { return dot(coeffs, linear_value); }

std::optional<IntVec> HalfOpenCone::coordinates(const IntVec& xi) const {
  const std::size_t k = xi.size(), e = rays.size();
  // Row-reduce [rays^T | xi] over Q.
  std::vector<std::vector<mpq_class>> m(k, std::vector<mpq_class>(e + 1));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < e; ++j) m[i][j] = rays[j][i];
    m[i][e] = xi[i];
  }
  std::size_t row = 0;
  std::vector<std::size_t> pivot_row(e);
  for (std::size_t col = 0; col < e; ++col) {
    std::size_t p = row;
    while (p < k && m[p][col] == 0) ++p;
    if (p == k) return std::nullopt;
    std::swap(m[p], m[row]);
    for (std::size_t i = 0; i < k; ++i) {
      if (i == row || m[i][col] == 0) continue;
      mpq_class f = m[i][col] / m[row][col];
      for (std::size_t j = col; j <= e; ++j) m[i][j] -= f * m[row][j];
    }
    pivot_row[col] = row++;
  }
  for (std::size_t i = row; i < k; ++i)
    if (m[i][e] != 0) return std::nullopt;
  IntVec c(e);
  for (std::size_t col = 0; col < e; ++col) {
    mpq_class v = m[pivot_row[col]][e] / m[pivot_row[col]][col];
    if (v.get_den() != 1 || v < 1) return std::nullopt;
    c[col] = v.get_num().get_si();
  }
  return c;
}

long support_eval(const NewtonPolyhedron& delta, const IntVec& xi) {
  if (static_cast<long>(xi.size()) != delta.k())
    throw Error(ErrorCode::InvalidArgument, "support_eval: vector length differs from k");
  for (long x : xi)
    if (x < 0) throw Error(ErrorCode::InvalidArgument, "support_eval: xi must be nonnegative");
  long best = dot(xi, delta.vertices().front());
  for (const auto& v : delta.vertices()) best = std::min(best, dot(xi, v));
  return best;
}

std::vector<HalfOpenCone> linearity_partition(const NewtonPolyhedron& delta) {
  require_supported(delta);
  Fan fan = unimodular_fan(delta);
  std::set<std::vector<int>> faces;
  for (const auto& cone : fan.cones) {
    const std::size_t e = cone.size();
    for (unsigned mask = 1; mask < (1u << e); ++mask) {
      std::vector<int> face;
      for (std::size_t j = 0; j < e; ++j)
        if (mask & (1u << j)) face.push_back(cone[j]);
      std::sort(face.begin(), face.end());
      faces.insert(face);
    }
  }
  std::vector<HalfOpenCone> out;
  for (const auto& face : faces) {
    IntVec sum(delta.k(), 0);
    for (int r : face)
      for (long i = 0; i < delta.k(); ++i) sum[i] += fan.rays[r][i];
    if (std::any_of(sum.begin(), sum.end(), [](long x) { return x <= 0; })) continue;
    HalfOpenCone cone;
    for (int r : face) {
      cone.rays.push_back(fan.rays[r]);
      cone.linear_value.push_back(support_eval(delta, fan.rays[r]));
    }
    const long best = support_eval(delta, sum);
    for (const auto& v : delta.vertices())
      if (dot(sum, v) == best) {
        cone.witness = v;
        break;
      }
    out.push_back(std::move(cone));
  }
  return out;
}

MotClass z_of_delta(const NewtonPolyhedron& delta) {
  require_supported(delta);
  const LaurentPoly scale = [&] {
    LaurentPoly p(1);
    for (long i = 0; i < delta.k(); ++i) p = p * LaurentPoly::power_minus_one(1);
    return p;
  }();
  MotClass total;
  for (const auto& cone : linearity_partition(delta))
    total += MotClass(scale, std::vector<long>(cone.linear_value.begin(), cone.linear_value.end()));
  return total;
}

CompletionExpansion z_truncated(const NewtonPolyhedron& delta, long m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "z_truncated: m must be >= 1");
  const long k = delta.k();
  const long bound = m + k;
  CompletionExpansion sum;
  sum.order = bound;
  IntVec xi(k, 1);
  // Odometer over xi in (N^x)^k with sum(xi) <= bound.
  while (true) {
    long l = support_eval(delta, xi);
    if (l <= bound) sum.coeffs[l] += 1;
    long i = 0;
    for (; i < k; ++i) {
      ++xi[i];
      long total = std::accumulate(xi.begin(), xi.end(), 0L);
      if (total <= bound) break;
      xi[i] = 1;
    }
    if (i == k) break;
  }
  CompletionExpansion scale;  // (L - 1)^k = sum_j C(k,j) (-1)^{k-j} L^j
  scale.order = bound;
  mpz_class binom = 1;
  for (long j = 0; j <= k; ++j) {
    mpz_class c = ((k - j) % 2 == 0) ? binom : mpz_class(-binom);
    scale.coeffs[-j] = c;
    binom = binom * (k - j) / (j + 1);
  }
  return (sum * scale).truncated(m);
}

namespace {

class LiteralParser {
 public:
  explicit LiteralParser(std::string_view text) : text_(text) {}

  NewtonPolyhedron parse() {
    long k = 0;
    bool have_k = false, have_gens = false;
    std::vector<IntVec> gens;
    expect('{');
    while (true) {
      std::string key = identifier();
      expect('=');
      if (key == "k") {
        k = integer();
        have_k = true;
      } else if (key == "generators") {
        gens = matrix();
        have_gens = true;
      } else {
        fail("unknown polyhedron key '" + key + "'");
      }
      skip();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect('}');
      break;
    }
    skip();
    if (pos_ != text_.size()) fail("trailing input after polyhedron literal");
    if (!have_k || !have_gens) fail("polyhedron literal needs both k and generators");
    try {
      return NewtonPolyhedron(k, std::move(gens));
    } catch (const Error& e) {
      throw Error(ErrorCode::ValidationError, e.what());
    }
  }

 private:
  [[noreturn]] void fail(const std::string& message) { throw ParseError(0, pos_ + 1, message); }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void expect(char c) {
    skip();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string identifier() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    if (start == pos_) fail("expected a key");
    return std::string(text_.substr(start, pos_ - start));
  }
  long integer() {
    skip();
    std::size_t start = pos_;
    if (peek() == '-' || peek() == '+') ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start || !std::isdigit(static_cast<unsigned char>(text_[pos_ - 1]))) fail("expected an integer");
    return std::stol(std::string(text_.substr(start, pos_ - start)));
  }
  IntVec row() {
    IntVec out;
    expect('[');
    skip();
    if (peek() == ']') {
      ++pos_;
      return out;
    }
    while (true) {
      out.push_back(integer());
      skip();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect(']');
      return out;
    }
  }
  std::vector<IntVec> matrix() {
    std::vector<IntVec> out;
    expect('[');
    skip();
    if (peek() == ']') {
      ++pos_;
      return out;
    }
    while (true) {
      out.push_back(row());
      skip();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect(']');
      return out;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

NewtonPolyhedron parse_polyhedron(std::string_view text) { return LiteralParser(text).parse(); }

}  // namespace motint
