#include "motint/jets.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <thread>

#include "motint/error.hpp"
#include "motint/expr.hpp"
#include "motint/sexpr.hpp"

namespace motint {

// ---------------------------------------------------------------------------
// Polynomials

namespace {

void add_term(IntPoly& p, const std::vector<long>& e, long c) {
  if (c == 0) return;
  auto [it, inserted] = p.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
  IntPoly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<long> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      add_term(out, e, ca * cb);
    }
  return out;
}

IntPoly poly_add(IntPoly a, const IntPoly& b, long sign) {
  for (const auto& [e, c] : b) add_term(a, e, sign * c);
  return a;
}

IntPoly evaluate_poly(const expr::Node& node, const std::vector<std::string>& vars) {
  using expr::Kind;
  const std::size_t n = vars.size();
  switch (node.kind) {
    case Kind::Number: {
      if (!node.number.fits_slong_p()) expr::fail(node, "coefficient too large");
      IntPoly p;
      add_term(p, std::vector<long>(n, 0), node.number.get_si());
      return p;
    }
    case Kind::Symbol: {
      auto it = std::find(vars.begin(), vars.end(), node.symbol);
      if (it == vars.end()) expr::fail(node, "unknown variable '" + node.symbol + "'");
      std::vector<long> e(n, 0);
      e[static_cast<std::size_t>(it - vars.begin())] = 1;
      return IntPoly{{e, 1}};
    }
    case Kind::Add:
      return poly_add(evaluate_poly(*node.children[0], vars), evaluate_poly(*node.children[1], vars), 1);
    case Kind::Sub:
      return poly_add(evaluate_poly(*node.children[0], vars), evaluate_poly(*node.children[1], vars), -1);
    case Kind::Neg:
      return poly_add(IntPoly{}, evaluate_poly(*node.children[0], vars), -1);
    case Kind::Mul:
      return poly_mul(evaluate_poly(*node.children[0], vars), evaluate_poly(*node.children[1], vars));
    case Kind::Pow: {
      if (node.exponent < 0) expr::fail(node, "negative exponents are not allowed in polynomials");
      IntPoly base = evaluate_poly(*node.children[0], vars);
      IntPoly out{{std::vector<long>(n, 0), 1}};
      for (long i = 0; i < node.exponent; ++i) out = poly_mul(out, base);
      return out;
    }
    case Kind::Div:
      expr::fail(node, "division is not allowed in polynomials");
  }
  expr::fail(node, "unsupported expression");
}

}  // namespace

IntPoly parse_int_poly(std::string_view text, const std::vector<std::string>& vars) {
  return evaluate_poly(*expr::parse(text), vars);
}

std::string int_poly_to_string(const IntPoly& poly, const std::vector<std::string>& vars) {
  if (poly.empty()) return "0";
  std::string out;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars[i];
      if (e[i] != 1) mono += "^" + std::to_string(e[i]);
    }
    long mag = std::labs(c);
    std::string body = mono.empty() ? std::to_string(mag) : (mag == 1 ? mono : std::to_string(mag) + "*" + mono);
    if (out.empty()) {
      out = (c < 0 ? "-" : "") + body;
    } else {
      out += (c < 0 ? " - " : " + ") + body;
    }
  }
  return out;
}

void JetVariety::validate() const {
  if (vars.empty()) throw Error(ErrorCode::InvalidArgument, "a variety needs at least one ambient variable");
  if (d < 0) throw Error(ErrorCode::InvalidArgument, "declared dimension must be >= 0");
  for (const auto& p : polys)
    for (const auto& [e, c] : p)
      if (e.size() != vars.size()) throw Error(ErrorCode::InvalidArgument, "polynomial arity differs from the variable list");
}

JetVariety make_variety(std::vector<std::string> vars, const std::vector<std::string>& polys, long d) {
  JetVariety x;
  x.vars = std::move(vars);
  for (const auto& text : polys) x.polys.push_back(parse_int_poly(text, x.vars));
  x.d = d;
  x.validate();
  return x;
}

std::uint64_t default_budget() {
  if (const char* env = std::getenv("MOTINT_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 100'000'000ULL;
}

// ---------------------------------------------------------------------------
// Enumeration core

namespace {

long mod(long a, long q) {
  a %= q;
  return a < 0 ? a + q : a;
}

bool is_prime(long q) {
  if (q < 2) return false;
  for (long p = 2; p * p <= q; ++p)
    if (q % p == 0) return false;
  return true;
}

void require_prime(long q) {
  if (!is_prime(q) || q > 97) throw Error(ErrorCode::InvalidArgument, "q must be a prime <= 97 (got " + std::to_string(q) + ")");
}

struct Monomial {
  long coeff;
  std::vector<std::pair<int, int>> factors;  // (variable, exponent >= 1)
};

struct Compiled {
  long q;
  int nvars;
  std::vector<int> maxdeg;
  std::vector<std::vector<Monomial>> polys;

  Compiled(const JetVariety& x, long q_) : q(q_), nvars(static_cast<int>(x.vars.size())), maxdeg(nvars, 1) {
    for (const auto& p : x.polys) {
      std::vector<Monomial> monos;
      for (const auto& [e, c] : p) {
        long cm = mod(c, q);
        if (cm == 0) continue;
        Monomial m{cm, {}};
        for (int v = 0; v < nvars; ++v)
          if (e[v] > 0) {
            m.factors.emplace_back(v, static_cast<int>(e[v]));
            maxdeg[v] = std::max(maxdeg[v], static_cast<int>(e[v]));
          }
        monos.push_back(std::move(m));
      }
      polys.push_back(std::move(monos));
    }
  }

  long power(long base, int e) const {
    long r = 1;
    for (int i = 0; i < e; ++i) r = r * base % q;
    return r;
  }

  // d f / d x_v at the point x0.
  std::vector<std::vector<long>> jacobian(const std::vector<long>& x0) const {
    std::vector<std::vector<long>> j(polys.size(), std::vector<long>(nvars, 0));
    for (std::size_t f = 0; f < polys.size(); ++f)
      for (const auto& m : polys[f])
        for (std::size_t s = 0; s < m.factors.size(); ++s) {
          long term = m.coeff * m.factors[s].second % q;
          for (std::size_t r = 0; r < m.factors.size(); ++r) {
            const auto [v, e] = m.factors[r];
            term = term * power(x0[v], r == s ? e - 1 : e) % q;
          }
          long& slot = j[f][m.factors[s].first];
          slot = (slot + term) % q;
        }
    return j;
  }
};

long inverse_mod(long a, long q) {
  long r = 1, b = a, e = q - 2;
  while (e > 0) {
    if (e & 1) r = r * b % q;
    b = b * b % q;
    e >>= 1;
  }
  return r;
}

// J x = b over F_q with J fixed; RREF computed once.
class LinearSystem {
 public:
  LinearSystem() = default;
  LinearSystem(std::vector<std::vector<long>> j, int nvars, long q) : q_(q), nvars_(nvars) {
    const int rows = static_cast<int>(j.size());
    transform_.assign(rows, std::vector<long>(rows, 0));
    for (int r = 0; r < rows; ++r) transform_[r][r] = 1;
    rank_ = 0;
    std::vector<bool> is_pivot(nvars, false);
    for (int col = 0; col < nvars && rank_ < rows; ++col) {
      int p = rank_;
      while (p < rows && j[p][col] == 0) ++p;
      if (p == rows) continue;
      std::swap(j[p], j[rank_]);
      std::swap(transform_[p], transform_[rank_]);
      long inv = inverse_mod(j[rank_][col], q);
      for (auto& x : j[rank_]) x = x * inv % q;
      for (auto& x : transform_[rank_]) x = x * inv % q;
      for (int r = 0; r < rows; ++r) {
        if (r == rank_ || j[r][col] == 0) continue;
        long f = j[r][col];
        for (int c = 0; c < nvars; ++c) j[r][c] = mod(j[r][c] - f * j[rank_][c], q);
        for (int c = 0; c < rows; ++c) transform_[r][c] = mod(transform_[r][c] - f * transform_[rank_][c], q);
      }
      pivot_col_.push_back(col);
      is_pivot[col] = true;
      ++rank_;
    }
    for (int col = 0; col < nvars; ++col) {
      if (is_pivot[col]) continue;
      std::vector<long> k(nvars, 0);
      k[col] = 1;
      for (int r = 0; r < rank_; ++r) k[pivot_col_[r]] = mod(-j[r][col], q);
      kernel_.push_back(std::move(k));
    }
  }

  bool particular(const std::vector<long>& b, std::vector<long>& x) const {
    const int rows = static_cast<int>(transform_.size());
    std::fill(x.begin(), x.end(), 0);
    for (int r = 0; r < rows; ++r) {
      long v = 0;
      for (int c = 0; c < rows; ++c) v += transform_[r][c] * b[c];
      v %= q_;
      if (r < rank_) {
        x[pivot_col_[r]] = v;
      } else if (v != 0) {
        return false;
      }
    }
    return true;
  }

  const std::vector<std::vector<long>>& kernel() const { return kernel_; }

 private:
  long q_ = 2;
  int nvars_ = 0;
  int rank_ = 0;
  std::vector<std::vector<long>> transform_;
  std::vector<int> pivot_col_;
  std::vector<std::vector<long>> kernel_;
};

struct SharedBudget {
  std::uint64_t limit;
  std::atomic<std::uint64_t> used{0};
  std::atomic<bool> abort{false};
};

using Visitor = std::function<void(int worker, const std::vector<std::vector<long>>& x, long depth)>;

class Search {
 public:
  Search(const Compiled& c, long n, long cap, SharedBudget& budget, int worker, const Visitor& visit)
      : c_(c), n_(n), cap_(cap), budget_(budget), worker_(worker), visit_(visit) {
    const int levels = static_cast<int>(cap + 1);
    x_.assign(c.nvars, std::vector<long>(levels, 0));
    pw_.resize(c.nvars);
    for (int v = 0; v < c.nvars; ++v) {
      pw_[v].assign(c.maxdeg[v] + 1, std::vector<long>(levels, 0));
      pw_[v][0][0] = 1;
    }
    partial_.resize(c.polys.size());
    for (std::size_t f = 0; f < c.polys.size(); ++f) {
      partial_[f].resize(c.polys[f].size());
      for (std::size_t m = 0; m < c.polys[f].size(); ++m) {
        std::size_t r = c.polys[f][m].factors.size();
        partial_[f][m].assign(r > 1 ? r : 1, std::vector<long>(levels, 0));
      }
    }
    rhs_.assign(c.polys.size(), 0);
    particular_.assign(c.nvars, 0);
  }

  void run_root(const std::vector<long>& x0) {
    for (int v = 0; v < c_.nvars; ++v) x_[v][0] = x0[v];
    update(0);
    system_ = LinearSystem(c_.jacobian(x0), c_.nvars, c_.q);
    descend(0);
  }

  void flush() {
    budget_.used.fetch_add(local_, std::memory_order_relaxed);
    local_ = 0;
  }

 private:
  void tick() {
    if (++local_ < 1024) return;
    std::uint64_t total = budget_.used.fetch_add(local_, std::memory_order_relaxed) + local_;
    local_ = 0;
    if (budget_.abort.load(std::memory_order_relaxed)) throw Error(ErrorCode::BudgetExceeded, "aborted");
    if (total > budget_.limit) {
      budget_.abort = true;
      throw Error(ErrorCode::BudgetExceeded,
                  "enumeration visited more than " + std::to_string(budget_.limit) + " nodes (raise --budget)");
    }
  }

  void update(int k) {
    const long q = c_.q;
    for (int v = 0; v < c_.nvars; ++v) {
      auto& pv = pw_[v];
      pv[0][k] = k == 0 ? 1 : 0;
      for (std::size_t p = 1; p < pv.size(); ++p) {
        long s = 0;
        for (int i = 0; i <= k; ++i) s += x_[v][i] * pv[p - 1][k - i];
        pv[p][k] = s % q;
      }
    }
    for (std::size_t f = 0; f < c_.polys.size(); ++f)
      for (std::size_t m = 0; m < c_.polys[f].size(); ++m) {
        const auto& factors = c_.polys[f][m].factors;
        auto& part = partial_[f][m];
        for (std::size_t s = 1; s < factors.size(); ++s) {
          const auto& left = s == 1 ? pw_[factors[0].first][factors[0].second] : part[s - 1];
          const auto& right = pw_[factors[s].first][factors[s].second];
          long acc = 0;
          for (int i = 0; i <= k; ++i) acc += left[i] * right[k - i];
          part[s][k] = acc % q;
        }
      }
  }

  long poly_coeff(std::size_t f, int k) const {
    long s = 0;
    for (std::size_t m = 0; m < c_.polys[f].size(); ++m) {
      const auto& mono = c_.polys[f][m];
      long v;
      if (mono.factors.empty()) {
        v = k == 0 ? 1 : 0;
      } else if (mono.factors.size() == 1) {
        v = pw_[mono.factors[0].first][mono.factors[0].second][k];
      } else {
        v = partial_[f][m][mono.factors.size() - 1][k];
      }
      s += mono.coeff * v;
    }
    return s % c_.q;
  }

  // Calls f() for each lift to level k; stops when f returns true.
  template <class F>
  void children(int k, F&& f) {
    for (int v = 0; v < c_.nvars; ++v) x_[v][k] = 0;
    update(k);
    for (std::size_t p = 0; p < c_.polys.size(); ++p) rhs_[p] = mod(-poly_coeff(p, k), c_.q);
    std::vector<long> base(c_.nvars);
    if (!system_.particular(rhs_, base)) return;
    const auto& kernel = system_.kernel();
    std::vector<long> digits(kernel.size(), 0);
    while (true) {
      for (int v = 0; v < c_.nvars; ++v) {
        long val = base[v];
        for (std::size_t b = 0; b < kernel.size(); ++b) val += digits[b] * kernel[b][v];
        x_[v][k] = val % c_.q;
      }
      update(k);
      tick();
      if (f()) return;
      std::size_t b = 0;
      for (; b < digits.size(); ++b) {
        if (++digits[b] < c_.q) break;
        digits[b] = 0;
      }
      if (b == digits.size()) return;
    }
  }

  void descend(int k) {
    if (k == n_) {
      long depth = explore(k);
      visit_(worker_, x_, depth);
      return;
    }
    children(k + 1, [&] {
      descend(k + 1);
      return false;
    });
  }

  long explore(int k) {
    if (k == cap_) return cap_;
    long best = k;
    children(k + 1, [&] {
      best = std::max(best, explore(k + 1));
      return best == cap_;
    });
    return best;
  }

  const Compiled& c_;
  long n_, cap_;
  SharedBudget& budget_;
  int worker_;
  const Visitor& visit_;
  std::uint64_t local_ = 0;
  std::vector<std::vector<long>> x_;
  std::vector<std::vector<std::vector<long>>> pw_;
  std::vector<std::vector<std::vector<std::vector<long>>>> partial_;
  std::vector<long> rhs_, particular_;
  LinearSystem system_;
};

int worker_count(const JetOptions& opts, std::size_t roots) {
  int t = std::max(1, opts.threads);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(t), std::max<std::size_t>(roots, 1)));
}

// Visits every level-n jet with the deepest level (<= cap) it lifts to.
// Returns the number of workers used; visitor calls carry the worker index.
int run_search(const JetVariety& x, long n, long q, long cap, const JetOptions& opts, const Visitor& visit,
               const std::function<void(int)>& prepare) {
  x.validate();
  require_prime(q);
  if (n < 0 || cap < n) throw Error(ErrorCode::InvalidArgument, "levels must satisfy 0 <= n <= n + j");
  const double estimate = estimate_nodes(x, n, q, cap - n);
  if (estimate > static_cast<double>(opts.budget))
    throw Error(ErrorCode::BudgetExceeded, "estimated " + std::to_string(static_cast<unsigned long long>(estimate)) +
                                               " node expansions exceed the budget of " + std::to_string(opts.budget));
  Compiled compiled(x, q);
  SharedBudget budget{opts.budget};

  // Level 0: all of F_q^N, filtered.
  std::vector<std::vector<long>> roots;
  std::vector<long> x0(compiled.nvars, 0);
  while (true) {
    bool ok = true;
    for (const auto& monos : compiled.polys) {
      long s = 0;
      for (const auto& m : monos) {
        long term = m.coeff;
        for (const auto& [v, e] : m.factors) term = term * compiled.power(x0[v], e) % q;
        s += term;
      }
      if (s % q != 0) {
        ok = false;
        break;
      }
    }
    if (ok) roots.push_back(x0);
    budget.used.fetch_add(1, std::memory_order_relaxed);
    int v = 0;
    for (; v < compiled.nvars; ++v) {
      if (++x0[v] < q) break;
      x0[v] = 0;
    }
    if (v == compiled.nvars) break;
  }

  const int workers = worker_count(opts, roots.size());
  prepare(workers);
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](int w) {
    try {
      Search search(compiled, n, cap, budget, w, visit);
      for (std::size_t r = static_cast<std::size_t>(w); r < roots.size(); r += static_cast<std::size_t>(workers))
        search.run_root(roots[r]);
      search.flush();
      if (budget.used.load() > budget.limit)
        throw Error(ErrorCode::BudgetExceeded,
                    "enumeration visited more than " + std::to_string(budget.limit) + " nodes (raise --budget)");
    } catch (...) {
      budget.abort = true;
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  // Report the first real error in worker order (not a secondary abort).
  for (auto& e : errors) {
    if (!e) continue;
    try {
      std::rethrow_exception(e);
    } catch (const Error& err) {
      if (std::string(err.what()) != "aborted") throw;
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return workers;
}

}  // namespace

double estimate_nodes(const JetVariety& x, long n, long q, long tail) {
  const long nvars = static_cast<long>(x.vars.size());
  const long d_eff = std::max({1L, x.d, nvars - static_cast<long>(x.polys.size())});
  const double qd = std::pow(static_cast<double>(q), static_cast<double>(d_eff));
  double total = std::pow(static_cast<double>(q), static_cast<double>(nvars));
  double level = 1;
  for (long k = 0; k <= n; ++k) {
    level *= qd;
    total += level;
  }
  return total + static_cast<double>(tail) * level;
}

std::vector<std::uint64_t> image_profile(const JetVariety& x, long n, long q, long j_max, const JetOptions& opts) {
  if (j_max < 0) throw Error(ErrorCode::InvalidArgument, "j_max must be >= 0");
  std::vector<std::vector<std::uint64_t>> hist;
  Visitor visit = [&](int w, const std::vector<std::vector<long>>&, long depth) { ++hist[w][depth - n]; };
  run_search(x, n, q, n + j_max, opts, visit, [&](int workers) {
    hist.assign(workers, std::vector<std::uint64_t>(j_max + 1, 0));
  });
  std::vector<std::uint64_t> merged(j_max + 1, 0);
  for (const auto& h : hist)
    for (long j = 0; j <= j_max; ++j) merged[j] += h[j];
  std::vector<std::uint64_t> profile(j_max + 1, 0);
  std::uint64_t running = 0;
  for (long j = j_max; j >= 0; --j) {
    running += merged[j];
    profile[j] = running;
  }
  return profile;
}

std::uint64_t enumerate_jets(const JetVariety& x, long n, long q, const JetOptions& opts) {
  return image_profile(x, n, q, 0, opts)[0];
}

std::uint64_t image_count(const JetVariety& x, long n, long j, long q, const JetOptions& opts) {
  return image_profile(x, n, q, j, opts)[j];
}

StabilizedCount stabilize(const std::vector<std::uint64_t>& profile) {
  StabilizedCount out;
  out.profile = profile;
  const long j_max = static_cast<long>(profile.size()) - 1;
  for (long j = 0; j + 2 <= j_max; ++j) {
    if (profile[j] == profile[j + 1] && profile[j + 1] == profile[j + 2]) {
      out.count = profile[j];
      out.j_star = j;
      out.stable = true;
      return out;
    }
  }
  out.count = profile.back();
  out.j_star = j_max;
  out.stable = false;
  return out;
}

StabilizedCount stabilized_count(const JetVariety& x, long n, long q, long j_max, const JetOptions& opts) {
  return stabilize(image_profile(x, n, q, j_max, opts));
}

long greenberg_estimate(const JetVariety& x, long n, long q, long j_max, const JetOptions& opts) {
  auto s = stabilized_count(x, n, q, j_max, opts);
  if (!s.stable) {
    std::string counts;
    for (auto c : s.profile) counts += (counts.empty() ? "" : ", ") + std::to_string(c);
    throw Error(ErrorCode::Unstable, "image counts did not stabilize within j_max = " + std::to_string(j_max) +
                                         " at n = " + std::to_string(n) + " (counts " + counts + ")");
  }
  return n + s.j_star;
}

std::vector<PoincareRow> poincare_table(const JetVariety& x, long q, long n_max, long j_max, const JetOptions& opts) {
  std::vector<PoincareRow> rows;
  for (long n = 0; n <= n_max; ++n) {
    PoincareRow row;
    row.n = n;
    try {
      auto s = stabilized_count(x, n, q, j_max, opts);
      row.count = s.count;
      row.j_star = s.j_star;
      row.stable = s.stable;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BudgetExceeded) throw;
      row.error = std::string(error_name(e.code())) + ": " + e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

OesterleReport oesterle_sequence(const JetVariety& x, long q, long n_max, long j_max, const JetOptions& opts) {
  OesterleReport report;
  for (const auto& row : poincare_table(x, q, n_max, j_max, opts)) {
    if (row.error) throw Error(ErrorCode::BudgetExceeded, *row.error);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>((row.n + 1) * x.d));
    mpq_class ratio(mpz_class(std::to_string(row.count)), scale);
    ratio.canonicalize();
    if (!report.ratios.empty()) report.differences.push_back(ratio - report.ratios.back());
    report.ratios.push_back(ratio);
    report.stable.push_back(row.stable);
  }
  const auto& r = report.ratios;
  const std::size_t k = r.size();
  if (k >= 3 && r[k - 1] < r[k - 2] && r[k - 2] < r[k - 3] && r[k - 1] * 2 < r[0]) report.suspicious = true;
  return report;
}

// ---------------------------------------------------------------------------
// Semi-algebraic conditions

long ParamForm::eval(const std::vector<long>& params) const {
  long v = constant;
  for (std::size_t i = 0; i < coeffs.size(); ++i) v += coeffs[i] * params[i];
  return v;
}

long SemiAlgCondition::arity() const {
  long a = static_cast<long>(offset.coeffs.size());
  for (const auto& c : children) a = std::max(a, c.arity());
  return a;
}

namespace {

ParamForm evaluate_param_form(const expr::Node& node) {
  using expr::Kind;
  auto is_const = [](const ParamForm& f) {
    return std::all_of(f.coeffs.begin(), f.coeffs.end(), [](long c) { return c == 0; });
  };
  auto combine = [](ParamForm a, const ParamForm& b, long sign) {
    if (a.coeffs.size() < b.coeffs.size()) a.coeffs.resize(b.coeffs.size(), 0);
    for (std::size_t i = 0; i < b.coeffs.size(); ++i) a.coeffs[i] += sign * b.coeffs[i];
    a.constant += sign * b.constant;
    return a;
  };
  auto scale = [](ParamForm a, long c) {
    for (auto& x : a.coeffs) x *= c;
    a.constant *= c;
    return a;
  };
  switch (node.kind) {
    case Kind::Number:
      if (!node.number.fits_slong_p()) expr::fail(node, "constant too large");
      return ParamForm{{}, node.number.get_si()};
    case Kind::Symbol: {
      const std::string& s = node.symbol;
      if (s.size() >= 2 && s[0] == 'l' && std::all_of(s.begin() + 1, s.end(), ::isdigit)) {
        long idx = std::stol(s.substr(1));
        if (idx >= 1 && idx <= 64) {
          ParamForm f;
          f.coeffs.assign(idx, 0);
          f.coeffs[idx - 1] = 1;
          return f;
        }
      }
      expr::fail(node, "unknown parameter '" + s + "' (expected l1, l2, ...)");
    }
    case Kind::Add:
      return combine(evaluate_param_form(*node.children[0]), evaluate_param_form(*node.children[1]), 1);
    case Kind::Sub:
      return combine(evaluate_param_form(*node.children[0]), evaluate_param_form(*node.children[1]), -1);
    case Kind::Neg:
      return scale(evaluate_param_form(*node.children[0]), -1);
    case Kind::Mul: {
      ParamForm a = evaluate_param_form(*node.children[0]), b = evaluate_param_form(*node.children[1]);
      if (is_const(b)) return scale(a, b.constant);
      if (is_const(a)) return scale(b, a.constant);
      expr::fail(node, "parameter expressions must be linear");
    }
    case Kind::Pow:
    case Kind::Div:
      expr::fail(node, "parameter expressions must be linear");
  }
  expr::fail(node, "unsupported expression");
}

class SemiAlgParser {
 public:
  explicit SemiAlgParser(const std::vector<std::string>& vars) : vars_(vars) {}

  SemiAlgCondition parse(const sexpr::Value& v) {
    using Kind = SemiAlgCondition::Kind;
    SemiAlgCondition c;
    if (!v.is_list) {
      if (v.atom == "true") return c;
      if (v.atom == "false") {
        c.kind = Kind::False;
        return c;
      }
      fail(v, "expected a condition, got '" + v.atom + "'");
    }
    if (v.items.empty() || v.items[0].is_list) fail(v, "expected an operator after '('");
    const std::string& op = v.items[0].atom;
    const std::size_t argc = v.items.size() - 1;
    if (op == "and" || op == "or") {
      c.kind = op == "and" ? Kind::And : Kind::Or;
      for (std::size_t i = 1; i < v.items.size(); ++i) c.children.push_back(parse(v.items[i]));
      return c;
    }
    if (op == "not") {
      if (argc != 1) fail(v, "not takes exactly one condition");
      c.kind = Kind::Not;
      c.children.push_back(parse(v.items[1]));
      return c;
    }
    if (op == "ord") {
      if (argc != 3 && argc != 4) fail(v, "ord takes a comparison, one or two polynomials and an offset");
      c.kind = Kind::Ord;
      const std::string& cmp = atom(v.items[1]);
      if (cmp == ">=") {
        c.cmp = SemiAlgCondition::Cmp::Ge;
      } else if (cmp == ">") {
        c.cmp = SemiAlgCondition::Cmp::Gt;
      } else if (cmp == "<=") {
        c.cmp = SemiAlgCondition::Cmp::Le;
      } else if (cmp == "<") {
        c.cmp = SemiAlgCondition::Cmp::Lt;
      } else if (cmp == "=") {
        c.cmp = SemiAlgCondition::Cmp::Eq;
      } else {
        fail(v.items[1], "unknown comparison '" + cmp + "'");
      }
      for (std::size_t i = 2; i + 1 < v.items.size(); ++i) c.polys.push_back(poly(v.items[i], vars_));
      c.offset = param(v.items.back());
      return c;
    }
    if (op == "ordmod") {
      if (argc != 3) fail(v, "ordmod takes a polynomial, a modulus and a residue");
      c.kind = Kind::OrdMod;
      c.polys.push_back(poly(v.items[1], vars_));
      ParamForm d = param(v.items[2]);
      if (!d.coeffs.empty() || d.constant < 1) fail(v.items[2], "modulus must be an integer >= 1");
      c.modulus = d.constant;
      c.offset = param(v.items[3]);
      return c;
    }
    if (op == "ac") {
      if (argc < 2) fail(v, "ac takes a relation and at least one polynomial");
      c.kind = Kind::Ac;
      std::vector<std::string> acs;
      for (std::size_t i = 2; i < v.items.size(); ++i) {
        c.polys.push_back(poly(v.items[i], vars_));
        acs.push_back("a" + std::to_string(i - 1));
      }
      c.relation = poly(v.items[1], acs);
      return c;
    }
    fail(v.items[0], "unknown condition operator '" + op + "'");
  }

 private:
  [[noreturn]] void fail(const sexpr::Value& v, const std::string& message) { throw ParseError(0, v.column, message); }

  const std::string& atom(const sexpr::Value& v) {
    if (v.is_list) fail(v, "expected an atom");
    return v.atom;
  }

  IntPoly poly(const sexpr::Value& v, const std::vector<std::string>& vars) {
    try {
      return parse_int_poly(atom(v), vars);
    } catch (const ParseError& e) {
      throw ParseError(0, v.column + (v.quoted ? 1 : 0) + e.column() - 1, e.detail());
    }
  }

  ParamForm param(const sexpr::Value& v) {
    try {
      return evaluate_param_form(*expr::parse(atom(v)));
    } catch (const ParseError& e) {
      throw ParseError(0, v.column + (v.quoted ? 1 : 0) + e.column() - 1, e.detail());
    }
  }

  const std::vector<std::string>& vars_;
};

constexpr long kInf = std::numeric_limits<long>::max() / 4;

struct Interval {
  long lo, hi;  // hi == kInf stands for +infinity
};

std::vector<long> series_of(const IntPoly& f, const JetPoint& p) {
  const long len = p.n + 1, q = p.q;
  std::vector<long> total(len, 0);
  for (const auto& [e, c] : f) {
    std::vector<long> term(len, 0);
    term[0] = mod(c, q);
    for (std::size_t v = 0; v < e.size(); ++v)
      for (long k = 0; k < e[v]; ++k) {
        std::vector<long> next(len, 0);
        for (long a = 0; a < len; ++a) {
          if (term[a] == 0) continue;
          for (long b = 0; a + b < len; ++b) next[a + b] = (next[a + b] + term[a] * p.coords[v][b]) % q;
        }
        term = std::move(next);
      }
    for (long k = 0; k < len; ++k) total[k] = (total[k] + term[k]) % q;
  }
  return total;
}

// ord and ac of f on the jet; ord unknown means >= n+1.
void ord_ac(const IntPoly& f, const JetPoint& p, Interval& ord, std::optional<long>& ac) {
  auto s = series_of(f, p);
  for (long k = 0; k <= p.n; ++k)
    if (s[k] != 0) {
      ord = {k, k};
      ac = s[k];
      return;
    }
  ord = {p.n + 1, kInf};
  ac.reset();
}

Truth compare(const Interval& a, SemiAlgCondition::Cmp cmp, const Interval& b) {
  using Cmp = SemiAlgCondition::Cmp;
  auto decide = [](bool always, bool never) { return always ? Truth::True : (never ? Truth::False : Truth::Unknown); };
  switch (cmp) {
    case Cmp::Ge:
      return decide(a.lo >= b.hi, a.hi < b.lo);
    case Cmp::Gt:
      return decide(a.lo > b.hi && b.hi != kInf, a.hi <= b.lo && a.hi != kInf);
    case Cmp::Le:
      return decide(a.hi <= b.lo, a.lo > b.hi);
    case Cmp::Lt:
      return decide(a.hi < b.lo, a.lo >= b.hi && b.hi != kInf);
    case Cmp::Eq: {
      bool always = a.lo == a.hi && b.lo == b.hi && a.lo == b.lo;
      bool never = a.hi < b.lo || b.hi < a.lo;
      return decide(always, never);
    }
  }
  return Truth::Unknown;
}

long eval_mod_poly(const IntPoly& h, const std::vector<long>& values, long q) {
  long s = 0;
  for (const auto& [e, c] : h) {
    long term = mod(c, q);
    for (std::size_t i = 0; i < e.size(); ++i)
      for (long k = 0; k < e[i]; ++k) term = term * values[i] % q;
    s += term;
  }
  return s % q;
}

}  // namespace

SemiAlgCondition parse_semialg(std::string_view text, const std::vector<std::string>& vars) {
  return SemiAlgParser(vars).parse(sexpr::parse(text));
}

Truth eval_semialg(const SemiAlgCondition& c, const JetPoint& p, const std::vector<long>& params) {
  using Kind = SemiAlgCondition::Kind;
  if (static_cast<long>(params.size()) < c.arity())
    throw Error(ErrorCode::InvalidArgument, "condition needs " + std::to_string(c.arity()) + " parameters");
  switch (c.kind) {
    case Kind::True:
      return Truth::True;
    case Kind::False:
      return Truth::False;
    case Kind::Ord: {
      Interval a, b{0, 0};
      std::optional<long> ac;
      ord_ac(c.polys[0], p, a, ac);
      if (c.polys.size() > 1) ord_ac(c.polys[1], p, b, ac);
      const long shift = c.offset.eval(params);
      b.lo += shift;
      if (b.hi != kInf) b.hi += shift;
      return compare(a, c.cmp, b);
    }
    case Kind::OrdMod: {
      Interval a;
      std::optional<long> ac;
      ord_ac(c.polys[0], p, a, ac);
      if (a.hi == kInf) return Truth::Unknown;
      return mod(a.lo - c.offset.eval(params), c.modulus) == 0 ? Truth::True : Truth::False;
    }
    case Kind::Ac: {
      std::vector<long> values(c.polys.size(), 0);
      std::vector<std::size_t> unknown;
      for (std::size_t i = 0; i < c.polys.size(); ++i) {
        Interval ord;
        std::optional<long> ac;
        ord_ac(c.polys[i], p, ord, ac);
        if (ac) {
          values[i] = *ac;
        } else {
          unknown.push_back(i);
        }
      }
      bool any_zero = false, any_nonzero = false;
      std::vector<long> digits(unknown.size(), 0);
      while (true) {
        for (std::size_t u = 0; u < unknown.size(); ++u) values[unknown[u]] = digits[u];
        (eval_mod_poly(c.relation, values, p.q) == 0 ? any_zero : any_nonzero) = true;
        std::size_t b = 0;
        for (; b < digits.size(); ++b) {
          if (++digits[b] < p.q) break;
          digits[b] = 0;
        }
        if (b == digits.size()) break;
      }
      return any_zero && !any_nonzero ? Truth::True : (any_nonzero && !any_zero ? Truth::False : Truth::Unknown);
    }
    case Kind::And: {
      Truth out = Truth::True;
      for (const auto& child : c.children) {
        Truth t = eval_semialg(child, p, params);
        if (t == Truth::False) return Truth::False;
        if (t == Truth::Unknown) out = Truth::Unknown;
      }
      return out;
    }
    case Kind::Or: {
      Truth out = Truth::False;
      for (const auto& child : c.children) {
        Truth t = eval_semialg(child, p, params);
        if (t == Truth::True) return Truth::True;
        if (t == Truth::Unknown) out = Truth::Unknown;
      }
      return out;
    }
    case Kind::Not: {
      Truth t = eval_semialg(c.children[0], p, params);
      return t == Truth::Unknown ? t : (t == Truth::True ? Truth::False : Truth::True);
    }
  }
  return Truth::Unknown;
}

SemiAlgCount count_semialg(const JetVariety& x, const SemiAlgCondition& c, long n, long q,
                           const std::vector<long>& params, long j_max, const JetOptions& opts) {
  if (static_cast<long>(params.size()) != c.arity())
    throw Error(ErrorCode::InvalidArgument, "condition takes " + std::to_string(c.arity()) + " parameters, got " +
                                                std::to_string(params.size()));
  // Per worker: [depth - n][truth] histogram.
  std::vector<std::vector<std::array<std::uint64_t, 3>>> hist;
  Visitor visit = [&](int w, const std::vector<std::vector<long>>& coords, long depth) {
    JetPoint p;
    p.q = q;
    p.n = n;
    for (const auto& row : coords) p.coords.emplace_back(row.begin(), row.begin() + n + 1);
    ++hist[w][depth - n][static_cast<int>(eval_semialg(c, p, params))];
  };
  run_search(x, n, q, n + j_max, opts, visit, [&](int workers) {
    hist.assign(workers, std::vector<std::array<std::uint64_t, 3>>(j_max + 1, {0, 0, 0}));
  });
  std::vector<std::array<std::uint64_t, 3>> merged(j_max + 1, {0, 0, 0});
  for (const auto& h : hist)
    for (long j = 0; j <= j_max; ++j)
      for (int t = 0; t < 3; ++t) merged[j][t] += h[j][t];
  std::vector<std::uint64_t> profile(j_max + 1, 0);
  std::uint64_t running = 0;
  for (long j = j_max; j >= 0; --j) {
    running += merged[j][0] + merged[j][1] + merged[j][2];
    profile[j] = running;
  }
  auto s = stabilize(profile);
  SemiAlgCount out;
  out.j_star = s.j_star;
  out.stable = s.stable;
  for (long j = s.j_star; j <= j_max; ++j) {
    out.definitely_true += merged[j][static_cast<int>(Truth::True)];
    out.unknown += merged[j][static_cast<int>(Truth::Unknown)];
  }
  return out;
}

}  // namespace motint
