#pragma once

// Brute-force jet enumeration over prime fields: points of L_n(X)(F_q),
// truncation images, stabilized counts and semi-algebraic conditions.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace motint {

/// Integer polynomial: exponent vector -> coefficient.
using IntPoly = std::map<std::vector<long>, long>;

/// Parses an integer polynomial in the given variables ("x*y - 1", "y^2 - x^3").
IntPoly parse_int_poly(std::string_view text, const std::vector<std::string>& vars);
std::string int_poly_to_string(const IntPoly& poly, const std::vector<std::string>& vars);

struct JetVariety {
  std::vector<std::string> vars;
  std::vector<IntPoly> polys;
  long d = 1;
  /// Declared: the class of X lies in the subring generated by L.
  bool polynomial_class = false;

  /// Throws Error(InvalidArgument) for N = 0 or polynomials of the wrong arity.
  void validate() const;
};

JetVariety make_variety(std::vector<std::string> vars, const std::vector<std::string>& polys, long d);

struct JetPoint {
  long q = 2;
  long n = 0;
  /// coords[v][k] = coefficient of t^k in the v-th coordinate.
  std::vector<std::vector<long>> coords;
};

/// Default node budget (10^8, overridable through MOTINT_BUDGET).
std::uint64_t default_budget();

struct JetOptions {
  std::uint64_t budget = default_budget();
  int threads = 1;
};

/// Estimated DFS nodes for level-n jets extended by `tail` further levels.
double estimate_nodes(const JetVariety& x, long n, long q, long tail);

/// |L_n(X)(F_q)|. Throws Error(BudgetExceeded) or Error(InvalidArgument) for bad q.
std::uint64_t enumerate_jets(const JetVariety& x, long n, long q, const JetOptions& opts = {});

/// |X_{n,j}(F_q)|: level-n truncations of points of L_{n+j}(X)(F_q).
std::uint64_t image_count(const JetVariety& x, long n, long j, long q, const JetOptions& opts = {});

/// image_count for j = 0..j_max, computed in one pass.
std::vector<std::uint64_t> image_profile(const JetVariety& x, long n, long q, long j_max, const JetOptions& opts = {});

struct StabilizedCount {
  std::uint64_t count = 0;
  long j_star = 0;
  bool stable = false;
  std::vector<std::uint64_t> profile;
};

/// Smallest j* with c(j*) = c(j*+1) = c(j*+2), j* + 2 <= j_max.
StabilizedCount stabilized_count(const JetVariety& x, long n, long q, long j_max, const JetOptions& opts = {});
StabilizedCount stabilize(const std::vector<std::uint64_t>& profile);

/// n + j*; throws Error(Unstable) when no stabilization within j_max.
long greenberg_estimate(const JetVariety& x, long n, long q, long j_max, const JetOptions& opts = {});

struct PoincareRow {
  long n = 0;
  std::uint64_t count = 0;
  long j_star = 0;
  bool stable = false;
  /// Set when the row could not be computed (e.g. BudgetExceeded).
  std::optional<std::string> error;
};

std::vector<PoincareRow> poincare_table(const JetVariety& x, long q, long n_max, long j_max, const JetOptions& opts = {});

struct OesterleReport {
  std::vector<mpq_class> ratios;       // N_n / q^{(n+1)d}
  std::vector<mpq_class> differences;  // ratios[n+1] - ratios[n]
  std::vector<bool> stable;
  bool suspicious = false;
};

OesterleReport oesterle_sequence(const JetVariety& x, long q, long n_max, long j_max, const JetOptions& opts = {});

// ---------------------------------------------------------------------------
// Semi-algebraic conditions

enum class Truth { False, True, Unknown };

/// Affine function of the parameters l1..lr.
struct ParamForm {
  std::vector<long> coeffs;
  long constant = 0;
  long eval(const std::vector<long>& params) const;
};

struct SemiAlgCondition {
  enum class Kind { True, False, Ord, OrdMod, Ac, And, Or, Not };
  enum class Cmp { Ge, Gt, Le, Lt, Eq };

  Kind kind = Kind::True;
  Cmp cmp = Cmp::Ge;
  /// Ord: ord f[0] cmp (ord f[1]) + offset; OrdMod: ord f[0] = offset mod modulus;
  /// Ac: relation(ac f[0], ..., ac f[r-1]) = 0.
  std::vector<IntPoly> polys;
  ParamForm offset;
  long modulus = 1;
  IntPoly relation;
  std::vector<SemiAlgCondition> children;

  /// Number of parameters referenced (largest l-index).
  long arity() const;
};

/// S-expression syntax, e.g. (and (ord >= "x" "l1 + 1") (ac "a1 - 1" "y")).
SemiAlgCondition parse_semialg(std::string_view text, const std::vector<std::string>& vars);

Truth eval_semialg(const SemiAlgCondition& c, const JetPoint& p, const std::vector<long>& params);

struct SemiAlgCount {
  std::uint64_t definitely_true = 0;
  std::uint64_t unknown = 0;
  long j_star = 0;
  bool stable = false;
};

/// Counts over the stabilized level-n image.
SemiAlgCount count_semialg(const JetVariety& x, const SemiAlgCondition& c, long n, long q,
                           const std::vector<long>& params, long j_max, const JetOptions& opts = {});

}  // namespace motint
