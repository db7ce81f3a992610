#pragma once

// Flat enumeration over all coefficient tuples, with no lifting or pruning.

#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "motint/jets.hpp"

namespace motint::oracle {

using Series = std::vector<long>;

inline Series truncated_value(const IntPoly& f, const std::vector<Series>& point, long q) {
  const std::size_t len = point.empty() ? 1 : point[0].size();
  Series total(len, 0);
  for (const auto& [e, c] : f) {
    Series term(len, 0);
    term[0] = ((c % q) + q) % q;
    for (std::size_t v = 0; v < e.size(); ++v)
      for (long k = 0; k < e[v]; ++k) {
        Series next(len, 0);
        for (std::size_t a = 0; a < len; ++a)
          for (std::size_t b = 0; a + b < len; ++b) next[a + b] = (next[a + b] + term[a] * point[v][b]) % q;
        term = next;
      }
    for (std::size_t k = 0; k < len; ++k) total[k] = (total[k] + term[k]) % q;
  }
  return total;
}

/// Calls visit on every point of L_level(X)(F_q).
inline void for_each_jet(const JetVariety& x, long level, long q, const std::function<void(const std::vector<Series>&)>& visit) {
  const std::size_t nv = x.vars.size(), len = static_cast<std::size_t>(level + 1);
  std::vector<Series> point(nv, Series(len, 0));
  while (true) {
    bool ok = true;
    for (const auto& f : x.polys) {
      for (long c : truncated_value(f, point, q))
        if (c != 0) ok = false;
      if (!ok) break;
    }
    if (ok) visit(point);
    std::size_t slot = 0;
    for (; slot < nv * len; ++slot) {
      long& digit = point[slot / len][slot % len];
      if (++digit < q) break;
      digit = 0;
    }
    if (slot == nv * len) return;
  }
}

/// Number of distinct level-n truncations of points of L_{n+j}(X)(F_q).
inline std::uint64_t flat_image(const JetVariety& x, long n, long j, long q) {
  std::set<std::vector<Series>> image;
  for_each_jet(x, n + j, q, [&](const std::vector<Series>& p) {
    std::vector<Series> cut;
    for (const auto& s : p) cut.emplace_back(s.begin(), s.begin() + n + 1);
    image.insert(cut);
  });
  return image.size();
}

/// Level-n truncations of (u^2, u^3) over u in F_q[t]/t^{n+1}.
inline std::uint64_t cusp_arc_image(long n, long q) {
  std::set<std::pair<Series, Series>> image;
  const std::size_t len = static_cast<std::size_t>(n + 1);
  Series u(len, 0);
  auto mul = [&](const Series& a, const Series& b) {
    Series out(len, 0);
    for (std::size_t i = 0; i < len; ++i)
      for (std::size_t k = 0; i + k < len; ++k) out[i + k] = (out[i + k] + a[i] * b[k]) % q;
    return out;
  };
  while (true) {
    Series u2 = mul(u, u);
    image.emplace(u2, mul(u2, u));
    std::size_t k = 0;
    for (; k < len; ++k) {
      if (++u[k] < q) break;
      u[k] = 0;
    }
    if (k == len) break;
  }
  return image.size();
}

}  // namespace motint::oracle
