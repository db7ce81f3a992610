#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "motint/presburger.hpp"

namespace motint::corpus {

/// (m, condition) regression sets mixing inequalities and congruences.
inline std::vector<std::pair<long, std::string>> presburger_sets() {
  return {
      {1, "true"},
      {1, "(mod i 2 1)"},
      {1, "(and (>= i 4) (not (mod i 3 0)))"},
      {1, "(or (<= i 5) (mod (+ (* 2 i) 1) 5 0))"},
      {2, "(>= (* 2 i) j)"},
      {2, "(and (>= (* 2 i) j) (mod i 3 1))"},
      {2, "(and (>= (+ (* 2 i) (* -1 j)) 0) (mod i 3 1))"},
      {2, "(and (<= j i) (>= (* 3 j) i))"},
      {2, "(or (< (+ i j) 4) (and (mod (+ i j) 2 0) (>= (* 2 j) (+ i 3))))"},
      {2, "(and (not (mod (- i j) 3 0)) (<= (* 2 j) (+ (* 3 i) 1)) (>= (* 5 j) (- i 2)))"},
      {2, "(= (* 2 i) (* 3 j))"},
      {2, "(and (> i 2) (< j 7))"},
  };
}

/// Random atom-level condition for property tests.
inline std::string random_condition(std::mt19937_64& rng, long m, int depth = 2) {
  const char* vars[] = {"i", "j"};
  auto coeff = [&](int lo, int hi) { return std::to_string(lo + static_cast<int>(rng() % (hi - lo + 1))); };
  auto linear = [&] {
    std::string out = "(+";
    for (long v = 0; v < m; ++v) out += " (* " + coeff(-3, 3) + " " + vars[v] + ")";
    return out + " " + coeff(-6, 6) + ")";
  };
  const int pick = depth == 0 ? static_cast<int>(rng() % 3) : static_cast<int>(rng() % 6);
  switch (pick) {
    case 0:
    case 1:
      return "(>= " + linear() + " 0)";
    case 2:
      return "(mod " + linear() + " " + coeff(1, 4) + " " + coeff(0, 3) + ")";
    case 3:
      return "(and " + random_condition(rng, m, depth - 1) + " " + random_condition(rng, m, depth - 1) + ")";
    case 4:
      return "(or " + random_condition(rng, m, depth - 1) + " " + random_condition(rng, m, depth - 1) + ")";
    default:
      return "(not " + random_condition(rng, m, depth - 1) + ")";
  }
}

}  // namespace motint::corpus
