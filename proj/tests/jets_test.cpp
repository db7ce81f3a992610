#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "jets_oracle.hpp"
#include "motint/error.hpp"
#include "motint/jets.hpp"

using namespace motint;

namespace {

JetVariety node() { return make_variety({"x", "y"}, {"x*y"}, 1); }
JetVariety cusp() { return make_variety({"x", "y"}, {"y^2 - x^3"}, 1); }
JetVariety line_in_plane() { return make_variety({"x", "y"}, {"y"}, 1); }
JetVariety affine_line() { return make_variety({"x"}, {}, 1); }
JetVariety affine_plane() { return make_variety({"x", "y"}, {}, 2); }
JetVariety hyperplane() { return make_variety({"x", "y", "z"}, {"x + y + z"}, 2); }
JetVariety conic() { return make_variety({"x", "y"}, {"x^2 + y^2 - 1"}, 1); }

std::uint64_t ipow(long q, long e) {
  std::uint64_t r = 1;
  for (long i = 0; i < e; ++i) r *= static_cast<std::uint64_t>(q);
  return r;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ValidationError;
}

JetPoint jet(long q, std::vector<std::vector<long>> coords) {
  JetPoint p;
  p.q = q;
  p.n = static_cast<long>(coords[0].size()) - 1;
  p.coords = std::move(coords);
  return p;
}

}  // namespace

TEST(Jets, EnumerationExamples) {
  EXPECT_EQ(enumerate_jets(line_in_plane(), 2, 3), 27u);
  EXPECT_EQ(enumerate_jets(node(), 1, 2), 8u);
  for (long q : {2, 3, 5})
    for (long n = 0; n <= 3; ++n) EXPECT_EQ(enumerate_jets(affine_line(), n, q), ipow(q, n + 1));
}

TEST(Jets, AgreesWithFlatEnumeration) {
  for (const auto& x : {node(), cusp(), conic(), hyperplane()})
    for (long q : {2, 3})
      for (long n = 0; n <= 2; ++n) {
        if (std::pow(q, x.vars.size() * (n + 2.0)) > 2e5) continue;
        for (long j = 0; j <= 1; ++j) EXPECT_EQ(image_count(x, n, j, q), oracle::flat_image(x, n, j, q)) << n << " " << j;
      }
}

TEST(Jets, NodeImages) {
  EXPECT_EQ(image_count(node(), 1, 0, 2), 8u);
  EXPECT_EQ(image_count(node(), 1, 1, 2), 7u);
  EXPECT_EQ(image_count(node(), 1, 2, 2), 7u);
  EXPECT_EQ(image_profile(node(), 1, 2, 3), (std::vector<std::uint64_t>{8, 7, 7, 7}));
  for (long q : {2, 3})
    for (long n = 0; n <= 4; ++n) {
      auto s = stabilized_count(node(), n, q, n + 3);
      EXPECT_TRUE(s.stable);
      EXPECT_EQ(s.count, 2 * ipow(q, n + 1) - 1);
    }
}

TEST(Jets, CuspMatchesArcImage) {
  for (long q : {2, 3, 5})
    for (long n = 0; n <= 3; ++n) {
      if (q == 5 && n == 3) continue;
      const std::uint64_t arcs = oracle::cusp_arc_image(n, q);
      auto profile = image_profile(cusp(), n, q, 2 * n + 3);
      EXPECT_EQ(profile.back(), arcs) << "q=" << q << " n=" << n;
      for (auto c : profile) EXPECT_GE(c, arcs);
    }
  // Two confirmations are not a proof: over F_3 at n = 3 the images sit at 63
  // for j = 3..5 before dropping to the arc count 61.
  auto s = stabilized_count(cusp(), 3, 3, 8);
  EXPECT_TRUE(s.stable);
  EXPECT_EQ(s.count, 63u);
  EXPECT_EQ(oracle::cusp_arc_image(3, 3), 61u);
}

TEST(Jets, HenselSurjectivity) {
  for (const auto& x : {affine_plane(), hyperplane(), conic()})
    for (long q : {3, 5}) {
      for (long n = 0; n <= 2; ++n) {
        auto profile = image_profile(x, n, q, 3);
        for (auto c : profile) EXPECT_EQ(c, profile[0]);
        EXPECT_EQ(greenberg_estimate(x, n, q, 3), n);
      }
    }
  EXPECT_EQ(stabilized_count(hyperplane(), 2, 2, 2).count, ipow(2, 6));
}

TEST(Jets, MonotoneInJ) {
  for (const auto& x : {node(), cusp(), make_variety({"x", "y"}, {"x^2*y"}, 1)})
    for (long n = 0; n <= 3; ++n) {
      auto profile = image_profile(x, n, 2, 4);
      for (std::size_t j = 1; j < profile.size(); ++j) EXPECT_LE(profile[j], profile[j - 1]);
    }
}

TEST(Jets, GreenbergOnNode) {
  EXPECT_EQ(greenberg_estimate(node(), 1, 2, 4), 2);
  EXPECT_EQ(greenberg_estimate(node(), 2, 2, 4), 4);
  EXPECT_EQ(code_of([] { greenberg_estimate(node(), 2, 2, 2); }), ErrorCode::Unstable);
}

TEST(Jets, PoincareTables) {
  auto rows = poincare_table(line_in_plane(), 2, 3, 2);
  ASSERT_EQ(rows.size(), 4u);
  for (long n = 0; n <= 3; ++n) EXPECT_EQ(rows[n].count, ipow(2, n + 1));
  rows = poincare_table(node(), 2, 3, 6);
  std::vector<std::uint64_t> counts;
  for (const auto& r : rows) counts.push_back(r.count);
  EXPECT_EQ(counts, (std::vector<std::uint64_t>{3, 7, 15, 31}));
  // Frozen from the enumeration itself.
  rows = poincare_table(cusp(), 5, 2, 6);
  counts.clear();
  for (const auto& r : rows) counts.push_back(r.count);
  EXPECT_EQ(counts, (std::vector<std::uint64_t>{5, 21, 103}));
}

TEST(Jets, OesterleNode) {
  auto report = oesterle_sequence(node(), 2, 4, 7);
  ASSERT_EQ(report.ratios.size(), 5u);
  for (long n = 0; n <= 4; ++n) EXPECT_EQ(report.ratios[n], mpq_class(2) - mpq_class(1, ipow(2, n + 1)));
  for (std::size_t k = 1; k < report.differences.size(); ++k)
    EXPECT_EQ(report.differences[k] * 2, report.differences[k - 1]);
  EXPECT_FALSE(report.suspicious);
  auto flat = oesterle_sequence(affine_line(), 3, 3, 2);
  for (const auto& r : flat.ratios) EXPECT_EQ(r, 1);
  auto wrong = affine_line();
  wrong.d = 2;
  EXPECT_TRUE(oesterle_sequence(wrong, 2, 4, 2).suspicious);
}

TEST(Jets, FibrationScaling) {
  auto c = parse_semialg(R"((or (ord <= "x" "l1") (ord <= "y" "l1")))", {"x", "y"});
  for (long e = 0; e <= 1; ++e) {
    std::vector<std::uint64_t> counts;
    for (long n = 2 * e; n <= 4; ++n) {
      auto r = count_semialg(node(), c, n, 2, {e}, 4);
      EXPECT_EQ(r.unknown, 0u);
      counts.push_back(r.definitely_true);
    }
    for (std::size_t k = 1; k < counts.size(); ++k) EXPECT_EQ(counts[k], 2 * counts[k - 1]) << "e=" << e;
  }
}

TEST(Jets, DimensionBound) {
  struct Case {
    JetVariety x;
    std::uint64_t branches;
  };
  for (const auto& [x, branches] : {Case{node(), 2}, Case{cusp(), 1}, Case{hyperplane(), 1}, Case{line_in_plane(), 1}})
    for (const auto& row : poincare_table(x, 2, 3, 6)) {
      ASSERT_FALSE(row.error);
      EXPECT_LE(row.count, (branches + 1) * ipow(2, (row.n + 1) * x.d));
    }
}

TEST(Jets, DeterministicAcrossThreads) {
  for (const auto& x : {node(), cusp(), hyperplane()}) {
    JetOptions one, many;
    many.threads = 4;
    EXPECT_EQ(image_profile(x, 2, 3, 3, one), image_profile(x, 2, 3, 3, many));
  }
  auto c = parse_semialg(R"((ordmod "x" 2 "0"))", {"x", "y"});
  JetOptions many;
  many.threads = 3;
  auto a = count_semialg(node(), c, 3, 3, {}, 3), b = count_semialg(node(), c, 3, 3, {}, 3, many);
  EXPECT_EQ(a.definitely_true, b.definitely_true);
  EXPECT_EQ(a.unknown, b.unknown);
}

TEST(Jets, Budget) {
  JetOptions tight;
  tight.budget = 1000;
  EXPECT_EQ(code_of([&] { enumerate_jets(affine_plane(), 5, 5, tight); }), ErrorCode::BudgetExceeded);
  // Passes the estimate but trips the runtime counter.
  auto singular = make_variety({"x", "y", "z"}, {"x*y*z"}, 2);
  tight.budget = static_cast<std::uint64_t>(estimate_nodes(singular, 4, 2, 0)) + 1;
  EXPECT_EQ(code_of([&] { enumerate_jets(singular, 4, 2, tight); }), ErrorCode::BudgetExceeded);
  tight.budget = 30;
  auto rows = poincare_table(affine_line(), 2, 6, 2, tight);
  EXPECT_FALSE(rows[0].error);
  EXPECT_TRUE(rows.back().error);
}

TEST(Jets, InvalidArguments) {
  EXPECT_EQ(code_of([] { enumerate_jets(node(), 1, 4); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { enumerate_jets(node(), 1, 101); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { make_variety({}, {}, 0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { make_variety({"x"}, {"x/2"}, 0); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { make_variety({"x"}, {"x*z"}, 0); }), ErrorCode::ParseError);
}

TEST(Jets, PolynomialText) {
  std::vector<std::string> vars{"x", "y"};
  auto p = parse_int_poly("(x - y)^2 + 3", vars);
  EXPECT_EQ(int_poly_to_string(p, vars), "x^2 - 2*x*y + y^2 + 3");
  EXPECT_EQ(parse_int_poly(int_poly_to_string(p, vars), vars), p);
  EXPECT_EQ(int_poly_to_string(parse_int_poly("y - y", vars), vars), "0");
}

TEST(SemiAlg, AtomExamples) {
  std::vector<std::string> vars{"x"};
  auto ge2 = parse_semialg(R"((ord >= "x" "2"))", vars);
  EXPECT_EQ(eval_semialg(ge2, jet(2, {{0, 0, 1, 0}}), {}), Truth::True);
  auto eq3 = parse_semialg(R"((ord = "x" "3"))", vars);
  EXPECT_EQ(eval_semialg(eq3, jet(2, {{0, 0, 0}}), {}), Truth::Unknown);
  auto ac1 = parse_semialg(R"((ac "a1 - 1" "x"))", vars);
  EXPECT_EQ(eval_semialg(ac1, jet(2, {{0, 0, 1, 1}}), {}), Truth::True);
  // ac of an undetermined value ranges over all of F_q.
  EXPECT_EQ(eval_semialg(ac1, jet(2, {{0, 0}}), {}), Truth::Unknown);
  auto ac0 = parse_semialg(R"((ac "a1" "x"))", vars);
  EXPECT_EQ(eval_semialg(ac0, jet(3, {{0, 2}}), {}), Truth::False);
}

TEST(SemiAlg, Kleene) {
  std::vector<std::string> vars{"x"};
  auto zero = jet(2, {{0, 0}});
  auto unknown = R"((ord >= "x" "5"))";
  EXPECT_EQ(eval_semialg(parse_semialg(std::string("(and false ") + unknown + ")", vars), zero, {}), Truth::False);
  EXPECT_EQ(eval_semialg(parse_semialg(std::string("(and true ") + unknown + ")", vars), zero, {}), Truth::Unknown);
  EXPECT_EQ(eval_semialg(parse_semialg(std::string("(or true ") + unknown + ")", vars), zero, {}), Truth::True);
  EXPECT_EQ(eval_semialg(parse_semialg(std::string("(not ") + unknown + ")", vars), zero, {}), Truth::Unknown);
  EXPECT_EQ(eval_semialg(parse_semialg(R"((not (ord >= "x" "1")))", vars), zero, {}), Truth::False);
}

TEST(SemiAlg, TwoPolynomialsAndParameters) {
  std::vector<std::string> vars{"x", "y"};
  auto c = parse_semialg(R"((ord >= "x" "y" "l1 - 1"))", vars);
  EXPECT_EQ(c.arity(), 1);
  auto p = jet(3, {{0, 0, 1}, {0, 1, 0}});
  EXPECT_EQ(eval_semialg(c, p, {2}), Truth::True);
  EXPECT_EQ(eval_semialg(c, p, {3}), Truth::False);
  // ord y unknown (>= 3) against ord x = 1.
  auto q = jet(3, {{0, 1, 0}, {0, 0, 0}});
  EXPECT_EQ(eval_semialg(parse_semialg(R"((ord < "x" "y" "0"))", vars), q, {}), Truth::True);
  EXPECT_EQ(eval_semialg(parse_semialg(R"((ord > "x" "y" "0"))", vars), q, {}), Truth::False);
  EXPECT_EQ(eval_semialg(parse_semialg(R"((ord > "x" "y" "0"))", vars), jet(3, {{0, 0, 0}, {0, 0, 0}}), {}),
            Truth::Unknown);
}

TEST(SemiAlg, CountExamples) {
  std::vector<std::string> vars{"x"};
  auto ge1 = parse_semialg(R"((ord >= "x" "1"))", vars);
  auto r = count_semialg(affine_line(), ge1, 2, 3, {}, 2);
  EXPECT_EQ(r.definitely_true, 9u);
  EXPECT_EQ(r.unknown, 0u);
  auto eq5 = parse_semialg(R"((ord = "x" "5"))", vars);
  r = count_semialg(affine_line(), eq5, 2, 3, {}, 2);
  EXPECT_EQ(r.definitely_true, 0u);
  EXPECT_EQ(r.unknown, 1u);
  auto even = parse_semialg(R"((ordmod "x" 2 "0"))", vars);
  r = count_semialg(affine_line(), even, 3, 2, {}, 2);
  EXPECT_EQ(r.definitely_true, 10u);
  EXPECT_EQ(r.unknown, 1u);
}

TEST(SemiAlg, CountMatchesPointwiseOracle) {
  std::mt19937_64 rng(97);
  std::vector<std::string> vars{"x", "y"};
  const char* atoms[] = {R"((ord >= "x" "l1"))", R"((ord < "y" "x" "0"))", R"((ordmod "x - y" 2 "l1"))",
                         R"((ac "a1 + a2" "x" "y"))", R"((ord = "x*y" "2"))"};
  for (int trial = 0; trial < 12; ++trial) {
    std::string text = "(" + std::string(trial % 2 ? "and " : "or ") + atoms[rng() % 5] + " (not " + atoms[rng() % 5] + "))";
    auto c = parse_semialg(text, vars);
    std::vector<long> params(c.arity(), 1);
    const long n = 2, q = 2;
    auto r = count_semialg(node(), c, n, q, params, 4);
    ASSERT_TRUE(r.stable) << text;
    std::uint64_t yes = 0, maybe = 0;
    std::set<std::vector<oracle::Series>> seen;
    oracle::for_each_jet(node(), n + r.j_star, q, [&](const std::vector<oracle::Series>& pt) {
      JetPoint p;
      p.q = q;
      p.n = n;
      for (const auto& s : pt) p.coords.emplace_back(s.begin(), s.begin() + n + 1);
      if (!seen.insert(p.coords).second) return;
      Truth t = eval_semialg(c, p, params);
      yes += t == Truth::True;
      maybe += t == Truth::Unknown;
    });
    EXPECT_EQ(r.definitely_true, yes) << text;
    EXPECT_EQ(r.unknown, maybe) << text;
  }
}

TEST(SemiAlg, Syntax) {
  std::vector<std::string> vars{"x"};
  EXPECT_EQ(code_of([&] { parse_semialg("(ord ~ \"x\" \"1\")", vars); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([&] { parse_semialg("(ord >= \"z\" \"1\")", vars); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([&] { parse_semialg("(ord >= \"x\" \"l1*l2\")", vars); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([&] { parse_semialg("(xor true)", vars); }), ErrorCode::ParseError);
  auto c = parse_semialg(R"((ord >= "x" "l2"))", vars);
  EXPECT_EQ(code_of([&] { count_semialg(affine_line(), c, 1, 2, {1}, 2); }), ErrorCode::InvalidArgument);
}
