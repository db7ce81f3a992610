#include <gtest/gtest.h>

#include <random>

#include "motint/error.hpp"
#include "motint/series.hpp"
#include "oracles.hpp"

using namespace motint;

namespace {

MotClass cls(const char* text) { return parse_mot_class(text); }

RationalMotSeries node_series() { return parse_series("2*L - 1 - L*T", "[(1,1), (0,1)]"); }

// Long division of num by the expanded denominator: a_n = num_n - sum_k d_k a_{n-k}.
std::vector<MotClass> expand_by_division(const RationalMotSeries& p, long n_max) {
  TPoly den{MotClass(1)};
  for (const auto& f : p.den()) {
    TPoly factor(f.b + 1);
    factor[0] = MotClass(1);
    factor[f.b] = -MotClass::L_pow(f.a);
    TPoly next(den.size() + f.b);
    for (std::size_t i = 0; i < den.size(); ++i)
      for (std::size_t j = 0; j < factor.size(); ++j) next[i + j] += den[i] * factor[j];
    den = next;
  }
  std::vector<MotClass> a(n_max + 1);
  for (long n = 0; n <= n_max; ++n) {
    MotClass value = n < static_cast<long>(p.num().size()) ? p.num()[n] : MotClass(0);
    for (long k = 1; k <= n && k < static_cast<long>(den.size()); ++k) value -= den[k] * a[n - k];
    a[n] = value;
  }
  return a;
}

RationalMotSeries random_series(std::mt19937_64& rng, long d, bool with_dominant) {
  TPoly num;
  for (int k = static_cast<int>(rng() % 3); k >= 0; --k) num.push_back(oracle::random_class(rng, -1, 2, 1, 3));
  std::vector<DenFactor> den;
  if (with_dominant) den.push_back({d, 1});
  for (int k = static_cast<int>(rng() % 3); k > 0; --k) {
    long b = 1 + static_cast<long>(rng() % 2);
    long a = b * d - 1 - static_cast<long>(rng() % 3);
    den.push_back({a, b});
  }
  return RationalMotSeries(num, den);
}

}  // namespace

TEST(SeriesExpand, Examples) {
  auto geo = RationalMotSeries::geometric(MotClass::L(), {1, 1});
  auto coeffs = expand(geo, 3);
  ASSERT_EQ(coeffs.size(), 4u);
  for (long n = 0; n <= 3; ++n) EXPECT_EQ(coeffs[n], MotClass::L_pow(n + 1));

  auto node = expand(node_series(), 2);
  EXPECT_EQ(node[0], cls("2*L - 1"));
  EXPECT_EQ(node[1], cls("2*L^2 - 1"));
  EXPECT_EQ(node[2], cls("2*L^3 - 1"));
}

TEST(SeriesExpand, AgreesWithLongDivision) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    auto p = random_series(rng, 1 + static_cast<long>(rng() % 3), rng() % 2);
    auto a = expand(p, 12);
    auto b = expand_by_division(p, 12);
    for (long n = 0; n <= 12; ++n) EXPECT_EQ(a[n], b[n]) << "n=" << n;
  }
}

TEST(SeriesLimit, Examples) {
  EXPECT_EQ(limit_of_coefficients(node_series(), 1), MotClass(2));
  EXPECT_EQ(limit_of_coefficients(RationalMotSeries::geometric(MotClass::L(), {1, 1}), 1), MotClass(1));
  try {
    limit_of_coefficients(RationalMotSeries::geometric(MotClass(1), {2, 1}), 1);
    FAIL() << "expected NoLimit";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoLimit);
    EXPECT_NE(std::string(e.what()).find("(2,1)"), std::string::npos);
  }
  EXPECT_THROW(limit_of_coefficients(parse_series("1", "[(1,1),(1,1)]"), 1), Error);
  EXPECT_THROW(limit_of_coefficients(parse_series("1", "[(1,1),(2,2)]"), 1), Error);
  EXPECT_EQ(limit_of_coefficients(parse_series("1", "[(0,1)]"), 1), MotClass(0));
}

TEST(SeriesLimit, MatchesScaledCoefficients) {
  std::mt19937_64 rng(17);
  const long n = 40, order = 4;
  for (int trial = 0; trial < 40; ++trial) {
    const long d = 1 + static_cast<long>(rng() % 2);
    auto p = random_series(rng, d, true);
    MotClass limit = limit_of_coefficients(p, d);
    MotClass scaled = expand_by_division(p, n)[n] * MotClass::L_pow(-(n + 1) * d);
    EXPECT_EQ(expand_completion(scaled, order), expand_completion(limit, order))
        << p.num_to_string() << " / " << p.den_to_string();
  }
}

TEST(SeriesSum, ConvergentAndDivergent) {
  // sum L^{-n} = L/(L - 1)
  EXPECT_EQ(sum_coefficients(parse_series("1", "[(-1,1)]")), cls("L/(L-1)"));
  EXPECT_THROW(sum_coefficients(parse_series("1", "[(0,1)]")), Error);
}

TEST(SeriesSpecialize, NodeAtTwo) {
  auto values = specialize_at_q(node_series(), 2, 2);
  EXPECT_EQ(values, (std::vector<mpq_class>{3, 7, 15}));
  auto report = compare_counts(node_series(), 2, {3, 7, 15});
  EXPECT_TRUE(report.pass);
  auto bad = compare_counts(node_series(), 2, {3, 8, 15});
  EXPECT_FALSE(bad.pass);
  EXPECT_EQ(bad.first_mismatch, 1);
}

TEST(SeriesArith, RingIdentities) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    auto p = random_series(rng, 1, rng() % 2), q = random_series(rng, 1, rng() % 2),
         r = random_series(rng, 2, rng() % 2);
    EXPECT_TRUE(p + q == q + p);
    EXPECT_TRUE(p * (q + r) == p * q + p * r);
    EXPECT_TRUE(p - p == RationalMotSeries());
    auto sum = expand(p + q, 8), a = expand(p, 8), b = expand(q, 8);
    for (long n = 0; n <= 8; ++n) EXPECT_EQ(sum[n], a[n] + b[n]);
  }
}

TEST(SeriesText, ParseAndPrint) {
  auto p = node_series();
  auto again = parse_series(p.num_to_string(), p.den_to_string());
  EXPECT_TRUE(again == p);
  EXPECT_EQ(p.den_to_string(), "[(0,1), (1,1)]");
  EXPECT_THROW(parse_series("1/(1 - T)", "[]"), ParseError);
  EXPECT_THROW(parse_series("1", "[(1,0)]"), ParseError);
  EXPECT_THROW(parse_series("1", "[(1,1)"), ParseError);
  EXPECT_TRUE(parse_series("(L-1)/(L^2-1) * T", "[]").num()[1] == MotClass::geometric(2));
}
