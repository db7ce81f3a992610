#include <gtest/gtest.h>

#include <random>

#include "motint/error.hpp"
#include "motint/motvol.hpp"
#include "motint/series.hpp"
#include "oracles.hpp"

using namespace motint;

namespace {

MotClass cls(const char* text) { return parse_mot_class(text); }

Stratum stratum(std::vector<std::size_t> subset, MotClass c) {
  Stratum s;
  s.subset = std::move(subset);
  s.cls = std::move(c);
  return s;
}

ResolutionData blowup() {
  ResolutionData res;
  res.d = 2;
  res.divisors = {{"E", 2, std::nullopt}};
  res.strata = {stratum({}, cls("L^2 - 1")), stratum({0}, cls("L + 1"))};
  return res;
}

ResolutionData line_with_ideal(long N) {
  ResolutionData res;
  res.d = 1;
  res.divisors = {{"E", 1, N}};
  res.strata = {stratum({}, cls("L - 1")), stratum({0}, MotClass(1))};
  return res;
}

// sum_e (L-1) L^-(e+1) L^-(N e): (L-1)/L over (1 - L^-(1+N) T), at T = 1.
MotClass level_sum(long N) {
  auto series = RationalMotSeries::geometric(cls("(L - 1)*L^-1"), {-(1 + N), 1});
  return sum_coefficients(series);
}

MotClass random_polynomial(std::mt19937_64& rng) {
  LaurentPoly::Terms terms;
  for (long e = 0; e <= 3; ++e)
    if (long c = static_cast<long>(rng() % 7) - 3; c != 0) terms.emplace(e, c);
  return MotClass(LaurentPoly(std::move(terms)));
}

ResolutionData random_resolution(std::mt19937_64& rng, bool crepant) {
  ResolutionData res;
  res.d = 1 + static_cast<long>(rng() % 3);
  const std::size_t j = rng() % 4;
  for (std::size_t i = 0; i < j; ++i)
    res.divisors.push_back({"E" + std::to_string(i), crepant ? 1 : 1 + static_cast<long>(rng() % 4), std::nullopt});
  for (unsigned mask = 0; mask < (1u << j); ++mask) {
    if (mask && rng() % 3 == 0) continue;
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < j; ++i)
      if (mask & (1u << i)) subset.push_back(i);
    res.strata.push_back(stratum(subset, random_polynomial(rng)));
  }
  return res;
}

}  // namespace

TEST(Volume, BlowUp) {
  EXPECT_EQ(volume_from_resolution(blowup()), MotClass(1));
  EXPECT_EQ(realize_volume_chi(blowup()), 1);
  EXPECT_EQ(chi_realize(volume_from_resolution(blowup())), 1);
}

TEST(Volume, EmptyDivisorSet) {
  ResolutionData res;
  res.d = 2;
  res.strata = {stratum({}, cls("L^2 + L + 1"))};
  EXPECT_EQ(volume_from_resolution(res), cls("(L^2 + L + 1)*L^-2"));
}

TEST(Volume, IdealTwist) {
  EXPECT_EQ(volume_with_ideal(line_with_ideal(1)), cls("L*(L-1)/(L^2-1)"));
  EXPECT_EQ(volume_with_ideal(line_with_ideal(1)), level_sum(1));
  EXPECT_EQ(volume_with_ideal(line_with_ideal(2)), cls("L^2*(L-1)/(L^3-1)"));
  EXPECT_EQ(volume_with_ideal(line_with_ideal(2)), level_sum(2));
  auto zero = blowup();
  zero.divisors[0].N = 0;
  EXPECT_EQ(volume_with_ideal(zero), volume_from_resolution(blowup()));
  try {
    volume_with_ideal(blowup());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingN);
  }
}

TEST(Volume, CrepantIdentity) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    auto res = random_resolution(rng, true);
    MotClass sum;
    for (const auto& s : res.strata) sum += *s.cls;
    EXPECT_EQ(volume_from_resolution(res), MotClass::L_pow(-res.d) * sum);
    res.total = sum;
    EXPECT_EQ(kontsevich_invariant(res), MotClass::L_pow(-res.d) * sum);
  }
}

TEST(Volume, SingleVertexPolyhedra) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 50; ++trial) {
    auto res = random_resolution(rng, false);
    std::vector<PolyhedralStratum> strata;
    for (const auto& s : res.strata) {
      PolyhedralStratum p{*s.cls, std::nullopt};
      if (!s.subset.empty()) {
        IntVec vertex;
        for (std::size_t i : s.subset) vertex.push_back(res.divisors[i].nu);
        p.delta = NewtonPolyhedron(static_cast<long>(vertex.size()), {vertex});
      }
      strata.push_back(p);
    }
    auto volume = volume_from_resolution(res);
    EXPECT_EQ(volume_from_polyhedra(res.d, strata), volume);
    EXPECT_TRUE(in_geometric_subring(volume));
    EXPECT_EQ(chi_realize(volume), realize_volume_chi(res));
    EXPECT_EQ(hodge_realize(volume), realize_volume_hodge(res));
  }
}

TEST(Volume, PolyhedralStratumMatchesTruncation) {
  NewtonPolyhedron delta(2, {{2, 1}, {1, 3}});
  std::vector<PolyhedralStratum> strata{{cls("L - 1"), std::nullopt}, {MotClass(1), delta}};
  auto volume = volume_from_polyhedra(2, strata);
  auto expected = expand_completion(cls("(L - 1)*L^-2"), 30) + expand_completion(MotClass::L_pow(-2), 32) * z_truncated(delta, 30);
  EXPECT_EQ(expand_completion(volume, 30), expected.truncated(30));
}

TEST(Kontsevich, PartitionCheck) {
  // A2-style chain: two P^1's meeting in a point inside a surface.
  ResolutionData res;
  res.d = 2;
  res.divisors = {{"E1", 1, std::nullopt}, {"E2", 1, std::nullopt}};
  res.strata = {stratum({}, cls("L^2 - 1")), stratum({0}, cls("L")), stratum({1}, cls("L")), stratum({0, 1}, MotClass(1))};
  res.total = cls("L^2 + 2*L");
  EXPECT_EQ(kontsevich_invariant(res), cls("(L^2 + 2*L)*L^-2"));
  res.total = cls("L^2 + L");
  try {
    kontsevich_invariant(res);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StrataNotPartition);
  }
  res.total.reset();
  EXPECT_THROW(kontsevich_invariant(res), Error);
}

TEST(Realize, RealizationOnlyStrata) {
  ResolutionData res;
  res.d = 1;
  Stratum curve;
  curve.hodge = parse_hodge("u*v - 2*u - 2*v + 1");
  curve.chi = -2;
  res.strata = {curve};
  EXPECT_EQ(realize_volume_hodge(res), parse_hodge("(u*v - 2*u - 2*v + 1)*w^-1"));
  EXPECT_EQ(realize_volume_chi(res), -2);
  try {
    volume_from_resolution(res);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RealizationOnlyStrata);
  }
  res.strata[0].chi = 3;
  EXPECT_THROW(realize_volume_chi(res), Error);
}

TEST(Validation, BadData) {
  auto res = blowup();
  res.divisors[0].nu = 0;
  EXPECT_THROW(volume_from_resolution(res), Error);
  res = blowup();
  res.strata.push_back(stratum({0}, MotClass(1)));
  EXPECT_THROW(volume_from_resolution(res), Error);
  res = blowup();
  res.strata[1].subset = {3};
  EXPECT_THROW(volume_from_resolution(res), Error);
}
