#include <doctest.h>

#include <random>
#include <set>

#include "laurentcf/error.hpp"
#include "laurentcf/insertion.hpp"
#include "laurentcf/patterns.hpp"
#include "oracles.hpp"

using namespace lcf;

TEST_SUITE("patterns") {
  TEST_CASE("progression examples") {
    const std::vector<std::int64_t> s{1, 3, 5, 9};
    CHECK(*find_ap(s, 3) == APWitness{1, 2, 3});
    std::vector<std::int64_t> powers;
    for (int i = 0; i < 20; ++i) powers.push_back(std::int64_t{1} << i);
    CHECK(!find_ap(powers, 3));
    CHECK(*find_ap(powers, 2) == APWitness{1, 1, 2});
    CHECK(!find_ap(s, 5));
    CHECK(verify_ap(s, {1, 4, 3}));
    CHECK(!verify_ap(s, {1, 2, 4}));
  }

  TEST_CASE("progressions agree with the exhaustive oracle") {
    std::mt19937_64 rng(91);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<std::int64_t> s;
      const int n = 3 + static_cast<int>(rng() % 20);
      for (int i = 0; i < n; ++i) s.push_back(1 + static_cast<std::int64_t>(rng() % 80));
      const std::int64_t L = 3 + static_cast<std::int64_t>(rng() % 3);
      const auto got = find_ap(s, L);
      const auto want = oracle::ap_bruteforce(s, L);
      REQUIRE(got.has_value() == want.has_value());
      if (got) {
        CHECK(got->start == want->first);
        CHECK(got->step == want->second);
        CHECK(verify_ap(s, *got));
      }
    }
  }

  TEST_CASE("affine configurations agree with the exhaustive oracle") {
    std::mt19937_64 rng(92);
    int found = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const int q = trial % 2 == 0 ? 2 : 3;
      const int k = q == 2 ? 1 + static_cast<int>(rng() % 2) : 1;
      const int dmax = q == 2 ? 3 : 2;
      std::vector<oracle::NPoly> set;
      const int n = 3 + static_cast<int>(rng() % 8);
      for (int i = 0; i < n; ++i) {
        auto p = oracle::random_poly(rng, q, 1 + static_cast<int>(rng() % static_cast<unsigned>(dmax)), true);
        if (!p.zero() && std::find(set.begin(), set.end(), p) == set.end()) set.push_back(p);
      }
      std::vector<Poly> lset;
      for (const auto& p : set) lset.push_back(oracle::to_lcf(p));
      const auto got = find_affine(lset, k);
      REQUIRE(got.has_value() == oracle::affine_exists(set, q, k));
      if (got) {
        ++found;
        CHECK(verify_affine(lset, *got));
        CHECK(got->members().size() == static_cast<std::size_t>(k == 1 ? q : q * q));
      }
    }
    CHECK(found > 20);
  }

  TEST_CASE("constructed configurations are recovered") {
    std::mt19937_64 rng(93);
    for (int trial = 0; trial < 100; ++trial) {
      const int q = trial % 2 == 0 ? 2 : 3;
      const int k = 1 + static_cast<int>(rng() % 2);
      Poly F = oracle::to_lcf(oracle::random_poly(rng, q, 1 + static_cast<int>(rng() % 5), true));
      Poly G = oracle::to_lcf(oracle::random_poly(rng, q, 1 + static_cast<int>(rng() % 4)));
      const auto config = make_affine(F, G, k);
      const auto members = config.members();
      const auto found = find_affine(members, k);
      REQUIRE(found);
      CHECK(found->members() == members);
      // Padding with unrelated digits keeps the configuration findable.
      std::vector<Poly> padded = members;
      for (int i = 0; i < 5; ++i) padded.push_back(oracle::to_lcf(oracle::random_poly(rng, q, 9)));
      const auto again = find_affine(padded, k);
      REQUIRE(again);
      CHECK(verify_affine(padded, *again));
    }
  }

  TEST_CASE("affine search guards") {
    const PrimeField f2(2);
    std::vector<Poly> big;
    for (Degree d = 1; d <= 12; ++d) {
      for (const Poly& p : enumerate_degree(f2, d)) big.push_back(p);
    }
    CHECK_THROWS_AS(find_affine(big, 3, 1000), Error);
    CHECK(!find_affine(std::vector<Poly>{parse_poly(f2, "X")}, 1));
    CHECK_THROWS_AS(make_affine(parse_poly(f2, "X"), Poly(f2), 1), Error);
  }

  TEST_CASE("point scan finds a progression in a dense insertion") {
    const PrimeField f2(2);
    const auto ctx = make_plan_context(make_source(f2, "full"), make_source(f2, "zero_constant"));
    InsertionPlan plan;
    plan.field = f2;
    plan.S_spec = "full";
    plan.U_spec = "zero_constant";
    plan.t = 3;
    plan.M = {14};
    plan.W.emplace_back();
    for (Degree d = 1; d <= 6; ++d) {
      for (const Poly& p : ctx.u_minus->members_of_degree(d)) plan.W[0].push_back(p);
    }
    const auto seeds = seed_prefix(ctx, {3, DigitPolicy::CanonicalMin, 0}, 14);
    const auto x = insert_digits(seeds, plan, 14 + plan.W[0].size());
    const auto r = scan_point_patterns(x, *ctx.U, x.size(), 3, 1);
    REQUIRE(r.ap);
    CHECK(r.ap->start >= 1);
    CHECK(r.ap->start + 2 * r.ap->step <= 6);
    REQUIRE(r.affine);
    CHECK(verify_affine(r.digits, *r.affine));
    CHECK_THROWS_AS(scan_point_patterns(x, *ctx.U, x.size() + 1, 3, 1), Error);
    CHECK_THROWS_AS(scan_point_patterns(x, *ctx.U, x.size(), 2, 1), Error);
  }
}
