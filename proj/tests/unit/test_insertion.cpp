#include <doctest.h>

#include <random>
#include <set>

#include "laurentcf/error.hpp"
#include "laurentcf/insertion.hpp"
#include "oracles.hpp"

using namespace lcf;

namespace {

const PrimeField f2(2);

PlanContext reference_context() {
  return make_plan_context(make_source(f2, "full"), make_source(f2, "zero_constant"));
}

InsertionPlan reference_plan(const PlanContext& ctx) {
  PlanBuildOptions opts;
  opts.horizon = 12;
  return build_plan(ctx, opts);
}

std::vector<Poly> polys(std::initializer_list<const char*> items) {
  std::vector<Poly> out;
  for (const char* s : items) out.push_back(parse_poly(f2, s));
  return out;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_SUITE("insertion") {
  TEST_CASE("gap thresholds") {
    CHECK(minimal_gap_threshold(3, Rational(1, 2)) == 14);
    CHECK(minimal_gap_threshold(3, Rational(1, 3)) == 20);
    CHECK(minimal_gap_threshold(3, Rational(1, 4)) == 26);
    CHECK(minimal_gap_threshold(3, Rational(1, 5)) == 32);
    for (int t : {3, 4}) {
      for (const Rational eps : {Rational(1, 2), Rational(1, 7)}) {
        const auto m = minimal_gap_threshold(t, eps);
        const auto n_star = verify_gap_threshold(t, eps);
        CHECK(m <= n_star);
        CHECK(!gap_holds(t, eps, m - 1));
        for (std::int64_t n = m; n <= n_star + 200; ++n) REQUIRE(gap_holds(t, eps, n));
      }
    }
  }

  TEST_CASE("argmax selection") {
    const auto p = make_profile(
        6, [](Degree N) { return Integer(N == 3 || N == 5 ? 2 : 1); }, [](Degree) { return Integer(4); });
    CHECK(p.argmax_points == std::vector<Degree>{1, 2, 3, 5});
    CHECK(choose_nk(p, 0) == std::vector<Degree>{1, 2, 3, 5});
    CHECK(choose_nk(p, 2) == std::vector<Degree>{3, 5});
    CHECK(kind_of([&] { choose_nk(p, 5); }) == ErrorKind::InsufficientArgmax);
  }

  TEST_CASE("excluding representatives") {
    const auto ctx = reference_context();
    const auto& st = *ctx.S_tilde;
    for (Degree d = 1; d <= 8; ++d) {
      // The minimum of zero_constant in degree d is X^d.
      CHECK(*st.representative(d) == Poly::monomial(f2, d));
      CHECK(st.count_by_degree(d) == lcf::pow(2, static_cast<std::uint64_t>(d)) - 1);
      std::vector<Poly> want;
      for (const Poly& p : enumerate_degree(f2, d)) {
        if (p != Poly::monomial(f2, d)) want.push_back(p);
      }
      CHECK(st.members_of_degree(d) == want);
      for (std::size_t i = 0; i < want.size(); i += 3) {
        CHECK(st.rank_within_degree(want[i]) == static_cast<unsigned long>(i + 1));
        CHECK(st.unrank_within_degree(d, Integer(static_cast<unsigned long>(i + 1))) == want[i]);
      }
    }
    CHECK(st.cumulative_count(40) == lcf::pow(2, 41) - 2 - 40);
  }

  TEST_CASE("complement of the sparse subset") {
    const auto ctx = reference_context();
    for (Degree d = 1; d <= 9; ++d) {
      std::vector<Poly> want;
      for (const Poly& p : ctx.U->members_of_degree(d)) {
        if (!ctx.sparse->member(p)) want.push_back(p);
      }
      CHECK(ctx.u_minus->members_of_degree(d) == want);
      CHECK(ctx.u_minus->count_by_degree(d) == static_cast<unsigned long>(want.size()));
    }
  }

  TEST_CASE("reference plan") {
    const auto ctx = reference_context();
    const auto plan = reference_plan(ctx);
    CHECK(plan.t == 3);
    CHECK(plan.N == std::vector<Degree>{1, 2});
    CHECK(plan.M == std::vector<std::int64_t>{14, 20});
    CHECK(plan.eps == std::vector<Rational>{Rational(1, 2), Rational(1, 3)});
    REQUIRE(plan.W.size() == 2);
    CHECK(plan.W[0] == polys({"X"}));
    CHECK(plan.W[1] == polys({"X^2", "X^2+X"}));

    const auto profile = poly_density_profile(*ctx.u_minus, *ctx.S, 12);
    const Rational want[] = {{1, 2},    {1, 2},     {3, 7},     {2, 5},      {10, 31},    {26, 63},
                             {52, 127}, {69, 170},  {393, 1022}, {905, 2046}, {794, 2047}, {1706, 4095}};
    REQUIRE(profile.ratios.size() == 12);
    for (std::size_t i = 0; i < 12; ++i) CHECK(profile.ratios[i].ratio == want[i]);

    const auto checks = validate_plan(plan, ctx);
    REQUIRE(checks.size() == 2);
    CHECK(checks[0].n_star == 23);
    CHECK(checks[0].window_sum == 88200);
    CHECK(checks[0].checked_through == 1023);
    CHECK(checks[1].n_star == 33);
    CHECK(checks[1].window_sum == 264600);
    CHECK(checks[1].checked_through == 1033);
    for (const auto& c : checks) {
      const Rational& eps = plan.eps[c.k - 1];
      CHECK(Rational(c.w_degree_sum) <= eps * Rational(c.window_sum));
    }
  }

  TEST_CASE("plan build errors") {
    const auto ctx = reference_context();
    PlanBuildOptions opts;
    opts.count = 3;
    CHECK(kind_of([&] { build_plan(ctx, opts); }) == ErrorKind::InsufficientArgmax);
    CHECK_THROWS_AS(build_plan(make_plan_context(make_source(f2, "monic"), make_source(PrimeField(3), "full")), {}),
                    Error);
  }

  TEST_CASE("tampered plans are rejected") {
    const auto ctx = reference_context();
    const auto plan = reference_plan(ctx);
    auto tamper = [&](auto edit) {
      InsertionPlan p = plan;
      edit(p);
      return kind_of([&] { validate_plan(p, ctx); });
    };
    CHECK(tamper([](InsertionPlan& p) { p.M[0] = 13; }) == ErrorKind::PlanViolation);
    CHECK(tamper([](InsertionPlan& p) { p.M[1] = 14; }) == ErrorKind::PlanViolation);
    CHECK(tamper([](InsertionPlan& p) { p.eps[1] = Rational(1, 2); }) == ErrorKind::PlanViolation);
    CHECK(tamper([](InsertionPlan& p) { p.W[1].pop_back(); }) == ErrorKind::PlanViolation);
    CHECK(tamper([](InsertionPlan& p) { p.W[0] = polys({"X+1"}); }) == ErrorKind::PlanViolation);
    CHECK(tamper([](InsertionPlan& p) { p.N = {2, 1}; }) == ErrorKind::PlanViolation);
    CHECK(tamper([](InsertionPlan& p) { p.t = 2; }) == ErrorKind::PlanViolation);
    CHECK(tamper([](InsertionPlan& p) { p.u_deg.erase(1); }) == ErrorKind::PlanViolation);
  }

  TEST_CASE("insert and eliminate round trip") {
    const auto ctx = reference_context();
    const auto plan = reference_plan(ctx);
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 20; ++trial) {
      std::set<Poly> seen;
      DigitSeq seed;
      while (seed.size() < 200) {
        Poly p = oracle::to_lcf(oracle::random_poly(rng, 2, 3 + static_cast<int>(rng() % 10)));
        if (seen.insert(p).second) seed.push_back(std::move(p));
      }
      const auto x = insert_digits(seed, plan, 1000);
      REQUIRE(x.size() == 203);
      CHECK(x[14] == parse_poly(f2, "X"));
      CHECK(x[21] == parse_poly(f2, "X^2"));
      CHECK(x[22] == parse_poly(f2, "X^2+X"));
      CHECK(eliminate(x, plan, x.size()) == seed);
      // A prefix cut inside a block still eliminates.
      const auto cut = insert_digits(seed, plan, 22);
      CHECK(eliminate(cut, plan, cut.size()) == DigitSeq(seed.begin(), seed.begin() + 20));
    }
    DigitSeq clash(20, Poly::monomial(f2, 5));
    CHECK(kind_of([&] { insert_digits(clash, plan, 40); }) == ErrorKind::PlanViolation);
  }

  TEST_CASE("emitted point") {
    const auto ctx = reference_context();
    const auto plan = reference_plan(ctx);
    const SeedSpec spec{plan.t, DigitPolicy::CanonicalMin, 0};
    const auto seeds = seed_prefix(ctx, spec, 24, 2);
    CHECK(seeds == seed_prefix(ctx, spec, 24, 1));
    const auto x = insert_digits(seeds, plan, 24);
    REQUIRE(x.size() == 24);
    const std::set<Poly> distinct(x.begin(), x.end());
    CHECK(distinct.size() == x.size());
    for (const Poly& a : x) CHECK(ctx.S->contains(a));
    for (const auto& block : plan.W) {
      for (const Poly& w : block) CHECK(distinct.contains(w));
    }
    // Inserted U-digits of degree <= N_k against #Q_{N_k}(S).
    for (Degree n : plan.N) {
      long hits = 0;
      for (const Poly& a : x) hits += (a.degree() <= n && ctx.U->contains(a)) ? 1 : 0;
      Rational d(hits, ctx.S->cumulative_count(n));
      d.canonicalize();
      CHECK(d == Rational(1, 2));
    }
  }

  TEST_CASE("Hoelder diagnostic on the reference plan") {
    const auto ctx = reference_context();
    const auto plan = reference_plan(ctx);
    const std::vector<std::int64_t> depths{14, 16, 19, 20, 22};
    const auto r = holder_diagnostic(plan, ctx, {plan.t, DigitPolicy::CanonicalMin, 0}, depths, 2, 2);
    CHECK(r.ok);
    REQUIRE(!r.samples.empty());
    for (const auto& s : r.samples) {
      CHECK(s.x_exponent < 0);
      if (s.depth >= plan.M[0] && s.depth < plan.M[1]) {
        CHECK(s.k == 1);
        CHECK(s.exponent >= 1.0 / (1.0 + 2.0 * 0.5) - 0.05);
      }
    }
    for (std::size_t i = 1; i < r.tiers.size(); ++i) CHECK(r.tiers[i].k > r.tiers[i - 1].k);
  }
}
