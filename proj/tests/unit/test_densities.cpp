#include <doctest.h>

#include "laurentcf/densities.hpp"
#include "laurentcf/error.hpp"

using namespace lcf;

TEST_SUITE("densities") {
  TEST_CASE("fixed-fraction subsets have constant exact ratios") {
    auto constant = [](const DensityProfile& p, const Rational& want) {
      for (const auto& e : p.ratios) CHECK(e.ratio == want);
      CHECK(p.argmax_points.size() == p.ratios.size());
    };
    constant(poly_density_profile(*make_source(PrimeField(3), "monic"), *make_source(PrimeField(3), "full"), 10),
             Rational(1, 2));
    constant(poly_density_profile(*make_source(PrimeField(2), "monic"), *make_source(PrimeField(2), "full"), 10),
             Rational(1));
    for (std::uint32_t q : {2U, 3U, 5U}) {
      const PrimeField f(q);
      constant(poly_density_profile(*make_source(f, "zero_constant"), *make_source(f, "full"), 8),
               Rational(1, static_cast<long>(q)));
      constant(poly_density_profile(*make_source(f, "monic"), *make_source(f, "full"), 8),
               Rational(1, static_cast<long>(q - 1)));
    }
  }

  TEST_CASE("subset violations are caught") {
    CHECK_THROWS_AS(poly_density_profile(*make_source(PrimeField(3), "full"), *make_source(PrimeField(3), "monic"), 6),
                    Error);
    CHECK_THROWS_AS(poly_density_profile(*make_source(PrimeField(2), "full"), *make_source(PrimeField(3), "full"), 6),
                    Error);
  }

  TEST_CASE("empty denominators are skipped") {
    const PrimeField f2(2);
    const auto p = poly_density_profile(*make_source(f2, "explicit:X^3"), *make_source(f2, "explicit:X^3;X^3+1"), 5);
    CHECK(p.ratios.size() == 3);
    CHECK(p.ratios.front().N == 3);
    CHECK(p.ratios.front().ratio == Rational(1, 2));
    CHECK_THROWS_AS(poly_density_profile(*make_source(f2, "explicit:X^3"), *make_source(f2, "explicit:X^3"), 2),
                    Error);
  }

  TEST_CASE("integer sets") {
    const auto evens = int_density_profile(parse_int_set("even"), parse_int_set("all"), 100);
    CHECK(*evens.ratio_at(100) == Rational(1, 2));
    const auto same = int_density_profile(parse_int_set("primes"), parse_int_set("primes"), 50);
    for (const auto& e : same.ratios) CHECK(e.ratio == 1);
    CHECK(same.ratios.front().N == 2);
    const auto squares = int_density_profile(parse_int_set("squares"), parse_int_set("all"), 400);
    for (const auto& e : squares.ratios) {
      long r = 0;
      while ((r + 1) * (r + 1) <= e.N) ++r;
      Rational want(r, e.N);
      want.canonicalize();
      CHECK(e.ratio == want);
    }
    CHECK(squares.argmax_points == std::vector<Degree>{1});
    CHECK_THROWS_AS(int_density_profile(parse_int_set("all"), parse_int_set("odd"), 5), Error);
    CHECK_THROWS_AS(parse_int_set("mod:0:1"), Error);
    CHECK(parse_int_set("mod:3:1").contains(7));
    CHECK(parse_int_set("explicit:1,3,5").contains(3));
  }

  TEST_CASE("argmax points are the running records") {
    const auto p = int_density_profile(parse_int_set("explicit:1,2,5,6,7,8"), parse_int_set("all"), 8);
    // Ratios 1, 1, 2/3, 1/2, 3/5, 2/3, 5/7, 3/4.
    CHECK(p.argmax_points == std::vector<Degree>{1, 2});
    CHECK(p.running_max == 1);
  }

  TEST_CASE("degree sets") {
    CHECK(degree_set(*make_source(PrimeField(2), "full"), 10).size() == 10);
    CHECK(degree_set(*make_source(PrimeField(2), "irreducible"), 6) == std::vector<Degree>{1, 2, 3, 4, 5, 6});
    CHECK(degree_set(*make_source(PrimeField(2), "explicit:X^3"), 10) == std::vector<Degree>{3});
  }
}
