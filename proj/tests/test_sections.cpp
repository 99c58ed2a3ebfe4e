#include <catch2/catch_amalgamated.hpp>

#include "syzygy/sections.hpp"

using namespace syz;

TEST_CASE("projective graded pieces are degree monomials") {
  auto sys = projective_system(1, {0}, 1);
  // degree-2 monomials in two variables, lex-sorted
  std::vector<Point> expected{{0, 2}, {1, 1}, {2, 0}};
  CHECK(sys.basis(0, 2) == expected);
  CHECK(sys.h0(0, 2) == 3);

  auto p2 = projective_system(2, {0}, 1);
  CHECK(p2.h0(0, 3) == 10);  // C(3+2, 2)

  auto neg = projective_system(1, {-2}, 1);
  CHECK(neg.h0(0, 0) == 0);  // no monomials of negative degree
}

TEST_CASE("polytope systems take Minkowski sums") {
  std::vector<Point> triangle{{0, 0}, {1, 0}, {0, 1}};
  auto sys = polytope_system(triangle, {{{0, 0}}}, 2);
  CHECK(sys.h0(0, 2) == 6);  // dilated unit triangle

  auto line = polytope_system({{0}, {1}}, {{{0}}}, 1);
  CHECK(line.h0(0, 5) == 6);

  std::vector<Point> square{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  auto p1p1 = polytope_system(square, {{{0, 0}}}, 2);
  CHECK(p1p1.h0_of_l() == 4);  // bilinear monomials
  CHECK(p1p1.h0(0, 1) == 4);
}

TEST_CASE("polytope systems need a nonempty L") {
  CHECK_THROWS_AS(polytope_system({}, {{{0, 0}}}, 2), config_error);
}

TEST_CASE("projective constructor validation") {
  CHECK_THROWS_AS(projective_system(1, {0}, 0), config_error);
  CHECK_THROWS_AS(projective_system(1, {}, 1), config_error);
}

TEST_CASE("h0 examples") {
  CHECK(projective_system(2, {0}, 3).h0_total(1) == 10);
  CHECK(projective_system(1, {-2}, 2).h0_total(0) == 0);
  CHECK(projective_system(1, {1}, 2).h0(0, 2) == 6);  // h0(O(5))
  CHECK_THROWS_AS(projective_system(1, {0}, 2).h0(1, 0), config_error);
}

TEST_CASE("the L-only system at twist one is the L basis") {
  auto sys = projective_system(2, {0}, 3);
  CHECK(sys.basis(0, 1) == sys.l_points());
  auto tri = polytope_system({{0, 0}, {1, 0}, {0, 1}}, {{{0, 0}}}, 2);
  CHECK(tri.basis(0, 1) == tri.l_points());
}

TEST_CASE("h0 of the zero summand follows the binomial formula") {
  for (int n : {1, 2, 3}) {
    for (int b : {0, 1, 2}) {
      for (int l : {1, 2, 3}) {
        auto sys = projective_system(n, {b}, l);
        for (int m = 0; m <= 4; ++m) {
          CHECK(sys.h0(0, m) == binomial(b + m * l + n, n));
        }
      }
    }
  }
}

TEST_CASE("h0 is nondecreasing once nonempty") {
  auto check_monotone = [](const MonomialSystem& sys) {
    for (std::size_t s = 0; s < sys.num_summands(); ++s) {
      std::size_t prev = 0;
      for (int m = 0; m <= 6; ++m) {
        std::size_t cur = sys.h0(s, m);
        if (prev > 0) CHECK(cur >= prev);
        prev = cur;
      }
    }
  };
  check_monotone(projective_system(1, {-2, 0, 1}, 2));
  check_monotone(polytope_system({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {{{0, 0}}}, 2));
}

TEST_CASE("closure holds for constructed systems") {
  CHECK_NOTHROW(projective_system(2, {0}, 2).validate_closure(5));
  CHECK_NOTHROW(
      polytope_system({{0, 0}, {1, 0}, {0, 1}}, {{{0, 0}, {1, 1}}}, 2)
          .validate_closure(5));
}

TEST_CASE("twist family members") {
  auto base = projective_system(1, {0}, 1);
  auto fam = TwistFamily::projective(base, 1, 1);
  for (int d = 0; d <= 4; ++d) {
    CHECK(fam.member(d).h0_of_l() == static_cast<std::size_t>(d + 2));
  }
  // member 0 has L = P exactly
  CHECK(fam.member(0).l_points() == degree_monomials(1, 2));

  auto p2 = projective_system(2, {0}, 1);
  auto fam2 = TwistFamily::projective(p2, 1, 2);
  CHECK(fam2.member(1).h0_of_l() == 10);  // h0(O(3))

  // rank mismatch: base is P^1 (ambient rank 2), points have rank 3
  CHECK_THROWS_AS(TwistFamily(base, {{0, 0, 0}}, {{0, 0, 0}}), config_error);
}

TEST_CASE("twist family keeps duality data on projective members") {
  auto fam = TwistFamily::projective(projective_system(1, {0}, 1), 1, 1);
  CHECK(fam.member(3).is_projective());
}

TEST_CASE("projective space cohomology oracle") {
  CHECK(proj_cohomology({1, -2, 1}) == 1);  // h^1(P^1, O(-2)) = 1
  CHECK(proj_cohomology({2, 5, 1}) == 0);   // intermediate cohomology vanishes
  CHECK(proj_cohomology({2, -3, 2}) == 1);  // h^2(P^2, O(-3)) = 1
  CHECK(proj_cohomology({1, 3, 0}) == 4);
  CHECK_THROWS_AS(proj_cohomology({2, 0, 3}), config_error);
}

TEST_CASE("cohomology oracle satisfies Serre duality") {
  for (int n = 1; n <= 3; ++n)
    for (int a = -12; a <= 12; ++a)
      for (int i = 0; i <= n; ++i)
        CHECK(proj_cohomology({n, a, i}) ==
              proj_cohomology({n, -a - n - 1, n - i}));
}

TEST_CASE("duality data of projective systems") {
  auto sys = projective_system(1, {0}, 3);
  auto dual = sys.dual_system();
  REQUIRE(dual.projective_params().has_value());
  CHECK(dual.projective_params()->b_degrees == std::vector<int>{-2});
  CHECK(dual.projective_params()->l_degree == 3);

  auto tri = polytope_system({{0, 0}, {1, 0}, {0, 1}}, {{{0, 0}}}, 2);
  CHECK_THROWS_AS(tri.dual_system(), unsupported_error);
}
