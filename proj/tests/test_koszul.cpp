#include <catch2/catch_amalgamated.hpp>

#include "support/dense_oracle.hpp"
#include "syzygy/io.hpp"
#include "syzygy/koszul.hpp"

using namespace syz;

TEST_CASE("first differential of the line") {
  // P^1, B = O, L = O(1), p = 1, q = 0: both spaces are 2-dimensional and
  // the map is injective
  auto sys = projective_system(1, {0}, 1);
  SparseMatrix d = build_differential(sys, 1, 0);
  CHECK(d.n_rows() == 2);
  CHECK(d.n_cols() == 2);
  CHECK(oracle::dense_rank_rationals(d) == 2);
  CHECK(rank(d, FieldSpec::prime(32003)) == 2);
}

TEST_CASE("wedge power beyond h0 gives the empty matrix") {
  auto sys = projective_system(1, {0}, 1);  // h0(L) = 2
  SparseMatrix d = build_differential(sys, 3, 0);
  CHECK(d.n_cols() == 0);
  CHECK(koszul_term_dim(sys, 3, 0) == 0);
}

TEST_CASE("consecutive differentials compose to zero") {
  auto sys = projective_system(2, {0}, 2);
  for (int q = 0; q <= 2; ++q) {
    for (int p = 1; p <= 6; ++p) {
      SparseMatrix inner = build_differential(sys, p, q);
      SparseMatrix outer = build_differential(sys, p - 1, q + 1);
      if (inner.n_cols() == 0 || outer.n_cols() == 0) continue;
      CHECK(multiply(outer, inner).is_zero());
    }
  }
}

TEST_CASE("twisted cubic dimensions") {
  auto sys = projective_system(1, {0}, 3);
  CHECK(koszul_dim(sys, 1, 1).dim == 3);  // 3 quadrics: C(5,2) - h0(O(6))
  CHECK(koszul_dim(sys, 2, 1).dim == 2);  // 2 linear syzygies
  CHECK(koszul_dim(sys, 1, -1).dim == 0);
  CHECK(koszul_dim(projective_system(1, {0}, 2), 1, 1).dim == 1);  // conic
}

TEST_CASE("betti table of the twisted cubic") {
  auto sys = projective_system(1, {0}, 3);
  BettiTable t = betti_table(sys, 3, 0, 2);
  for (int q = 0; q <= 2; ++q) {
    for (int p = 0; p <= 3; ++p) {
      std::size_t expected = 0;
      if (p == 0 && q == 0) expected = 1;
      if (p == 1 && q == 1) expected = 3;
      if (p == 2 && q == 1) expected = 2;
      CHECK(t.at(p, q) == expected);
    }
  }
}

TEST_CASE("betti table of the conic and the Veronese surface") {
  BettiTable conic = betti_table(projective_system(1, {0}, 2), 2, 0, 2);
  CHECK(conic.at(0, 0) == 1);
  CHECK(conic.at(1, 1) == 1);
  CHECK(conic.at(2, 1) == 0);
  CHECK(conic.at(1, 0) == 0);

  BettiTable veronese = betti_table(projective_system(2, {0}, 2), 3, 0, 3);
  CHECK(veronese.at(1, 1) == 6);  // C(7,2) - h0(O(4)) = 21 - 15
}

TEST_CASE("betti table rejects bad ranges") {
  auto sys = projective_system(1, {0}, 2);
  CHECK_THROWS_AS(betti_table(sys, 2, 1, 0), config_error);  // empty q range
  CHECK_THROWS_AS(betti_table(sys, 4, 0, 2), config_error);  // p_max > h0
}

TEST_CASE("blocked and unblocked ranks agree") {
  KoszulOptions blocked;
  KoszulOptions plain;
  plain.blocked = false;
  for (auto sys : {projective_system(1, {0, 1, -2}, 3), projective_system(2, {0}, 2)}) {
    for (int q = 0; q <= 2; ++q)
      for (int p = 0; p <= 4; ++p)
        CHECK(differential_rank(sys, p, q, blocked) ==
              differential_rank(sys, p, q, plain));
  }
}

TEST_CASE("tables are identical across thread counts") {
  auto sys = projective_system(2, {0}, 2);
  KoszulOptions serial;
  KoszulOptions parallel;
  parallel.threads = 4;
  BettiTable a = betti_table(sys, 6, 0, 3, serial);
  BettiTable b = betti_table(sys, 6, 0, 3, parallel);
  CHECK(a.cells == b.cells);
  CHECK(betti_csv(a) == betti_csv(b));
}

TEST_CASE("q-window vanishing") {
  for (auto sys : {projective_system(1, {0}, 3), projective_system(2, {0}, 2)}) {
    int n = static_cast<int>(sys.variety_dim());
    for (int p = 0; p <= 4; ++p) {
      CHECK(koszul_dim(sys, p, -1).dim == 0);
      CHECK(koszul_dim(sys, p, -2).dim == 0);
      CHECK(koszul_dim(sys, p, n + 2).dim == 0);
      CHECK(koszul_dim(sys, p, n + 3).dim == 0);
    }
  }
}

TEST_CASE("trivial-B kernel vanishing") {
  // exactness of the linear Koszul complex forces K_{p,0}(O, L) = 0, p >= 1
  for (auto sys : {projective_system(1, {0}, 2), projective_system(1, {0}, 4),
                   projective_system(2, {0}, 2)}) {
    for (int p = 1; p <= static_cast<int>(sys.h0_of_l()); ++p)
      CHECK(koszul_dim(sys, p, 0).dim == 0);
  }
}

TEST_CASE("duality on the rational normal curves") {
  // K_{1,1}(O, O(4)) = 6 pairs with K_{2,1}(O(-2), O(4)).  The resolution
  // of the canonical module of the quartic curve is the twisted dual of
  // the Eagon-Northcott resolution 1, 6, 8, 3, so beta_{2,3} there is 6.
  auto quartic = projective_system(1, {0}, 4);
  DualityReport rep = check_duality(quartic, 1, 1);
  CHECK(rep.hypotheses_hold);
  CHECK(rep.dim == 6);  // C(6,2) - h0(O(8)) = 15 - 9
  CHECK(rep.dual_p == 2);
  CHECK(rep.dual_q == 1);
  CHECK(rep.dual_dim == 6);
  CHECK(rep.agree);

  // K_{2,1}(O, O(3)) = 2 pairs with K_{0,1}(O(-2), O(3)), the two degree-1
  // generators of the canonical module
  auto cubic = projective_system(1, {0}, 3);
  DualityReport rep2 = check_duality(cubic, 2, 1);
  CHECK(rep2.hypotheses_hold);
  CHECK(rep2.dual_p == 0);
  CHECK(rep2.dual_q == 1);
  CHECK(rep2.dim == 2);
  CHECK(rep2.dual_dim == 2);
  CHECK(rep2.agree);

  // self-paired cell on the cubic
  DualityReport rep3 = check_duality(cubic, 1, 1);
  CHECK(rep3.dual_p == 1);
  CHECK(rep3.dual_q == 1);
  CHECK(rep3.dim == 3);
  CHECK(rep3.agree);
}

TEST_CASE("duality on the Veronese surface") {
  auto v = projective_system(2, {0}, 2);
  DualityReport rep = check_duality(v, 1, 1);
  CHECK(rep.hypotheses_hold);  // h^1 of line bundles on P^2 vanishes
  CHECK(rep.dual_p == 2);
  CHECK(rep.dual_q == 2);
  CHECK(rep.dim == 6);
  CHECK(rep.dual_dim == 6);
  CHECK(rep.agree);
}

TEST_CASE("duality holds across whole instances") {
  for (auto sys : {projective_system(1, {0}, 4), projective_system(1, {1}, 3)}) {
    int n = static_cast<int>(sys.variety_dim());
    for (int q = 0; q <= n + 1; ++q)
      for (int p = 0; p <= static_cast<int>(sys.h0_of_l()); ++p) {
        DualityReport rep = check_duality(sys, p, q);
        if (rep.hypotheses_hold) CHECK(rep.agree);
      }
  }
}

TEST_CASE("duality requires projective instances") {
  auto tri = polytope_system({{0, 0}, {1, 0}, {0, 1}}, {{{0, 0}}}, 2);
  CHECK_THROWS_AS(check_duality(tri, 1, 1), unsupported_error);
}

TEST_CASE("euler identity along strands") {
  auto cubic = projective_system(1, {0}, 3);
  EulerReport rep = euler_check(cubic, 2);
  CHECK(rep.lhs == -3);  // 1*C(4,2) - 4*C(4,1) + 7*C(4,0)
  CHECK(rep.rhs == -3);  // -K_{1,1}
  CHECK(rep.agree);

  EulerReport zero = euler_check(cubic, 0);
  CHECK(zero.lhs == static_cast<std::int64_t>(cubic.h0_total(0)));
  CHECK(zero.agree);

  EulerReport v = euler_check(projective_system(2, {0}, 2), 2);
  CHECK(v.agree);
}

TEST_CASE("dimensions agree across the two default primes") {
  auto sys = projective_system(1, {0}, 3);
  KoszulOptions a;
  a.mode = FieldMode::single(FieldSpec::prime(32003));
  KoszulOptions b;
  b.mode = FieldMode::single(FieldSpec::prime(65537));
  for (int q = 0; q <= 2; ++q)
    for (int p = 0; p <= 3; ++p)
      CHECK(koszul_dim(sys, p, q, a).dim == koszul_dim(sys, p, q, b).dim);
}

TEST_CASE("certified mode collects statistics") {
  auto sys = projective_system(1, {0}, 3);
  KoszulOptions opts;
  opts.mode = FieldMode::certified();
  RankStats stats;
  CHECK(koszul_dim(sys, 1, 1, opts, &stats).dim == 3);
  CHECK(stats.certified_calls.load() > 0);
  CHECK(stats.escalations.load() == 0);
}

TEST_CASE("multi-summand systems split block-diagonally") {
  auto sys = projective_system(1, {0, 1}, 2);
  auto a = projective_system(1, {0}, 2);
  auto b = projective_system(1, {1}, 2);
  for (int q = 0; q <= 2; ++q)
    for (int p = 0; p <= 3; ++p)
      CHECK(koszul_dim(sys, p, q).dim ==
            koszul_dim(a, p, q).dim + koszul_dim(b, p, q).dim);
}
