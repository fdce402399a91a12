#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "pbp/linalg.hpp"

using namespace pbp;

static IntMatrix M(std::vector<std::vector<long>> rows) {
  std::vector<std::vector<Int>> r;
  for (auto& row : rows) r.emplace_back(row.begin(), row.end());
  return IntMatrix::from_rows(r);
}

static std::vector<Int> V(std::vector<long> v) {
  return std::vector<Int>(v.begin(), v.end());
}

TEST_CASE("hnf: transform identities and canonical form") {
  IntMatrix A = M({{2, 4, 4}, {-6, 6, 12}, {10, 4, 16}});
  HnfResult h = hnf(A);
  CHECK(h.U * A == h.H);
  CHECK(h.Uinv * h.H == A);
  CHECK(h.U * h.Uinv == IntMatrix::identity(3));
  CHECK(h.rank == 3);
  // Canonical form under our convention (checked against an independent
  // computer-algebra HNF of the same row lattice); pivot product = |det| = 624.
  CHECK(h.H == M({{2, 0, 120}, {0, 2, 20}, {0, 0, 156}}));

  // Rank-deficient with zero rows at the bottom.
  IntMatrix B = M({{1, 2, 3}, {2, 4, 6}, {0, 1, 1}});
  HnfResult hb = hnf(B);
  CHECK(hb.rank == 2);
  CHECK(hb.U * B == hb.H);
  for (long j = 0; j < 3; ++j) CHECK(hb.H.at(2, j) == 0);
  // Pivots positive, entries above reduced.
  CHECK(hb.H.at(0, 0) > 0);
  CHECK(hb.H.at(1, 1) > 0);
  CHECK(hb.H.at(0, 1) >= 0);
  CHECK(hb.H.at(0, 1) < hb.H.at(1, 1));
}

TEST_CASE("hnf is invariant under unimodular row mixing") {
  IntMatrix A = M({{3, 1, 4}, {1, 5, 9}, {2, 6, 5}});
  IntMatrix B = A;
  B.add_multiple(0, 1, 7);
  B.add_multiple(2, 0, -3);
  B.swap_rows(1, 2);
  B.negate_row(0);
  CHECK(hnf(A).H == hnf(B).H);
}

TEST_CASE("int_kernel") {
  // Rows (1,2,3),(4,5,6),(7,8,9): kernel generated by (1,-2,1).
  IntMatrix A = M({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  IntMatrix K = int_kernel(A);
  REQUIRE(K.rows() == 1);
  std::vector<Int> k = K.row(0);
  std::vector<Int> prod = vec_mat(k, A);
  for (auto& x : prod) CHECK(x == 0);
  // Primitive generator up to sign.
  CHECK((k == V({1, -2, 1}) || k == V({-1, 2, -1})));
  CHECK(int_kernel(IntMatrix::identity(4)).rows() == 0);
}

TEST_CASE("saturation against a brute-force box membership oracle") {
  // Rational span of (2,0,2),(0,3,3) is {(a, b, a+b)}; its integer points
  // are generated by (1,0,1),(0,1,1).
  IntMatrix A = M({{2, 0, 2}, {0, 3, 3}});
  IntMatrix S = saturate(A);
  REQUIRE(S.rows() == 2);
  // Oracle: every integer vector in [-4,4]^3 lying in the rational span
  // must be an integer combination of the saturated basis, and every basis
  // row must lie in the rational span.
  for (long a = -4; a <= 4; ++a)
    for (long b = -4; b <= 4; ++b)
      for (long c = -4; c <= 4; ++c) {
        if (c != a + b) continue;
        CHECK(membership(S, V({a, b, c})).has_value());
      }
  for (long i = 0; i < S.rows(); ++i) {
    auto r = S.row(i);
    CHECK(r[2] == r[0] + r[1]);
  }
  // Index of the original lattice inside its saturation is 6 here; the
  // unsaturated lattice must miss (1,0,1).
  CHECK_FALSE(membership(A, V({1, 0, 1})).has_value());
  CHECK(membership(S, V({1, 0, 1})).has_value());

  // Full column rank saturates to Z^n.
  CHECK(saturate(M({{2, 1}, {0, 5}})) == IntMatrix::identity(2));
}

TEST_CASE("membership returns exact coordinates") {
  IntMatrix A = M({{2, 4, 4}, {-6, 6, 12}, {10, 4, 16}});
  auto z = membership(A, V({-4, 10, 16}));  // = row0 + row1
  REQUIRE(z.has_value());
  CHECK(vec_mat(*z, A) == V({-4, 10, 16}));
  CHECK_FALSE(membership(A, V({1, 0, 0})).has_value());
  CHECK_FALSE(membership(A, V({6, 14, 20})).has_value());
}

TEST_CASE("reduce_mod_lattice gives canonical residues") {
  IntMatrix A = M({{2, 1}, {0, 3}});
  // Residues must agree exactly when vectors differ by a lattice element.
  auto r1 = reduce_mod_lattice(A, V({5, 7}));
  auto r2 = reduce_mod_lattice(A, V({5 + 2, 7 + 1}));
  auto r3 = reduce_mod_lattice(A, V({-1, 8}));  // differs by (-6,1), not in L
  CHECK(r1 == r2);
  CHECK_FALSE(r1 == r3);
  // Zero residue exactly for lattice members.
  CHECK(reduce_mod_lattice(A, V({4, 2})) == V({0, 0}));
  CHECK(reduce_mod_lattice(A, V({0, 0})) == V({0, 0}));
}

TEST_CASE("rank and RankTracker agree with hnf rank") {
  IntMatrix A = M({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}, {1, 0, 0}});
  CHECK(rank(A) == 3);
  RankTracker t(3);
  CHECK(t.offer(V({1, 2, 3})));
  CHECK(t.offer(V({4, 5, 6})));
  CHECK_FALSE(t.offer(V({7, 8, 9})));   // dependent
  CHECK_FALSE(t.offer(V({0, 0, 0})));
  CHECK(t.offer(V({1, 0, 0})));
  CHECK(t.rank() == 3);
}
