// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "macrocap/combinatorics.hpp"
#include "macrocap/linalg.hpp"
#include "macrocap/rng.hpp"
#include "oracles.hpp"

using namespace macrocap;
using Catch::Approx;

namespace {

RealMatrix random_matrix(int rows, int cols, std::uint64_t seed, double lo = 0.0,
                         double hi = 1.0) {
  const std::uint64_t key = rng::derive_key(seed, 21);
  RealMatrix m(rows, cols);
  std::uint64_t ctr = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = lo + (hi - lo) * rng::uniform(key, ctr++);
  return m;
}

}  // namespace

TEST_CASE("perm_square basics") {
  CHECK(perm_square(RealMatrix{{1.0, 2.0}, {3.0, 4.0}}) == Approx(10.0));
  CHECK(perm_square(RealMatrix::identity(5)) == Approx(1.0));
  CHECK(perm_square(RealMatrix(0, 0)) == 1.0);
  CHECK_THROWS_AS(perm_square(RealMatrix(2, 3)), shape_error);
  CHECK_THROWS_AS(perm_square(RealMatrix(21, 21)), size_error);
}

TEST_CASE("perm_square equals permutation-sum oracle") {
  for (int n : {3, 5, 7}) {
    const RealMatrix a = random_matrix(n, n, 40 + n);
    CHECK(perm_square(a) == Approx(oracles::perm_naive(a)).epsilon(1e-12));
  }
  // exact on integer entries
  RealMatrix z(7, 7);
  const std::uint64_t key = rng::derive_key(4, 2);
  std::uint64_t ctr = 0;
  for (int r = 0; r < 7; ++r)
    for (int c = 0; c < 7; ++c) z(r, c) = std::floor(rng::uniform(key, ctr++) * 10.0);
  CHECK(perm_square(z) == oracles::perm_naive(z));
}

TEST_CASE("perm_rect basics") {
  CHECK(perm_rect(RealMatrix{{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}}) == Approx(6.0));
  CHECK(perm_rect(RealMatrix{{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}) == Approx(3.0));
  CHECK_THROWS_AS(perm_rect(RealMatrix(2, 3)), shape_error);

  const RealMatrix sq = random_matrix(4, 4, 8);
  CHECK(perm_rect(sq) == perm_square(sq));

  const RealMatrix tall = random_matrix(6, 3, 9);
  CHECK(perm_rect(tall) == Approx(oracles::perm_rect_naive(tall)).epsilon(1e-12));
}

TEST_CASE("esf values") {
  CHECK(esf({1.0, 2.0, 3.0}, 2) == Approx(11.0));
  CHECK(esf({5.0, -2.0, 7.0, 9.0}, 0) == 1.0);
  CHECK(esf({1.0, 2.0, 3.0}, 4) == 0.0);
  CHECK(esf({2.0, 3.0, 4.0}, 3) == Approx(24.0));
}

TEST_CASE("tr_k values and eigenvalue identity") {
  RealMatrix d(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  d(2, 2) = 3.0;
  CHECK(tr_k(d, 1) == Approx(6.0));
  CHECK(tr_k(d, 2) == Approx(11.0));
  CHECK(tr_k(d, 0) == 1.0);
  CHECK(tr_k(d, 4) == 0.0);

  // random symmetric PSD: Tr_k = e_k(eigenvalues)
  const RealMatrix b = random_matrix(5, 5, 17, -1.0, 1.0);
  RealMatrix s(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      double v = 0.0;
      for (int k = 0; k < 5; ++k) v += b(i, k) * b(j, k);
      s(i, j) = v;
    }
  const EigResult e = hermitian_eig(to_complex(s));
  for (int k = 0; k <= 5; ++k)
    CHECK(tr_k(s, k) == Approx(esf(e.values, k)).epsilon(1e-10).margin(1e-12));
}

TEST_CASE("subset_iter enumeration") {
  std::vector<std::vector<int>> got;
  for (const auto& s : subset_iter(3, 2)) got.push_back(s);
  REQUIRE(got.size() == 3);
  CHECK(got[0] == std::vector<int>{0, 1});
  CHECK(got[1] == std::vector<int>{0, 2});
  CHECK(got[2] == std::vector<int>{1, 2});

  int empties = 0;
  for (const auto& s : subset_iter(5, 0)) {
    CHECK(s.empty());
    ++empties;
  }
  CHECK(empties == 1);

  int count = 0;
  for (const auto& s : subset_iter(10, 4)) {
    (void)s;
    ++count;
  }
  CHECK(count == 210);

  int none = 0;
  for (const auto& s : subset_iter(3, 4)) {
    (void)s;
    ++none;
  }
  CHECK(none == 0);
}

TEST_CASE("permanent axioms") {
  // Axiom 1: the degree-0 subset sum is the empty permanent, exactly 1.
  double a1 = 0.0;
  for (const auto& s : subset_iter(4, 0)) {
    (void)s;
    a1 += perm_rect(RealMatrix(0, 0));
  }
  CHECK(a1 == 1.0);

  // Axiom 2: k-row-subset sums equal k-column-subset sums.
  for (int trial = 0; trial < 50; ++trial) {
    const RealMatrix a = random_matrix(5, 3, 1000 + trial);
    for (int k = 1; k <= 3; ++k) {
      double rows_sum = 0.0;
      for (const auto& rows : subset_iter(5, k)) {
        const RealMatrix sel = a.select_rows(rows);  // k x 3, wide for k<3
        rows_sum += perm_rect(sel.rows() >= sel.cols() ? sel : sel.transposed());
      }
      double cols_sum = 0.0;
      for (const auto& cols : subset_iter(3, k)) {
        const RealMatrix sel = a.select_cols(cols);  // 5 x k, tall
        cols_sum += perm_rect(sel);
      }
      CHECK(rows_sum == Approx(cols_sum).epsilon(1e-12));
    }
  }
}

TEST_CASE("expected Gram determinant is the permanent (Monte Carlo)") {
  // E{|X^H X|} = perm(A) for square X with entry powers A.
  for (int n : {2, 3}) {
    const RealMatrix a = random_matrix(n, n, 600 + n, 0.2, 2.0);
    const auto mc = oracles::mc_gram_det(a, 100000, 77 + n);
    const double want = perm_square(a);
    CHECK(std::abs(mc.mean - want) <= 3.0 * mc.se);
  }

  // diagonal scaling: E{|X^H S X|} = Perm(S A) for diagonal S, tall X
  const RealMatrix a = random_matrix(3, 2, 611, 0.2, 2.0);
  RealMatrix sa = a;
  const double s[3] = {0.5, 1.5, 2.5};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 2; ++c) sa(r, c) *= s[r];
  const std::uint64_t key = rng::derive_key(31, 5);
  std::vector<double> xs(100000);
  for (std::size_t t = 0; t < xs.size(); ++t) {
    const ComplexMatrix x = oracles::gaussian_with_power(a, key, t);
    ComplexMatrix g(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        cplx v(0.0, 0.0);
        for (int r = 0; r < 3; ++r) v += std::conj(x(r, i)) * s[r] * x(r, j);
        g(i, j) = v;
      }
    xs[t] = lu_det(g).real();
  }
  const auto mc = oracles::mean_se(xs);
  CHECK(std::abs(mc.mean - perm_rect(sa)) <= 3.0 * mc.se);
}
