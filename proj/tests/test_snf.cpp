#include <catch2/catch_amalgamated.hpp>

#include "fkt/snf.hpp"
#include "test_util.hpp"

using namespace fkt;
using namespace fkt::testutil;

namespace {

void check_snf(const Mat& M) {
  SmithForm s = smith_normal_form(M);
  REQUIRE(s.U * M * s.V == s.D);
  REQUIRE(s.U * s.Uinv == Mat::identity(M.rows()));
  REQUIRE(s.V * s.Vinv == Mat::identity(M.cols()));
  REQUIRE(is_unimodular(s.U));
  REQUIRE(is_unimodular(s.V));
  // diagonal with divisibility chain
  for (std::size_t i = 0; i < s.D.rows(); ++i)
    for (std::size_t j = 0; j < s.D.cols(); ++j)
      if (i != j) REQUIRE(s.D(i, j) == 0);
  for (std::size_t i = 0; i + 1 < s.diag_len(); ++i) {
    REQUIRE(s.diag(i) >= 0);
    if (s.diag(i) == 0) REQUIRE(s.diag(i + 1) == 0);
    else REQUIRE(s.diag(i + 1) % s.diag(i) == 0);
  }
}

}  // namespace

TEST_CASE("snf of [[2,4],[6,8]] is diag(2,4)") {
  Mat m(2, 2, {2, 4, 6, 8});
  SmithForm s = smith_normal_form(m);
  check_snf(m);
  REQUIRE(s.diag(0) == 2);
  REQUIRE(s.diag(1) == 4);
}

TEST_CASE("snf of identity is identity") {
  Mat m = Mat::identity(2);
  SmithForm s = smith_normal_form(m);
  REQUIRE(s.D == Mat::identity(2));
  check_snf(m);
}

TEST_CASE("snf of empty matrix") {
  Mat m(0, 0);
  SmithForm s = smith_normal_form(m);
  REQUIRE(s.D.rows() == 0);
  REQUIRE(s.D.cols() == 0);
  REQUIRE(s.U.rows() == 0);
  REQUIRE(s.V.rows() == 0);
}

TEST_CASE("snf of zero and rectangular shapes") {
  check_snf(Mat(3, 2));
  check_snf(Mat(1, 4, {0, 0, 3, 0}));
  check_snf(Mat(2, 3, {1, 2, 3, 4, 5, 6}));
  check_snf(Mat(3, 0));
  check_snf(Mat(0, 3));
}

TEST_CASE("snf agrees with the minor-gcd oracle on random matrices") {
  std::mt19937_64 rng(20240817);
  for (int t = 0; t < 60; ++t) {
    std::uniform_int_distribution<std::size_t> dim(1, 4);
    Mat m = random_matrix(rng, dim(rng), dim(rng), -5, 5);
    check_snf(m);
    std::vector<Int> expect = minor_gcd_invariant_factors(m);
    std::vector<Int> got = invariant_factors(m);
    REQUIRE(got == expect);
  }
}

TEST_CASE("solve_integer finds solutions and detects unsolvability") {
  Mat m(2, 2, {2, 0, 0, 3});
  auto x = solve_integer(m, {4, 9});
  REQUIRE(x.has_value());
  REQUIRE(m.apply(*x) == std::vector<Int>{4, 9});
  REQUIRE(!solve_integer(m, {1, 0}).has_value());
  REQUIRE(!solve_integer(Mat(2, 1, {1, 1}), {1, 2}).has_value());
}

TEST_CASE("kernel_basis spans the integer kernel") {
  Mat m(1, 3, {2, 4, 6});
  Mat k = kernel_basis(m);
  REQUIRE(k.cols() == 2);
  REQUIRE((m * k).is_zero());
  // x = (3, 0, -1) lies in the kernel and must be an integer combination
  Mat stacked = k;
  REQUIRE(solve_integer(stacked, {3, 0, -1}).has_value());
}
