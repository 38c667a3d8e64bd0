#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "easi/linalg.hpp"
#include "easi/rng.hpp"
#include "support.hpp"

using easi::Mat;
using easi::Vec;

TEST_CASE("vector construction validates length and finiteness") {
  CHECK_THROWS_AS(Vec<float>(std::vector<float>{}), std::invalid_argument);
  CHECK_THROWS_AS(Vec<float>({1.0f, std::numeric_limits<float>::quiet_NaN()}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Vec<float>({std::numeric_limits<float>::infinity()}), std::invalid_argument);
  const Vec<float> v{1.0f, -2.0f};
  CHECK(v.len() == 2);
  CHECK(v[1] == -2.0f);
}

TEST_CASE("matrix construction validates shape and finiteness") {
  CHECK_THROWS_AS(Mat<float>(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(Mat<float>(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(Mat<float>(2, 2, {1.0f, 2.0f, 3.0f}), std::invalid_argument);
  CHECK_THROWS_AS(Mat<float>({{1.0f, 2.0f}, {3.0f}}), std::invalid_argument);
  CHECK_THROWS_AS(Mat<float>({{1.0f}, {std::numeric_limits<float>::quiet_NaN()}}),
                  std::invalid_argument);
  const Mat<float> m{{1.0f, 2.0f}, {3.0f, 4.0f}};
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 2);
  CHECK(m(1, 0) == 3.0f);
}

TEST_CASE("identity has ones on the diagonal and zeros elsewhere") {
  const Mat<float> eye = Mat<float>::identity(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(eye(i, j) == (i == j ? 1.0f : 0.0f));
}

TEST_CASE("matvec identity, hand example, annihilator") {
  const Vec<float> v{1.0f, 2.0f, 3.0f};
  CHECK(matvec(Mat<float>::identity(3), v) == v);

  const Mat<float> m{{1.0f, 0.0f, 1.0f}, {0.0f, 1.0f, -1.0f}};
  CHECK(matvec(m, v) == Vec<float>{4.0f, -1.0f});

  CHECK(matvec(Mat<float>(2, 3), v) == Vec<float>(2));

  CHECK_THROWS_AS(matvec(m, Vec<float>{1.0f, 2.0f}), std::invalid_argument);
}

TEST_CASE("outer basis vectors, hand example, annihilator") {
  CHECK(outer(Vec<float>{1.0f, 0.0f}, Vec<float>{0.0f, 1.0f}) ==
        Mat<float>{{0.0f, 1.0f}, {0.0f, 0.0f}});
  CHECK(outer(Vec<float>{1.0f, 2.0f}, Vec<float>{1.0f, 2.0f}) ==
        Mat<float>{{1.0f, 2.0f}, {2.0f, 4.0f}});
  CHECK(outer(Vec<float>{3.0f, -7.0f}, Vec<float>(2)) == Mat<float>(2, 2));
}

TEST_CASE("outer transpose symmetry is element-wise exact") {
  easi::SplitMix rng(0x0eed01u);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec<float> u = support::rand_vec(5, rng);
    const Vec<float> v = support::rand_vec(3, rng);
    const Mat<float> a = transpose(outer(u, v));
    const Mat<float> b = outer(v, u);
    REQUIRE(support::bit_equal(a, b));
  }
}

TEST_CASE("mat_combine cancellation, convex identity, hand example") {
  const Mat<float> eye = Mat<float>::identity(2);
  const Mat<float> neg = scale(-1.0f, eye);
  CHECK(mat_combine(1.0f, eye, 1.0f, neg) == Mat<float>(2, 2));
  CHECK(mat_combine(0.5f, eye, 0.5f, eye) == eye);
  CHECK(mat_combine(2.0f, Mat<float>{{1.0f, 2.0f}, {3.0f, 4.0f}}, 1.0f, eye) ==
        Mat<float>{{3.0f, 4.0f}, {6.0f, 9.0f}});
  CHECK_THROWS_AS(mat_combine(1.0f, eye, 1.0f, Mat<float>(3, 2)), std::invalid_argument);
}

TEST_CASE("mat_combine is exact on small integers") {
  easi::SplitMix rng(0x0eed02u);
  for (int trial = 0; trial < 50; ++trial) {
    Mat<float> a(3, 4), b(3, 4);
    Mat<float> expect(3, 4);
    const auto alpha = static_cast<float>(static_cast<std::int64_t>(rng.next() % 9) - 4);
    const auto beta = static_cast<float>(static_cast<std::int64_t>(rng.next() % 9) - 4);
    for (std::size_t i = 0; i < a.data().size(); ++i) {
      const auto ai = static_cast<std::int64_t>(rng.next() % 41) - 20;
      const auto bi = static_cast<std::int64_t>(rng.next() % 41) - 20;
      a.data()[i] = static_cast<float>(ai);
      b.data()[i] = static_cast<float>(bi);
      expect.data()[i] = static_cast<float>(static_cast<std::int64_t>(alpha) * ai +
                                            static_cast<std::int64_t>(beta) * bi);
    }
    REQUIRE(mat_combine(alpha, a, beta, b) == expect);
  }
}

TEST_CASE("matmul identity, swap involution, hand example") {
  const Mat<float> m{{1.5f, -2.0f}, {0.25f, 4.0f}};
  CHECK(matmul(Mat<float>::identity(2), m) == m);
  CHECK(matmul(m, Mat<float>::identity(2)) == m);

  const Mat<float> swap{{0.0f, 1.0f}, {1.0f, 0.0f}};
  CHECK(matmul(swap, swap) == Mat<float>::identity(2));

  CHECK(matmul(Mat<float>{{1.0f, 1.0f}, {0.0f, 1.0f}}, Mat<float>{{1.0f, 0.0f}, {1.0f, 1.0f}}) ==
        Mat<float>{{2.0f, 1.0f}, {1.0f, 1.0f}});

  CHECK_THROWS_AS(matmul(Mat<float>(2, 3), Mat<float>(2, 3)), std::invalid_argument);
}

TEST_CASE("matvec composition matches matmul within 4 ulps per element") {
  easi::SplitMix rng(0x0eed03u);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.next() % 16;
    const std::size_t k = 1 + rng.next() % 16;
    const std::size_t m = 1 + rng.next() % 16;
    const Mat<float> a = support::rand_mat(n, k, rng, 0.5, 1.0);
    const Mat<float> b = support::rand_mat(k, m, rng, 0.5, 1.0);
    const Vec<float> v = support::rand_vec(m, rng, 0.5, 1.0);
    const Vec<float> fused = matvec(matmul(a, b), v);
    const Vec<float> nested = matvec(a, matvec(b, v));
    for (std::size_t i = 0; i < n; ++i)
      REQUIRE(support::ulp_distance(fused[i], nested[i]) <= 4);
  }
}

TEST_CASE("transpose is an involution") {
  easi::SplitMix rng(0x0eed04u);
  const Mat<float> m = support::rand_mat(4, 7, rng);
  CHECK(support::bit_equal(transpose(transpose(m)), m));
}

TEST_CASE("casts preserve values across precisions") {
  const Mat<float> m{{0.5f, -1.25f}, {3.0f, 0.0f}};
  const Mat<double> d = easi::mat_cast<double>(m);
  CHECK(d(0, 1) == -1.25);
  CHECK(easi::mat_cast<float>(d) == m);

  const Vec<double> v{0.125, -7.5};
  CHECK(easi::vec_cast<float>(v) == Vec<float>{0.125f, -7.5f});
}
