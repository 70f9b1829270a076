#include <doctest.h>

#include "onshell/chi.hpp"
#include "onshell/spectral.hpp"
#include "support.hpp"

using namespace onshell;

namespace {

Matrix random_matrix(testing::Gen& g, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = g.scalar();
  return m;
}

}  // namespace

TEST_SUITE("parallel") {
  TEST_CASE("matmul kernels agree") {
    testing::Gen g(3);
    for (auto [r, k, c] : {std::tuple{1, 1, 1}, {3, 7, 2}, {9, 9, 9}, {20, 13, 17}, {40, 5, 33}}) {
      auto a = random_matrix(g, static_cast<std::size_t>(r), static_cast<std::size_t>(k));
      auto b = random_matrix(g, static_cast<std::size_t>(k), static_cast<std::size_t>(c));
      auto s = serial::matmul(a, b);
      CHECK(parallel::matmul(a, b) == s);
      CHECK(a * b == s);
    }
  }

  TEST_CASE("restriction kernels agree") {
    testing::Gen g(17);
    auto corpus = testing::operator_corpus(g, 30);
    corpus.push_back({casimir(4, Metric::minkowski(4)), 3});
    corpus.push_back({dalembert(4, 2, Metric::parse("-+++")), 3});
    for (const auto& e : corpus) {
      auto p = restriction(e.q, e.r);
      auto s = serial::restriction(e.q, e.r);
      CHECK(p.m == s.m);
      CHECK(p.r_codomain == s.r_codomain);
      CHECK(adjoint_restriction(e.q, e.r).m == serial::adjoint_restriction(e.q, e.r).m);
    }
  }

  TEST_CASE("crosscheck reports agree under both signatures") {
    for (const char* sig : {"+---", "-+++"}) {
      Metric g = Metric::parse(sig);
      std::vector<Rational> m2s = {Rational(0), Rational(1)};
      auto p = chi_crosscheck(3, 4, m2s, g);
      auto s = serial::chi_crosscheck(3, 4, m2s, g);
      CHECK(p.checked == s.checked);
      REQUIRE(p.mismatches.size() == s.mismatches.size());
      for (std::size_t i = 0; i < p.mismatches.size(); ++i) {
        CHECK(p.mismatches[i].indices == s.mismatches[i].indices);
        CHECK(p.mismatches[i].projection == s.mismatches[i].projection);
      }
    }
  }
}
