#include <doctest.h>

#include "onshell/degree.hpp"
#include "onshell/spectral.hpp"
#include "support.hpp"

using namespace onshell;

namespace {

DegreeBound exact(int d) { return {Degree(d), true}; }
DegreeBound bound(int d) { return {Degree(d), false}; }

}  // namespace

TEST_SUITE("degree") {
  TEST_CASE("deg_delta examples") {
    CHECK(deg_delta(DeltaVector::basis(MultiIndex(4), Scalar(1))) == exact(0));
    CHECK(deg_delta(DeltaVector::basis(MultiIndex{2, 1}, Scalar(1))) == exact(3));
    auto zero = deg_delta(DeltaVector(2));
    CHECK_FALSE(zero.value.is_finite());
    CHECK(zero.exact);
    DeltaVector mixed(2);
    mixed.add(MultiIndex{0, 1}, Scalar(2));
    mixed.add(MultiIndex{3, 0}, Scalar(0, 1));
    mixed.add(MultiIndex{3, 0}, Scalar(0, -1));
    CHECK(deg_delta(mixed) == exact(1));
  }

  TEST_CASE("propagation rules") {
    CHECK(bound_derivative(exact(-2), MultiIndex{2, 0, 0, 0}) == bound(0));
    CHECK(bound_monomial(exact(0), MultiIndex{0, 1}) == bound(-1));
    CHECK(bound_vanishing_factor(exact(3), 2) == bound(1));
    CHECK(bound_tensor(exact(-2), 2, exact(-3), 3) == bound(-5));
    CHECK(bound_tensor(bound(1), 1, bound(4), 3) == bound(5));
    CHECK_FALSE(bound_tensor({Degree::minus_infinity(), true}, 1, exact(0), 1).value.is_finite());
    CHECK_THROWS_AS((void)bound_vanishing_factor(exact(0), -1), Error);

    CHECK(bound_operator(exact(-2), dalembert(4, 1, Metric::minkowski(4))) == bound(0));
    CHECK(bound_operator(exact(0), euler(4, Scalar(-2))) == bound(0));
    CHECK_FALSE(bound_operator({Degree::minus_infinity(), true}, euler(2, Scalar(0))).value.is_finite());
    CHECK(bound_derivative({Degree::minus_infinity(), true}, MultiIndex{1}).value == Degree::minus_infinity());
  }

  TEST_CASE("str") {
    CHECK(exact(3).str() == "3 (exact)");
    CHECK(bound(-1).str() == "-1 (upper bound)");
  }

  TEST_CASE("exact recomputation stays under the operator bound") {
    testing::Gen g(71);
    for (const auto& entry : testing::operator_corpus(g, 40)) {
      const std::size_t n = entry.q.dim();
      for (int t = 0; t < 4; ++t) {
        DeltaVector v = g.delta(n, entry.r, 3);
        auto before = deg_delta(v);
        auto after = deg_delta(apply_delta(entry.q, v));
        auto predicted = bound_operator(before, entry.q);
        CHECK(after.exact);
        CHECK_FALSE(predicted.exact);
        CHECK(after.value <= predicted.value);
      }
    }
  }

  TEST_CASE("derivative and monomial rules hold on deltas") {
    testing::Gen g(5);
    for (int t = 0; t < 100; ++t) {
      std::size_t n = static_cast<std::size_t>(g.uniform(1, 3));
      DeltaVector v = g.delta(n, 3, 3);
      MultiIndex gamma = g.multi_index(n, 2);
      OperatorExpr d = OperatorExpr::derivative(gamma);
      CHECK(deg_delta(apply_delta(d, v)).value <= bound_derivative(deg_delta(v), gamma).value);
      OperatorExpr x = OperatorExpr::multiplication(Polynomial::basis(gamma, Scalar(1)));
      CHECK(deg_delta(apply_delta(x, v)).value <= bound_monomial(deg_delta(v), gamma).value);
    }
  }

  TEST_CASE("rules are monotone in d") {
    testing::Gen g(9);
    auto q = casimir(3, Metric::minkowski(3));
    for (int t = 0; t < 100; ++t) {
      int a = g.uniform(-6, 6), b = g.uniform(-6, 6);
      if (a > b) std::swap(a, b);
      MultiIndex m = g.multi_index(3, 3);
      int k = g.uniform(0, 3);
      std::size_t n1 = static_cast<std::size_t>(g.uniform(1, 4));
      CHECK(bound_derivative(exact(a), m).value <= bound_derivative(exact(b), m).value);
      CHECK(bound_monomial(exact(a), m).value <= bound_monomial(exact(b), m).value);
      CHECK(bound_vanishing_factor(exact(a), k).value <= bound_vanishing_factor(exact(b), k).value);
      CHECK(bound_tensor(exact(a), n1, exact(0), 2).value <= bound_tensor(exact(b), n1, exact(0), 2).value);
      CHECK(bound_operator(exact(a), q).value <= bound_operator(exact(b), q).value);
    }
  }
}
