#include <doctest.h>

#include "onshell/spectral.hpp"
#include "support.hpp"

using namespace onshell;

namespace {

Matrix diag(std::initializer_list<Rational> d) {
  Vector v;
  for (const auto& x : d) v.push_back(Scalar(x));
  return Matrix::diagonal(v);
}

DeltaVector d1(int a, const Scalar& c = Scalar(1)) { return DeltaVector::basis(MultiIndex{a}, c); }

RestrictionMatrix wrap(std::size_t n, int r, const Matrix& m) { return {n, r, r, m, "matrix"}; }

// Weighted inner product on coordinate vectors.
Scalar winner(const std::vector<Rational>& w, const Vector& a, const Vector& b) {
  Scalar s;
  for (std::size_t i = 0; i < a.size(); ++i) s += Scalar(w[i]) * a[i].conj() * b[i];
  return s;
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("restriction: examples") {
    CHECK(restriction(euler(1, Scalar(-2)), 1).m == diag({1, 0}));
    CHECK(restriction(OperatorExpr::identity(1) - parity(1), 1).m == diag({0, 2}));
    Rational m2(7, 3);
    RestrictionMatrix box = restriction(dalembert(1, m2, Metric({1})), 0);
    CHECK(box.r_codomain == 2);
    CHECK(box.apply(d1(0)) == d1(2) + d1(0, Scalar(m2)));
    CHECK(box.m.rows() == 3);
    CHECK(box.m.cols() == 1);
  }

  TEST_CASE("restriction: columns are images of basis vectors") {
    testing::Gen g(31);
    for (int t = 0; t < 40; ++t) {
      std::size_t n = static_cast<std::size_t>(g.uniform(1, 3));
      int r = g.uniform(0, 2);
      OperatorExpr q = g.op(n, 2, 2, 2, true);
      RestrictionMatrix m = restriction(q, r);
      Basis dom = m.domain_basis();
      for (std::size_t j = 0; j < dom.size(); ++j) {
        DeltaVector img = testing::oracle_apply_delta(q, DeltaVector::basis(dom[j]), m.r_codomain);
        CHECK(from_coordinates(m.codomain_basis(), m.m.column(j)) == img);
      }
    }
  }

  TEST_CASE("adjoint_restriction: examples") {
    RestrictionMatrix e = restriction(euler(3, Scalar(Rational(-5, 2))), 2);
    CHECK(adjoint_restriction(euler(3, Scalar(Rational(-5, 2))), 2).m == e.m);

    Rational m2(2, 7);
    RestrictionMatrix a = adjoint_restriction(dalembert(1, m2, Metric({1})), 0);
    REQUIRE(a.m.rows() == 1);
    REQUIRE(a.m.cols() == 3);
    CHECK(a.apply(d1(0)) == d1(0, Scalar(m2)));
    CHECK(a.apply(d1(1)).is_zero());
    CHECK(a.apply(d1(2)) == d1(0, Scalar(2)));
  }

  TEST_CASE("adjoint_restriction: massless wave operator is multiplication by x.x") {
    Metric g = Metric::minkowski(3);
    OperatorExpr xx(3);
    for (std::size_t mu = 0; mu < 3; ++mu)
      xx += OperatorExpr::multiplication(Scalar(g[mu]) * power(coordinate(3, mu), 2));
    for (int r = 0; r <= 2; ++r) {
      RestrictionMatrix a = adjoint_restriction(dalembert(3, 0, g), r);
      Basis dom(3, r + 2);
      for (std::size_t j = 0; j < dom.size(); ++j) {
        DeltaVector img = apply_delta(xx, DeltaVector::basis(dom[j]));
        CHECK(a.apply(DeltaVector::basis(dom[j])) == img);
      }
    }
  }

  TEST_CASE("property: adjoint identity and the weighted route") {
    testing::Gen g(32);
    for (int t = 0; t < 60; ++t) {
      std::size_t n = static_cast<std::size_t>(g.uniform(1, 3));
      int r = g.uniform(0, 2);
      OperatorExpr q = g.op(n, 2, 2, g.uniform(1, 3), g.coin(30));
      RestrictionMatrix a = restriction(q, r);
      RestrictionMatrix s = adjoint_restriction(q, r);
      CHECK(adjoint(a).m == s.m);
      int top = a.r_codomain;
      for (int k = 0; k < 3; ++k) {
        DeltaVector v = g.delta(n, top, 3);
        DeltaVector w = g.delta(n, r, 3);
        CHECK(inner(top, v, a.apply(w)) == inner(r, s.apply(v), w));
      }
    }
  }

  TEST_CASE("adjoint_restriction: stable in r when the linearity condition holds") {
    for (auto q : {euler(2, Scalar(-1)), euler(3, Scalar(Rational(1, 3))), dalembert(3, 0, Metric::minkowski(3))}) {
      int qo = essential_order(q, 0).q;
      for (int r = 0; r <= 2; ++r) {
        Matrix small = adjoint_restriction(q, r).m;
        Matrix big = adjoint_restriction(q, r + 1).m;
        // columns of degree <= r + q, rows of degree <= r
        std::size_t cols = basis_dimension(q.dim(), r + qo);
        std::size_t rows = basis_dimension(q.dim(), r);
        Matrix blk = big.block(rows, cols);
        CHECK(blk == small);
      }
    }
  }

  TEST_CASE("minimal_polynomial: examples") {
    CHECK(minimal_polynomial(Matrix::identity(3)) == ExactPolynomial({Scalar(-1), Scalar(1)}));
    ExactPolynomial m = minimal_polynomial(diag({1, 0}));
    CHECK(m == ExactPolynomial({Scalar(0), Scalar(-1), Scalar(1)}));
    CHECK(m(diag({1, 0})).is_zero());
    CHECK_FALSE(ExactPolynomial({Scalar(-1), Scalar(1)})(diag({1, 0})).is_zero());
    CHECK_FALSE(ExactPolynomial::variable()(diag({1, 0})).is_zero());

    RestrictionMatrix r = restriction(euler(4, Scalar(-6)), 2);
    ExactPolynomial b = minimal_polynomial(compose(adjoint(r), r));
    CHECK(b.is_squarefree());
    // roots 0, 1, 4 : z (z - 1) (z - 4)
    ExactPolynomial z = ExactPolynomial::variable();
    CHECK(b == z * (z + ExactPolynomial::constant(Scalar(-1))) * (z + ExactPolynomial::constant(Scalar(-4))));
  }

  TEST_CASE("minimal_polynomial: annihilates and is minimal on random matrices") {
    testing::Gen g(33);
    for (int t = 0; t < 40; ++t) {
      std::size_t k = static_cast<std::size_t>(g.uniform(1, 5));
      Matrix m(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
          if (g.coin(50)) m(i, j) = g.scalar();
      ExactPolynomial p = minimal_polynomial(m);
      CHECK(p.coeff(static_cast<std::size_t>(p.degree())) == Scalar(1));
      CHECK(p(m).is_zero());
      // no proper monic divisor of lower degree annihilates: check p / (z - root) for rational roots is not zero
      // through the degree of the Krylov space of a generic vector
      CHECK(p.degree() <= static_cast<int>(k));
      // the derivative route: every proper factor obtained by dropping one linear factor fails
      for (int c = -5; c <= 5; ++c) {
        ExactPolynomial lin({Scalar(-c), Scalar(1)});
        if (remainder(p, lin).is_zero()) CHECK_FALSE(p.divide_exact(lin)(m).is_zero());
      }
    }
  }

  TEST_CASE("projection_polynomial: examples") {
    CHECK(projection_polynomial(euler(1, Scalar(-2)), 1) == ExactPolynomial({Scalar(1), Scalar(-1)}));
    CHECK(projection_polynomial(euler(1, Scalar(Rational(-1, 2))), 0) == ExactPolynomial({Scalar(1), Scalar(-4)}));
    CHECK(projection_polynomial(OperatorExpr::identity(1) - parity(1), 0) == ExactPolynomial::constant(Scalar(1)));
    CHECK(projection_polynomial(euler(1, Scalar(Rational(-1, 2))), 0).str() == "1 - 4*z");
  }

  TEST_CASE("kernel_basis and range_membership: examples") {
    RangeMembership a = range_membership(restriction(euler(1, Scalar(-1)), 0), d1(0));
    CHECK_FALSE(a.member);
    CHECK(a.witness == d1(0));

    Scalar beta(Rational(3, 4), Rational(-1));
    RangeMembership b = range_membership(restriction(euler(1, Scalar(Rational(-1, 2))), 0), d1(0, beta));
    CHECK(b.member);
    CHECK(b.preimage == d1(0, Scalar(-2) * beta));

    auto k = kernel_basis(restriction(euler(4, Scalar(-6)), 2));
    CHECK(k.size() == 10);
    for (const auto& v : k) {
      CHECK(v.terms().size() == 1);
      CHECK(v.terms().begin()->first.order() == 2);
    }
    CHECK_THROWS_AS(range_membership(restriction(euler(1, Scalar(1)), 0), d1(1)), Error);
  }

  TEST_CASE("projector_onto_kernel: examples") {
    CHECK(projector_onto_kernel(euler(1, Scalar(-2)), 1).m == diag({0, 1}));
    CHECK(projector_onto_kernel(euler(2, Scalar(Rational(1, 2))), 2).m.is_zero());
    CHECK(projector_onto_kernel(OperatorExpr::identity(1) - parity(1), 0).m == Matrix::identity(1));
  }

  TEST_CASE("pseudoinverse_correction: examples") {
    RestrictionMatrix m = wrap(1, 1, diag({1, 0}));
    CHECK(pseudoinverse_correction(m, d1(0)) == d1(0));
    CHECK(pseudoinverse_correction(m, d1(1)).is_zero());
    Scalar beta(Rational(5, 3));
    CHECK(pseudoinverse_correction(wrap(1, 0, diag({Rational(-1, 2)})), d1(0, beta)) == d1(0, Scalar(-2) * beta));
    Matrix nn(2, 2);
    nn(0, 1) = Scalar(1);
    try {
      (void)pseudoinverse_correction(wrap(1, 1, nn), d1(0));
      FAIL("expected kNonNormal");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kNonNormal);
    }
  }

  TEST_CASE("property: projection laws over the corpus") {
    testing::Gen g(34);
    for (const auto& [q, r] : testing::operator_corpus(g, 25)) {
      RestrictionMatrix p = projector_onto_kernel(q, r);
      RestrictionMatrix b = gram_operator(q, r);
      std::vector<Rational> w = factorial_weights(p.domain_basis());
      CHECK(p.m * p.m == p.m);
      CHECK(weighted_adjoint(p.m, w, w) == p.m);
      CHECK((p.m * b.m).is_zero());
      CHECK(projection_polynomial(q, r).coeff(0) == Scalar(1));
      CHECK(minimal_polynomial(b).is_squarefree());
      // P fixes exactly the kernel
      for (const auto& v : kernel_basis(restriction(q, r))) CHECK(p.apply(v) == v);
    }
  }

  TEST_CASE("property: nonzero spectra of A*A and AA* agree") {
    testing::Gen g(35);
    for (const auto& [q, r] : testing::operator_corpus(g, 15)) {
      RestrictionMatrix a = restriction(q, r);
      RestrictionMatrix s = adjoint_restriction(q, r);
      ExactPolynomial m1 = minimal_polynomial(s.m * a.m);
      ExactPolynomial m2 = minimal_polynomial(a.m * s.m);
      ExactPolynomial z = ExactPolynomial::variable();
      while (m1.coeff(0).is_zero() && m1.degree() > 0) m1 = m1.divide_exact(z);
      while (m2.coeff(0).is_zero() && m2.degree() > 0) m2 = m2.divide_exact(z);
      CHECK(m1 == m2);
    }
  }

  TEST_CASE("property: projection_counterterm projects onto the complement of the range") {
    testing::Gen g(36);
    for (const auto& [q, r] : testing::operator_corpus(g, 20)) {
      RestrictionMatrix a = restriction(q, r);
      RestrictionMatrix s = adjoint_restriction(q, r);
      ExactPolynomial p = projection_polynomial(q, r);
      std::vector<Rational> wc = factorial_weights(a.codomain_basis());
      Vector w = coordinates(a.codomain_basis(), g.delta(q.dim(), a.r_codomain, 4));
      Vector v = projection_counterterm(a.m, s.m, p, w);
      Vector corrected = a.m * v;
      for (std::size_t i = 0; i < w.size(); ++i) corrected[i] += w[i];
      CHECK((s.m * corrected) == Vector(v.size()));
      // w - corrected lies in Ran A, orthogonal to corrected
      Vector moved(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) moved[i] = w[i] - corrected[i];
      CHECK(solve(a.m, moved).has_value());
      CHECK(winner(wc, corrected, moved).is_zero());
    }
  }

  TEST_CASE("normality checks") {
    CHECK(is_self_adjoint(restriction(euler(2, Scalar(3)), 2)));
    CHECK(is_normal(restriction(euler(2, Scalar(Rational(1), Rational(1))), 2)));
    CHECK_FALSE(is_self_adjoint(restriction(euler(2, Scalar(Rational(1), Rational(1))), 2)));
    CHECK_FALSE(is_normal(restriction(dalembert(2, 0, Metric::minkowski(2)), 1)));
    CHECK(is_self_adjoint(restriction(casimir(2, Metric::minkowski(2)), 3)));
  }

  TEST_CASE("exact linear algebra helpers") {
    Matrix m(2, 3);
    m(0, 0) = Scalar(1);
    m(0, 1) = Scalar(2);
    m(1, 2) = Scalar(Rational(0), Rational(1));
    CHECK(rank(m) == 2);
    auto k = kernel(m);
    REQUIRE(k.size() == 1);
    CHECK(m * k[0] == Vector(2));
    CHECK(determinant(diag({2, 3})) == Scalar(6));
    CHECK_FALSE(solve(diag({1, 0}), Vector{Scalar(0), Scalar(1)}).has_value());
    CHECK(serial::matmul(m.adjoint(), m) == parallel::matmul(m.adjoint(), m));
  }
}
