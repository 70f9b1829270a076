#pragma once

// Restrictions Q|_r : D'({0})_{<=r} -> D'({0})_{<=r+q} as exact matrices, their
// adjoints for (.|.)_r, and the polynomial projections built from them.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "onshell/deltaspace.hpp"
#include "onshell/matrix.hpp"
#include "onshell/opalg.hpp"

namespace onshell {

struct RestrictionMatrix {
  std::size_t n = 0;
  int r_domain = 0;
  int r_codomain = 0;
  Matrix m;
  /// What the matrix came from: "restrict", "adjoint", "product", "projector", "matrix".
  std::string tag;

  [[nodiscard]] Basis domain_basis() const { return {n, r_domain}; }
  [[nodiscard]] Basis codomain_basis() const { return {n, r_codomain}; }
  [[nodiscard]] bool is_square() const { return r_domain == r_codomain; }
  [[nodiscard]] DeltaVector apply(const DeltaVector& v) const;
};

/// alpha! for each basis element: the Gram weights of (.|.)_r.
std::vector<Rational> factorial_weights(const Basis& basis);

/// Q|_r with codomain order r + essential_order(Q).q. Columns are built in parallel.
RestrictionMatrix restriction(const OperatorExpr& q, int r);
/// (Q|_r)* = T_r conj(Q)^t S_{r+q}, built column by column from apply_poly.
RestrictionMatrix adjoint_restriction(const OperatorExpr& q, int r);
/// Adjoint of any restriction-shaped matrix via the factorial weights.
RestrictionMatrix adjoint(const RestrictionMatrix& m);
/// a * b (b first). Requires b.r_codomain == a.r_domain.
RestrictionMatrix compose(const RestrictionMatrix& a, const RestrictionMatrix& b);

namespace serial {
RestrictionMatrix restriction(const OperatorExpr& q, int r);
RestrictionMatrix adjoint_restriction(const OperatorExpr& q, int r);
}  // namespace serial

/// Univariate polynomial over Scalars, constant term first, no trailing zeros.
class ExactPolynomial {
 public:
  ExactPolynomial() = default;
  explicit ExactPolynomial(std::vector<Scalar> coeffs);
  static ExactPolynomial constant(const Scalar& c) { return ExactPolynomial({c}); }
  /// z
  static ExactPolynomial variable() { return ExactPolynomial({Scalar(0), Scalar(1)}); }

  [[nodiscard]] const std::vector<Scalar>& coeffs() const { return c_; }
  /// -1 for the zero polynomial.
  [[nodiscard]] int degree() const { return static_cast<int>(c_.size()) - 1; }
  [[nodiscard]] bool is_zero() const { return c_.empty(); }
  [[nodiscard]] Scalar coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Scalar(); }
  [[nodiscard]] Scalar operator()(const Scalar& z) const;
  [[nodiscard]] Matrix operator()(const Matrix& m) const;
  [[nodiscard]] bool is_real() const;
  /// Exact division with zero remainder; throws kInternal otherwise.
  [[nodiscard]] ExactPolynomial divide_exact(const ExactPolynomial& d) const;
  /// gcd(p, p') is constant.
  [[nodiscard]] bool is_squarefree() const;
  [[nodiscard]] ExactPolynomial derivative() const;

  friend ExactPolynomial operator*(const ExactPolynomial& a, const ExactPolynomial& b);
  friend ExactPolynomial operator+(const ExactPolynomial& a, const ExactPolynomial& b);
  friend ExactPolynomial operator*(const Scalar& s, const ExactPolynomial& p);
  friend bool operator==(const ExactPolynomial&, const ExactPolynomial&) = default;

  /// "1 - 4*z + 3/2*z^2"; "0" for zero.
  [[nodiscard]] std::string str() const;

 private:
  void trim();
  std::vector<Scalar> c_;
};

/// Polynomial remainder and gcd (monic), used for squarefree checks.
ExactPolynomial remainder(const ExactPolynomial& a, const ExactPolynomial& b);
ExactPolynomial gcd(ExactPolynomial a, ExactPolynomial b);

/// Monic minimal polynomial via Krylov sequences of the unit vectors.
ExactPolynomial minimal_polynomial(const Matrix& m);
ExactPolynomial minimal_polynomial(const RestrictionMatrix& m);

/// B = (Q|_r)*(Q|_r).
RestrictionMatrix gram_operator(const OperatorExpr& q, int r);

/// p_r = g/g(0) where g is minpoly(B) with one factor z removed (if present).
ExactPolynomial projection_polynomial(const OperatorExpr& q, int r);
ExactPolynomial projection_polynomial_of(const Matrix& b);

std::vector<DeltaVector> kernel_basis(const RestrictionMatrix& m);

struct RangeMembership {
  bool member = false;
  /// Set when member: m * preimage = w.
  DeltaVector preimage;
  /// Set when not member: a kernel vector of m* with (witness | w) != 0.
  DeltaVector witness;
};

/// Throws kDimensionMismatch / kDegreeOverflow if w does not fit the codomain.
RangeMembership range_membership(const RestrictionMatrix& m, const DeltaVector& w);

/// p_r(B) on D'({0})_{<=r}: the orthogonal projection onto ker(Q|_r).
RestrictionMatrix projector_onto_kernel(const OperatorExpr& q, int r);

bool is_self_adjoint(const RestrictionMatrix& m);
/// m m* == m* m; false for non-square shapes.
bool is_normal(const RestrictionMatrix& m);

/// Minimal-norm v with m v = orthogonal projection of w onto Ran m.
/// Throws kNonNormal unless m is normal.
DeltaVector pseudoinverse_correction(const RestrictionMatrix& m, const DeltaVector& w);

/// v = sum_{k>=1} c_k B^{k-1} A* w for p = 1 + sum c_k z^k, B = A* A.
/// Then w + A v is the orthogonal projection of w onto (Ran A)^perp.
Vector projection_counterterm(const Matrix& a, const Matrix& a_star, const ExactPolynomial& p, const Vector& w);

}  // namespace onshell
