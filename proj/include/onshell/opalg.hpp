#pragma once

// Operators on distributions: finite sums of a(x) d^gamma P_L, where a is a
// polynomial, d^gamma a partial derivative monomial and P_L the pullback
// (P_L u)(x) = u(Lx) by an invertible rational matrix L (identity = no pullback).

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "onshell/deltaspace.hpp"
#include "onshell/multi_index.hpp"
#include "onshell/scalar.hpp"

namespace onshell {

/// Invertible n x n rational matrix, row-major.
class LinearMap {
 public:
  LinearMap() = default;
  LinearMap(std::size_t n, std::vector<Rational> entries);
  static LinearMap identity(std::size_t n);
  static LinearMap scaled_identity(std::size_t n, const Rational& s);

  [[nodiscard]] std::size_t dim() const { return n_; }
  [[nodiscard]] const Rational& at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  [[nodiscard]] const std::vector<Rational>& entries() const { return a_; }
  [[nodiscard]] bool is_identity() const;
  [[nodiscard]] Rational det() const;
  /// Throws kSingularMatrix.
  [[nodiscard]] LinearMap inverse() const;

  friend LinearMap operator*(const LinearMap& a, const LinearMap& b);
  friend bool operator==(const LinearMap& a, const LinearMap& b) { return a.n_ == b.n_ && a.a_ == b.a_; }
  /// Identity sorts first, then lexicographic on entries.
  friend bool operator<(const LinearMap& a, const LinearMap& b);

 private:
  std::size_t n_ = 0;
  std::vector<Rational> a_;
};

/// f(Lx)
Polynomial compose_linear(const Polynomial& f, const LinearMap& L);

/// Diagonal metric, entries +1/-1. Default is diag(+1, -1, ..., -1).
class Metric {
 public:
  explicit Metric(std::vector<int> signs);
  static Metric minkowski(std::size_t n);
  /// Parses "+---"; throws kInvalidArgument.
  static Metric parse(const std::string& text);

  [[nodiscard]] std::size_t dim() const { return s_.size(); }
  [[nodiscard]] int operator[](std::size_t mu) const { return s_[mu]; }
  [[nodiscard]] std::string str() const;
  friend bool operator==(const Metric&, const Metric&) = default;

 private:
  std::vector<int> s_;
};

struct TermKey {
  LinearMap pullback;
  MultiIndex derivative;
};

struct TermKeyLess {
  bool operator()(const TermKey& a, const TermKey& b) const;
};

/// One a(x) d^gamma P_L summand; pullback empty means identity.
struct OperatorTerm {
  Polynomial coefficient;
  MultiIndex derivative;
  std::optional<LinearMap> pullback;
};

/// Operator in normal form: coefficients left, derivatives middle, at most one
/// pullback on the right. Every constructor and operation returns normal form,
/// so equal operators compare equal.
class OperatorExpr {
 public:
  using Map = std::map<TermKey, Polynomial, TermKeyLess>;

  OperatorExpr() = default;
  /// The zero operator on R^n.
  explicit OperatorExpr(std::size_t n) : n_(n) {}

  static OperatorExpr from_terms(std::size_t n, const std::vector<OperatorTerm>& terms);
  static OperatorExpr identity(std::size_t n) { return scalar(n, Scalar(1)); }
  static OperatorExpr scalar(std::size_t n, const Scalar& c);
  static OperatorExpr multiplication(const Polynomial& a);
  static OperatorExpr derivative(const MultiIndex& gamma);
  static OperatorExpr pullback(const LinearMap& L);

  [[nodiscard]] std::size_t dim() const { return n_; }
  [[nodiscard]] const Map& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] bool has_pullback() const;
  /// Highest derivative order appearing.
  [[nodiscard]] int differential_order() const;

  [[nodiscard]] OperatorExpr conj() const;

  OperatorExpr& operator+=(const OperatorExpr& o);
  OperatorExpr& operator-=(const OperatorExpr& o);
  OperatorExpr& operator*=(const Scalar& s);

  friend OperatorExpr operator+(OperatorExpr a, const OperatorExpr& b) { return a += b; }
  friend OperatorExpr operator-(OperatorExpr a, const OperatorExpr& b) { return a -= b; }
  friend OperatorExpr operator-(OperatorExpr a) { return a *= Scalar(-1); }
  friend OperatorExpr operator*(const Scalar& s, OperatorExpr a) { return a *= s; }
  /// Composition a o b.
  friend OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b);

  friend bool operator==(const OperatorExpr& a, const OperatorExpr& b);
  friend bool operator!=(const OperatorExpr& a, const OperatorExpr& b) { return !(a == b); }
  /// Arbitrary total order, for use as a map key.
  friend bool operator<(const OperatorExpr& a, const OperatorExpr& b);

 private:
  void add_term(const TermKey& key, const Polynomial& coeff);

  std::size_t n_ = 0;
  Map terms_;
};

OperatorExpr power(const OperatorExpr& q, int k);

/// Drops zero terms and merges equal keys. Idempotent.
OperatorExpr normal_form(const OperatorExpr& q);

/// <Qu, phi> = <u, Q^t phi>. (a d^g)^t = (-1)^|g| d^g o a, P_L^t = |det L|^-1 P_{L^-1}.
OperatorExpr transpose(const OperatorExpr& q);

struct EssentialOrder {
  int q = 0;
  /// False when q is only a certified upper bound.
  bool exact = true;
  /// max(0, max_{|alpha|<=probe} deg(Q delta^(alpha)) - |alpha|): a lower bound.
  int observed = 0;
};

/// q = max(0, max over terms of |gamma| - vanishing order of a at 0).
EssentialOrder essential_order(const OperatorExpr& q, int probe_depth = 2);

/// Q applied to v in D'({0}).
DeltaVector apply_delta(const OperatorExpr& q, const DeltaVector& v);

/// Q applied to a polynomial (as a function).
Polynomial apply_poly(const OperatorExpr& q, const Polynomial& f);

/// P_L delta^(alpha).
DeltaVector pullback_delta(const LinearMap& L, const MultiIndex& alpha);

bool operator_equal(const OperatorExpr& a, const OperatorExpr& b);
/// a o b - b o a
OperatorExpr commutator(const OperatorExpr& a, const OperatorExpr& b);

/// sum x_i d_i - a
OperatorExpr euler(std::size_t n, const Scalar& a);
/// g^{mu mu} d_mu^2 + m2
OperatorExpr dalembert(std::size_t n, const Rational& m2, const Metric& g);
/// L_{mu nu} = x_mu d_nu - x_nu d_mu with x_mu = g_{mu mu} x^mu (indices 0-based)
OperatorExpr lorentz_generator(std::size_t n, std::size_t mu, std::size_t nu, const Metric& g);
/// sum_{mu,nu} L_{mu nu} L^{mu nu}
OperatorExpr casimir(std::size_t n, const Metric& g);
/// Throws kSingularMatrix.
OperatorExpr reflection(const LinearMap& L);
/// u |-> u(-x)
OperatorExpr parity(std::size_t n);
OperatorExpr monomial_derivative(const MultiIndex& gamma);

}  // namespace onshell
