#pragma once

// Counterterms for derivatives of a fundamental solution v of Q = box + m^2
// (Q v = c delta), and the map chi computed two ways: from projection
// polynomials, and from the closed combinatorial formula.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "onshell/deltaspace.hpp"
#include "onshell/opalg.hpp"
#include "onshell/spectral.hpp"

namespace onshell {

struct ChiConfig {
  std::size_t n = 4;
  Metric metric = Metric::minkowski(4);
  Rational m2 = 0;
  /// Degree of divergence of v.
  int deg_v = -2;

  static ChiConfig make(std::size_t n, const Metric& g, const Rational& m2) { return {n, g, m2, -2}; }
};

/// Polynomial in d_0 .. d_{n-1} with constant coefficients. The exponent
/// vector of each monomial is the derivative multi-index.
class ConstCoeffOperator {
 public:
  ConstCoeffOperator() = default;
  explicit ConstCoeffOperator(std::size_t n) : p_(n) {}
  explicit ConstCoeffOperator(Polynomial p) : p_(std::move(p)) {}
  static ConstCoeffOperator constant(std::size_t n, const Scalar& c);
  /// d_{mu_1} ... d_{mu_k}; throws kIndexOutOfRange.
  static ConstCoeffOperator monomial(std::size_t n, const std::vector<std::size_t>& indices);
  /// box + m2 = sum_mu g^{mu mu} d_mu^2 + m2
  static ConstCoeffOperator wave(const ChiConfig& cfg);

  [[nodiscard]] std::size_t dim() const { return p_.dim(); }
  [[nodiscard]] const Polynomial& symbol() const { return p_; }
  [[nodiscard]] bool is_zero() const { return p_.is_zero(); }
  /// Highest derivative order; -1 for zero.
  [[nodiscard]] int order() const;
  [[nodiscard]] OperatorExpr to_operator() const;

  ConstCoeffOperator& operator+=(const ConstCoeffOperator& o) {
    p_ += o.p_;
    return *this;
  }
  ConstCoeffOperator& operator-=(const ConstCoeffOperator& o) {
    p_ -= o.p_;
    return *this;
  }
  friend ConstCoeffOperator operator+(ConstCoeffOperator a, const ConstCoeffOperator& b) { return a += b; }
  friend ConstCoeffOperator operator-(ConstCoeffOperator a, const ConstCoeffOperator& b) { return a -= b; }
  friend ConstCoeffOperator operator*(const ConstCoeffOperator& a, const ConstCoeffOperator& b) {
    return ConstCoeffOperator(a.p_ * b.p_);
  }
  friend ConstCoeffOperator operator*(const Scalar& s, const ConstCoeffOperator& a) { return ConstCoeffOperator(s * a.p_); }
  friend bool operator==(const ConstCoeffOperator&, const ConstCoeffOperator&) = default;

  /// "d0^2 - 1/4*d1^2 + 3", highest order first; "0" for zero.
  [[nodiscard]] std::string str() const;

 private:
  Polynomial p_;
};

/// Exact quotient a / b with zero remainder, or nothing. Division is by the
/// leading graded term of b.
std::optional<ConstCoeffOperator> divide_exact(const ConstCoeffOperator& a, const ConstCoeffOperator& b);

struct ChiResult {
  ConstCoeffOperator source;
  ConstCoeffOperator chi;
  ConstCoeffOperator chi1;
  /// Counterterm degree order(S) + deg_v (negative: no counterterm).
  int s = 0;
  std::string provenance;
  /// "d0^2 - 1/4*(box)", where (box) stands for box + m2.
  [[nodiscard]] std::string str() const;
};

/// Caches the level-s data (Q|_s, (Q|_s)*, p_s) for a fixed configuration.
/// After prepare(s_max) the const members may be called concurrently.
class ChiEngine {
 public:
  explicit ChiEngine(ChiConfig cfg);
  [[nodiscard]] const ChiConfig& config() const { return cfg_; }
  void prepare(int s_max);

  /// Delta-supported part of Theta(S): sum_{k>=1} c_k B^{k-1} (Q|_s)* (c S delta).
  /// Throws kInternal if level s was not prepared.
  [[nodiscard]] DeltaVector theta_counterterm(const ConstCoeffOperator& s_op, const Scalar& c) const;
  /// chi1 delta = theta / c, chi = S + chi1 (box + m2). Throws kInvalidArgument for c = 0.
  [[nodiscard]] ChiResult chi_projection(const ConstCoeffOperator& s_op, const Scalar& c = Scalar(1)) const;

 private:
  struct Level {
    RestrictionMatrix a;
    RestrictionMatrix a_star;
    ExactPolynomial p;
  };

  ChiConfig cfg_;
  OperatorExpr q_;
  std::map<int, Level> levels_;
};

DeltaVector theta_counterterm(const ConstCoeffOperator& s_op, const Scalar& c, const ChiConfig& cfg);
ChiResult chi_projection(const ConstCoeffOperator& s_op, const Scalar& c, const ChiConfig& cfg);

struct Contraction {
  Scalar weight;
  std::vector<std::size_t> rest;
};

/// One entry per pair i < j: g_{mu_i mu_j} and the indices with both removed.
std::vector<Contraction> lambda_contraction(const std::vector<std::size_t>& indices, const Metric& g);

/// alpha_j^k as an operator in box and m2; the identity for j = 0.
/// Throws kInvalidArgument unless 0 <= j <= k/2, kVanishingDenominator on a zero factor.
ConstCoeffOperator alpha_coefficient(int j, int k, const ChiConfig& cfg);

/// sum_j alpha_j^k (1/j!) Lambda^j (d_{mu_1} ... d_{mu_k}), j = 0 term the bare monomial.
ConstCoeffOperator chi_explicit(const std::vector<std::size_t>& indices, const ChiConfig& cfg);
/// chi = S + chi1 (box + m2) with chi1 recovered by exact division.
ChiResult chi_explicit_result(const std::vector<std::size_t>& indices, const ChiConfig& cfg);

struct ChiMismatch {
  std::vector<std::size_t> indices;
  Rational m2;
  ConstCoeffOperator projection;
  ConstCoeffOperator explicit_formula;
};

struct ChiCrosscheckReport {
  std::size_t checked = 0;
  std::vector<ChiMismatch> mismatches;
  [[nodiscard]] bool passed() const { return mismatches.empty(); }
};

/// Non-decreasing index tuples of length <= k_max over {0..n-1}.
std::vector<std::vector<std::size_t>> index_tuples(std::size_t n, int k_max);

using ExplicitRoute = std::function<ConstCoeffOperator(const std::vector<std::size_t>&, const ChiConfig&)>;

/// Both routes on every tuple and every m2. Tuples run in parallel, merged in
/// order. The explicit route can be swapped out to test the detector.
ChiCrosscheckReport chi_crosscheck(int k_max, std::size_t n, const std::vector<Rational>& m2s, const Metric& g,
                                   const ExplicitRoute& route = chi_explicit);

namespace serial {
ChiCrosscheckReport chi_crosscheck(int k_max, std::size_t n, const std::vector<Rational>& m2s, const Metric& g,
                                   const ExplicitRoute& route = chi_explicit);
}  // namespace serial

}  // namespace onshell
