#pragma once

// Extensions across the origin, carried only through their residues Q u
// in D'({0}). Everything here is finite linear algebra on those residues.

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "onshell/deltaspace.hpp"
#include "onshell/opalg.hpp"
#include "onshell/spectral.hpp"

namespace onshell {

/// An extension u of degree of divergence r, known through Q u for the
/// registered operators Q. Keys are normal forms, so equal operators share
/// an entry. Non-integer degrees are floored by the caller.
class ExtensionRecord {
 public:
  ExtensionRecord(std::size_t n, int r) : n_(n), r_(r) {}

  [[nodiscard]] std::size_t dim() const { return n_; }
  [[nodiscard]] int degree() const { return r_; }
  [[nodiscard]] const std::map<OperatorExpr, DeltaVector>& residues() const { return residues_; }

  /// Throws kDimensionMismatch, or kDegreeOverflow if deg w > r + q.
  void set_residue(const OperatorExpr& q, const DeltaVector& w);
  [[nodiscard]] bool has_residue(const OperatorExpr& q) const;
  /// Throws kMissingResidue.
  [[nodiscard]] const DeltaVector& residue(const OperatorExpr& q) const;

 private:
  std::size_t n_;
  int r_;
  std::map<OperatorExpr, DeltaVector> residues_;
};

struct ExistenceReport {
  bool exists = false;
  /// Preimage v with Q|_r v = residue when exists; otherwise a vector of
  /// ker (Q|_r)* not orthogonal to the residue.
  DeltaVector certificate;
  std::string criterion;
};

ExistenceReport existence_check(const ExtensionRecord& rec, const OperatorExpr& q);

/// Counterterm v = sum_{k>=1} c_k B^{k-1} (Q|_r)* w for p_r = 1 + sum c_k z^k.
/// The corrected residue w + Q|_r v is checked to be the orthogonal
/// projection of w onto (Ran Q|_r)^perp; kInternal if that ever fails.
DeltaVector onshell_correction(const ExtensionRecord& rec, const OperatorExpr& q);

/// residues[P] += P v for every registered P. Throws kDegreeOverflow if deg v > r.
ExtensionRecord apply_counterterm(const ExtensionRecord& rec, const DeltaVector& v);

/// Counterterm from p_r((R^k|_r)* R^k). Afterwards R kills the corrected
/// R^k residue. k = 0 is onshell_correction(rec, R).
/// Throws kNonNormal, kInvalidArgument (R not of essential order 0), kMissingResidue.
DeltaVector order_raising_correction(const ExtensionRecord& rec, const OperatorExpr& r_op, int k);

class NonCommutingError : public Error {
 public:
  NonCommutingError(std::size_t i, std::size_t j, OperatorExpr commutator);
  [[nodiscard]] std::pair<std::size_t, std::size_t> pair() const { return {i_, j_}; }
  [[nodiscard]] const OperatorExpr& commutator() const { return c_; }

 private:
  std::size_t i_;
  std::size_t j_;
  OperatorExpr c_;
};

/// Applies onshell_correction for each operator in turn, accumulating the
/// counterterm. Throws NonCommutingError for the first non-commuting pair.
DeltaVector multi_commuting_correction(const ExtensionRecord& rec, const std::vector<OperatorExpr>& qs);

/// coeff * R[f0] R[f1] ... R[fk] (rightmost applied first).
struct CasimirWord {
  Scalar coeff;
  std::vector<std::size_t> factors;
};

/// Words expressing casimir(n, g) through lorentz_generators(n, g).
std::vector<CasimirWord> casimir_words(std::size_t n, const Metric& g);
/// L_{mu nu} for mu < nu, in lexicographic order of (mu, nu).
std::vector<OperatorExpr> lorentz_generators(std::size_t n, const Metric& g);

struct CasimirReport {
  int level = 0;
  bool shape = false;
  bool self_adjoint = false;
  bool commute = false;
  bool kernel_equality = false;
  std::vector<std::string> failures;
  /// First nonzero [C, R_i], when commute fails.
  OperatorExpr commutator;
  [[nodiscard]] bool passed() const { return shape && self_adjoint && commute && kernel_equality; }
};

CasimirReport verify_casimir_hypotheses(const OperatorExpr& c, const std::vector<OperatorExpr>& rs,
                                        const std::vector<CasimirWord>& words, int r);

class HypothesisError : public Error {
 public:
  explicit HypothesisError(CasimirReport report);
  [[nodiscard]] const CasimirReport& report() const { return report_; }

 private:
  CasimirReport report_;
};

/// C u from the R residues through the words (or the registered C residue).
DeltaVector casimir_residue(const ExtensionRecord& rec, const OperatorExpr& c, const std::vector<OperatorExpr>& rs,
                            const std::vector<CasimirWord>& words);

/// Counterterm of b_r(C) u. Throws HypothesisError when the hypotheses fail.
DeltaVector casimir_correction(const ExtensionRecord& rec, const OperatorExpr& c, const std::vector<OperatorExpr>& rs,
                               const std::vector<CasimirWord>& words);

struct Sector {
  long a = 0;
  int multiplicity = 1;
};

/// prod_j R(a_j)^{N_j}
OperatorExpr sector_operator(std::size_t n, const std::vector<Sector>& sectors);

/// Casimir step b_r(C) (when lorentz), then p_r of the squared sector
/// product. Needs residues for casimir(n, g) and for sector_operator.
DeltaVector renorm_map(const ExtensionRecord& rec, const std::vector<Sector>& sectors, bool lorentz,
                       const Metric& g);

struct UniquenessReport {
  bool unique = false;
  /// Orders |alpha| <= r where -(|alpha| + n + a) vanishes.
  std::vector<int> kernel_levels;
  Scalar determinant;
};

UniquenessReport homogeneous_extension_unique(std::size_t n, const Scalar& a, int r);

/// Q^t maps every monomial of degree <= r + q to polynomials of degree <= r.
bool linearity_precondition(const OperatorExpr& q, int r);

}  // namespace onshell
