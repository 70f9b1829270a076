#include "onshell/extension.hpp"

#include "onshell/error.hpp"

namespace onshell {

void ExtensionRecord::set_residue(const OperatorExpr& q, const DeltaVector& w) {
  if (q.dim() != n_ || w.dim() != n_) throw Error(ErrorCode::kDimensionMismatch, "residue dimension mismatch");
  int bound = r_ + essential_order(q, 0).q;
  if (w.degree() > Degree(bound))
    throw Error(ErrorCode::kDegreeOverflow,
                "residue degree " + w.degree().str() + " exceeds r + q = " + std::to_string(bound));
  residues_.insert_or_assign(normal_form(q), w);
}

bool ExtensionRecord::has_residue(const OperatorExpr& q) const { return residues_.count(normal_form(q)) != 0; }

const DeltaVector& ExtensionRecord::residue(const OperatorExpr& q) const {
  auto it = residues_.find(normal_form(q));
  if (it == residues_.end()) throw Error(ErrorCode::kMissingResidue, "no residue registered for this operator");
  return it->second;
}

ExistenceReport existence_check(const ExtensionRecord& rec, const OperatorExpr& q) {
  RangeMembership rm = range_membership(restriction(q, rec.degree()), rec.residue(q));
  ExistenceReport rep;
  rep.exists = rm.member;
  rep.certificate = rm.member ? rm.preimage : rm.witness;
  rep.criterion = rm.member ? "residue in Ran(Q|_r): exact solve" : "residue not orthogonal to ker (Q|_r)*";
  return rep;
}

DeltaVector onshell_correction(const ExtensionRecord& rec, const OperatorExpr& q) {
  const DeltaVector& w = rec.residue(q);
  RestrictionMatrix a = restriction(q, rec.degree());
  RestrictionMatrix a_star = adjoint_restriction(q, rec.degree());
  ExactPolynomial p = projection_polynomial_of(a_star.m * a.m);
  Vector wc = coordinates(a.codomain_basis(), w);
  Vector v = projection_counterterm(a.m, a_star.m, p, wc);

  // corrected = w + A v must lie in ker A* and differ from w by an element of Ran A
  Vector corrected = a.m * v;
  for (std::size_t i = 0; i < corrected.size(); ++i) corrected[i] += wc[i];
  Vector back = a_star.m * corrected;
  for (const auto& x : back)
    if (!x.is_zero()) throw Error(ErrorCode::kInternal, "onshell_correction: corrected residue not in ker (Q|_r)*");
  Vector moved(wc.size());
  for (std::size_t i = 0; i < wc.size(); ++i) moved[i] = wc[i] - corrected[i];
  if (!solve(a.m, moved)) throw Error(ErrorCode::kInternal, "onshell_correction: correction left Ran(Q|_r)");
  return from_coordinates(a.domain_basis(), v);
}

ExtensionRecord apply_counterterm(const ExtensionRecord& rec, const DeltaVector& v) {
  if (v.dim() != rec.dim()) throw Error(ErrorCode::kDimensionMismatch, "counterterm dimension mismatch");
  if (v.degree() > Degree(rec.degree()))
    throw Error(ErrorCode::kDegreeOverflow, "counterterm degree " + v.degree().str() + " exceeds r = " +
                                                std::to_string(rec.degree()));
  ExtensionRecord out(rec.dim(), rec.degree());
  for (const auto& [q, w] : rec.residues()) out.set_residue(q, w + apply_delta(q, v));
  return out;
}

DeltaVector order_raising_correction(const ExtensionRecord& rec, const OperatorExpr& r_op, int k) {
  if (k < 0) throw Error(ErrorCode::kInvalidArgument, "order_raising_correction: k must be >= 0");
  if (k == 0) return onshell_correction(rec, r_op);
  if (essential_order(r_op, 0).q != 0)
    throw Error(ErrorCode::kInvalidArgument, "order_raising_correction: R must have essential order 0");
  if (!is_normal(restriction(r_op, rec.degree())))
    throw Error(ErrorCode::kNonNormal, "order_raising_correction: R|_r is not normal");
  OperatorExpr rk = power(r_op, k);
  DeltaVector v = onshell_correction(rec, rk);
  DeltaVector corrected = rec.residue(rk) + apply_delta(rk, v);
  if (!apply_delta(r_op, corrected).is_zero())
    throw Error(ErrorCode::kInternal, "order_raising_correction: R does not annihilate the corrected residue");
  return v;
}

NonCommutingError::NonCommutingError(std::size_t i, std::size_t j, OperatorExpr commutator)
    : Error(ErrorCode::kNonCommuting,
            "operators " + std::to_string(i) + " and " + std::to_string(j) + " do not commute"),
      i_(i),
      j_(j),
      c_(std::move(commutator)) {}

DeltaVector multi_commuting_correction(const ExtensionRecord& rec, const std::vector<OperatorExpr>& qs) {
  for (std::size_t i = 0; i < qs.size(); ++i)
    for (std::size_t j = i + 1; j < qs.size(); ++j) {
      OperatorExpr c = commutator(qs[i], qs[j]);
      if (!c.is_zero()) throw NonCommutingError(i, j, c);
    }
  ExtensionRecord cur = rec;
  DeltaVector total(rec.dim());
  for (const auto& q : qs) {
    DeltaVector v = onshell_correction(cur, q);
    cur = apply_counterterm(cur, v);
    total += v;
  }
  return total;
}

std::vector<OperatorExpr> lorentz_generators(std::size_t n, const Metric& g) {
  std::vector<OperatorExpr> out;
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t nu = mu + 1; nu < n; ++nu) out.push_back(lorentz_generator(n, mu, nu, g));
  return out;
}

std::vector<CasimirWord> casimir_words(std::size_t n, const Metric& g) {
  // sum over ordered pairs = 2 sum_{mu<nu} g^{mu mu} g^{nu nu} L_{mu nu}^2
  std::vector<CasimirWord> out;
  std::size_t idx = 0;
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t nu = mu + 1; nu < n; ++nu, ++idx) out.push_back({Scalar(2L * g[mu] * g[nu]), {idx, idx}});
  return out;
}

namespace {

OperatorExpr word_operator(std::size_t n, const std::vector<OperatorExpr>& rs, const CasimirWord& w) {
  OperatorExpr op = OperatorExpr::scalar(n, w.coeff);
  for (auto f : w.factors) {
    if (f >= rs.size()) throw Error(ErrorCode::kIndexOutOfRange, "word factor index out of range");
    op = op * rs[f];
  }
  return op;
}

// Stack several matrices with a common column count.
Matrix stack(const std::vector<Matrix>& ms, std::size_t cols) {
  std::size_t rows = 0;
  for (const auto& m : ms) rows += m.rows();
  Matrix out(rows, cols);
  std::size_t at = 0;
  for (const auto& m : ms) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < cols; ++j) out(at + i, j) = m(i, j);
    at += m.rows();
  }
  return out;
}

}  // namespace

CasimirReport verify_casimir_hypotheses(const OperatorExpr& c, const std::vector<OperatorExpr>& rs,
                                        const std::vector<CasimirWord>& words, int r) {
  const std::size_t n = c.dim();
  CasimirReport rep;
  rep.level = r;
  rep.commutator = OperatorExpr(n);

  rep.shape = true;
  OperatorExpr rebuilt(n);
  for (const auto& w : words) {
    if (w.factors.size() < 2) {
      rep.shape = false;
      rep.failures.push_back("shape: word of degree " + std::to_string(w.factors.size()) + " in the generators");
    }
    rebuilt += word_operator(n, rs, w);
  }
  if (rep.shape && !operator_equal(rebuilt, c)) {
    rep.shape = false;
    rep.failures.push_back("shape: the supplied words do not reproduce C");
  }

  bool order_zero = essential_order(c, 0).q == 0;
  for (const auto& q : rs) order_zero = order_zero && essential_order(q, 0).q == 0;
  if (!order_zero) rep.failures.push_back("essential order: C and every R must have essential order 0");

  RestrictionMatrix cr = restriction(c, r);
  rep.self_adjoint = order_zero && adjoint_restriction(c, r).m == cr.m;
  if (!rep.self_adjoint) rep.failures.push_back("self-adjoint: (C|_r)* != C|_r");

  rep.commute = true;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    OperatorExpr k = commutator(c, rs[i]);
    if (!k.is_zero()) {
      rep.commute = false;
      rep.commutator = k;
      rep.failures.push_back("commute: [C, R" + std::to_string(i) + "] != 0");
      break;
    }
  }

  if (order_zero) {
    // ker C|_r = cap ker R_i|_r  <=>  equal ranks for R-stack and [C; R-stack], and for C alone
    std::vector<Matrix> rm;
    for (const auto& q : rs) rm.push_back(restriction(q, r).m);
    Matrix rstack = stack(rm, cr.m.cols());
    rm.push_back(cr.m);
    std::size_t rank_r = rank(rstack);
    rep.kernel_equality = rank(cr.m) == rank_r && rank(stack(rm, cr.m.cols())) == rank_r;
  }
  if (!rep.kernel_equality) rep.failures.push_back("kernel: ker C|_r != cap ker R_i|_r");
  return rep;
}

HypothesisError::HypothesisError(CasimirReport report)
    : Error(ErrorCode::kHypothesisFailed,
            "Casimir hypotheses fail: " + (report.failures.empty() ? std::string("?") : report.failures.front())),
      report_(std::move(report)) {}

DeltaVector casimir_residue(const ExtensionRecord& rec, const OperatorExpr& c, const std::vector<OperatorExpr>& rs,
                            const std::vector<CasimirWord>& words) {
  if (rec.has_residue(c)) return rec.residue(c);
  DeltaVector out(rec.dim());
  for (const auto& w : words) {
    if (w.factors.empty()) throw Error(ErrorCode::kHypothesisFailed, "empty Casimir word");
    CasimirWord prefix{w.coeff, {w.factors.begin(), w.factors.end() - 1}};
    out += apply_delta(word_operator(rec.dim(), rs, prefix), rec.residue(rs[w.factors.back()]));
  }
  return out;
}

namespace {

// sum_{k>=1} c_k M^{k-1} w for p = 1 + sum c_k z^k, with M square on level r.
Vector polynomial_tail(const Matrix& m, const ExactPolynomial& p, const Vector& w) {
  Vector u = w;
  Vector v(w.size());
  for (int k = 1; k <= p.degree(); ++k) {
    const Scalar c = p.coeff(static_cast<std::size_t>(k));
    if (!c.is_zero())
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += c * u[i];
    if (k < p.degree()) u = m * u;
  }
  return v;
}

}  // namespace

DeltaVector casimir_correction(const ExtensionRecord& rec, const OperatorExpr& c, const std::vector<OperatorExpr>& rs,
                               const std::vector<CasimirWord>& words) {
  CasimirReport rep = verify_casimir_hypotheses(c, rs, words, rec.degree());
  if (!rep.passed()) throw HypothesisError(rep);
  RestrictionMatrix cr = restriction(c, rec.degree());
  ExactPolynomial b = projection_polynomial_of(cr.m);
  Basis basis = cr.domain_basis();
  DeltaVector wc = casimir_residue(rec, c, rs, words);
  DeltaVector v = from_coordinates(basis, polynomial_tail(cr.m, b, coordinates(basis, wc)));
  // every corrected R residue b_r(C|_r) w_i must land in ker C|_r
  for (const auto& q : rs) {
    if (!rec.has_residue(q)) continue;
    DeltaVector corrected = rec.residue(q) + apply_delta(q, v);
    if (!cr.apply(corrected).is_zero())
      throw Error(ErrorCode::kInternal, "casimir_correction: corrected residue outside ker C|_r");
  }
  return v;
}

OperatorExpr sector_operator(std::size_t n, const std::vector<Sector>& sectors) {
  OperatorExpr p = OperatorExpr::identity(n);
  for (const auto& s : sectors) p = p * power(euler(n, Scalar(s.a)), s.multiplicity);
  return p;
}

DeltaVector renorm_map(const ExtensionRecord& rec, const std::vector<Sector>& sectors, bool lorentz,
                       const Metric& g) {
  const std::size_t n = rec.dim();
  ExtensionRecord cur = rec;
  DeltaVector total(n);
  if (lorentz) {
    DeltaVector v = casimir_correction(cur, casimir(n, g), lorentz_generators(n, g), casimir_words(n, g));
    cur = apply_counterterm(cur, v);
    total += v;
  }
  // P|_r is real diagonal, so p_r(P^2) is the projection polynomial of P itself
  DeltaVector v = onshell_correction(cur, sector_operator(n, sectors));
  total += v;
  return total;
}

UniquenessReport homogeneous_extension_unique(std::size_t n, const Scalar& a, int r) {
  RestrictionMatrix m = restriction(euler(n, a), r);
  UniquenessReport rep;
  rep.determinant = determinant(m.m);
  rep.unique = !rep.determinant.is_zero();
  Basis b = m.domain_basis();
  for (std::size_t i = 0; i < b.size(); ++i) {
    int level = b[i].order();
    if (m.m(i, i).is_zero() && (rep.kernel_levels.empty() || rep.kernel_levels.back() != level))
      rep.kernel_levels.push_back(level);
  }
  return rep;
}

bool linearity_precondition(const OperatorExpr& q, int r) {
  int top = r + essential_order(q, 0).q;
  OperatorExpr qt = transpose(q);
  for (const auto& beta : enumerate(q.dim(), top)) {
    Polynomial img = apply_poly(qt, Polynomial::basis(beta));
    if (img.degree() > Degree(r)) return false;
  }
  return true;
}

}  // namespace onshell
