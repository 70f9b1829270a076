#include "onshell/chi.hpp"

#include <algorithm>
#include <exception>
#include <optional>

#include "onshell/error.hpp"

namespace onshell {

// ---------------------------------------------------------------- ConstCoeffOperator

ConstCoeffOperator ConstCoeffOperator::constant(std::size_t n, const Scalar& c) {
  return ConstCoeffOperator(constant_polynomial(n, c));
}

ConstCoeffOperator ConstCoeffOperator::monomial(std::size_t n, const std::vector<std::size_t>& indices) {
  MultiIndex gamma(n);
  for (auto mu : indices) {
    if (mu >= n) throw Error(ErrorCode::kIndexOutOfRange, "Lorentz index " + std::to_string(mu) + " out of range");
    ++gamma[mu];
  }
  return ConstCoeffOperator(Polynomial::basis(gamma));
}

ConstCoeffOperator ConstCoeffOperator::wave(const ChiConfig& cfg) {
  Polynomial p = constant_polynomial(cfg.n, Scalar(cfg.m2));
  for (std::size_t mu = 0; mu < cfg.n; ++mu) {
    MultiIndex two(cfg.n);
    two[mu] = 2;
    p.add(two, Scalar(cfg.metric[mu]));
  }
  return ConstCoeffOperator(std::move(p));
}

int ConstCoeffOperator::order() const {
  Degree d = p_.degree();
  return d.is_finite() ? d.value() : -1;
}

OperatorExpr ConstCoeffOperator::to_operator() const {
  OperatorExpr q(dim());
  for (const auto& [g, c] : p_.terms()) q += c * OperatorExpr::derivative(g);
  return q;
}

namespace {

std::string derivative_word(const MultiIndex& g) {
  std::string out;
  for (std::size_t mu = 0; mu < g.dim(); ++mu) {
    if (!g[mu]) continue;
    if (!out.empty()) out += '*';
    out += "d" + std::to_string(mu);
    if (g[mu] > 1) out += "^" + std::to_string(g[mu]);
  }
  return out;
}

// Appends "c*body" with sign handling; body empty means a bare constant.
void append_term(std::string& out, const Scalar& c, const std::string& body) {
  bool negative = c.is_real() && sgn(c.re()) < 0;
  Scalar mag = negative ? -c : c;
  std::string num = mag.is_real() ? mag.str() : "(" + mag.str() + ")";
  std::string term;
  if (body.empty()) {
    term = num;
  } else if (mag == Scalar(1)) {
    term = body;
  } else {
    term = num + "*" + body;
  }
  if (out.empty()) {
    out = negative ? "-" + term : term;
  } else {
    out += negative ? " - " : " + ";
    out += term;
  }
}

}  // namespace

std::string ConstCoeffOperator::str() const {
  if (p_.is_zero()) return "0";
  std::vector<std::pair<MultiIndex, Scalar>> terms(p_.terms().begin(), p_.terms().end());
  std::stable_sort(terms.begin(), terms.end(),
                   [](const auto& a, const auto& b) { return a.first.order() > b.first.order(); });
  std::string out;
  for (const auto& [g, c] : terms) append_term(out, c, derivative_word(g));
  return out;
}

std::optional<ConstCoeffOperator> divide_exact(const ConstCoeffOperator& a, const ConstCoeffOperator& b) {
  if (b.is_zero()) throw Error(ErrorCode::kInvalidArgument, "division by the zero operator");
  const auto& [lead, lead_c] = *b.symbol().terms().rbegin();
  Polynomial rest = a.symbol();
  Polynomial quo(a.dim());
  while (!rest.is_zero()) {
    const auto [top, top_c] = *rest.terms().rbegin();
    if (!lead.le(top)) return std::nullopt;
    Polynomial t = Polynomial::basis(top - lead, top_c / lead_c);
    quo += t;
    rest -= t * b.symbol();
  }
  return ConstCoeffOperator(std::move(quo));
}

std::string ChiResult::str() const {
  std::string out = source.is_zero() ? std::string() : source.str();
  if (chi1.is_zero()) return out.empty() ? "0" : out;
  if (chi1.order() == 0) {
    append_term(out, chi1.symbol().terms().begin()->second, "(box)");
  } else {
    out += out.empty() ? "" : " + ";
    out += "(" + chi1.str() + ")*(box)";
  }
  return out;
}

// ---------------------------------------------------------------- projection route

ChiEngine::ChiEngine(ChiConfig cfg)
    : cfg_(std::move(cfg)), q_(dalembert(cfg_.n, cfg_.m2, cfg_.metric)) {}

void ChiEngine::prepare(int s_max) {
  for (int s = 0; s <= s_max; ++s) {
    if (levels_.count(s)) continue;
    RestrictionMatrix a = restriction(q_, s);
    RestrictionMatrix a_star = adjoint_restriction(q_, s);
    ExactPolynomial p = projection_polynomial_of(a_star.m * a.m);
    levels_.emplace(s, Level{std::move(a), std::move(a_star), std::move(p)});
  }
}

DeltaVector ChiEngine::theta_counterterm(const ConstCoeffOperator& s_op, const Scalar& c) const {
  if (s_op.dim() != cfg_.n) throw Error(ErrorCode::kDimensionMismatch, "theta_counterterm: dimension mismatch");
  const int s = s_op.order() + cfg_.deg_v;
  if (s < 0) return DeltaVector(cfg_.n);
  auto it = levels_.find(s);
  if (it == levels_.end()) throw Error(ErrorCode::kInternal, "theta_counterterm: level not prepared");
  const Level& lv = it->second;
  // residue of S v: S (Q v) = c S delta
  DeltaVector w = c * apply_delta(s_op.to_operator(), DeltaVector::basis(MultiIndex(cfg_.n)));
  Vector v = projection_counterterm(lv.a.m, lv.a_star.m, lv.p, coordinates(lv.a.codomain_basis(), w));
  return from_coordinates(lv.a.domain_basis(), v);
}

ChiResult ChiEngine::chi_projection(const ConstCoeffOperator& s_op, const Scalar& c) const {
  if (c.is_zero()) throw Error(ErrorCode::kInvalidArgument, "chi_projection: c must be nonzero");
  DeltaVector theta = theta_counterterm(s_op, c);
  Polynomial chi1(cfg_.n);
  Scalar inv = Scalar(1) / c;
  for (const auto& [g, x] : theta.terms()) chi1.add(g, x * inv);
  ChiResult res;
  res.source = s_op;
  res.chi1 = ConstCoeffOperator(std::move(chi1));
  res.chi = s_op + res.chi1 * ConstCoeffOperator::wave(cfg_);
  res.s = s_op.order() + cfg_.deg_v;
  res.provenance = "projection";
  if (res.chi.order() > s_op.order()) throw Error(ErrorCode::kInternal, "chi_projection: order grew");
  return res;
}

DeltaVector theta_counterterm(const ConstCoeffOperator& s_op, const Scalar& c, const ChiConfig& cfg) {
  ChiEngine e(cfg);
  e.prepare(s_op.order() + cfg.deg_v);
  return e.theta_counterterm(s_op, c);
}

ChiResult chi_projection(const ConstCoeffOperator& s_op, const Scalar& c, const ChiConfig& cfg) {
  ChiEngine e(cfg);
  e.prepare(s_op.order() + cfg.deg_v);
  return e.chi_projection(s_op, c);
}

// ---------------------------------------------------------------- explicit route

std::vector<Contraction> lambda_contraction(const std::vector<std::size_t>& indices, const Metric& g) {
  for (auto mu : indices)
    if (mu >= g.dim()) throw Error(ErrorCode::kIndexOutOfRange, "Lorentz index " + std::to_string(mu) + " out of range");
  std::vector<Contraction> out;
  for (std::size_t i = 0; i < indices.size(); ++i)
    for (std::size_t j = i + 1; j < indices.size(); ++j) {
      Contraction c;
      c.weight = indices[i] == indices[j] ? Scalar(static_cast<long>(g[indices[i]])) : Scalar(0);
      for (std::size_t k = 0; k < indices.size(); ++k)
        if (k != i && k != j) c.rest.push_back(indices[k]);
      out.push_back(std::move(c));
    }
  return out;
}

namespace {

Rational binomial(long n, long k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(b);
}

}  // namespace

ConstCoeffOperator alpha_coefficient(int j, int k, const ChiConfig& cfg) {
  const std::size_t n = cfg.n;
  if (j < 0 || 2 * j > k) throw Error(ErrorCode::kInvalidArgument, "alpha_coefficient: need 0 <= j <= k/2");
  if (j == 0) return ConstCoeffOperator::constant(n, Scalar(1));
  ChiConfig massless = cfg;
  massless.m2 = 0;
  const ConstCoeffOperator box = ConstCoeffOperator::wave(massless);
  ConstCoeffOperator sum(n);
  for (int p = 0; p < j; ++p) {
    Rational w = binomial(j - 1, p);
    for (int i = 0; i < p; ++i) w *= cfg.m2;
    for (int q = 0; q < j; ++q) {
      long den = static_cast<long>(n) + 2L * k - 2L * p - 2L * q - 4;
      if (den == 0)
        throw Error(ErrorCode::kVanishingDenominator,
                    "alpha_coefficient: factor vanishes at p=" + std::to_string(p) + ", q=" + std::to_string(q));
      w /= den;
    }
    ConstCoeffOperator term = ConstCoeffOperator::constant(n, Scalar(w));
    for (int i = 0; i < j - 1 - p; ++i) term = term * box;
    sum += term;
  }
  Scalar sign(j % 2 ? -1L : 1L);
  return sign * (ConstCoeffOperator::wave(cfg) * sum);
}

ConstCoeffOperator chi_explicit(const std::vector<std::size_t>& indices, const ChiConfig& cfg) {
  const int k = static_cast<int>(indices.size());
  std::vector<std::size_t> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  std::map<std::vector<std::size_t>, Scalar> layer{{sorted, Scalar(1)}};
  ConstCoeffOperator out(cfg.n);
  Rational jfact = 1;
  for (int j = 0; 2 * j <= k; ++j) {
    if (j > 0) {
      jfact *= j;
      std::map<std::vector<std::size_t>, Scalar> next;
      for (const auto& [idx, c] : layer)
        for (auto& con : lambda_contraction(idx, cfg.metric)) {
          if (con.weight.is_zero()) continue;
          next[con.rest] += c * con.weight;
        }
      layer = std::move(next);
    }
    ConstCoeffOperator pj(cfg.n);
    for (const auto& [idx, c] : layer) pj += c * ConstCoeffOperator::monomial(cfg.n, idx);
    if (pj.is_zero()) continue;
    out += Scalar(Rational(1 / jfact)) * (alpha_coefficient(j, k, cfg) * pj);
  }
  return out;
}

ChiResult chi_explicit_result(const std::vector<std::size_t>& indices, const ChiConfig& cfg) {
  ChiResult res;
  res.source = ConstCoeffOperator::monomial(cfg.n, indices);
  res.chi = chi_explicit(indices, cfg);
  res.s = static_cast<int>(indices.size()) + cfg.deg_v;
  res.provenance = "explicit";
  auto q = divide_exact(res.chi - res.source, ConstCoeffOperator::wave(cfg));
  if (!q) throw Error(ErrorCode::kInternal, "chi_explicit: chi - S not divisible by box + m2");
  res.chi1 = *q;
  return res;
}

// ---------------------------------------------------------------- crosscheck

std::vector<std::vector<std::size_t>> index_tuples(std::size_t n, int k_max) {
  std::vector<std::vector<std::size_t>> out{{}};
  std::vector<std::vector<std::size_t>> layer{{}};
  for (int k = 1; k <= k_max; ++k) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& t : layer)
      for (std::size_t mu = t.empty() ? 0 : t.back(); mu < n; ++mu) {
        auto u = t;
        u.push_back(mu);
        next.push_back(std::move(u));
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

namespace {

std::optional<ChiMismatch> check_tuple(const ChiEngine& e, const std::vector<std::size_t>& t, const ExplicitRoute& route) {
  const ChiConfig& cfg = e.config();
  ConstCoeffOperator proj = e.chi_projection(ConstCoeffOperator::monomial(cfg.n, t)).chi;
  ConstCoeffOperator expl = route(t, cfg);
  if (proj == expl) return std::nullopt;
  return ChiMismatch{t, cfg.m2, proj, expl};
}

}  // namespace

ChiCrosscheckReport chi_crosscheck(int k_max, std::size_t n, const std::vector<Rational>& m2s, const Metric& g,
                                   const ExplicitRoute& route) {
  ChiCrosscheckReport rep;
  const auto tuples = index_tuples(n, k_max);
  for (const auto& m2 : m2s) {
    ChiEngine e(ChiConfig::make(n, g, m2));
    e.prepare(k_max - 2);
    std::vector<std::optional<ChiMismatch>> found(tuples.size());
    std::vector<std::exception_ptr> failed(tuples.size());
    const auto count = static_cast<long>(tuples.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
      auto idx = static_cast<std::size_t>(i);
      // exceptions must not cross the parallel region
      try {
        found[idx] = check_tuple(e, tuples[idx], route);
      } catch (...) {
        failed[idx] = std::current_exception();
      }
    }
    for (auto& f : failed)
      if (f) std::rethrow_exception(f);
    for (auto& f : found)
      if (f) rep.mismatches.push_back(std::move(*f));
    rep.checked += tuples.size();
  }
  return rep;
}

ChiCrosscheckReport serial::chi_crosscheck(int k_max, std::size_t n, const std::vector<Rational>& m2s,
                                           const Metric& g, const ExplicitRoute& route) {
  ChiCrosscheckReport rep;
  const auto tuples = index_tuples(n, k_max);
  for (const auto& m2 : m2s) {
    ChiEngine e(ChiConfig::make(n, g, m2));
    e.prepare(k_max - 2);
    for (const auto& t : tuples)
      if (auto f = check_tuple(e, t, route)) rep.mismatches.push_back(std::move(*f));
    rep.checked += tuples.size();
  }
  return rep;
}

}  // namespace onshell
