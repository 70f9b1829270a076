#include "onshell/opalg.hpp"

#include <algorithm>

#include "onshell/error.hpp"

namespace onshell {

// ---------------------------------------------------------------- LinearMap

LinearMap::LinearMap(std::size_t n, std::vector<Rational> entries) : n_(n), a_(std::move(entries)) {
  if (a_.size() != n * n) throw Error(ErrorCode::kDimensionMismatch, "linear map needs n*n entries");
  for (auto& x : a_) x.canonicalize();
}

LinearMap LinearMap::identity(std::size_t n) { return scaled_identity(n, Rational(1)); }

LinearMap LinearMap::scaled_identity(std::size_t n, const Rational& s) {
  std::vector<Rational> a(n * n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] = s;
  return {n, std::move(a)};
}

bool LinearMap::is_identity() const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (at(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

Rational LinearMap::det() const {
  std::vector<Rational> m = a_;
  Rational d = 1;
  for (std::size_t c = 0; c < n_; ++c) {
    std::size_t p = c;
    while (p < n_ && sgn(m[p * n_ + c]) == 0) ++p;
    if (p == n_) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n_; ++j) std::swap(m[p * n_ + j], m[c * n_ + j]);
      d = -d;
    }
    d *= m[c * n_ + c];
    for (std::size_t i = c + 1; i < n_; ++i) {
      if (sgn(m[i * n_ + c]) == 0) continue;
      Rational f = m[i * n_ + c] / m[c * n_ + c];
      for (std::size_t j = c; j < n_; ++j) m[i * n_ + j] -= f * m[c * n_ + j];
    }
  }
  return d;
}

LinearMap LinearMap::inverse() const {
  std::vector<Rational> m = a_;
  std::vector<Rational> inv = identity(n_).a_;
  for (std::size_t c = 0; c < n_; ++c) {
    std::size_t p = c;
    while (p < n_ && sgn(m[p * n_ + c]) == 0) ++p;
    if (p == n_) throw Error(ErrorCode::kSingularMatrix, "pullback matrix is singular");
    for (std::size_t j = 0; j < n_; ++j) {
      std::swap(m[p * n_ + j], m[c * n_ + j]);
      std::swap(inv[p * n_ + j], inv[c * n_ + j]);
    }
    Rational piv = m[c * n_ + c];
    for (std::size_t j = 0; j < n_; ++j) {
      m[c * n_ + j] /= piv;
      inv[c * n_ + j] /= piv;
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (i == c || sgn(m[i * n_ + c]) == 0) continue;
      Rational f = m[i * n_ + c];
      for (std::size_t j = 0; j < n_; ++j) {
        m[i * n_ + j] -= f * m[c * n_ + j];
        inv[i * n_ + j] -= f * inv[c * n_ + j];
      }
    }
  }
  return {n_, std::move(inv)};
}

LinearMap operator*(const LinearMap& a, const LinearMap& b) {
  if (a.n_ != b.n_) throw Error(ErrorCode::kDimensionMismatch, "linear map dimension mismatch");
  std::size_t n = a.n_;
  std::vector<Rational> c(n * n, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (sgn(a.at(i, k)) == 0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] += a.at(i, k) * b.at(k, j);
    }
  return {n, std::move(c)};
}

bool operator<(const LinearMap& a, const LinearMap& b) {
  bool ia = a.is_identity();
  bool ib = b.is_identity();
  if (ia != ib) return ia;
  if (a.n_ != b.n_) return a.n_ < b.n_;
  for (std::size_t i = 0; i < a.a_.size(); ++i)
    if (int c = cmp(a.a_[i], b.a_[i]); c != 0) return c < 0;
  return false;
}

namespace {

// Linear forms l_i(x) = sum_j M_ij x_j as polynomials.
std::vector<Polynomial> linear_forms(const LinearMap& M) {
  std::size_t n = M.dim();
  std::vector<Polynomial> forms;
  forms.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial l(n);
    for (std::size_t j = 0; j < n; ++j) l.add(MultiIndex::unit(n, j), Scalar(M.at(i, j)));
    forms.push_back(std::move(l));
  }
  return forms;
}

Polynomial monomial_in_forms(const std::vector<Polynomial>& forms, const MultiIndex& beta) {
  Polynomial out = constant_polynomial(beta.dim(), Scalar(1));
  for (std::size_t i = 0; i < beta.dim(); ++i)
    if (beta[i]) out = out * power(forms[i], beta[i]);
  return out;
}

// Linear map with all entries conjugated is itself (entries are real); kept for clarity.
MultiIndex zero_index(std::size_t n) { return MultiIndex(n); }

Rational binomial(const MultiIndex& gamma, const MultiIndex& beta) {
  Rational c(gamma.factorial(), beta.factorial() * (gamma - beta).factorial());
  c.canonicalize();
  return c;
}

// All beta <= gamma.
std::vector<MultiIndex> sub_indices(const MultiIndex& gamma) {
  std::vector<MultiIndex> out{MultiIndex(gamma.dim())};
  for (std::size_t i = 0; i < gamma.dim(); ++i) {
    std::vector<MultiIndex> next;
    for (const auto& b : out)
      for (int k = 0; k <= gamma[i]; ++k) {
        MultiIndex c = b;
        c[i] = k;
        next.push_back(std::move(c));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

Polynomial compose_linear(const Polynomial& f, const LinearMap& L) {
  if (L.is_identity()) return f;
  auto forms = linear_forms(L);
  Polynomial out(f.dim());
  for (const auto& [beta, c] : f.terms()) out += c * monomial_in_forms(forms, beta);
  return out;
}

// ---------------------------------------------------------------- Metric

Metric::Metric(std::vector<int> signs) : s_(std::move(signs)) {
  if (s_.empty()) throw Error(ErrorCode::kInvalidArgument, "metric must have dimension >= 1");
  for (int s : s_)
    if (s != 1 && s != -1) throw Error(ErrorCode::kInvalidArgument, "metric entries must be +1 or -1");
}

Metric Metric::minkowski(std::size_t n) {
  std::vector<int> s(n, -1);
  if (n) s[0] = 1;
  return Metric(std::move(s));
}

Metric Metric::parse(const std::string& text) {
  std::vector<int> s;
  for (char c : text) {
    if (c == '+') {
      s.push_back(1);
    } else if (c == '-') {
      s.push_back(-1);
    } else {
      throw Error(ErrorCode::kInvalidArgument, "invalid signature '" + text + "' (expected e.g. +---)");
    }
  }
  return Metric(std::move(s));
}

std::string Metric::str() const {
  std::string out;
  for (int s : s_) out += s > 0 ? '+' : '-';
  return out;
}

// ---------------------------------------------------------------- OperatorExpr

bool TermKeyLess::operator()(const TermKey& a, const TermKey& b) const {
  if (a.pullback < b.pullback) return true;
  if (b.pullback < a.pullback) return false;
  return GradedLexLess{}(a.derivative, b.derivative);
}

void OperatorExpr::add_term(const TermKey& key, const Polynomial& coeff) {
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(key, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

OperatorExpr OperatorExpr::from_terms(std::size_t n, const std::vector<OperatorTerm>& terms) {
  OperatorExpr out(n);
  for (const auto& t : terms) {
    if (t.coefficient.dim() != n || t.derivative.dim() != n)
      throw Error(ErrorCode::kDimensionMismatch, "operator term dimension mismatch");
    OperatorExpr piece = multiplication(t.coefficient) * derivative(t.derivative);
    if (t.pullback) piece = piece * pullback(*t.pullback);
    out += piece;
  }
  return out;
}

OperatorExpr OperatorExpr::scalar(std::size_t n, const Scalar& c) {
  return multiplication(constant_polynomial(n, c));
}

OperatorExpr OperatorExpr::multiplication(const Polynomial& a) {
  OperatorExpr q(a.dim());
  q.add_term({LinearMap::identity(a.dim()), zero_index(a.dim())}, a);
  return q;
}

OperatorExpr OperatorExpr::derivative(const MultiIndex& gamma) {
  OperatorExpr q(gamma.dim());
  q.add_term({LinearMap::identity(gamma.dim()), gamma}, constant_polynomial(gamma.dim(), Scalar(1)));
  return q;
}

OperatorExpr OperatorExpr::pullback(const LinearMap& L) {
  if (sgn(L.det()) == 0) throw Error(ErrorCode::kSingularMatrix, "pullback matrix is singular");
  OperatorExpr q(L.dim());
  q.add_term({L, zero_index(L.dim())}, constant_polynomial(L.dim(), Scalar(1)));
  return q;
}

bool OperatorExpr::has_pullback() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const auto& t) { return !t.first.pullback.is_identity(); });
}

int OperatorExpr::differential_order() const {
  int m = 0;
  for (const auto& [k, a] : terms_) m = std::max(m, k.derivative.order());
  return m;
}

OperatorExpr OperatorExpr::conj() const {
  OperatorExpr out(n_);
  for (const auto& [k, a] : terms_) out.terms_.emplace(k, a.conj());
  return out;
}

OperatorExpr& OperatorExpr::operator+=(const OperatorExpr& o) {
  if (o.n_ != n_) throw Error(ErrorCode::kDimensionMismatch, "operator dimension mismatch");
  for (const auto& [k, a] : o.terms_) add_term(k, a);
  return *this;
}

OperatorExpr& OperatorExpr::operator-=(const OperatorExpr& o) {
  if (o.n_ != n_) throw Error(ErrorCode::kDimensionMismatch, "operator dimension mismatch");
  for (const auto& [k, a] : o.terms_) add_term(k, -a);
  return *this;
}

OperatorExpr& OperatorExpr::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, a] : terms_) a *= s;
  return *this;
}

OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b) {
  if (a.n_ != b.n_) throw Error(ErrorCode::kDimensionMismatch, "operator dimension mismatch");
  std::size_t n = a.n_;
  OperatorExpr out(n);
  for (const auto& [ka, ca] : a.terms_) {
    const LinearMap& L = ka.pullback;
    const bool plain = L.is_identity();
    // P_L d_j = sum_i (L^-1)_{ij} d_i P_L, written as linear forms in the d symbols.
    std::vector<Polynomial> dforms;
    if (!plain) {
      LinearMap inv = L.inverse();
      std::vector<Rational> tr(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) tr[j * n + i] = inv.at(i, j);
      dforms = linear_forms(LinearMap(n, std::move(tr)));
    }
    const auto betas = sub_indices(ka.derivative);
    for (const auto& [kb, cb] : b.terms_) {
      // a d^g P_L  b d^e P_M = a d^g (b o L) D P_{ML}
      Polynomial moved = plain ? cb : compose_linear(cb, L);
      Polynomial dpoly = plain ? Polynomial::basis(kb.derivative) : monomial_in_forms(dforms, kb.derivative);
      LinearMap combined = kb.pullback * L;
      for (const auto& beta : betas) {
        Polynomial db = derivative(moved, beta);
        if (db.is_zero()) continue;
        Polynomial base = Scalar(binomial(ka.derivative, beta)) * (ca * db);
        MultiIndex rest = ka.derivative - beta;
        for (const auto& [eps, d] : dpoly.terms()) out.add_term({combined, rest + eps}, d * base);
      }
    }
  }
  return out;
}

bool operator==(const OperatorExpr& a, const OperatorExpr& b) {
  if (a.n_ != b.n_ || a.terms_.size() != b.terms_.size()) return false;
  auto ia = a.terms_.begin();
  auto ib = b.terms_.begin();
  for (; ia != a.terms_.end(); ++ia, ++ib) {
    if (!(ia->first.pullback == ib->first.pullback) || !(ia->first.derivative == ib->first.derivative)) return false;
    if (ia->second != ib->second) return false;
  }
  return true;
}

namespace {

int compare_poly(const Polynomial& a, const Polynomial& b) {
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  GradedLexLess less;
  for (; ia != a.terms().end() && ib != b.terms().end(); ++ia, ++ib) {
    if (less(ia->first, ib->first)) return -1;
    if (less(ib->first, ia->first)) return 1;
    auto c = compare(ia->second, ib->second);
    if (c != 0) return c < 0 ? -1 : 1;
  }
  if (ia == a.terms().end() && ib == b.terms().end()) return 0;
  return ia == a.terms().end() ? -1 : 1;
}

}  // namespace

bool operator<(const OperatorExpr& a, const OperatorExpr& b) {
  if (a.n_ != b.n_) return a.n_ < b.n_;
  auto ia = a.terms_.begin();
  auto ib = b.terms_.begin();
  TermKeyLess less;
  for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
    if (less(ia->first, ib->first)) return true;
    if (less(ib->first, ia->first)) return false;
    if (int c = compare_poly(ia->second, ib->second); c != 0) return c < 0;
  }
  return ia == a.terms_.end() && ib != b.terms_.end();
}

OperatorExpr power(const OperatorExpr& q, int k) {
  if (k < 0) throw Error(ErrorCode::kInvalidArgument, "negative operator power");
  OperatorExpr out = OperatorExpr::identity(q.dim());
  for (int i = 0; i < k; ++i) out = out * q;
  return out;
}

OperatorExpr normal_form(const OperatorExpr& q) {
  OperatorExpr out(q.dim());
  for (const auto& [k, a] : q.terms()) {
    std::optional<LinearMap> L;
    if (!k.pullback.is_identity()) L = k.pullback;
    out += OperatorExpr::from_terms(q.dim(), {{a, k.derivative, L}});
  }
  return out;
}

OperatorExpr transpose(const OperatorExpr& q) {
  std::size_t n = q.dim();
  OperatorExpr out(n);
  for (const auto& [k, a] : q.terms()) {
    OperatorExpr piece = OperatorExpr::derivative(k.derivative) * OperatorExpr::multiplication(a);
    if (k.derivative.order() % 2) piece *= Scalar(-1);
    if (!k.pullback.is_identity()) {
      Rational d = abs(k.pullback.det());
      piece = Scalar(Rational(1 / d)) * (OperatorExpr::pullback(k.pullback.inverse()) * piece);
    }
    out += piece;
  }
  return out;
}

EssentialOrder essential_order(const OperatorExpr& q, int probe_depth) {
  EssentialOrder eo;
  for (const auto& [k, a] : q.terms()) eo.q = std::max(eo.q, k.derivative.order() - a.low_order());
  for (const auto& alpha : enumerate(q.dim(), std::max(probe_depth, 0))) {
    Degree d = apply_delta(q, DeltaVector::basis(alpha)).degree();
    if (d.is_finite()) eo.observed = std::max(eo.observed, d.value() - alpha.order());
  }
  eo.exact = !q.has_pullback() || eo.q == 0 || eo.observed == eo.q;
  return eo;
}

DeltaVector pullback_delta(const LinearMap& L, const MultiIndex& alpha) {
  std::size_t n = alpha.dim();
  if (L.is_identity()) return DeltaVector::basis(alpha);
  // P_L delta^(a) = |det L|^-1 sum_{|b|=|a|} (a!/b!) [x^a](L^-1 x)^b delta^(b)
  LinearMap inv = L.inverse();
  auto forms = linear_forms(inv);
  Rational scale = 1 / abs(L.det());
  Rational afac(alpha.factorial());
  DeltaVector out(n);
  for (const auto& beta : enumerate(n, alpha.order())) {
    if (beta.order() != alpha.order()) continue;
    Scalar c = monomial_in_forms(forms, beta).coeff(alpha);
    if (c.is_zero()) continue;
    Rational w = scale * afac / Rational(beta.factorial());
    out.add(beta, c * Scalar(w));
  }
  return out;
}

DeltaVector apply_delta(const OperatorExpr& q, const DeltaVector& v) {
  if (q.dim() != v.dim()) throw Error(ErrorCode::kDimensionMismatch, "apply_delta: dimension mismatch");
  std::size_t n = q.dim();
  DeltaVector out(n);
  for (const auto& [alpha, c] : v.terms()) {
    for (const auto& [k, a] : q.terms()) {
      DeltaVector pulled = pullback_delta(k.pullback, alpha);
      for (const auto& [kappa0, pc] : pulled.terms()) {
        MultiIndex kappa = kappa0 + k.derivative;
        // x^b delta^(k) = (-1)^|b| k!/(k-b)! delta^(k-b) when b <= k
        for (const auto& [beta, ac] : a.terms()) {
          if (!beta.le(kappa)) continue;
          MultiIndex rest = kappa - beta;
          Rational f(kappa.factorial(), rest.factorial());
          f.canonicalize();
          if (beta.order() % 2) f = -f;
          out.add(rest, c * pc * ac * Scalar(f));
        }
      }
    }
  }
  return out;
}

Polynomial apply_poly(const OperatorExpr& q, const Polynomial& f) {
  if (q.dim() != f.dim()) throw Error(ErrorCode::kDimensionMismatch, "apply_poly: dimension mismatch");
  Polynomial out(q.dim());
  for (const auto& [k, a] : q.terms()) out += a * derivative(compose_linear(f, k.pullback), k.derivative);
  return out;
}

bool operator_equal(const OperatorExpr& a, const OperatorExpr& b) { return normal_form(a) == normal_form(b); }

OperatorExpr commutator(const OperatorExpr& a, const OperatorExpr& b) { return a * b - b * a; }

// ---------------------------------------------------------------- constructors

OperatorExpr euler(std::size_t n, const Scalar& a) {
  OperatorExpr q = OperatorExpr::scalar(n, -a);
  for (std::size_t i = 0; i < n; ++i)
    q += OperatorExpr::multiplication(coordinate(n, i)) * OperatorExpr::derivative(MultiIndex::unit(n, i));
  return q;
}

OperatorExpr dalembert(std::size_t n, const Rational& m2, const Metric& g) {
  if (g.dim() != n) throw Error(ErrorCode::kDimensionMismatch, "metric dimension mismatch");
  OperatorExpr q = OperatorExpr::scalar(n, Scalar(m2));
  for (std::size_t mu = 0; mu < n; ++mu) {
    MultiIndex two(n);
    two[mu] = 2;
    q += Scalar(g[mu]) * OperatorExpr::derivative(two);
  }
  return q;
}

OperatorExpr lorentz_generator(std::size_t n, std::size_t mu, std::size_t nu, const Metric& g) {
  if (g.dim() != n) throw Error(ErrorCode::kDimensionMismatch, "metric dimension mismatch");
  if (mu >= n || nu >= n) throw Error(ErrorCode::kIndexOutOfRange, "Lorentz index out of range");
  auto x = [&](std::size_t i) { return OperatorExpr::multiplication(Scalar(g[i]) * coordinate(n, i)); };
  auto d = [&](std::size_t i) { return OperatorExpr::derivative(MultiIndex::unit(n, i)); };
  return x(mu) * d(nu) - x(nu) * d(mu);
}

OperatorExpr casimir(std::size_t n, const Metric& g) {
  // L^{mu nu} = g^{mu mu} g^{nu nu} L_{mu nu}
  OperatorExpr c(n);
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t nu = 0; nu < n; ++nu) {
      if (mu == nu) continue;
      OperatorExpr l = lorentz_generator(n, mu, nu, g);
      c += Scalar(g[mu] * g[nu]) * (l * l);
    }
  return c;
}

OperatorExpr reflection(const LinearMap& L) { return OperatorExpr::pullback(L); }

OperatorExpr parity(std::size_t n) { return OperatorExpr::pullback(LinearMap::scaled_identity(n, Rational(-1))); }

OperatorExpr monomial_derivative(const MultiIndex& gamma) { return OperatorExpr::derivative(gamma); }

}  // namespace onshell
