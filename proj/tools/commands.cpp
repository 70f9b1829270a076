#include "commands.hpp"

#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "onshell/chi.hpp"
#include "onshell/degree.hpp"
#include "onshell/error.hpp"
#include "onshell/extension.hpp"
#include "onshell/json_io.hpp"
#include "onshell/spectral.hpp"
#include "onshell/syntax.hpp"

namespace onshell::cli {

namespace {

struct Options {
  std::size_t dim = 0;
  std::optional<int> degree;
  std::vector<std::string> ops;
  std::vector<std::string> residues;
  std::string metric;
  std::vector<std::string> m2;
  std::string c = "1";
  int k_max = 4;
  bool json = false;
  bool text = false;

  std::string a;
  std::optional<std::string> indices;
  std::string route = "projection";
  int k = 1;
  int probe = 2;
  bool gram = false;
  bool joint = false;
  bool pinv = false;
  bool lorentz = false;
  bool serial = false;
  std::vector<std::string> sectors;
  std::vector<std::string> words;
  std::string action;
  std::string poly;
  std::string rule;
  std::string bound = "0";
  bool exact = false;
  std::string gamma;
  std::size_t n2 = 0;
  std::string bound2 = "0";
  bool exact2 = false;
};

struct Outcome {
  Json body;
  int code = 0;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::size_t need_dim(const Options& o) {
  if (o.dim == 0) throw Error(ErrorCode::kInvalidArgument, "--dim is required and must be >= 1");
  return o.dim;
}

int need_degree(const Options& o) {
  if (!o.degree) throw Error(ErrorCode::kInvalidArgument, "--degree is required");
  if (*o.degree < 0) throw Error(ErrorCode::kInvalidArgument, "--degree must be >= 0");
  return *o.degree;
}

Metric metric_of(const Options& o) {
  std::size_t n = need_dim(o);
  if (o.metric.empty()) return Metric::minkowski(n);
  Metric g = Metric::parse(o.metric);
  if (g.dim() != n)
    throw Error(ErrorCode::kDimensionMismatch, "metric " + o.metric + " does not have " + std::to_string(n) + " entries");
  return g;
}

// "re,im" or "re"
Scalar parse_complex(const std::string& s) {
  auto parts = split(s, ',');
  if (parts.empty() || parts.size() > 2) throw Error(ErrorCode::kParse, "expected re or re,im: '" + s + "'");
  Rational re = parse_rational(trim(parts[0]));
  Rational im = parts.size() == 2 ? parse_rational(trim(parts[1])) : Rational(0);
  return {re, im};
}

Rational single_m2(const Options& o) {
  if (o.m2.empty()) return 0;
  if (o.m2.size() > 1) throw Error(ErrorCode::kInvalidArgument, "this subcommand takes a single --m2");
  return parse_rational(trim(o.m2.front()));
}

std::vector<OperatorExpr> ops_of(const Options& o) {
  std::size_t n = need_dim(o);
  Metric g = metric_of(o);
  std::vector<OperatorExpr> out;
  for (const auto& t : o.ops) out.push_back(parse_operator(t, n, g));
  return out;
}

OperatorExpr first_op(const Options& o) {
  if (o.ops.empty()) throw Error(ErrorCode::kInvalidArgument, "--op is required");
  return ops_of(o).front();
}

std::string read_all(std::istream& in) { return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}; }

// Each --residue is JSON, optionally prefixed "IDX=". Unprefixed entries go
// to op 0, 1, 2, ... in order. "-" reads standard input.
std::vector<std::pair<std::size_t, DeltaVector>> residues_of(const Options& o, std::istream& in) {
  std::vector<std::pair<std::size_t, DeltaVector>> out;
  std::size_t next = 0;
  std::optional<std::string> stdin_text;
  for (const auto& raw : o.residues) {
    std::size_t idx = next;
    std::string body = raw;
    auto eq = raw.find('=');
    if (eq != std::string::npos && eq > 0 && raw.find_first_not_of("0123456789") == eq) {
      idx = std::stoul(raw.substr(0, eq));
      body = raw.substr(eq + 1);
    } else {
      ++next;
    }
    if (trim(body) == "-") {
      if (!stdin_text) stdin_text = read_all(in);
      body = *stdin_text;
    }
    // without --dim the length of the first multi-index decides
    out.emplace_back(idx, delta_from_json(parse_json(body), o.dim));
  }
  return out;
}

DeltaVector single_vector(const Options& o, std::istream& in, std::size_t which) {
  auto rs = residues_of(o, in);
  if (rs.size() <= which)
    throw Error(ErrorCode::kInvalidArgument, "expected at least " + std::to_string(which + 1) + " --residue vectors");
  return rs[which].second;
}

ExtensionRecord record_of(const Options& o, const std::vector<OperatorExpr>& ops, std::istream& in) {
  ExtensionRecord rec(need_dim(o), need_degree(o));
  for (auto& [idx, w] : residues_of(o, in)) {
    if (idx >= ops.size())
      throw Error(ErrorCode::kIndexOutOfRange, "residue keyed to op " + std::to_string(idx) + " but only " +
                                                   std::to_string(ops.size()) + " ops given");
    rec.set_residue(ops[idx], w);
  }
  return rec;
}

Json op_json(const OperatorExpr& q) { return print_operator(q); }

Json residues_json(const ExtensionRecord& rec) {
  Json out = Json::array();
  for (const auto& [q, w] : rec.residues()) out.push_back(Json{{"op", op_json(q)}, {"residue", to_json(w)}});
  return out;
}

Json ints_json(const std::vector<std::size_t>& v) {
  Json out = Json::array();
  for (auto x : v) out.push_back(x);
  return out;
}

std::vector<std::size_t> parse_indices(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& p : split(s, ',')) {
    std::string t = trim(p);
    if (t.empty()) continue;
    if (t.find_first_not_of("0123456789") != std::string::npos)
      throw Error(ErrorCode::kParse, "index '" + t + "' is not a non-negative integer");
    out.push_back(std::stoul(t));
  }
  return out;
}

Degree parse_degree(const std::string& s) {
  std::string t = trim(s);
  if (t == "-inf") return Degree::minus_infinity();
  try {
    std::size_t used = 0;
    int v = std::stoi(t, &used);
    if (used == t.size()) return Degree(v);
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kParse, "expected an integer degree or -inf: '" + s + "'");
}

Json degree_json(const DegreeBound& d) {
  Json v = d.value.is_finite() ? Json(d.value.value()) : Json("-inf");
  return Json{{"value", v}, {"exact", d.exact}, {"text", d.str()}};
}

// ---------------------------------------------------------------------------

Outcome cmd_space(const Options& o, std::istream& in) {
  std::size_t n = need_dim(o);
  Json body{{"action", o.action}};
  if (o.action == "enumerate") {
    Json list = Json::array();
    for (const auto& a : enumerate(n, need_degree(o))) list.push_back(to_json(a));
    body["size"] = list.size();
    body["basis"] = std::move(list);
  } else if (o.action == "pair") {
    body["value"] = to_json(pair(single_vector(o, in, 0), polynomial_from_json(parse_json(o.poly), n)));
  } else if (o.action == "smap") {
    body["polynomial"] = to_json(smap(need_degree(o), single_vector(o, in, 0)));
  } else if (o.action == "tmap") {
    body["delta"] = to_json(tmap(need_degree(o), polynomial_from_json(parse_json(o.poly), n)));
  } else if (o.action == "inner") {
    auto rs = residues_of(o, in);
    if (rs.size() < 2) throw Error(ErrorCode::kInvalidArgument, "inner needs two --residue vectors");
    body["value"] = to_json(inner(need_degree(o), rs[0].second, rs[1].second));
  } else {
    throw Error(ErrorCode::kInvalidArgument, "--action must be enumerate, pair, smap, tmap or inner");
  }
  return {body};
}

Outcome cmd_op(const Options& o, std::istream& in) {
  auto ops = ops_of(o);
  if (ops.empty()) throw Error(ErrorCode::kInvalidArgument, "--op is required");
  auto need_two = [&] {
    if (ops.size() < 2) throw Error(ErrorCode::kInvalidArgument, "this action needs two --op");
  };
  Json body{{"action", o.action}, {"op", op_json(ops[0])}};
  if (o.action == "normal") {
    OperatorExpr q = normal_form(ops[0]);
    body["normal_form"] = op_json(q);
    body["terms"] = q.terms().size();
    body["differential_order"] = q.differential_order();
    body["has_pullback"] = q.has_pullback();
  } else if (o.action == "transpose") {
    body["transpose"] = op_json(transpose(ops[0]));
  } else if (o.action == "apply-delta") {
    body["result"] = to_json(apply_delta(ops[0], single_vector(o, in, 0)));
  } else if (o.action == "apply-poly") {
    body["result"] = to_json(apply_poly(ops[0], polynomial_from_json(parse_json(o.poly), o.dim)));
  } else if (o.action == "equal") {
    need_two();
    body["other"] = op_json(ops[1]);
    body["equal"] = operator_equal(ops[0], ops[1]);
  } else if (o.action == "commutator") {
    need_two();
    body["other"] = op_json(ops[1]);
    OperatorExpr c = commutator(ops[0], ops[1]);
    body["commutator"] = op_json(c);
    body["commute"] = c.is_zero();
  } else {
    throw Error(ErrorCode::kInvalidArgument, "--action must be normal, transpose, apply-delta, apply-poly, equal or commutator");
  }
  return {body};
}

Outcome cmd_restrict(const Options& o, std::istream&) {
  OperatorExpr q = first_op(o);
  RestrictionMatrix m = o.serial ? serial::restriction(q, need_degree(o)) : restriction(q, need_degree(o));
  return {Json{{"op", op_json(q)}, {"matrix", to_json(m)}}};
}

Outcome cmd_adjoint(const Options& o, std::istream&) {
  OperatorExpr q = first_op(o);
  int r = need_degree(o);
  RestrictionMatrix a = restriction(q, r);
  RestrictionMatrix s = o.serial ? serial::adjoint_restriction(q, r) : adjoint_restriction(q, r);
  Json body{{"op", op_json(q)}, {"adjoint", to_json(s)}, {"matches_weighted_adjoint", adjoint(a).m == s.m}};
  body["self_adjoint"] = is_self_adjoint(a);
  body["normal"] = is_normal(a);
  return {body};
}

Outcome cmd_essord(const Options& o, std::istream&) {
  OperatorExpr q = first_op(o);
  EssentialOrder e = essential_order(q, o.probe);
  Json body{{"op", op_json(q)}, {"q", e.q}, {"exact", e.exact}, {"observed", e.observed}, {"probe_depth", o.probe}};
  if (o.degree) body["linearity_precondition"] = linearity_precondition(q, need_degree(o));
  return {body};
}

Outcome cmd_minpoly(const Options& o, std::istream&) {
  OperatorExpr q = first_op(o);
  int r = need_degree(o);
  RestrictionMatrix m = o.gram ? gram_operator(q, r) : restriction(q, r);
  if (!m.is_square())
    throw Error(ErrorCode::kInvalidArgument, "Q|_r is not square (positive essential order); use --gram");
  ExactPolynomial p = minimal_polynomial(m);
  return {Json{{"op", op_json(q)},
               {"matrix", o.gram ? "gram" : "restrict"},
               {"size", m.m.rows()},
               {"minimal_polynomial", to_json(p)},
               {"squarefree", p.is_squarefree()}}};
}

Outcome cmd_projpoly(const Options& o, std::istream&) {
  OperatorExpr q = first_op(o);
  int r = need_degree(o);
  return {Json{{"op", op_json(q)},
               {"projection_polynomial", to_json(projection_polynomial(q, r))},
               {"projector", to_json(projector_onto_kernel(q, r))}}};
}

Outcome cmd_kernel(const Options& o, std::istream&) {
  OperatorExpr q = first_op(o);
  auto basis = kernel_basis(restriction(q, need_degree(o)));
  Json list = Json::array();
  for (const auto& v : basis) list.push_back(to_json(v));
  return {Json{{"op", op_json(q)}, {"dimension", basis.size()}, {"basis", std::move(list)}}};
}

Outcome cmd_extend_check(const Options& o, std::istream& in) {
  auto ops = ops_of(o);
  if (ops.empty()) throw Error(ErrorCode::kInvalidArgument, "--op is required");
  ExtensionRecord rec = record_of(o, ops, in);
  ExistenceReport rep = existence_check(rec, ops[0]);
  Json body{{"op", op_json(ops[0])}, {"exists", rep.exists}, {"criterion", rep.criterion}};
  if (rep.exists) {
    body["preimage"] = to_json(rep.certificate);
  } else {
    body["witness"] = to_json(rep.certificate);
    int top = rec.degree() + essential_order(ops[0], 0).q;
    body["witness_pairing"] = to_json(inner(top, rep.certificate, rec.residue(ops[0])));
  }
  return {body, rep.exists ? 0 : 2};
}

Outcome cmd_counterterm(const Options& o, std::istream& in) {
  auto ops = ops_of(o);
  if (ops.empty()) throw Error(ErrorCode::kInvalidArgument, "--op is required");
  ExtensionRecord rec = record_of(o, ops, in);
  DeltaVector v(rec.dim());
  std::string mode = "single";
  if (o.joint && o.pinv) throw Error(ErrorCode::kInvalidArgument, "--joint and --pseudoinverse are exclusive");
  if (o.joint) {
    mode = "joint";
    v = multi_commuting_correction(rec, ops);
  } else if (o.pinv) {
    mode = "pseudoinverse";
    v = -pseudoinverse_correction(restriction(ops[0], rec.degree()), rec.residue(ops[0]));
  } else {
    v = onshell_correction(rec, ops[0]);
  }
  ExtensionRecord after = apply_counterterm(rec, v);
  return {Json{{"mode", mode}, {"counterterm", to_json(v)}, {"residues", residues_json(after)}}};
}

Outcome cmd_order_raise(const Options& o, std::istream& in) {
  auto ops = ops_of(o);
  if (ops.empty()) throw Error(ErrorCode::kInvalidArgument, "--op is required");
  ExtensionRecord rec = record_of(o, ops, in);
  DeltaVector v = order_raising_correction(rec, ops[0], o.k);
  ExtensionRecord after = apply_counterterm(rec, v);
  OperatorExpr rk = power(ops[0], o.k);
  bool killed = apply_delta(ops[0], after.residue(rk)).is_zero();
  return {Json{{"op", op_json(ops[0])},
               {"k", o.k},
               {"counterterm", to_json(v)},
               {"annihilated", killed},
               {"residues", residues_json(after)}}};
}

std::vector<CasimirWord> parse_words(const std::vector<std::string>& ws) {
  std::vector<CasimirWord> out;
  for (const auto& w : ws) {
    auto colon = w.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::kParse, "word must look like coeff:i,j,...: '" + w + "'");
    out.push_back({Scalar(parse_rational(trim(w.substr(0, colon)))), parse_indices(w.substr(colon + 1))});
  }
  return out;
}

Json casimir_report_json(const CasimirReport& rep) {
  Json f = Json::array();
  for (const auto& s : rep.failures) f.push_back(s);
  Json j{{"level", rep.level},          {"shape", rep.shape},
         {"self_adjoint", rep.self_adjoint}, {"commute", rep.commute},
         {"kernel_equality", rep.kernel_equality}, {"passed", rep.passed()},
         {"failures", std::move(f)}};
  if (!rep.commute) j["commutator"] = op_json(rep.commutator);
  return j;
}

Outcome cmd_casimir_check(const Options& o, std::istream& in) {
  std::size_t n = need_dim(o);
  Metric g = metric_of(o);
  OperatorExpr c;
  std::vector<OperatorExpr> rs;
  std::vector<CasimirWord> words;
  if (o.ops.empty()) {
    c = casimir(n, g);
    rs = lorentz_generators(n, g);
    words = o.words.empty() ? casimir_words(n, g) : parse_words(o.words);
  } else {
    auto ops = ops_of(o);
    c = ops[0];
    rs.assign(ops.begin() + 1, ops.end());
    if (o.words.empty()) throw Error(ErrorCode::kInvalidArgument, "--word is required when C and R are given");
    words = parse_words(o.words);
  }
  std::vector<OperatorExpr> all{c};
  all.insert(all.end(), rs.begin(), rs.end());

  CasimirReport rep = verify_casimir_hypotheses(c, rs, words, need_degree(o));
  Json gens = Json::array();
  for (const auto& r : rs) gens.push_back(op_json(r));
  Json body{{"casimir", op_json(c)}, {"generators", std::move(gens)}, {"report", casimir_report_json(rep)}};
  if (!rep.passed()) return {body, 2};
  if (!o.residues.empty()) {
    ExtensionRecord rec = record_of(o, all, in);
    body["casimir_residue"] = to_json(casimir_residue(rec, c, rs, words));
    DeltaVector v = casimir_correction(rec, c, rs, words);
    body["counterterm"] = to_json(v);
    body["residues"] = residues_json(apply_counterterm(rec, v));
  }
  return {body};
}

Outcome cmd_renorm(const Options& o, std::istream& in) {
  std::size_t n = need_dim(o);
  std::vector<Sector> sectors;
  for (const auto& s : o.sectors) {
    auto parts = split(s, ':');
    if (parts.empty() || parts.size() > 2) throw Error(ErrorCode::kParse, "sector must look like a or a:N: '" + s + "'");
    Sector sec;
    try {
      sec.a = std::stol(trim(parts[0]));
      sec.multiplicity = parts.size() == 2 ? std::stoi(trim(parts[1])) : 1;
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParse, "sector must look like a or a:N: '" + s + "'");
    }
    if (sec.multiplicity < 1) throw Error(ErrorCode::kInvalidArgument, "sector multiplicity must be >= 1");
    sectors.push_back(sec);
  }
  auto ops = ops_of(o);
  ExtensionRecord rec = record_of(o, ops, in);
  DeltaVector v = renorm_map(rec, sectors, o.lorentz, metric_of(o));
  return {Json{{"sector_operator", op_json(sector_operator(n, sectors))},
               {"lorentz", o.lorentz},
               {"counterterm", to_json(v)},
               {"residues", residues_json(apply_counterterm(rec, v))}}};
}

Outcome cmd_homog_unique(const Options& o, std::istream&) {
  if (o.a.empty()) throw Error(ErrorCode::kInvalidArgument, "--a is required");
  Scalar a = parse_complex(o.a);
  UniquenessReport rep = homogeneous_extension_unique(need_dim(o), a, need_degree(o));
  Json levels = Json::array();
  for (int l : rep.kernel_levels) levels.push_back(l);
  return {Json{{"n", o.dim},
               {"a", to_json(a)},
               {"r", need_degree(o)},
               {"exists", rep.unique},
               {"unique", rep.unique},
               {"kernel_levels", std::move(levels)},
               {"determinant", to_json(rep.determinant)}},
          rep.unique ? 0 : 2};
}

ConstCoeffOperator const_coeff(const OperatorExpr& q) {
  Polynomial p(q.dim());
  for (const auto& [key, coeff] : q.terms()) {
    if (!key.pullback.is_identity() || coeff.degree() > Degree(0))
      throw Error(ErrorCode::kInvalidArgument, "source operator must have constant coefficients");
    p.add(key.derivative, value_at_zero(coeff));
  }
  return ConstCoeffOperator(p);
}

Json chi_json(const ChiResult& r) {
  return Json{{"source", to_json(r.source)}, {"chi", to_json(r.chi)}, {"chi1", to_json(r.chi1)},
              {"s", r.s},                    {"provenance", r.provenance}, {"text", r.str()}};
}

Outcome cmd_chi(const Options& o, std::istream&) {
  std::size_t n = need_dim(o);
  ChiConfig cfg = ChiConfig::make(n, metric_of(o), single_m2(o));
  Scalar c = parse_complex(o.c);
  if (o.indices.has_value() == !o.ops.empty())
    throw Error(ErrorCode::kInvalidArgument, "give exactly one of --indices and --op");
  std::vector<std::size_t> idx;
  ConstCoeffOperator s;
  if (o.indices) {
    idx = parse_indices(*o.indices);
    s = ConstCoeffOperator::monomial(n, idx);
  } else {
    s = const_coeff(first_op(o));
  }
  bool proj = o.route == "projection" || o.route == "both";
  bool expl = o.route == "explicit" || o.route == "both";
  if (!proj && !expl) throw Error(ErrorCode::kInvalidArgument, "--route must be projection, explicit or both");
  if (expl && !o.indices) throw Error(ErrorCode::kInvalidArgument, "the explicit route needs --indices");

  Json body{{"n", n}, {"metric", cfg.metric.str()}, {"m2", to_json(cfg.m2)}};
  std::optional<ConstCoeffOperator> a, b;
  if (proj) {
    ChiResult r = chi_projection(s, c, cfg);
    body["projection"] = chi_json(r);
    body["theta"] = to_json(theta_counterterm(s, c, cfg));
    a = r.chi;
  }
  if (expl) {
    ChiResult r = chi_explicit_result(idx, cfg);
    Json contractions = Json::array();
    for (const auto& ct : lambda_contraction(idx, cfg.metric))
      contractions.push_back(Json{{"weight", to_json(ct.weight)}, {"rest", ints_json(ct.rest)}});
    Json alphas = Json::array();
    int k = static_cast<int>(idx.size());
    for (int j = 0; 2 * j <= k; ++j) alphas.push_back(to_json(alpha_coefficient(j, k, cfg)));
    body["explicit"] = chi_json(r);
    body["contractions"] = std::move(contractions);
    body["alpha"] = std::move(alphas);
    b = r.chi;
  }
  if (a && b) body["agree"] = *a == *b;
  body["text"] = proj ? body["projection"]["text"] : body["explicit"]["text"];
  return {body};
}

Outcome cmd_chi_verify(const Options& o, std::istream&) {
  std::size_t n = o.dim == 0 ? 4 : o.dim;
  Options fixed = o;
  fixed.dim = n;
  Metric g = metric_of(fixed);
  std::vector<Rational> m2s;
  for (const auto& s : o.m2) m2s.push_back(parse_rational(trim(s)));
  if (m2s.empty()) m2s.push_back(0);
  ChiCrosscheckReport rep = o.serial ? serial::chi_crosscheck(o.k_max, n, m2s, g) : chi_crosscheck(o.k_max, n, m2s, g);
  Json list = Json::array();
  for (const auto& m : rep.mismatches)
    list.push_back(Json{{"indices", ints_json(m.indices)},
                        {"m2", to_json(m.m2)},
                        {"projection", m.projection.str()},
                        {"explicit", m.explicit_formula.str()}});
  Json ms = Json::array();
  for (const auto& m : m2s) ms.push_back(to_json(m));
  return {Json{{"n", n},
               {"metric", g.str()},
               {"k_max", o.k_max},
               {"m2", std::move(ms)},
               {"checked", rep.checked},
               {"passed", rep.passed()},
               {"mismatches", std::move(list)}},
          rep.passed() ? 0 : 2};
}

Outcome cmd_degree(const Options& o, std::istream& in) {
  DegreeBound d{parse_degree(o.bound), o.exact};
  DegreeBound out;
  if (o.rule == "delta") {
    out = deg_delta(single_vector(o, in, 0));
  } else if (o.rule == "derivative" || o.rule == "monomial") {
    std::vector<int> e;
    for (auto i : parse_indices(o.gamma)) e.push_back(static_cast<int>(i));
    MultiIndex m(e);
    out = o.rule == "derivative" ? bound_derivative(d, m) : bound_monomial(d, m);
  } else if (o.rule == "vanishing") {
    out = bound_vanishing_factor(d, o.k);
  } else if (o.rule == "tensor") {
    out = bound_tensor(d, need_dim(o), DegreeBound{parse_degree(o.bound2), o.exact2}, o.n2);
  } else if (o.rule == "operator") {
    out = bound_operator(d, first_op(o));
  } else {
    throw Error(ErrorCode::kInvalidArgument, "--rule must be delta, derivative, monomial, vanishing, tensor or operator");
  }
  return {Json{{"rule", o.rule}, {"degree", degree_json(out)}}};
}

// ---------------------------------------------------------------------------

using Handler = std::function<Outcome(const Options&, std::istream&)>;

struct Entry {
  CommandInfo info;
  Handler run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = {
      {{"space", "delta spaces: enumerate, pair, smap, tmap, inner", {"enumerate", "pair", "smap", "tmap", "inner"}},
       cmd_space},
      {{"op",
        "operator algebra on parsed expressions",
        {"parse_operator", "normal_form", "transpose", "apply_delta", "apply_poly", "operator_equal", "commutator",
         "euler", "dalembert", "lorentz_generator", "casimir", "reflection", "monomial_derivative"}},
       cmd_op},
      {{"restrict", "matrix of Q|_r", {"restriction"}}, cmd_restrict},
      {{"adjoint", "matrix of (Q|_r)* and normality", {"adjoint_restriction", "is_self_adjoint", "is_normal"}},
       cmd_adjoint},
      {{"essord", "essential order of Q", {"essential_order", "linearity_precondition"}}, cmd_essord},
      {{"minpoly", "minimal polynomial of Q|_r or of B", {"minimal_polynomial", "gram_operator"}}, cmd_minpoly},
      {{"projpoly", "projection polynomial p_r and the kernel projector",
        {"projection_polynomial", "projector_onto_kernel"}},
       cmd_projpoly},
      {{"kernel", "basis of ker Q|_r", {"kernel_basis"}}, cmd_kernel},
      {{"extend-check", "does an on-shell extension exist", {"existence_check", "range_membership"}},
       cmd_extend_check},
      {{"counterterm", "on-shell counterterm for one or several commuting operators",
        {"onshell_correction", "apply_counterterm", "multi_commuting_correction", "pseudoinverse_correction"}},
       cmd_counterterm},
      {{"order-raise", "counterterm from R^k for almost homogeneous extensions", {"order_raising_correction"}},
       cmd_order_raise},
      {{"casimir-check", "Casimir hypotheses and the Casimir counterterm",
        {"verify_casimir_hypotheses", "casimir_correction", "casimir_residue"}},
       cmd_casimir_check},
      {{"renorm", "Lorentz and scaling renormalization map", {"renorm_map", "sector_operator"}}, cmd_renorm},
      {{"homog-unique", "uniqueness of homogeneous extensions", {"homogeneous_extension_unique"}},
       cmd_homog_unique},
      {{"chi", "chi map of a derivative monomial",
        {"theta_counterterm", "chi_projection", "lambda_contraction", "alpha_coefficient", "chi_explicit"}},
       cmd_chi},
      {{"chi-verify", "cross-check both chi routes", {"chi_crosscheck"}}, cmd_chi_verify},
      {{"degree", "degree-of-divergence bounds",
        {"deg_delta", "bound_derivative", "bound_monomial", "bound_vanishing_factor", "bound_tensor",
         "bound_operator"}},
       cmd_degree},
  };
  return e;
}

void render_text(const Json& j, std::ostream& out) {
  if (!j.is_object()) {
    out << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    return;
  }
  for (const auto& [k, v] : j.items()) out << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::kHypothesisFailed:
    case ErrorCode::kNonCommuting:
    case ErrorCode::kNonNormal:
    case ErrorCode::kVanishingDenominator:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

const std::vector<CommandInfo>& command_registry() {
  static const std::vector<CommandInfo> r = [] {
    std::vector<CommandInfo> out;
    for (const auto& e : entries()) out.push_back(e.info);
    return out;
  }();
  return r;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
  CLI::App app{"exact on-shell extension and counterterm calculator", "onshell"};
  app.require_subcommand(1);
  Options o;

  std::map<CLI::App*, const Entry*> handlers;
  for (const auto& e : entries()) {
    CLI::App* sub = app.add_subcommand(e.info.name, e.info.summary);
    handlers[sub] = &e;
    sub->add_option("--dim", o.dim, "spatial dimension n");
    sub->add_option("--degree", o.degree, "degree of divergence r");
    sub->add_option("--op", o.ops, "operator expression (repeatable)");
    sub->add_option("--residue", o.residues, "delta vector JSON, optionally IDX=JSON; - reads stdin");
    sub->add_option("--metric", o.metric, "signature such as +---");
    sub->add_option("--m2", o.m2, "mass squared p/q")->delimiter(',');
    sub->add_option("--c", o.c, "scalar re,im");
    sub->add_option("--k-max", o.k_max, "maximal derivative order");
    auto* jf = sub->add_flag("--json", o.json, "JSON output (default)");
    sub->add_flag("--text", o.text, "plain text output")->excludes(jf);
    sub->add_flag("--serial", o.serial, "use the serial reference kernels");

    const std::string& name = e.info.name;
    if (name == "space" || name == "op") {
      sub->add_option("--action", o.action)->required();
      sub->add_option("--poly", o.poly, "polynomial JSON");
    } else if (name == "essord") {
      sub->add_option("--probe", o.probe, "probe depth");
    } else if (name == "minpoly") {
      sub->add_flag("--gram", o.gram, "use B = (Q|_r)* Q|_r");
    } else if (name == "counterterm") {
      sub->add_flag("--joint", o.joint, "all ops together");
      sub->add_flag("--pseudoinverse", o.pinv, "solve through the normal pseudoinverse");
    } else if (name == "order-raise") {
      sub->add_option("--k", o.k, "power of R");
    } else if (name == "casimir-check") {
      sub->add_option("--word", o.words, "coeff:i,j,... over the R operators");
    } else if (name == "renorm") {
      sub->add_option("--sector", o.sectors, "a or a:N");
      sub->add_flag("--lorentz", o.lorentz, "apply the Casimir step first");
    } else if (name == "homog-unique") {
      sub->add_option("--a", o.a, "homogeneity degree re,im")->allow_extra_args(false);
    } else if (name == "chi") {
      sub->add_option("--indices", o.indices, "comma separated Lorentz indices");
      sub->add_option("--route", o.route, "projection, explicit or both");
    } else if (name == "degree") {
      sub->add_option("--rule", o.rule)->required();
      sub->add_option("--bound", o.bound, "input degree (integer or -inf)");
      sub->add_flag("--exact", o.exact, "input degree is exact");
      sub->add_option("--gamma", o.gamma, "multi-index, comma separated");
      sub->add_option("--k", o.k, "vanishing order");
      sub->add_option("--n2", o.n2, "second dimension");
      sub->add_option("--bound2", o.bound2, "second degree");
      sub->add_flag("--exact2", o.exact2, "second degree is exact");
    }
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  const Entry* entry = nullptr;
  for (auto* sub : app.get_subcommands()) entry = handlers.at(sub);

  auto emit = [&](const Json& j) {
    if (o.text)
      render_text(j, out);
    else
      out << j.dump(2) << "\n";
  };

  try {
    Outcome res = entry->run(o, in);
    emit(res.body);
    return res.code;
  } catch (const ParseError& e) {
    Json j{{"error", {{"code", std::string(error_code_name(e.code()))},
                      {"message", e.what()},
                      {"span", {e.span().begin, e.span().end}}}}};
    emit(j);
    return 1;
  } catch (const NonCommutingError& e) {
    Json j{{"error", {{"code", std::string(error_code_name(e.code()))},
                      {"message", e.what()},
                      {"pair", {e.pair().first, e.pair().second}},
                      {"commutator", print_operator(e.commutator())}}}};
    emit(j);
    return 2;
  } catch (const HypothesisError& e) {
    Json j{{"error", {{"code", std::string(error_code_name(e.code()))},
                      {"message", e.what()},
                      {"report", casimir_report_json(e.report())}}}};
    emit(j);
    return 2;
  } catch (const Error& e) {
    emit(Json{{"error", {{"code", std::string(error_code_name(e.code()))}, {"message", e.what()}}}});
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    emit(Json{{"error", {{"code", "internal_error"}, {"message", e.what()}}}});
    return 1;
  }
}

}  // namespace onshell::cli
