#include "onshell/json_io.hpp"

#include "onshell/error.hpp"

namespace onshell {

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const Scalar& s) { return Json{{"re", to_string(s.re())}, {"im", to_string(s.im())}}; }

Json to_json(const MultiIndex& a) { return a.exponents(); }

namespace {

template <class Form>
Json form_to_json(const Form& f) {
  Json terms = Json::array();
  for (const auto& [a, c] : f.terms()) terms.push_back(Json{{"alpha", to_json(a)}, {"coeff", to_json(c)}});
  return Json{{"n", f.dim()}, {"terms", std::move(terms)}};
}

Json basis_listing(const Basis& b) {
  Json out = Json::array();
  for (const auto& a : b.elements()) out.push_back(to_json(a));
  return out;
}

template <class Form>
Form form_from_json(const Json& j, std::size_t n) {
  const Json* terms = &j;
  if (j.is_object() && j.contains("terms")) {
    if (j.contains("n")) {
      auto declared = j.at("n").get<std::size_t>();
      if (n != 0 && declared != n)
        throw Error(ErrorCode::kDimensionMismatch, "vector declares n = " + std::to_string(declared) +
                                                       " but --dim is " + std::to_string(n));
      n = declared;
    }
    terms = &j.at("terms");
  }
  Json single = Json::array();
  if (terms->is_object()) {
    single.push_back(*terms);
    terms = &single;
  }
  if (!terms->is_array()) throw Error(ErrorCode::kParse, "expected a term object or an array of terms");
  if (n == 0) {
    if (terms->empty()) throw Error(ErrorCode::kParse, "cannot infer the dimension of an empty vector");
    n = terms->front().at("alpha").size();
  }
  Form f(n);
  for (const auto& t : *terms) {
    if (!t.is_object() || !t.contains("alpha") || !t.contains("coeff"))
      throw Error(ErrorCode::kParse, "each term needs \"alpha\" and \"coeff\"");
    MultiIndex a = multi_index_from_json(t.at("alpha"));
    if (a.dim() != n) throw Error(ErrorCode::kDimensionMismatch, "multi-index " + a.str() + " has the wrong length");
    f.add(a, scalar_from_json(t.at("coeff")));
  }
  return f;
}

}  // namespace

Json to_json(const DeltaVector& v) { return form_to_json(v); }
Json to_json(const Polynomial& p) { return form_to_json(p); }

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const RestrictionMatrix& m) {
  return Json{{"n", m.n},
              {"r_domain", m.r_domain},
              {"r_codomain", m.r_codomain},
              {"tag", m.tag},
              {"domain_basis", basis_listing(m.domain_basis())},
              {"codomain_basis", basis_listing(m.codomain_basis())},
              {"rows", to_json(m.m)}};
}

Json to_json(const ExactPolynomial& p) {
  Json coeffs = Json::array();
  for (const auto& c : p.coeffs()) coeffs.push_back(to_json(c));
  return Json{{"coeffs", std::move(coeffs)}, {"text", p.str()}};
}

Json to_json(const ConstCoeffOperator& op) {
  Json j = form_to_json(op.symbol());
  j["text"] = op.str();
  return j;
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw Error(ErrorCode::kParse, "expected a rational as \"p/q\" or an integer");
}

Scalar scalar_from_json(const Json& j) {
  if (j.is_object()) {
    Rational re = j.contains("re") ? rational_from_json(j.at("re")) : Rational(0);
    Rational im = j.contains("im") ? rational_from_json(j.at("im")) : Rational(0);
    return {re, im};
  }
  return Scalar(rational_from_json(j));
}

MultiIndex multi_index_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kParse, "multi-index must be an array of integers");
  std::vector<int> e;
  for (const auto& x : j) {
    if (!x.is_number_integer() || x.get<long>() < 0)
      throw Error(ErrorCode::kParse, "multi-index entries must be non-negative integers");
    e.push_back(x.get<int>());
  }
  return MultiIndex(std::move(e));
}

DeltaVector delta_from_json(const Json& j, std::size_t n) { return form_from_json<DeltaVector>(j, n); }
Polynomial polynomial_from_json(const Json& j, std::size_t n) { return form_from_json<Polynomial>(j, n); }

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace onshell
