#pragma once

// JSON encoding shared by the command line tool and the tests.
// Rationals are strings "p/q" ("p" for integers), scalars {"re", "im"},
// multi-indices integer arrays.

#include <istream>
#include <string>

#include <json.hpp>

#include "onshell/chi.hpp"
#include "onshell/deltaspace.hpp"
#include "onshell/spectral.hpp"

namespace onshell {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& q);
Json to_json(const Scalar& s);
Json to_json(const MultiIndex& a);
/// {"n": n, "terms": [{"alpha": [...], "coeff": {...}}]}, graded-lex order.
Json to_json(const DeltaVector& v);
Json to_json(const Polynomial& p);
Json to_json(const Matrix& m);
/// Shape, tag, both basis listings and row-major entries.
Json to_json(const RestrictionMatrix& m);
/// {"coeffs": [...], "text": "1 - 4*z"}
Json to_json(const ExactPolynomial& p);
Json to_json(const ConstCoeffOperator& op);

Rational rational_from_json(const Json& j);
Scalar scalar_from_json(const Json& j);
MultiIndex multi_index_from_json(const Json& j);
/// Accepts a full {"n", "terms"} object, a single {"alpha", "coeff"} term or
/// an array of terms. n = 0 means "infer from the multi-indices".
DeltaVector delta_from_json(const Json& j, std::size_t n);
Polynomial polynomial_from_json(const Json& j, std::size_t n);

/// Parses text, throwing Error(kParse) with the parser's message.
Json parse_json(const std::string& text);

}  // namespace onshell
