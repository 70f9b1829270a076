#include "onshell/scalar.hpp"

#include <cctype>

#include "onshell/error.hpp"

namespace onshell {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kDegreeOverflow: return "degree_overflow";
    case ErrorCode::kSingularMatrix: return "singular_matrix";
    case ErrorCode::kNonNormal: return "non_normal";
    case ErrorCode::kMissingResidue: return "missing_residue";
    case ErrorCode::kNonCommuting: return "non_commuting";
    case ErrorCode::kHypothesisFailed: return "hypothesis_failed";
    case ErrorCode::kVanishingDenominator: return "vanishing_denominator";
    case ErrorCode::kIndexOutOfRange: return "index_out_of_range";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kInternal: return "internal_error";
  }
  return "unknown";
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? "1" : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw Error(ErrorCode::kParse, "malformed rational '" + std::string(text) + "'");
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw Error(ErrorCode::kParse, "zero denominator in '" + std::string(text) + "'");
  Rational q(n, d);
  q.canonicalize();
  if (negative) q = -q;
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

Scalar& Scalar::operator+=(const Scalar& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (is_real() && o.is_real()) {
    re_ *= o.re_;
    return *this;
  }
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw Error(ErrorCode::kInvalidArgument, "division by zero scalar");
  if (o.is_real()) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  Rational d = o.norm2();
  Rational re = (re_ * o.re_ + im_ * o.im_) / d;
  Rational im = (im_ * o.re_ - re_ * o.im_) / d;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::strong_ordering compare(const Scalar& a, const Scalar& b) {
  if (int c = cmp(a.re_, b.re_); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  if (int c = cmp(a.im_, b.im_); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Scalar::str() const {
  if (is_real()) return to_string(re_);
  std::string imag;
  if (im_ == 1) {
    imag = "i";
  } else if (im_ == -1) {
    imag = "-i";
  } else {
    imag = to_string(im_) + "*i";
  }
  if (sgn(re_) == 0) return imag;
  if (sgn(im_) < 0) {
    std::string mag = im_ == -1 ? "i" : to_string(Rational(-im_)) + "*i";
    return to_string(re_) + " - " + mag;
  }
  return to_string(re_) + " + " + imag;
}

}  // namespace onshell
