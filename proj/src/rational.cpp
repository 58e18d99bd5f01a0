#include "tci/rational.hpp"

#include "tci/error.hpp"

namespace tci {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidNode: return "invalid-node";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidWalk: return "invalid-walk";
    case ErrorCode::Collision: return "collision";
    case ErrorCode::InvalidMap: return "invalid-map";
    case ErrorCode::UnknownVariable: return "unknown-variable";
    case ErrorCode::NameClash: return "name-clash";
    case ErrorCode::MissingVariable: return "missing-variable";
    case ErrorCode::SchemaMismatch: return "schema-mismatch";
    case ErrorCode::SpaceMismatch: return "space-mismatch";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::InvalidQuery: return "invalid-query";
    case ErrorCode::Budget: return "budget";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::MalformedTable: return "malformed-table";
    case ErrorCode::InvalidModel: return "invalid-model";
  }
  return "unknown";
}

Rational parse_rational(const std::string& text) {
  auto fail = [&]() -> Rational {
    throw Error(ErrorCode::Parse, "not a rational number: '" + text + "'");
  };
  if (text.empty()) return fail();
  std::string s = text;
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) return fail();
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t scale = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") return fail();
    mpz_class num;
    if (num.set_str(digits[0] == '+' ? digits.substr(1) : digits, 10) != 0) return fail();
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, scale);
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  Rational r;
  if (r.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0) return fail();
  if (r.get_den() == 0) return fail();
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  return c.get_str(10);
}

}  // namespace tci
