#include "shiftlab/rational.hpp"

#include "shiftlab/error.hpp"

#include <cctype>

namespace shiftlab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "INVALID_INPUT";
    case ErrorCode::PrecisionExhausted: return "PRECISION_EXHAUSTED";
    case ErrorCode::Undecided: return "UNDECIDED";
    case ErrorCode::NotInSystem: return "NOT_IN_SYSTEM";
    case ErrorCode::LimitExceeded: return "LIMIT_EXCEEDED";
    case ErrorCode::InsufficientPrefix: return "INSUFFICIENT_PREFIX";
    case ErrorCode::WeightsNotNormalized: return "WEIGHTS_NOT_NORMALIZED";
    case ErrorCode::ModeMismatch: return "MODE_MISMATCH";
    case ErrorCode::SupportTooLarge: return "SUPPORT_TOO_LARGE";
    case ErrorCode::NoClosureInRange: return "NO_CLOSURE_IN_RANGE";
    case ErrorCode::NotReadable: return "NOT_READABLE";
    case ErrorCode::NoCountsInRange: return "NO_COUNTS_IN_RANGE";
    case ErrorCode::HorizonTooSmall: return "HORIZON_TOO_SMALL";
    case ErrorCode::Usage: return "USAGE";
  }
  return "UNKNOWN";
}

bool is_limit_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::PrecisionExhausted:
    case ErrorCode::LimitExceeded:
    case ErrorCode::SupportTooLarge:
    case ErrorCode::NoClosureInRange:
    case ErrorCode::NoCountsInRange:
    case ErrorCode::HorizonTooSmall:
      return true;
    default:
      return false;
  }
}

Rational dyadic(std::uint64_t k) {
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, k);
  return Rational(BigInt(1), den);
}

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw Error(ErrorCode::InvalidInput, "empty rational");
  try {
    if (auto dot = s.find('.'); dot != std::string::npos) {
      bool negative = s[0] == '-';
      std::string digits = s.substr(negative ? 1 : 0);
      dot = digits.find('.');
      std::string whole = digits.substr(0, dot);
      std::string frac = digits.substr(dot + 1);
      for (char c : whole + frac) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
          throw Error(ErrorCode::InvalidInput, "bad decimal '" + s + "'");
        }
      }
      std::string all = whole + frac;
      if (all.empty()) throw Error(ErrorCode::InvalidInput, "bad decimal '" + s + "'");
      BigInt num(all);
      BigInt den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
      Rational r(num, den);
      r.canonicalize();
      return negative ? Rational(-r) : r;
    }
    Rational r(s);
    if (r.get_den() == 0) throw Error(ErrorCode::InvalidInput, "zero denominator");
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::InvalidInput, "bad rational '" + s + "'");
  }
}

std::string to_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  return c.get_str();
}

double to_double(const Rational& r) { return r.get_d(); }

BigInt floor(const Rational& r) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

BigInt ceil(const Rational& r) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

}  // namespace shiftlab
