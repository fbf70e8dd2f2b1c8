#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>

#include "stabgen/error.hpp"
#include "stabgen/tokens.hpp"

namespace stabgen {
namespace {

struct Decimal {
  bool negative = false;
  std::string mantissa;  // significant digits, trailing zeros trimmed
  int exponent = 0;
};

// snprintf rounds the exact binary value to nearest, ties to even.
Decimal to_decimal(double value, int sig_digits) {
  if (!std::isfinite(value)) throw Error(ErrorKind::kNonFinite, "cannot encode non-finite value");
  if (sig_digits < 1 || sig_digits > 17) {
    throw Error(ErrorKind::kInvalidArgument, "significant digits must be in [1, 17]");
  }
  Decimal d;
  d.negative = std::signbit(value) && value != 0.0;
  if (value == 0.0) {
    d.mantissa = "0";
    return d;
  }
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*e", sig_digits - 1, std::fabs(value));
  const char* p = buf;
  for (; *p && *p != 'e'; ++p) {
    if (*p != '.') d.mantissa.push_back(*p);
  }
  d.exponent = std::atoi(p + 1);
  while (d.mantissa.size() > 1 && d.mantissa.back() == '0') d.mantissa.pop_back();
  return d;
}

[[noreturn]] void malformed(std::size_t pos, const char* what) { throw MalformedSequence(pos, what); }

// Reads `INT± digit+` and returns the magnitude-signed value.
std::int64_t read_signed_digits(std::span<const Token> tokens, std::size_t& pos) {
  if (pos >= tokens.size()) malformed(pos, "truncated integer");
  const Token sign = tokens[pos];
  if (sign != Token::kIntPos && sign != Token::kIntNeg) malformed(pos, "expected INT+ or INT-");
  ++pos;
  if (pos >= tokens.size()) malformed(pos, "integer without digits");
  if (!is_digit(tokens[pos])) malformed(pos, "expected digit");
  std::int64_t v = 0;
  constexpr std::int64_t kLimit = std::numeric_limits<std::int64_t>::max() / 10 - 9;
  while (pos < tokens.size() && is_digit(tokens[pos])) {
    if (v > kLimit) malformed(pos, "integer too large");
    v = v * 10 + digit_value(tokens[pos]);
    ++pos;
  }
  return sign == Token::kIntNeg ? -v : v;
}

}  // namespace

void append_int(std::int64_t value, TokenSeq& out) {
  out.push_back(value < 0 ? Token::kIntNeg : Token::kIntPos);
  // Avoid negating INT64_MIN.
  std::uint64_t mag = value < 0 ? ~static_cast<std::uint64_t>(value) + 1 : static_cast<std::uint64_t>(value);
  char buf[24];
  int n = 0;
  do {
    buf[n++] = static_cast<char>(mag % 10);
    mag /= 10;
  } while (mag);
  while (n) out.push_back(digit_token(buf[--n]));
}

TokenSeq encode_int(std::int64_t value) {
  TokenSeq out;
  append_int(value, out);
  return out;
}

void append_float(double value, int sig_digits, TokenSeq& out) {
  const Decimal d = to_decimal(value, sig_digits);
  if (d.exponent > kMaxFloatExponent || d.exponent < -kMaxFloatExponent) {
    throw Error(ErrorKind::kUnencodable, "float exponent outside [-9, 9]");
  }
  out.push_back(d.negative ? Token::kFloatNeg : Token::kFloatPos);
  out.push_back(digit_token(d.mantissa[0] - '0'));
  if (d.mantissa.size() > 1) {
    out.push_back(Token::kDot);
    for (std::size_t i = 1; i < d.mantissa.size(); ++i) out.push_back(digit_token(d.mantissa[i] - '0'));
  }
  out.push_back(Token::kExpMark);
  append_int(d.exponent, out);
}

TokenSeq encode_float(double value, int sig_digits) {
  TokenSeq out;
  append_float(value, sig_digits, out);
  return out;
}

double round_sig(double value, int sig_digits) {
  const Decimal d = to_decimal(value, sig_digits);
  std::string s = d.negative ? "-" : "";
  s += d.mantissa;
  s += 'e';
  s += std::to_string(d.exponent - static_cast<int>(d.mantissa.size()) + 1);
  return std::strtod(s.c_str(), nullptr);
}

std::int64_t read_int(std::span<const Token> tokens, std::size_t& pos) {
  return read_signed_digits(tokens, pos);
}

double read_float(std::span<const Token> tokens, std::size_t& pos) {
  if (pos >= tokens.size()) malformed(pos, "truncated float");
  const Token sign = tokens[pos];
  if (sign != Token::kFloatPos && sign != Token::kFloatNeg) malformed(pos, "expected FLOAT+ or FLOAT-");
  ++pos;
  std::string s = sign == Token::kFloatNeg ? "-" : "";
  if (pos >= tokens.size()) malformed(pos, "truncated float");
  if (!is_digit(tokens[pos])) malformed(pos, "expected leading mantissa digit");
  s.push_back(static_cast<char>('0' + digit_value(tokens[pos++])));
  if (pos < tokens.size() && tokens[pos] == Token::kDot) {
    ++pos;
    s.push_back('.');
    if (pos >= tokens.size() || !is_digit(tokens[pos])) malformed(pos, "expected digit after DOT");
    while (pos < tokens.size() && is_digit(tokens[pos])) {
      s.push_back(static_cast<char>('0' + digit_value(tokens[pos++])));
    }
  }
  if (pos >= tokens.size() || tokens[pos] != Token::kExpMark) malformed(pos, "expected E");
  ++pos;
  const std::int64_t exponent = read_signed_digits(tokens, pos);
  if (exponent > 400 || exponent < -400) malformed(pos - 1, "float exponent out of range");
  s += 'e';
  s += std::to_string(exponent);
  return std::strtod(s.c_str(), nullptr);
}

double read_number(std::span<const Token> tokens, std::size_t& pos) {
  if (pos < tokens.size() && (tokens[pos] == Token::kIntPos || tokens[pos] == Token::kIntNeg)) {
    return static_cast<double>(read_int(tokens, pos));
  }
  return read_float(tokens, pos);
}

double decode_float(std::span<const Token> tokens) {
  std::size_t pos = 0;
  const double v = read_float(tokens, pos);
  if (pos != tokens.size()) malformed(pos, "trailing tokens");
  return v;
}

std::int64_t decode_int(std::span<const Token> tokens) {
  std::size_t pos = 0;
  const std::int64_t v = read_int(tokens, pos);
  if (pos != tokens.size()) malformed(pos, "trailing tokens");
  return v;
}

}  // namespace stabgen
