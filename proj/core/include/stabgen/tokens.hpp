#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stabgen/expr.hpp"

namespace stabgen {

/// Vocabulary tokens. The numeric value of each enumerator is the token id and
/// the order is frozen per vocabulary version (see vocabulary_version()).
enum class Token : std::uint16_t {
  kPad, kBos, kEos, kSep,
  // operators
  kAdd, kSub, kMul, kDiv,
  kExp, kLog, kSqrt, kSin, kCos, kTan, kAsin, kAcos, kAtan,
  // variables
  kX0, kX1, kX2, kX3, kX4, kX5, kX6, kX7, kX8,
  kU0, kU1, kU2, kT,
  // numbers
  kIntPos, kIntNeg, kFloatPos, kFloatNeg, kDot, kExpMark,
  kD0, kD1, kD2, kD3, kD4, kD5, kD6, kD7, kD8, kD9,
  kComplex,
  // system markers
  kXe, kUe,
  // targets
  kTrue, kFalse,
  // PDE problems
  kMono, kGauss, kSinc, kDirac, kOne, kMod, kPoint, kInterval, kFull,
  kCount_
};

inline constexpr std::size_t kVocabularySize = static_cast<std::size_t>(Token::kCount_);

using TokenSeq = std::vector<Token>;

std::string_view vocabulary_version() noexcept;
std::string_view token_name(Token t) noexcept;
std::optional<Token> token_from_name(std::string_view text) noexcept;
/// One token per line; line index = token id.
void write_vocabulary(std::ostream& out);

inline Token digit_token(int d) noexcept {
  return static_cast<Token>(static_cast<int>(Token::kD0) + d);
}
inline bool is_digit(Token t) noexcept { return t >= Token::kD0 && t <= Token::kD9; }
inline int digit_value(Token t) noexcept {
  return static_cast<int>(t) - static_cast<int>(Token::kD0);
}

/// Space-separated token names.
std::string to_string(std::span<const Token> tokens);
/// Inverse of to_string; unknown names raise MalformedSequence with their index.
TokenSeq parse_tokens(std::string_view text);

// --- numbers ----------------------------------------------------------------

inline constexpr int kDefaultSigDigits = 4;
inline constexpr int kMaxFloatExponent = 9;

/// 142 -> [INT+, 1, 4, 2]; 0 -> [INT+, 0].
void append_int(std::int64_t value, TokenSeq& out);
TokenSeq encode_int(std::int64_t value);

/// Normalised scientific form rounded half-to-even to `sig_digits` significant
/// digits; trailing mantissa zeros are trimmed and DOT is omitted for a single
/// mantissa digit. 0.314 -> [FLOAT+, 3, DOT, 1, 4, E, INT-, 1].
/// Throws NonFinite, or Unencodable when the exponent leaves [-9, 9].
void append_float(double value, int sig_digits, TokenSeq& out);
TokenSeq encode_float(double value, int sig_digits = kDefaultSigDigits);

/// `value` rounded to `sig_digits` significant digits, exactly as the float
/// codec would round it.
double round_sig(double value, int sig_digits);

/// Readers advance `pos` past the number; malformed input raises
/// MalformedSequence.
std::int64_t read_int(std::span<const Token> tokens, std::size_t& pos);
double read_float(std::span<const Token> tokens, std::size_t& pos);
/// Either encoding; integers are returned exactly.
double read_number(std::span<const Token> tokens, std::size_t& pos);

double decode_float(std::span<const Token> tokens);
std::int64_t decode_int(std::span<const Token> tokens);

// --- expressions --------------------------------------------------------------

/// Prefix (Polish) serialisation. Constant leaves are written as floats
/// (or CPLX re im) rounded to `sig_digits`.
void append_prefix(const Expr& e, TokenSeq& out, int sig_digits = kDefaultSigDigits);
TokenSeq to_prefix(const Expr& e, int sig_digits = kDefaultSigDigits);

/// Parses one expression starting at `pos` and advances past it.
Expr read_prefix(std::span<const Token> tokens, std::size_t& pos);
/// Parses a complete sequence; trailing tokens are an error.
Expr parse_prefix(std::span<const Token> tokens);

}  // namespace stabgen
