#include "stabgen/tokens.hpp"

#include <array>
#include <ostream>
#include <unordered_map>

#include "stabgen/error.hpp"

namespace stabgen {
namespace {

constexpr std::array<std::string_view, kVocabularySize> kNames = {
    "<pad>", "<s>",  "</s>", "|",
    "add",   "sub",  "mul",  "div",
    "exp",   "log",  "sqrt", "sin", "cos", "tan", "asin", "acos", "atan",
    "x0",    "x1",   "x2",   "x3",  "x4",  "x5",  "x6",   "x7",   "x8",
    "u0",    "u1",   "u2",   "t",
    "INT+",  "INT-", "FLOAT+", "FLOAT-", "DOT", "E",
    "0", "1", "2", "3", "4", "5", "6", "7", "8", "9",
    "CPLX",
    "XE",    "UE",
    "TRUE",  "FALSE",
    "MONO",  "GAUSS", "SINC", "DIRAC", "ONE", "MOD", "PT", "IV", "FULL",
};

const std::unordered_map<std::string_view, Token>& name_index() {
  static const auto* index = [] {
    auto* m = new std::unordered_map<std::string_view, Token>();
    for (std::size_t i = 0; i < kVocabularySize; ++i) m->emplace(kNames[i], static_cast<Token>(i));
    return m;
  }();
  return *index;
}

Token binary_token(BinaryOp op) {
  return static_cast<Token>(static_cast<int>(Token::kAdd) + static_cast<int>(op));
}
Token unary_token(UnaryOp op) {
  return static_cast<Token>(static_cast<int>(Token::kExp) + static_cast<int>(op));
}

}  // namespace

std::string_view vocabulary_version() noexcept { return "stabgen-vocab-v1"; }

std::string_view token_name(Token t) noexcept {
  const auto i = static_cast<std::size_t>(t);
  return i < kVocabularySize ? kNames[i] : std::string_view("?");
}

std::optional<Token> token_from_name(std::string_view text) noexcept {
  const auto& index = name_index();
  auto it = index.find(text);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

void write_vocabulary(std::ostream& out) {
  for (auto n : kNames) out << n << '\n';
}

std::string to_string(std::span<const Token> tokens) {
  std::string s;
  s.reserve(tokens.size() * 3);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) s.push_back(' ');
    s.append(token_name(tokens[i]));
  }
  return s;
}

TokenSeq parse_tokens(std::string_view text) {
  TokenSeq out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && text[end] != ' ' && text[end] != '\t') ++end;
    auto tok = token_from_name(text.substr(pos, end - pos));
    if (!tok) {
      throw MalformedSequence(out.size(), "unknown token '" + std::string(text.substr(pos, end - pos)) + "'");
    }
    out.push_back(*tok);
    pos = end;
  }
  return out;
}

// --- expressions ------------------------------------------------------------

void append_prefix(const Expr& e, TokenSeq& out, int sig_digits) {
  switch (e.kind()) {
    case Expr::Kind::kBinary:
      out.push_back(binary_token(e.binary_op()));
      append_prefix(e.left(), out, sig_digits);
      append_prefix(e.right(), out, sig_digits);
      return;
    case Expr::Kind::kUnary:
      out.push_back(unary_token(e.unary_op()));
      append_prefix(e.child(), out, sig_digits);
      return;
    case Expr::Kind::kInt: append_int(e.int_value(), out); return;
    case Expr::Kind::kVar:
      out.push_back(static_cast<Token>(static_cast<int>(Token::kX0) + e.var().id()));
      return;
    case Expr::Kind::kConst: {
      const Complex c = e.const_value();
      if (c.imag() == 0.0) {
        append_float(c.real(), sig_digits, out);
      } else {
        out.push_back(Token::kComplex);
        append_float(c.real(), sig_digits, out);
        append_float(c.imag(), sig_digits, out);
      }
      return;
    }
  }
}

TokenSeq to_prefix(const Expr& e, int sig_digits) {
  TokenSeq out;
  append_prefix(e, out, sig_digits);
  return out;
}

namespace {

// Explicit stack so adversarially deep inputs cannot overflow the call stack.
struct Frame {
  Token op;
  int pending;
  Expr first{};
};

}  // namespace

Expr read_prefix(std::span<const Token> tokens, std::size_t& pos) {
  std::vector<Frame> stack;
  for (;;) {
    if (pos >= tokens.size()) throw MalformedSequence(pos, "truncated expression");
    const Token t = tokens[pos];
    Expr value;
    bool have_value = true;
    if (t >= Token::kAdd && t <= Token::kDiv) {
      stack.push_back({t, 2});
      ++pos;
      have_value = false;
    } else if (t >= Token::kExp && t <= Token::kAtan) {
      stack.push_back({t, 1});
      ++pos;
      have_value = false;
    } else if (t >= Token::kX0 && t <= Token::kT) {
      value = Expr::variable(Var::from_id(static_cast<int>(t) - static_cast<int>(Token::kX0)));
      ++pos;
    } else if (t == Token::kIntPos || t == Token::kIntNeg) {
      value = Expr::integer(read_int(tokens, pos));
    } else if (t == Token::kFloatPos || t == Token::kFloatNeg) {
      value = Expr::constant(Complex(read_float(tokens, pos), 0.0));
    } else if (t == Token::kComplex) {
      ++pos;
      const double re = read_float(tokens, pos);
      const double im = read_float(tokens, pos);
      value = Expr::constant(Complex(re, im));
    } else {
      throw MalformedSequence(pos, "unexpected token '" + std::string(token_name(t)) + "'");
    }
    while (have_value) {
      if (stack.empty()) return value;
      Frame& f = stack.back();
      if (f.pending == 1 && f.op >= Token::kExp) {
        value = Expr::unary(static_cast<UnaryOp>(static_cast<int>(f.op) - static_cast<int>(Token::kExp)),
                            std::move(value));
        stack.pop_back();
      } else if (f.pending == 2) {
        f.first = std::move(value);
        f.pending = 1;
        have_value = false;
      } else {
        value = Expr::binary(static_cast<BinaryOp>(static_cast<int>(f.op) - static_cast<int>(Token::kAdd)),
                             std::move(f.first), std::move(value));
        stack.pop_back();
      }
    }
  }
}

Expr parse_prefix(std::span<const Token> tokens) {
  std::size_t pos = 0;
  Expr e = read_prefix(tokens, pos);
  if (pos != tokens.size()) throw MalformedSequence(pos, "trailing tokens");
  return e;
}

}  // namespace stabgen
