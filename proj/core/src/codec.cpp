#include <cmath>

#include "stabgen/error.hpp"
#include "stabgen/pipeline.hpp"

namespace stabgen {
namespace {

constexpr std::string_view kTaskNames[] = {"stability", "speed", "ctrl-auto", "ctrl-nonauto", "feedback", "pde"};
constexpr std::string_view kRejectionNames[] = {
    "degenerate",   "singular",       "overflow",   "complex",   "marginal",       "unencodable", "gramian-singular",
    "no-convergence", "ambiguous",    "duplicate",  "surplus-class", "uncontrollable", "unverified"};
static_assert(std::size(kRejectionNames) == kRejectionCount);

[[noreturn]] void malformed(std::size_t pos, const std::string& what) { throw MalformedSequence(pos, what); }

void expect(std::span<const Token> t, std::size_t pos, Token want) {
  if (pos >= t.size()) malformed(pos, "truncated sequence");
  if (t[pos] != want) malformed(pos, "expected '" + std::string(token_name(want)) + "'");
}

void append_number(double v, int sig_digits, TokenSeq& out) {
  if (v == std::trunc(v) && std::fabs(v) < 1e15) append_int(static_cast<std::int64_t>(v), out);
  else append_float(v, sig_digits, out);
}

bool is_float_start(std::span<const Token> t, std::size_t pos) {
  return pos < t.size() && (t[pos] == Token::kFloatPos || t[pos] == Token::kFloatNeg);
}

}  // namespace

std::string_view task_name(Task t) noexcept { return kTaskNames[static_cast<int>(t)]; }

Task task_from_name(std::string_view name) {
  for (Task t : kAllTasks) {
    if (task_name(t) == name) return t;
  }
  throw Error(ErrorKind::kInvalidConfig, "unknown task '" + std::string(name) + "'");
}

bool is_control_task(Task t) noexcept {
  return t == Task::kCtrlAuto || t == Task::kCtrlNonauto || t == Task::kFeedback;
}

std::string_view rejection_taxonomy_version() noexcept { return "stabgen-reject-v1"; }
std::string_view rejection_name(Rejection r) noexcept { return kRejectionNames[static_cast<int>(r)]; }

Rejection rejection_of(const Error& e) noexcept {
  switch (e.kind()) {
    case ErrorKind::kEvalSingular: return Rejection::kSingular;
    case ErrorKind::kEvalOverflow:
    case ErrorKind::kOverflow:
    case ErrorKind::kNonFinite: return Rejection::kOverflow;
    case ErrorKind::kComplexValue: return Rejection::kComplex;
    case ErrorKind::kUnencodable: return Rejection::kUnencodable;
    case ErrorKind::kGramianSingular: return Rejection::kGramianSingular;
    default: return Rejection::kNoConvergence;
  }
}

// ---------------------------------------------------------------------------

TokenSeq encode_system_input(const DiffSystem& s, bool with_point, int sig_digits) {
  TokenSeq out;
  for (std::size_t i = 0; i < s.equations.size(); ++i) {
    if (i) out.push_back(Token::kSep);
    append_prefix(s.equations[i], out, sig_digits);
  }
  if (with_point) {
    out.push_back(Token::kXe);
    for (double v : s.x_e) append_float(v, sig_digits, out);
    out.push_back(Token::kUe);
    for (double v : s.u_e) append_float(v, sig_digits, out);
  }
  return out;
}

DiffSystem decode_system_input(std::span<const Token> t, double default_x_e, bool has_time, double t_e) {
  DiffSystem s;
  s.has_time = has_time;
  s.t_e = t_e;
  std::size_t pos = 0;
  for (;;) {
    s.equations.push_back(read_prefix(t, pos));
    if (pos < t.size() && t[pos] == Token::kSep) {
      ++pos;
      continue;
    }
    break;
  }
  if (s.equations.size() > static_cast<std::size_t>(Var::kMaxState)) malformed(pos, "too many equations");
  if (pos < t.size() && t[pos] == Token::kXe) {
    ++pos;
    while (is_float_start(t, pos)) s.x_e.push_back(read_float(t, pos));
    if (s.x_e.size() != s.equations.size()) malformed(pos, "XE needs one value per equation");
    expect(t, pos, Token::kUe);
    ++pos;
    while (is_float_start(t, pos)) s.u_e.push_back(read_float(t, pos));
    if (s.u_e.size() > static_cast<std::size_t>(Var::kMaxControl)) malformed(pos, "too many controls");
  } else {
    s.x_e.assign(s.equations.size(), default_x_e);
  }
  if (pos != t.size()) malformed(pos, "trailing tokens");
  s.n_controls = static_cast<int>(s.u_e.size());

  VarMask allowed = 0;
  for (Var v : s.variables()) allowed |= mask_of(v);
  for (const Expr& e : s.equations) {
    if (e.var_mask() & ~allowed) malformed(0, "equation uses an undeclared variable");
  }
  return s;
}

TokenSeq encode_pde_input(const PdeProblem& p, int sig_digits) {
  TokenSeq out;
  for (const AxisBase& a : p.u0.axes) {
    switch (a.kind) {
      case AxisFactor::kGaussian: out.push_back(Token::kGauss); break;
      case AxisFactor::kSinc: out.push_back(Token::kSinc); break;
      case AxisFactor::kDirac: out.push_back(Token::kDirac); break;
      case AxisFactor::kNone: out.push_back(Token::kOne); continue;
    }
    append_number(a.a, sig_digits, out);
  }
  for (const Modulation& m : p.u0.modulations) {
    out.push_back(Token::kMod);
    append_int(m.axis, out);
    append_number(m.b, sig_digits, out);
  }
  out.push_back(Token::kSep);
  for (const auto& [alpha, a] : p.op.coeffs) {
    if (a == 0.0) continue;
    // Orders first: a number followed by bare digits would not parse back.
    out.push_back(Token::kMono);
    for (int k : alpha) out.push_back(digit_token(k));
    append_number(a, sig_digits, out);
  }
  return out;
}

PdeProblem decode_pde_input(std::span<const Token> t) {
  PdeProblem p;
  std::size_t pos = 0;
  while (pos < t.size()) {
    const Token tok = t[pos];
    AxisBase a;
    if (tok == Token::kGauss) a.kind = AxisFactor::kGaussian;
    else if (tok == Token::kSinc) a.kind = AxisFactor::kSinc;
    else if (tok == Token::kDirac) a.kind = AxisFactor::kDirac;
    else if (tok == Token::kOne) a.kind = AxisFactor::kNone;
    else break;
    ++pos;
    if (a.kind != AxisFactor::kNone) {
      a.a = read_number(t, pos);
      if (a.a == 0.0) malformed(pos - 1, "zero axis scale");
    }
    p.u0.axes.push_back(a);
  }
  const int n = static_cast<int>(p.u0.axes.size());
  if (n < 1 || n > 9) malformed(pos, "expected 1 to 9 axis factors");
  while (pos < t.size() && t[pos] == Token::kMod) {
    ++pos;
    Modulation m;
    const std::size_t at = pos;
    m.axis = static_cast<int>(read_int(t, pos));
    if (m.axis < 0 || m.axis >= n) malformed(at, "modulation axis out of range");
    m.b = read_number(t, pos);
    p.u0.modulations.push_back(m);
  }
  expect(t, pos, Token::kSep);
  ++pos;
  p.op.n = n;
  while (pos < t.size()) {
    expect(t, pos, Token::kMono);
    ++pos;
    MultiIndex alpha;
    int order = 0;
    for (int j = 0; j < n; ++j) {
      if (pos >= t.size() || !is_digit(t[pos])) malformed(pos, "expected derivative order digit");
      alpha.push_back(digit_value(t[pos++]));
      order += alpha.back();
    }
    if (order > kMaxPdeOrder) malformed(pos - 1, "derivative order above 8");
    const double a = read_number(t, pos);
    p.op.add(std::move(alpha), a);
  }
  if (p.op.coeffs.empty()) malformed(pos, "operator has no monomials");
  return p;
}

TokenSeq encode_pde_target(const PDEVerdict& v, int sig_digits) {
  TokenSeq out;
  out.push_back(v.exists ? Token::kTrue : Token::kFalse);
  out.push_back(v.vanishes ? Token::kTrue : Token::kFalse);
  for (std::size_t j = 0; j < v.support.size(); ++j) {
    if (j) out.push_back(Token::kSep);
    const AxisSupport& s = v.support[j];
    switch (s.kind) {
      case AxisSupport::Kind::kPoint:
        out.push_back(Token::kPoint);
        append_float(s.lo, sig_digits, out);
        break;
      case AxisSupport::Kind::kInterval:
        out.push_back(Token::kInterval);
        append_float(s.lo, sig_digits, out);
        append_float(s.hi, sig_digits, out);
        break;
      case AxisSupport::Kind::kFull: out.push_back(Token::kFull); break;
    }
  }
  return out;
}

TokenSeq encode_matrix(const CMatrix& k, int sig_digits) {
  TokenSeq out;
  for (std::size_t i = 0; i < k.rows(); ++i) {
    if (i) out.push_back(Token::kSep);
    for (std::size_t j = 0; j < k.cols(); ++j) append_float(k.re(i, j), sig_digits, out);
  }
  return out;
}

CMatrix decode_matrix(std::span<const Token> t) {
  std::vector<std::vector<double>> rows(1);
  std::size_t pos = 0;
  while (pos < t.size()) {
    if (t[pos] == Token::kSep) {
      if (rows.back().empty()) malformed(pos, "empty matrix row");
      rows.emplace_back();
      ++pos;
      continue;
    }
    rows.back().push_back(read_float(t, pos));
  }
  if (rows.back().empty()) malformed(pos, "empty matrix row");
  CMatrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) malformed(0, "ragged matrix rows");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::uint64_t record_hash(std::span<const Token> input) noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (Token tok : input) {
    const auto v = static_cast<std::uint16_t>(tok);
    h ^= v & 0xFF;
    h *= 1099511628211ULL;
    h ^= v >> 8;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace stabgen
