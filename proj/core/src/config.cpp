#include "stabgen/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include "stabgen/error.hpp"

namespace stabgen {
namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::kInvalidConfig, what); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long long parse_int(const std::string& key, const std::string& v) {
  long long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) invalid(key + ": expected integer, got '" + v + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) invalid(key + ": expected number, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  invalid(key + ": expected boolean, got '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
  return parts;
}

// "exp:1,log:0.5" -> weights; names absent from the list get weight 0.
template <typename Op, std::size_t N>
void parse_weights(const std::string& key, const std::string& v, const std::array<Op, N>& ops,
                   std::array<double, N>& weights) {
  std::array<double, N> w{};
  if (!v.empty() && v != "none") {
    for (const auto& item : split(v, ',')) {
      const auto colon = item.find(':');
      const std::string op_name = item.substr(0, colon);
      const double weight = colon == std::string::npos ? 1.0 : parse_double(key, item.substr(colon + 1));
      bool found = false;
      for (std::size_t i = 0; i < N; ++i) {
        if (name(ops[i]) == op_name) {
          w[i] = weight;
          found = true;
        }
      }
      if (!found) invalid(key + ": unknown operator '" + op_name + "'");
    }
  }
  weights = w;
}

template <typename Op, std::size_t N>
std::string format_weights(const std::array<Op, N>& ops, const std::array<double, N>& weights) {
  std::string out;
  for (std::size_t i = 0; i < N; ++i) {
    if (weights[i] <= 0) continue;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%s:%g", out.empty() ? "" : ",", std::string(name(ops[i])).c_str(),
                  weights[i]);
    out += buf;
  }
  return out.empty() ? "none" : out;
}

std::string fmt(double v) {
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace

int DistributionConfig::controls_max_for(int degree) const noexcept {
  if (!controls_half_degree) return controls_max;
  return std::max(controls_min, std::min(controls_max, degree / 2));
}

bool DistributionConfig::has_unary() const noexcept {
  for (double w : unary_weights) {
    if (w > 0) return true;
  }
  return false;
}

void DistributionConfig::validate() const {
  if (degree_min < 1 || degree_max < degree_min || degree_max > Var::kMaxState) {
    invalid("degree range must satisfy 1 <= degree_min <= degree_max <= 9");
  }
  if (controls_min < 0 || controls_max < controls_min || controls_max > Var::kMaxControl) {
    invalid("control range must satisfy 0 <= controls_min <= controls_max <= 3");
  }
  for (double w : unary_weights) {
    if (!(w >= 0)) invalid("unary weights must be non-negative");
  }
  for (double w : binary_weights) {
    if (!(w > 0)) invalid("all four binary operators must be enabled");
  }
  if (!(p_int >= 0 && p_int <= 1)) invalid("p_int must lie in [0, 1]");
  if (int_min > int_max || (int_min == 0 && int_max == 0)) invalid("integer leaf range is empty");
  for (int m = degree_min; m <= degree_max + controls_max; ++m) {
    if (ops_lo.at(m) < 0 || ops_hi.at(m) < ops_lo.at(m)) invalid("operator-count range is empty");
  }
  if (x_e.empty()) invalid("x_e needs at least one value");
  if (!(feedback_T > 0)) invalid("feedback_T must be positive");
  if (sig_digits < 2 || sig_digits > 6) invalid("sig_digits must lie in [2, 6]");
}

DistributionConfig default_config_for(const std::string& task) {
  DistributionConfig cfg;
  if (task == "stability" || task == "speed") return cfg;
  if (task == "ctrl-auto" || task == "feedback") {
    cfg.degree_min = 3;
    cfg.degree_max = 6;
    cfg.controls_min = 1;
    cfg.controls_max = 3;
    cfg.controls_half_degree = true;
    cfg.ops_lo = {1, 0};
    cfg.ops_hi = {2, 2};
    cfg.x_e = {0.5, 0.9};
    return cfg;
  }
  if (task == "ctrl-nonauto") {
    cfg.degree_min = 2;
    cfg.degree_max = 3;
    cfg.controls_min = 1;
    cfg.controls_max = 1;
    cfg.include_time = true;
    cfg.ops_lo = {1, 0};
    cfg.ops_hi = {2, 2};
    cfg.x_e = {0.5, 0.9};
    return cfg;
  }
  if (task == "pde") {
    cfg.degree_min = 2;
    cfg.degree_max = 6;
    return cfg;
  }
  invalid("unknown task '" + task + "'");
}

void apply_setting(DistributionConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string v = trim(raw_value);
  auto as_int = [&] { return static_cast<int>(parse_int(key, v)); };
  if (key == "degree_min") cfg.degree_min = as_int();
  else if (key == "degree_max") cfg.degree_max = as_int();
  else if (key == "degree") cfg.degree_min = cfg.degree_max = as_int();
  else if (key == "controls_min") cfg.controls_min = as_int();
  else if (key == "controls_max") cfg.controls_max = as_int();
  else if (key == "controls_half_degree") cfg.controls_half_degree = parse_bool(key, v);
  else if (key == "include_time") cfg.include_time = parse_bool(key, v);
  else if (key == "unary_ops") parse_weights(key, v, kAllUnaryOps, cfg.unary_weights);
  else if (key == "binary_ops") parse_weights(key, v, kAllBinaryOps, cfg.binary_weights);
  else if (key == "p_int") cfg.p_int = parse_double(key, v);
  else if (key == "ops_lo_per_var") cfg.ops_lo.per_var = as_int();
  else if (key == "ops_lo_offset") cfg.ops_lo.offset = as_int();
  else if (key == "ops_hi_per_var") cfg.ops_hi.per_var = as_int();
  else if (key == "ops_hi_offset") cfg.ops_hi.offset = as_int();
  else if (key == "int_min") cfg.int_min = as_int();
  else if (key == "int_max") cfg.int_max = as_int();
  else if (key == "x_e") {
    cfg.x_e.clear();
    for (const auto& part : split(v, ',')) cfg.x_e.push_back(parse_double(key, part));
  } else if (key == "u_e") cfg.u_e = parse_double(key, v);
  else if (key == "t_e") cfg.t_e = parse_double(key, v);
  else if (key == "feedback_T") cfg.feedback_T = parse_double(key, v);
  else if (key == "sig_digits") cfg.sig_digits = as_int();
  else if (key == "seed") {
    std::uint64_t s = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
    if (ec != std::errc() || p != v.data() + v.size()) invalid("seed: expected unsigned integer");
    cfg.seed = s;
  } else {
    invalid("unknown config key '" + key + "'");
  }
}

void apply_config_text(DistributionConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) invalid("line " + std::to_string(lineno) + ": expected key=value");
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

std::map<std::string, std::string> to_settings(const DistributionConfig& cfg) {
  std::map<std::string, std::string> m;
  m["degree_min"] = std::to_string(cfg.degree_min);
  m["degree_max"] = std::to_string(cfg.degree_max);
  m["controls_min"] = std::to_string(cfg.controls_min);
  m["controls_max"] = std::to_string(cfg.controls_max);
  m["controls_half_degree"] = cfg.controls_half_degree ? "true" : "false";
  m["include_time"] = cfg.include_time ? "true" : "false";
  m["unary_ops"] = format_weights(kAllUnaryOps, cfg.unary_weights);
  m["binary_ops"] = format_weights(kAllBinaryOps, cfg.binary_weights);
  m["p_int"] = fmt(cfg.p_int);
  m["ops_lo_per_var"] = std::to_string(cfg.ops_lo.per_var);
  m["ops_lo_offset"] = std::to_string(cfg.ops_lo.offset);
  m["ops_hi_per_var"] = std::to_string(cfg.ops_hi.per_var);
  m["ops_hi_offset"] = std::to_string(cfg.ops_hi.offset);
  m["int_min"] = std::to_string(cfg.int_min);
  m["int_max"] = std::to_string(cfg.int_max);
  std::string xe;
  for (double v : cfg.x_e) xe += (xe.empty() ? "" : ",") + fmt(v);
  m["x_e"] = xe;
  m["u_e"] = fmt(cfg.u_e);
  m["t_e"] = fmt(cfg.t_e);
  m["feedback_T"] = fmt(cfg.feedback_T);
  m["sig_digits"] = std::to_string(cfg.sig_digits);
  m["seed"] = std::to_string(cfg.seed);
  return m;
}

void write_config(std::ostream& out, const DistributionConfig& cfg) {
  for (const auto& [k, v] : to_settings(cfg)) out << k << '=' << v << '\n';
}

}  // namespace stabgen
