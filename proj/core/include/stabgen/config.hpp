#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "stabgen/expr.hpp"

namespace stabgen {

/// lo/hi bound on operators per function as per_var * m + offset, where m is
/// the number of system variables (states + controls).
struct LinearBound {
  int per_var = 0;
  int offset = 0;
  int at(int m) const noexcept { return per_var * m + offset; }
  friend bool operator==(const LinearBound&, const LinearBound&) = default;
};

struct DistributionConfig {
  int degree_min = 2;
  int degree_max = 5;
  int controls_min = 0;
  int controls_max = 0;
  /// Caps the control count at degree / 2 (never below controls_min).
  bool controls_half_degree = false;
  bool include_time = false;

  std::array<double, kNumUnaryOps> unary_weights{1, 1, 1, 1, 1, 1, 1, 1, 1};
  std::array<double, kNumBinaryOps> binary_weights{1, 1, 1, 1};
  /// Probability that a tree leaf is an integer rather than a variable.
  double p_int = 0.30;
  LinearBound ops_lo{0, 3};
  LinearBound ops_hi{2, 3};
  int int_min = -10;
  int int_max = 10;

  /// Candidate equilibrium coordinates (one drawn per sample, all states share it).
  std::vector<double> x_e{0.01};
  double u_e = 0.5;
  double t_e = 0.5;
  double feedback_T = 1.0;
  int sig_digits = 4;

  std::uint64_t seed = 1;

  bool has_unary() const noexcept;
  int controls_max_for(int degree) const noexcept;
  /// Throws Error(kInvalidConfig) with a field-specific message.
  void validate() const;

  friend bool operator==(const DistributionConfig&, const DistributionConfig&) = default;
};

/// Task defaults before any override.
DistributionConfig default_config_for(const std::string& task);

/// Applies one key=value pair; unknown keys and unparsable values throw
/// Error(kInvalidConfig).
void apply_setting(DistributionConfig& cfg, const std::string& key, const std::string& value);
/// Lines of key=value; '#' starts a comment.
void apply_config_text(DistributionConfig& cfg, const std::string& text);
std::map<std::string, std::string> to_settings(const DistributionConfig& cfg);
void write_config(std::ostream& out, const DistributionConfig& cfg);

}  // namespace stabgen
