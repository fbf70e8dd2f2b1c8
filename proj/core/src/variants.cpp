#include "stabgen/error.hpp"
#include "stabgen/pipeline.hpp"

namespace stabgen {
namespace {

void zero(DistributionConfig& cfg, std::initializer_list<UnaryOp> ops) {
  for (UnaryOp op : ops) cfg.unary_weights[static_cast<std::size_t>(op)] = 0.0;
}

}  // namespace

DistributionConfig variant_config(std::string_view name, DistributionConfig cfg) {
  using U = UnaryOp;
  if (name == "no-trig") {
    zero(cfg, {U::kSin, U::kCos, U::kTan, U::kAsin, U::kAcos, U::kAtan});
  } else if (name == "no-log-exp") {
    zero(cfg, {U::kExp, U::kLog});
  } else if (name == "sqrt-only") {
    cfg.unary_weights.fill(0.0);
    cfg.unary_weights[static_cast<std::size_t>(U::kSqrt)] = 1.0;
  } else if (name == "skewed-ops") {
    // "mostly square roots": sqrt takes 60% of unary draws.
    cfg.unary_weights.fill(1.0);
    cfg.unary_weights[static_cast<std::size_t>(U::kSqrt)] = 12.0;
  } else if (name == "int10") {
    cfg.p_int = 0.10;
  } else if (name == "int50") {
    cfg.p_int = 0.50;
  } else if (name == "int70") {
    cfg.p_int = 0.70;
  } else if (name == "len-n3-3n3") {
    cfg.ops_lo = {1, 3};
    cfg.ops_hi = {3, 3};
  } else if (name == "len-2n3-4n3") {
    cfg.ops_lo = {2, 3};
    cfg.ops_hi = {4, 3};
  } else if (name == "degree6") {
    cfg.degree_min = cfg.degree_max = 6;
  } else {
    throw Error(ErrorKind::kUnknownVariant, "unknown variant '" + std::string(name) + "'");
  }
  return cfg;
}

}  // namespace stabgen
