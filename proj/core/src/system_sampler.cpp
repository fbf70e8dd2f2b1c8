#include <cmath>

#include "stabgen/error.hpp"
#include "stabgen/sampler.hpp"

namespace stabgen {

std::vector<Var> DiffSystem::variables() const {
  std::vector<Var> vars;
  for (int i = 0; i < n_states(); ++i) vars.push_back(Var::state(i));
  for (int i = 0; i < n_controls; ++i) vars.push_back(Var::control(i));
  if (has_time) vars.push_back(Var::time());
  return vars;
}

Assignment DiffSystem::point() const {
  Assignment a;
  for (int i = 0; i < n_states(); ++i) a.set(Var::state(i), x_e.at(static_cast<std::size_t>(i)));
  for (int i = 0; i < n_controls; ++i) a.set(Var::control(i), u_e.at(static_cast<std::size_t>(i)));
  if (has_time) a.set(Var::time(), t_e);
  return a;
}

DiffSystem sample_system(int n, int q, const DistributionConfig& cfg, TreeSampler& trees, Rng& rng) {
  if (n < 1 || n > Var::kMaxState || q < 0 || q > Var::kMaxControl) {
    throw Error(ErrorKind::kInvalidArgument, "system shape out of range");
  }
  DiffSystem s;
  s.n_controls = q;
  s.has_time = cfg.include_time;
  std::vector<Var> vars;
  for (int i = 0; i < n; ++i) vars.push_back(Var::state(i));
  for (int i = 0; i < q; ++i) vars.push_back(Var::control(i));
  if (cfg.include_time) vars.push_back(Var::time());
  const int lo = cfg.ops_lo.at(n + q);
  const int hi = cfg.ops_hi.at(n + q);
  for (int i = 0; i < n; ++i) {
    const auto ops = static_cast<int>(rng.uniform_int(lo, hi));
    s.equations.push_back(trees.sample(ops, vars, rng));
  }
  const double xe = cfg.x_e[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(cfg.x_e.size()) - 1))];
  s.x_e.assign(static_cast<std::size_t>(n), xe);
  s.u_e.assign(static_cast<std::size_t>(q), cfg.u_e);
  s.t_e = cfg.t_e;
  return s;
}

DiffSystem sample_system(int n, int q, const DistributionConfig& cfg, Rng& rng) {
  TreeSampler trees(cfg);
  return sample_system(n, q, cfg, trees, rng);
}

bool is_degenerate(const DiffSystem& s) {
  VarMask used = 0;
  for (const Expr& e : s.equations) used |= e.var_mask();
  for (int i = 0; i < s.n_states(); ++i) {
    if (!(used & mask_of(Var::state(i)))) return true;
  }
  for (int i = 0; i < s.n_controls; ++i) {
    if (!(used & mask_of(Var::control(i)))) return true;
  }
  return false;
}

namespace {

Complex clean(Complex v, bool allow_complex) {
  if (std::fabs(v.imag()) <= 1e-12 * (1.0 + std::fabs(v.real()))) return {v.real(), 0.0};
  if (!allow_complex) throw Error(ErrorKind::kComplexValue, "complex equilibrium residual");
  return v;
}

}  // namespace

DiffSystem make_equilibrium(const DiffSystem& s, bool allow_complex) {
  DiffSystem out = s;
  const Assignment at = s.point();
  std::array<std::optional<Expr>, Var::kCount> fix{};
  for (int i = 0; i < s.n_states(); ++i) fix[Var::state(i).id()] = Expr::constant(s.x_e[static_cast<std::size_t>(i)]);
  for (int i = 0; i < s.n_controls; ++i) fix[Var::control(i).id()] = Expr::constant(s.u_e[static_cast<std::size_t>(i)]);

  for (Expr& eq : out.equations) {
    const Complex v = clean(eval_complex(eq, at), allow_complex);
    if (!eq.depends_on(Var::time())) {
      if (v != Complex(0.0, 0.0)) eq = eq - Expr::constant(v);
      continue;
    }
    // The residual keeps its t dependence; only x and u are pinned.
    eq = eq - constant_fold(substitute(eq, fix));
  }
  return out;
}

}  // namespace stabgen
