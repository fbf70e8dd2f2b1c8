#include <algorithm>

#include "stabgen/error.hpp"
#include "stabgen/sampler.hpp"

namespace stabgen {

TreeSampler::TreeSampler(const DistributionConfig& cfg) : cfg_(cfg), p1_(cfg.has_unary() ? 1.0 : 0.0) {}

// D(0, n) = 0, D(e, 0) = 1, D(e, n) = D(e-1, n) + p1 D(e, n-1) + D(e+1, n-1).
void TreeSampler::grow(int e_max, int n_max) {
  const int have_n = static_cast<int>(d_.size()) - 1;
  const int have_e = d_.empty() ? -1 : static_cast<int>(d_[0].size()) - 1;
  if (have_n >= n_max && have_e >= e_max) return;
  const int N = std::max(n_max, have_n);
  const int E = std::max(e_max, have_e) + N + 1;
  d_.assign(N + 1, std::vector<double>(E + 1, 0.0));
  for (int e = 1; e <= E; ++e) d_[0][e] = 1.0;
  for (int n = 1; n <= N; ++n) {
    for (int e = 1; e + n <= E; ++e) {
      d_[n][e] = d_[n][e - 1] + p1_ * d_[n - 1][e] + d_[n - 1][e + 1];
    }
  }
}

double TreeSampler::shapes(int e, int n) {
  grow(e, n);
  return d_[n][e];
}

Expr TreeSampler::leaf(std::span<const Var> vars, Rng& rng) {
  if (vars.empty() || rng.bernoulli(cfg_.p_int)) {
    for (;;) {
      const auto v = rng.uniform_int(cfg_.int_min, cfg_.int_max);
      if (v != 0) return Expr::integer(v);
    }
  }
  return Expr::variable(vars[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(vars.size()) - 1))]);
}

namespace {

struct Slot {
  enum Kind : std::uint8_t { kEmpty, kUnary, kBinary } kind = kEmpty;
  std::uint8_t op = 0;
};

}  // namespace

Expr TreeSampler::sample(int n_ops, std::span<const Var> vars, Rng& rng) {
  if (n_ops < 0) throw Error(ErrorKind::kInvalidArgument, "negative operator count");
  grow(n_ops + 2, n_ops);

  std::vector<Slot> stack(1);
  int empty = 1;
  int left_leaves = 0;
  std::vector<double> probs;
  for (int n = n_ops; n > 0; --n) {
    // Slot to fill: skip k empty slots (they become leaves), then place a
    // unary or binary node.
    probs.assign(2 * static_cast<std::size_t>(empty), 0.0);
    for (int k = 0; k < empty; ++k) {
      probs[static_cast<std::size_t>(k)] = p1_ * d_[n - 1][empty - k];
      probs[static_cast<std::size_t>(empty + k)] = d_[n - 1][empty - k + 1];
    }
    const auto pick = static_cast<int>(rng.weighted(probs));
    const int arity = pick < empty ? 1 : 2;
    const int skipped = pick % empty;

    Slot node;
    if (arity == 1) {
      node.kind = Slot::kUnary;
      node.op = static_cast<std::uint8_t>(rng.weighted(cfg_.unary_weights));
    } else {
      node.kind = Slot::kBinary;
      node.op = static_cast<std::uint8_t>(rng.weighted(cfg_.binary_weights));
    }
    empty += arity - 1 - skipped;
    left_leaves += skipped;

    int seen = 0;
    std::size_t pos = 0;
    for (; pos < stack.size(); ++pos) {
      if (stack[pos].kind == Slot::kEmpty && seen++ == left_leaves) break;
    }
    stack[pos] = node;
    stack.insert(stack.begin() + static_cast<std::ptrdiff_t>(pos) + 1, static_cast<std::size_t>(arity), Slot{});
  }

  // Leaves are drawn in prefix order, then the tree is assembled bottom-up.
  std::vector<Expr> leaves;
  for (const Slot& s : stack) {
    if (s.kind == Slot::kEmpty) leaves.push_back(leaf(vars, rng));
  }
  std::vector<Expr> values;
  for (std::size_t i = stack.size(); i-- > 0;) {
    const Slot& s = stack[i];
    if (s.kind == Slot::kEmpty) {
      values.push_back(std::move(leaves.back()));
      leaves.pop_back();
    } else if (s.kind == Slot::kUnary) {
      Expr child = std::move(values.back());
      values.back() = Expr::unary(static_cast<UnaryOp>(s.op), std::move(child));
    } else {
      Expr left = std::move(values.back());
      values.pop_back();
      Expr right = std::move(values.back());
      values.back() = Expr::binary(static_cast<BinaryOp>(s.op), std::move(left), std::move(right));
    }
  }
  return std::move(values.back());
}

Expr sample_tree(int n_ops, std::span<const Var> vars, const DistributionConfig& cfg, Rng& rng) {
  TreeSampler s(cfg);
  return s.sample(n_ops, vars, rng);
}

}  // namespace stabgen
