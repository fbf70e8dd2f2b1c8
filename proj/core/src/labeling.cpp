#include <cmath>

#include "stabgen/error.hpp"
#include "stabgen/pipeline.hpp"

namespace stabgen {
namespace {

Token boolean(bool v) { return v ? Token::kTrue : Token::kFalse; }

std::variant<Labeled, Rejection> label_pde(std::span<const Token> input, const DistributionConfig& cfg) {
  const PdeProblem p = decode_pde_input(input);
  const PDEVerdict v = classify_pde(p.op, p.u0);
  if (v.ambiguous) return Rejection::kAmbiguous;
  if (v.marginal) return Rejection::kMarginal;
  Labeled out{encode_pde_target(v, cfg.sig_digits), {}};
  out.label = !v.exists ? "no-solution" : v.vanishes ? "vanishing" : "bounded";
  return out;
}

std::variant<Labeled, Rejection> label_system(Task task, std::span<const Token> input, const DistributionConfig& cfg) {
  const DiffSystem s = decode_system_input(input, cfg.x_e.front(), task == Task::kCtrlNonauto, cfg.t_e);
  if (is_degenerate(s)) return Rejection::kDegenerate;

  switch (task) {
    case Task::kStability:
    case Task::kSpeed: {
      const CMatrix j = jacobian_at(s);
      if (degenerate_jacobian(j, CMatrix{})) return Rejection::kDegenerate;
      const StabilityVerdict v = classify_matrix(j);
      if (v.marginal) return Rejection::kMarginal;
      Labeled out;
      if (task == Task::kStability) out.target.push_back(boolean(v.stable));
      else append_float(v.decay, cfg.sig_digits, out.target);
      out.label = v.stable ? "stable" : "unstable";
      return out;
    }
    case Task::kCtrlAuto: {
      const Linearization lin = linearize(s);
      if (degenerate_jacobian(lin.A, lin.B)) return Rejection::kDegenerate;
      const ControlVerdict v = controllability(lin);
      Labeled out;
      append_int(s.n_states() - v.uncontrollable_dim, out.target);
      out.label = v.controllable ? "controllable" : "uncontrollable";
      return out;
    }
    case Task::kCtrlNonauto: {
      const Linearization lin = linearize(s);
      if (degenerate_jacobian(lin.A, lin.B)) return Rejection::kDegenerate;
      const bool c = nonauto_controllability(s, s.t_e);
      return Labeled{{boolean(c)}, c ? "controllable" : "uncontrollable"};
    }
    case Task::kFeedback: {
      const Linearization lin = linearize(s);
      if (degenerate_jacobian(lin.A, lin.B)) return Rejection::kDegenerate;
      if (!controllability(lin).controllable) return Rejection::kUncontrollable;
      const Feedback fb = feedback_matrix(lin, cfg.feedback_T);
      Labeled out{encode_matrix(fb.K, cfg.sig_digits), "controllable"};
      // The stored (rounded) matrix is what a learner is scored against.
      if (!verify_feedback(lin, decode_matrix(out.target))) return Rejection::kUnverified;
      return out;
    }
    case Task::kPde: break;
  }
  throw Error(ErrorKind::kInvalidArgument, "not a system task");
}

}  // namespace

std::variant<Labeled, Rejection> label_input(Task task, std::span<const Token> input, const DistributionConfig& cfg) {
  if (task == Task::kPde) return label_pde(input, cfg);
  return label_system(task, input, cfg);
}

RecordFactory::RecordFactory(Task task, const DistributionConfig& cfg) : task_(task), cfg_(cfg), trees_(cfg) {
  cfg_.validate();
}

std::variant<DatasetRecord, Rejection> RecordFactory::next(Rng& rng) {
  return next(rng, static_cast<int>(rng.uniform_int(cfg_.degree_min, cfg_.degree_max)));
}

std::variant<DatasetRecord, Rejection> RecordFactory::next(Rng& rng, int degree) {
  if (degree < cfg_.degree_min || degree > cfg_.degree_max) {
    throw Error(ErrorKind::kInvalidArgument, "degree outside the configured range");
  }
  DatasetRecord r;
  r.task = task_;
  r.degree = degree;
  try {
    if (task_ == Task::kPde) {
      r.input = encode_pde_input(sample_pde(r.degree, rng), cfg_.sig_digits);
    } else {
      r.controls = static_cast<int>(rng.uniform_int(cfg_.controls_min, cfg_.controls_max_for(r.degree)));
      const DiffSystem raw = sample_system(r.degree, r.controls, cfg_, trees_, rng);
      if (is_degenerate(raw)) return Rejection::kDegenerate;
      const bool with_point = is_control_task(task_) || cfg_.x_e.size() > 1;
      // Complex offsets are legal for stability; control tasks need real A, B.
      r.input = encode_system_input(make_equilibrium(raw, !is_control_task(task_)), with_point, cfg_.sig_digits);
    }
    auto labeled = label_input(task_, r.input, cfg_);
    if (auto* rej = std::get_if<Rejection>(&labeled)) return *rej;
    auto& l = std::get<Labeled>(labeled);
    r.target = std::move(l.target);
    r.label = std::move(l.label);
  } catch (const Error& e) {
    return rejection_of(e);
  }
  r.hash = record_hash(r.input);
  return r;
}

}  // namespace stabgen
