// stabgen command line: dataset generation, statistics and oracle endpoints.
//
// Exit codes: 0 ok, 1 invalid configuration or arguments, 2 generation or
// oracle failure.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stabgen/error.hpp"
#include "stabgen/pipeline.hpp"

using namespace stabgen;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitFailure = 2;

// Config file first, then --set pairs, then dedicated flags.
struct ConfigArgs {
  std::string file;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;

  void attach(CLI::App* app) {
    app->add_option("--config", file, "key=value configuration file");
    app->add_option("--set", sets, "override, key=value (repeatable)");
    for (const auto& [key, value] : to_settings(DistributionConfig{})) {
      std::string flag = "--" + key;
      std::replace(flag.begin() + 2, flag.end(), '_', '-');
      app->add_option_function<std::string>(flag, [this, key = key](const std::string& v) { flags[key] = v; },
                                            "default " + value);
    }
  }

  DistributionConfig build(DistributionConfig cfg) const {
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) throw Error(ErrorKind::kInvalidConfig, "cannot read config file " + file);
      std::stringstream ss;
      ss << in.rdbuf();
      apply_config_text(cfg, ss.str());
    }
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::kInvalidConfig, "--set expects key=value, got " + kv);
      apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const auto& [k, v] : flags) apply_setting(cfg, k, v);
    cfg.validate();
    return cfg;
  }
};

struct GenArgs {
  std::string task;
  std::uint64_t count = 10000;
  std::uint64_t shard_size = 10000;
  int workers = 1;
  std::string balance;  // "", "none" or a fraction
  std::string out = "data";
  std::uint64_t window = 1000000;
  double audit = 0.01;
  ConfigArgs config;

  void attach(CLI::App* app) {
    app->add_option("--count", count, "records to emit")->capture_default_str();
    app->add_option("--shard-size", shard_size, "records per shard")->capture_default_str();
    app->add_option("--workers,-j", workers, "worker threads")->capture_default_str();
    app->add_option("--balance", balance, "fraction of the positive class, or 'none'");
    app->add_option("--out,-o", out, "output directory")->capture_default_str();
    app->add_option("--unreachable-window", window, "draws per TargetUnreachable check")->capture_default_str();
    app->add_option("--audit", audit, "fraction of records relabelled as an audit")->capture_default_str();
    config.attach(app);
  }

  GenJob job(Task t, DistributionConfig base) const {
    GenJob j;
    j.task = t;
    j.cfg = config.build(std::move(base));
    j.count = count;
    j.shard_size = shard_size;
    j.workers = workers;
    j.out_dir = out;
    j.unreachable_window = window;
    j.audit_fraction = audit;
    if (balance.empty()) {
      j.balance = default_balance(t);
    } else if (balance != "none") {
      try {
        j.balance = std::stod(balance);
      } catch (const std::exception&) {
        throw Error(ErrorKind::kInvalidConfig, "--balance expects a number or 'none'");
      }
    }
    j.validate();
    return j;
  }
};

int run_gen(const GenJob& job) {
  const GenReport r = generate(job);
  std::cout << report_json(job, r) << '\n';
  return r.audit_mismatches == 0 ? kExitOk : kExitFailure;
}

// Lines are "system tokens<TAB>K tokens"; the system must carry its XE/UE block.
int run_verify_feedback(const std::string& path, bool quiet) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (path != "-") {
    file.open(path);
    if (!file) throw Error(ErrorKind::kIo, "cannot read " + path);
    in = &file;
  }
  std::uint64_t total = 0, ok = 0, invalid = 0;
  std::string line;
  while (std::getline(*in, line)) {
    if (line.empty()) continue;
    ++total;
    bool pass = false;
    try {
      const auto tab = line.find('\t');
      if (tab == std::string::npos) throw Error(ErrorKind::kMalformedSequence, "missing tab");
      const TokenSeq sys = parse_tokens(std::string_view(line).substr(0, tab));
      const TokenSeq k = parse_tokens(std::string_view(line).substr(tab + 1));
      const DiffSystem s = decode_system_input(sys, 0.5, false, 0.0);
      const Linearization lin = linearize(s);
      const CMatrix K = decode_matrix(k);
      if (K.rows() != lin.B.cols() || K.cols() != lin.A.rows()) {
        throw Error(ErrorKind::kMalformedSequence, "K has the wrong shape");
      }
      pass = verify_feedback(lin, K);
    } catch (const Error& e) {
      ++invalid;
      if (!quiet) std::cerr << "line " << total << ": " << e.what() << '\n';
    }
    ok += pass;
    std::cout << (pass ? "true" : "false") << '\n';
  }
  std::printf("rate %.6f (%llu/%llu, %llu invalid)\n", total ? double(ok) / double(total) : 0.0,
              static_cast<unsigned long long>(ok), static_cast<unsigned long long>(total),
              static_cast<unsigned long long>(invalid));
  return kExitOk;
}

nlohmann::ordered_json complex_list(const std::vector<Complex>& v) {
  auto out = nlohmann::ordered_json::array();
  for (const Complex& z : v) out.push_back({z.real(), z.imag()});
  return out;
}

nlohmann::ordered_json matrix_json(const CMatrix& m) {
  auto out = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).real());
    out.push_back(row);
  }
  return out;
}

nlohmann::ordered_json classify_one(const std::string& kind, const TokenSeq& tokens, const DistributionConfig& cfg) {
  nlohmann::ordered_json j;
  if (kind == "pde") {
    const PdeProblem p = decode_pde_input(tokens);
    const PDEVerdict v = classify_pde(p.op, p.u0);
    j["exists"] = v.exists;
    j["vanishes"] = v.vanishes;
    j["marginal"] = v.marginal;
    j["ambiguous"] = v.ambiguous;
    j["min_real"] = v.min_real;
    j["target"] = to_string(encode_pde_target(v, cfg.sig_digits));
    return j;
  }
  const DiffSystem s = decode_system_input(tokens, cfg.x_e.front(), kind == "nonauto", cfg.t_e);
  if (kind == "stability") {
    const StabilityVerdict v = classify_stability(s);
    j["stable"] = v.stable;
    j["decay"] = v.decay;
    j["marginal"] = v.marginal;
    j["eigenvalues"] = complex_list(v.eigenvalues);
  } else if (kind == "control") {
    const Linearization lin = linearize(s);
    const ControlVerdict v = controllability(lin);
    j["A"] = matrix_json(lin.A);
    j["B"] = matrix_json(lin.B);
    j["kalman"] = matrix_json(kalman_matrix(lin.A, lin.B));
    j["uncontrollable_dim"] = v.uncontrollable_dim;
    j["controllable"] = v.controllable;
    if (v.controllable) {
      const Feedback fb = feedback_matrix(lin, cfg.feedback_T);
      j["K"] = matrix_json(fb.K);
      j["K_stabilizes"] = verify_feedback(lin, fb.K);
    }
  } else if (kind == "nonauto") {
    j["controllable"] = nonauto_controllability(s, cfg.t_e);
  }
  return j;
}

int run_classify(const std::string& kind, const std::string& tokens, const DistributionConfig& cfg) {
  std::vector<std::string> lines;
  if (!tokens.empty()) {
    lines.push_back(tokens);
  } else {
    for (std::string l; std::getline(std::cin, l);) {
      if (!l.empty()) lines.push_back(l);
    }
  }
  int rc = kExitOk;
  for (const auto& l : lines) {
    try {
      std::cout << classify_one(kind, parse_tokens(l), cfg).dump() << '\n';
    } catch (const Error& e) {
      nlohmann::ordered_json j;
      j["error"] = to_string(e.kind());
      j["message"] = e.what();
      std::cout << j.dump() << '\n';
      rc = kExitFailure;
    }
  }
  return rc;
}

int run_space_size(int m, int leaves, int q1, int q2, int power) {
  const BigInt e = problem_space_size(m, leaves, q1, q2);
  BigInt p = 1;
  for (int i = 0; i < power; ++i) p *= e;
  nlohmann::ordered_json j;
  j["m"] = m;
  j["L"] = leaves;
  j["q1"] = q1;
  j["q2"] = q2;
  j["E"] = e.str();
  j["power"] = power;
  j["E_pow"] = p.str();
  j["log10_E_pow"] = log10_big(p);
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stabgen: random differential systems, oracle labels and datasets"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a labelled dataset");
  gen_cmd->add_option("task", gen.task, "stability|speed|ctrl-auto|ctrl-nonauto|feedback|pde")->required();
  gen.attach(gen_cmd);

  GenArgs var;
  std::string variant_name;
  auto* var_cmd = app.add_subcommand("variant", "generate a distribution-shift test set");
  var_cmd->add_option("name", variant_name, "variant name")->required();
  var_cmd->add_option("--task", var.task, "task (default stability)");
  var.attach(var_cmd);

  std::vector<std::string> stat_paths;
  auto* stats_cmd = app.add_subcommand("stats", "summarise TSV shards as JSON");
  stats_cmd->add_option("shards", stat_paths, "shard files")->required();

  std::string vf_input = "-";
  bool vf_quiet = false;
  auto* vf_cmd = app.add_subcommand("verify-feedback", "check that each K stabilizes its system");
  vf_cmd->add_option("--input,-i", vf_input, "file of 'system<TAB>K' lines, '-' for stdin")->capture_default_str();
  vf_cmd->add_flag("--quiet,-q", vf_quiet, "no per-line diagnostics");

  std::string cl_kind, cl_tokens;
  ConfigArgs cl_config;
  auto* cl_cmd = app.add_subcommand("classify", "run one oracle on token sequences");
  cl_cmd->add_option("kind", cl_kind, "stability|control|nonauto|pde")
      ->required()
      ->check(CLI::IsMember({"stability", "control", "nonauto", "pde"}));
  cl_cmd->add_option("--tokens", cl_tokens, "input tokens (otherwise one sequence per stdin line)");
  cl_config.attach(cl_cmd);

  int ss_m = 0, ss_l = 20, ss_q1 = 9, ss_q2 = 4, ss_pow = 1;
  auto* ss_cmd = app.add_subcommand("space-size", "count expressions with m operators");
  ss_cmd->add_option("-m", ss_m, "operators")->required();
  ss_cmd->add_option("-L,--leaves", ss_l, "leaves")->capture_default_str();
  ss_cmd->add_option("--q1", ss_q1, "unary operators")->capture_default_str();
  ss_cmd->add_option("--q2", ss_q2, "binary operators")->capture_default_str();
  ss_cmd->add_option("--power", ss_pow, "raise to this power (one expression per equation)")->capture_default_str();

  app.add_subcommand("vocab", "print the token vocabulary, one token per line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gen_cmd->parsed()) {
      const Task t = task_from_name(gen.task);
      return run_gen(gen.job(t, default_config_for(gen.task)));
    }
    if (var_cmd->parsed()) {
      const std::string task = var.task.empty() ? "stability" : var.task;
      const Task t = task_from_name(task);
      return run_gen(var.job(t, variant_config(variant_name, default_config_for(task))));
    }
    if (stats_cmd->parsed()) {
      std::vector<std::filesystem::path> paths(stat_paths.begin(), stat_paths.end());
      std::cout << stats_json(stats(paths)) << '\n';
      return kExitOk;
    }
    if (vf_cmd->parsed()) return run_verify_feedback(vf_input, vf_quiet);
    if (cl_cmd->parsed()) {
      const std::string task = cl_kind == "control" ? "ctrl-auto" : cl_kind == "nonauto" ? "ctrl-nonauto" : cl_kind;
      return run_classify(cl_kind, cl_tokens, cl_config.build(default_config_for(task)));
    }
    if (ss_cmd->parsed()) return run_space_size(ss_m, ss_l, ss_q1, ss_q2, ss_pow);
    write_vocabulary(std::cout);
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "stabgen: " << to_string(e.kind()) << ": " << e.what() << '\n';
    const bool config = e.kind() == ErrorKind::kInvalidConfig || e.kind() == ErrorKind::kUnknownVariant;
    return config ? kExitConfig : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "stabgen: " << e.what() << '\n';
    return kExitFailure;
  }
}
