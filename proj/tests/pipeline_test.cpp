#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include <gtest/gtest.h>
#include <json.hpp>

#include "stabgen/error.hpp"
#include "stabgen/pipeline.hpp"

using namespace stabgen;
namespace fs = std::filesystem;

namespace {

TokenSeq toks(std::string_view s) { return parse_tokens(s); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("stabgen-" + name + "-" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

GenJob small_job(Task task, std::uint64_t count, const fs::path& out) {
  GenJob job;
  job.task = task;
  job.cfg = default_config_for(std::string(task_name(task)));
  job.count = count;
  job.balance = default_balance(task);
  job.shard_size = 250;
  job.out_dir = out;
  return job;
}

}  // namespace

TEST(Tasks, Names) {
  for (Task t : kAllTasks) EXPECT_EQ(task_from_name(task_name(t)), t);
  EXPECT_THROW(task_from_name("bogus"), Error);
  EXPECT_TRUE(is_control_task(Task::kFeedback));
  EXPECT_FALSE(is_control_task(Task::kStability));
  EXPECT_EQ(rejection_taxonomy_version(), "stabgen-reject-v1");
  EXPECT_EQ(rejection_of(Error(ErrorKind::kEvalSingular, "")), Rejection::kSingular);
  EXPECT_EQ(rejection_of(Error(ErrorKind::kComplexValue, "")), Rejection::kComplex);
}

TEST(SystemCodec, RoundTrip) {
  const TokenSeq in = toks("add x0 u0 | sub x1 x0 XE FLOAT+ 5 E INT- 1 FLOAT+ 9 E INT- 1 UE FLOAT+ 5 E INT- 1");
  const DiffSystem s = decode_system_input(in, 0.01, false, 0.0);
  EXPECT_EQ(s.n_states(), 2);
  EXPECT_EQ(s.n_controls, 1);
  EXPECT_EQ(s.x_e, (std::vector<double>{0.5, 0.9}));
  EXPECT_EQ(s.u_e, std::vector<double>{0.5});
  EXPECT_EQ(encode_system_input(s, true, 4), in);

  const DiffSystem plain = decode_system_input(toks("sin x0 | x1"), 0.01, false, 0.0);
  EXPECT_EQ(plain.x_e, (std::vector<double>{0.01, 0.01}));
  EXPECT_EQ(encode_system_input(plain, false, 4), toks("sin x0 | x1"));
}

TEST(SystemCodec, RejectsMalformed) {
  EXPECT_THROW(decode_system_input(toks("sin x0 x1"), 0.01, false, 0.0), MalformedSequence);
  // x2 is not declared by a two-equation system
  EXPECT_THROW(decode_system_input(toks("x2 | x0"), 0.01, false, 0.0), Error);
  // time only exists for non-autonomous systems
  EXPECT_THROW(decode_system_input(toks("t"), 0.01, false, 0.0), Error);
  EXPECT_NO_THROW(decode_system_input(toks("mul t u0 XE FLOAT+ 5 E INT- 1 UE FLOAT+ 5 E INT- 1"), 0.5, true, 0.5));
}

TEST(PdeCodec, RoundTrip) {
  Rng rng(1);
  for (int i = 0; i < 300; ++i) {
    const PdeProblem p = sample_pde(static_cast<int>(rng.uniform_int(1, 6)), rng);
    const TokenSeq t = encode_pde_input(p, 4);
    const PdeProblem q = decode_pde_input(t);
    EXPECT_EQ(encode_pde_input(q, 4), t);
    EXPECT_EQ(q.op.coeffs, p.op.coeffs);
    EXPECT_EQ(q.u0.axes.size(), p.u0.axes.size());
  }
}

TEST(PdeCodec, WorkedExampleTarget) {
  PdeProblem p;
  p.op.n = 3;
  p.op.add({2, 0, 0}, 2.0);
  p.op.add({0, 2, 0}, 0.5);
  p.op.add({0, 0, 4}, 1.0);
  p.op.add({1, 1, 0}, -7.0);
  p.op.add({0, 1, 2}, -1.5);
  p.u0.axes = {{AxisFactor::kSinc, 1.0}, {AxisFactor::kNone, 1.0}, {AxisFactor::kGaussian, 1.0}};
  p.u0.modulations = {{2, -3.0}, {1, 2.5}};
  const TokenSeq in = encode_pde_input(p, 4);
  const auto labeled = label_input(Task::kPde, in, DistributionConfig{});
  ASSERT_TRUE(std::holds_alternative<Labeled>(labeled));
  const Labeled& l = std::get<Labeled>(labeled);
  EXPECT_EQ(l.label, "bounded");
  EXPECT_EQ(to_string(l.target),
            "TRUE FALSE IV FLOAT- 1 DOT 5 9 2 E INT- 1 FLOAT+ 1 DOT 5 9 2 E INT- 1 | PT FLOAT+ 3 DOT 9 7 9 E INT- 1 | FULL");
}

TEST(MatrixCodec, RoundTrip) {
  const CMatrix k(2, 3, {-22.8, 44.0, 1, 0.5, -1e-3, 7});
  const TokenSeq t = encode_matrix(k, 4);
  EXPECT_EQ(decode_matrix(t), k);
  EXPECT_EQ(std::count(t.begin(), t.end(), Token::kSep), 1);
  EXPECT_THROW(decode_matrix(toks("FLOAT+ 1 E INT+ 0 | FLOAT+ 1 E INT+ 0 FLOAT+ 1 E INT+ 0")), Error);
}

TEST(RecordHash, StableAndSensitive) {
  const TokenSeq a = toks("sin x0"), b = toks("cos x0");
  EXPECT_EQ(record_hash(a), record_hash(toks("sin x0")));
  EXPECT_NE(record_hash(a), record_hash(b));
}

TEST(Label, StabilityGolden) {
  DistributionConfig cfg = default_config_for("stability");
  cfg.x_e = {0.1};
  const auto r = label_input(Task::kStability, toks("sub sub cos x1 INT+ 1 sin x0 | sub mul x0 x0 sqrt add INT+ 1 x1"), cfg);
  ASSERT_TRUE(std::holds_alternative<Labeled>(r));
  EXPECT_EQ(std::get<Labeled>(r).target, TokenSeq{Token::kTrue});
  const auto s = label_input(Task::kSpeed, toks("sub sub cos x1 INT+ 1 sin x0 | sub mul x0 x0 sqrt add INT+ 1 x1"), cfg);
  EXPECT_EQ(std::get<Labeled>(s).target, encode_float(0.5186, 4));
}

TEST(Label, DegenerateRejected) {
  const DistributionConfig cfg = default_config_for("stability");
  // the second equation is constant: zero Jacobian row
  const auto r = label_input(Task::kStability, toks("sin x0 | INT+ 3"), cfg);
  ASSERT_TRUE(std::holds_alternative<Rejection>(r));
  EXPECT_EQ(std::get<Rejection>(r), Rejection::kDegenerate);
}

TEST(Label, FeedbackTargetVerifies) {
  const DistributionConfig cfg = default_config_for("feedback");
  const TokenSeq in = toks(
      "add add sin mul x0 x0 log add INT+ 1 x1 div atan mul u0 x0 add INT+ 1 x1 | sub x1 exp mul x0 x1 "
      "XE FLOAT+ 5 E INT- 1 FLOAT+ 5 E INT- 1 UE FLOAT+ 1 E INT+ 0");
  const auto r = label_input(Task::kFeedback, in, cfg);
  ASSERT_TRUE(std::holds_alternative<Labeled>(r));
  const CMatrix k = decode_matrix(std::get<Labeled>(r).target);
  EXPECT_EQ(k.rows(), 1u);
  EXPECT_EQ(k.cols(), 2u);
  EXPECT_NEAR(k(0, 0).real(), -22.8, 0.2);
}

TEST(RecordFactory, DeterministicAndLabelled) {
  for (Task t : kAllTasks) {
    const DistributionConfig cfg = default_config_for(std::string(task_name(t)));
    RecordFactory f1(t, cfg), f2(t, cfg);
    Rng r1(5), r2(5);
    int ok = 0;
    for (int i = 0; i < 300; ++i) {
      auto a = f1.next(r1), b = f2.next(r2);
      ASSERT_EQ(a.index(), b.index());
      if (auto* rec = std::get_if<DatasetRecord>(&a)) {
        const auto& other = std::get<DatasetRecord>(b);
        EXPECT_EQ(rec->input, other.input);
        EXPECT_EQ(rec->target, other.target);
        EXPECT_EQ(rec->hash, record_hash(rec->input));
        EXPECT_GE(rec->degree, cfg.degree_min);
        EXPECT_LE(rec->degree, cfg.degree_max);
        EXPECT_FALSE(rec->label.empty());
        // relabelling the emitted input reproduces the target
        const auto again = label_input(t, rec->input, cfg);
        ASSERT_TRUE(std::holds_alternative<Labeled>(again));
        EXPECT_EQ(std::get<Labeled>(again).target, rec->target);
        ++ok;
      }
    }
    EXPECT_GT(ok, 0) << task_name(t);
  }
}

TEST(RecordFactory, ControlCountCappedByDegree) {
  const DistributionConfig cfg = default_config_for("ctrl-auto");
  EXPECT_EQ(cfg.controls_max_for(3), 1);
  EXPECT_EQ(cfg.controls_max_for(4), 2);
  EXPECT_EQ(cfg.controls_max_for(6), 3);
  RecordFactory f(Task::kCtrlAuto, cfg);
  Rng rng(2);
  for (int i = 0; i < 300; ++i) {
    const auto next = f.next(rng);
    if (const auto* r = std::get_if<DatasetRecord>(&next)) {
      EXPECT_LE(r->controls, r->degree / 2);
      EXPECT_GE(r->controls, 1);
    }
  }
}

TEST(GenJob, Validation) {
  GenJob job = small_job(Task::kStability, 10, "/tmp");
  EXPECT_NO_THROW(job.validate());
  job.count = 0;
  EXPECT_THROW(job.validate(), Error);
  job = small_job(Task::kPde, 10, "/tmp");
  job.balance = 0.5;
  EXPECT_THROW(job.validate(), Error);
  job = small_job(Task::kStability, 10, "/tmp");
  job.balance = 1.5;
  EXPECT_THROW(job.validate(), Error);
  job = small_job(Task::kStability, 10, "/tmp");
  job.cfg.degree_min = 7;
  EXPECT_THROW(job.validate(), Error);
}

TEST(Generate, BalancedShardsAndSidecars) {
  TempDir dir("balanced");
  GenJob job = small_job(Task::kStability, 800, dir.path);
  job.shard_size = 200;
  const GenReport r = generate(job);
  EXPECT_EQ(r.records, 800u);
  EXPECT_EQ(r.classes.at("stable"), 400u);
  EXPECT_EQ(r.classes.at("unstable"), 400u);
  EXPECT_EQ(r.shards.size(), 4u);
  EXPECT_EQ(r.audit_mismatches, 0u);
  EXPECT_TRUE(fs::exists(dir.path / "stability-report.json"));

  std::map<int, int> degrees;
  for (const fs::path& shard : r.shards) {
    std::ifstream tsv(shard);
    fs::path meta = shard;
    meta.replace_extension(".meta.jsonl");
    std::ifstream side(meta);
    std::string line, m;
    int lines = 0;
    while (std::getline(tsv, line)) {
      ASSERT_TRUE(std::getline(side, m));
      const auto tab = line.find('\t');
      ASSERT_NE(tab, std::string::npos);
      const auto j = nlohmann::json::parse(m);
      EXPECT_EQ(j.at("task"), "stability");
      const TokenSeq in = parse_tokens(line.substr(0, tab));
      char hex[17];
      std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(record_hash(in)));
      EXPECT_EQ(j.at("hash"), hex);
      ++degrees[j.at("degree").get<int>()];
      ++lines;
    }
    EXPECT_EQ(lines, 200);
  }
  // equal proportion of each degree
  ASSERT_EQ(degrees.size(), 4u);
  for (const auto& [d, c] : degrees) EXPECT_EQ(c, 200) << d;

  const auto report = nlohmann::json::parse(slurp(dir.path / "stability-report.json"));
  EXPECT_EQ(report.at("records"), 800);
  EXPECT_EQ(report.at("rejection_taxonomy"), "stabgen-reject-v1");
}

TEST(Generate, ByteIdenticalAcrossRunsAndWorkerCounts) {
  TempDir a("det-a"), b("det-b");
  GenJob ja = small_job(Task::kCtrlAuto, 600, a.path);
  GenJob jb = ja;
  jb.out_dir = b.path;
  jb.workers = 3;
  const GenReport ra = generate(ja), rb = generate(jb);
  ASSERT_EQ(ra.shards.size(), rb.shards.size());
  for (std::size_t i = 0; i < ra.shards.size(); ++i) {
    EXPECT_EQ(slurp(ra.shards[i]), slurp(rb.shards[i]));
    fs::path ma = ra.shards[i], mb = rb.shards[i];
    EXPECT_EQ(slurp(ma.replace_extension(".meta.jsonl")), slurp(mb.replace_extension(".meta.jsonl")));
  }
  // a single shard regenerated on its own matches too
  const ShardResult again = generate_shard(ja, 1);
  TempDir c("det-c");
  write_shard(again, c.path / "one.tsv");
  EXPECT_EQ(slurp(c.path / "one.tsv"), slurp(ra.shards[1]));
}

TEST(Generate, UnreachableTargetAborts) {
  TempDir dir("unreach");
  GenJob job = small_job(Task::kStability, 20, dir.path);
  job.balance = 0.99;
  job.cfg.degree_min = job.cfg.degree_max = 5;
  job.unreachable_window = 200;
  try {
    generate(job);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTargetUnreachable);
  }
}

TEST(Dedup, Filter) {
  DatasetRecord r;
  r.input = toks("sin x0");
  std::uint64_t dups = 0;
  const auto out = dedup_filter({r, r}, &dups);
  EXPECT_EQ(out.size(), 1u);
  EXPECT_EQ(dups, 1u);
  EXPECT_TRUE(dedup_filter({}).empty());
  DedupFilter f;
  EXPECT_TRUE(f.admit(7));
  EXPECT_FALSE(f.admit(7));
  EXPECT_EQ(f.duplicates(), 1u);
}

TEST(Dedup, RandomDegreeThreeSystemsDoNotCollide) {
  DistributionConfig cfg = default_config_for("stability");
  cfg.degree_min = cfg.degree_max = 3;
  TreeSampler trees(cfg);
  Rng rng(3);
  DedupFilter f;
  for (int i = 0; i < 20000; ++i) f.admit(record_hash(encode_system_input(sample_system(3, 0, cfg, trees, rng), false, 4)));
  EXPECT_EQ(f.duplicates(), 0u);
}

TEST(Variants, Overrides) {
  const DistributionConfig base = default_config_for("stability");
  EXPECT_DOUBLE_EQ(variant_config("int10", base).p_int, 0.10);
  const DistributionConfig d6 = variant_config("degree6", base);
  EXPECT_EQ(d6.degree_min, 6);
  EXPECT_EQ(d6.degree_max, 6);
  const DistributionConfig nt = variant_config("no-trig", base);
  for (UnaryOp op : {UnaryOp::kSin, UnaryOp::kCos, UnaryOp::kTan, UnaryOp::kAsin, UnaryOp::kAcos, UnaryOp::kAtan}) {
    EXPECT_EQ(nt.unary_weights[static_cast<std::size_t>(op)], 0.0);
  }
  EXPECT_GT(nt.unary_weights[static_cast<std::size_t>(UnaryOp::kExp)], 0.0);
  for (std::string_view name : kVariantNames) EXPECT_NO_THROW(variant_config(name, base).validate()) << name;
  try {
    variant_config("nope", base);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnknownVariant);
  }
}

TEST(Config, SettingsRoundTrip) {
  DistributionConfig cfg = default_config_for("ctrl-nonauto");
  apply_setting(cfg, "p_int", "0.5");
  apply_setting(cfg, "x_e", "0.5,0.9");
  std::ostringstream out;
  write_config(out, cfg);
  DistributionConfig back;
  apply_config_text(back, out.str());
  EXPECT_EQ(back, cfg);
  EXPECT_EQ(to_settings(cfg).at("p_int"), "0.5");
  EXPECT_THROW(apply_setting(cfg, "no_such_key", "1"), Error);
  EXPECT_THROW(apply_setting(cfg, "degree_min", "two"), Error);
  EXPECT_NO_THROW(apply_config_text(cfg, "# comment\ndegree_min = 3\n"));
  EXPECT_EQ(cfg.degree_min, 3);
}

TEST(Stats, FromShards) {
  TempDir dir("stats");
  GenJob job = small_job(Task::kStability, 400, dir.path);
  job.shard_size = 200;
  const GenReport r = generate(job);
  const ShardStats s = stats(r.shards);
  EXPECT_EQ(s.records, 400u);
  EXPECT_EQ(s.classes.at("stable"), 200u);
  EXPECT_EQ(s.tasks.at("stability"), 400u);
  EXPECT_TRUE(s.have_rejections);
  EXPECT_FALSE(s.operators.empty());
  const auto j = nlohmann::json::parse(stats_json(s));
  EXPECT_DOUBLE_EQ(j.at("class_fractions").at("stable").get<double>(), 0.5);
  EXPECT_TRUE(stats_of({}).classes.empty());
}
