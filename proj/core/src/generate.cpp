#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "stabgen/error.hpp"
#include "stabgen/pipeline.hpp"

namespace stabgen {
namespace {

// Minimum useful-draw rate over one unreachable window.
constexpr double kMinUsefulRate = 1e-4;

bool audit_selected(std::uint64_t hash, double fraction) {
  return static_cast<double>(hash % 1000000) < fraction * 1e6;
}

// Splits `total` as evenly as possible over `parts`, earlier parts first.
std::uint64_t even_share(std::uint64_t total, std::size_t parts, std::size_t k) {
  return total / parts + (k < total % parts ? 1 : 0);
}

struct Quota {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;
  std::uint64_t left() const { return pos + neg; }
};

// Per-degree quotas for one shard. The positive class gets round(b * end) -
// round(b * start) over the job-wide running total so shards add up exactly.
std::vector<Quota> shard_quotas(const GenJob& job, std::size_t index) {
  const auto degrees = static_cast<std::size_t>(job.cfg.degree_max - job.cfg.degree_min + 1);
  const std::uint64_t want = shard_records(job, index);
  std::vector<Quota> q(degrees);
  std::uint64_t start = index * job.shard_size;
  for (std::size_t k = 0; k < degrees; ++k) {
    const std::uint64_t n = even_share(want, degrees, (k + index) % degrees);
    if (job.balance) {
      const double b = *job.balance;
      const auto lo = static_cast<std::uint64_t>(std::llround(b * static_cast<double>(start)));
      const auto hi = static_cast<std::uint64_t>(std::llround(b * static_cast<double>(start + n)));
      q[k].pos = hi - lo;
      q[k].neg = n - q[k].pos;
    } else {
      q[k].pos = n;
    }
    start += n;
  }
  return q;
}

}  // namespace

void GenJob::validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorKind::kInvalidConfig, m); };
  if (count == 0) bad("count must be positive");
  if (balance && !(*balance > 0.0 && *balance < 1.0)) bad("balance must lie in (0, 1)");
  if (balance && task != Task::kStability && task != Task::kCtrlAuto && task != Task::kCtrlNonauto) {
    bad("balance applies to stability, ctrl-auto and ctrl-nonauto only");
  }
  if (shard_size == 0) bad("shard_size must be positive");
  if (workers < 1) bad("workers must be at least 1");
  if (unreachable_window == 0) bad("unreachable_window must be positive");
  if (!(audit_fraction >= 0.0 && audit_fraction <= 1.0)) bad("audit_fraction must lie in [0, 1]");
  cfg.validate();
}

std::optional<double> default_balance(Task t) noexcept {
  if (t == Task::kStability || t == Task::kCtrlAuto) return 0.5;
  return std::nullopt;
}

std::string_view positive_label(Task t) noexcept {
  return is_control_task(t) ? "controllable" : "stable";
}

std::uint64_t shard_count(const GenJob& job) noexcept { return (job.count + job.shard_size - 1) / job.shard_size; }

std::uint64_t shard_records(const GenJob& job, std::size_t index) noexcept {
  const std::uint64_t start = index * job.shard_size;
  if (start >= job.count) return 0;
  return std::min(job.shard_size, job.count - start);
}

ShardResult generate_shard(const GenJob& job, std::size_t index) {
  ShardResult out;
  out.index = index;
  out.seed = derive_seed(job.cfg.seed, index);
  Rng rng(out.seed);
  RecordFactory factory(job.task, job.cfg);
  DedupFilter dedup;

  std::vector<Quota> quota = shard_quotas(job, index);
  const std::string_view pos_label = positive_label(job.task);
  std::vector<std::size_t> open;

  const std::uint64_t want = shard_records(job, index);
  std::uint64_t window_draws = 0, window_useful = 0;
  out.records.reserve(want);
  while (out.records.size() < want) {
    ++out.attempts;
    if (++window_draws == job.unreachable_window) {
      if (static_cast<double>(window_useful) < kMinUsefulRate * static_cast<double>(window_draws)) {
        throw Error(ErrorKind::kTargetUnreachable,
                    std::string(task_name(job.task)) + " shard " + std::to_string(index) + ": " +
                        std::to_string(window_useful) + " useful records in " + std::to_string(window_draws) +
                        " draws");
      }
      window_draws = window_useful = 0;
    }

    open.clear();
    for (std::size_t k = 0; k < quota.size(); ++k) {
      if (quota[k].left() > 0) open.push_back(k);
    }
    const std::size_t k = open[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(open.size()) - 1))];
    auto drawn = factory.next(rng, job.cfg.degree_min + static_cast<int>(k));
    if (auto* rej = std::get_if<Rejection>(&drawn)) {
      ++out.rejections[static_cast<std::size_t>(*rej)];
      continue;
    }
    DatasetRecord& r = std::get<DatasetRecord>(drawn);
    std::uint64_t& left = !job.balance || r.label == pos_label ? quota[k].pos : quota[k].neg;
    if (left == 0) {
      ++out.rejections[static_cast<std::size_t>(Rejection::kSurplusClass)];
      continue;
    }
    if (!dedup.admit(r)) {
      ++out.rejections[static_cast<std::size_t>(Rejection::kDuplicate)];
      continue;
    }
    --left;
    ++window_useful;

    if (audit_selected(r.hash, job.audit_fraction)) {
      ++out.audited;
      const auto again = label_input(job.task, r.input, job.cfg);
      const auto* l = std::get_if<Labeled>(&again);
      if (!l || l->target != r.target || l->label != r.label) ++out.audit_mismatches;
    }
    out.records.push_back(std::move(r));
  }
  std::sort(out.records.begin(), out.records.end(),
            [](const DatasetRecord& a, const DatasetRecord& b) { return a.hash < b.hash; });
  return out;
}

std::filesystem::path shard_path(const GenJob& job, std::size_t index) {
  char name[64];
  std::snprintf(name, sizeof name, "%s-%05zu.tsv", std::string(task_name(job.task)).c_str(), index);
  return job.out_dir / name;
}

std::string meta_line(const DatasetRecord& r) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(r.hash));
  nlohmann::ordered_json j;
  j["task"] = task_name(r.task);
  j["degree"] = r.degree;
  j["controls"] = r.controls;
  j["label"] = r.label;
  j["hash"] = hex;
  return j.dump();
}

void write_shard(const ShardResult& shard, const std::filesystem::path& tsv) {
  std::filesystem::path meta = tsv;
  meta.replace_extension(".meta.jsonl");
  auto write = [](const std::filesystem::path& path, auto&& emit) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(ErrorKind::kIo, "cannot open " + tmp.string());
      emit(out);
      if (!out.flush()) throw Error(ErrorKind::kIo, "write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
  };
  write(tsv, [&](std::ofstream& out) {
    for (const DatasetRecord& r : shard.records) out << to_string(r.input) << '\t' << to_string(r.target) << '\n';
  });
  write(meta, [&](std::ofstream& out) {
    for (const DatasetRecord& r : shard.records) out << meta_line(r) << '\n';
  });
}

GenReport generate(const GenJob& job) {
  job.validate();
  const auto t0 = std::chrono::steady_clock::now();
  std::error_code ec;
  std::filesystem::create_directories(job.out_dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create " + job.out_dir.string() + ": " + ec.message());

  const std::size_t n_shards = shard_count(job);
  std::vector<ShardResult> summaries(n_shards);
  std::vector<std::vector<std::uint64_t>> hashes(n_shards);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_shards || failed.load()) return;
      try {
        ShardResult shard = generate_shard(job, i);
        write_shard(shard, shard_path(job, i));
        hashes[i].reserve(shard.records.size());
        for (const auto& r : shard.records) hashes[i].push_back(r.hash);
        ShardResult& s = summaries[i];
        s.index = i;
        s.seed = shard.seed;
        s.rejections = shard.rejections;
        s.attempts = shard.attempts;
        s.audited = shard.audited;
        s.audit_mismatches = shard.audit_mismatches;
        // Keep labels only; the records themselves are already on disk.
        s.records.resize(shard.records.size());
        for (std::size_t k = 0; k < shard.records.size(); ++k) s.records[k].label = std::move(shard.records[k].label);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  const int n_threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(job.workers), n_shards));
  std::vector<std::thread> pool;
  for (int w = 1; w < n_threads; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  GenReport rep;
  DedupFilter cross;
  for (std::size_t i = 0; i < n_shards; ++i) {
    const ShardResult& s = summaries[i];
    rep.records += s.records.size();
    rep.attempts += s.attempts;
    rep.audited += s.audited;
    rep.audit_mismatches += s.audit_mismatches;
    for (std::size_t k = 0; k < kRejectionCount; ++k) rep.rejections[k] += s.rejections[k];
    for (const auto& r : s.records) ++rep.classes[r.label];
    for (std::uint64_t h : hashes[i]) cross.admit(h);
    rep.shards.push_back(shard_path(job, i));
  }
  rep.cross_shard_duplicates = cross.duplicates();
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::ofstream out(job.out_dir / (std::string(task_name(job.task)) + "-report.json"), std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write report in " + job.out_dir.string());
  out << report_json(job, rep) << '\n';
  return rep;
}

std::string report_json(const GenJob& job, const GenReport& r) {
  nlohmann::ordered_json j;
  j["task"] = task_name(job.task);
  j["vocabulary"] = vocabulary_version();
  j["rejection_taxonomy"] = rejection_taxonomy_version();
  j["count"] = job.count;
  j["balance"] = job.balance ? nlohmann::ordered_json(*job.balance) : nlohmann::ordered_json(nullptr);
  j["shard_size"] = job.shard_size;
  nlohmann::ordered_json cfg;
  for (const auto& [k, v] : to_settings(job.cfg)) cfg[k] = v;
  j["config"] = cfg;
  j["records"] = r.records;
  j["attempts"] = r.attempts;
  j["audited"] = r.audited;
  j["audit_mismatches"] = r.audit_mismatches;
  j["cross_shard_duplicates"] = r.cross_shard_duplicates;
  nlohmann::ordered_json rej;
  for (std::size_t k = 0; k < kRejectionCount; ++k) rej[std::string(rejection_name(static_cast<Rejection>(k)))] = r.rejections[k];
  j["rejections"] = rej;
  j["classes"] = r.classes;
  nlohmann::ordered_json shards = nlohmann::ordered_json::array();
  for (const auto& p : r.shards) shards.push_back(p.filename().string());
  j["shards"] = shards;
  j["seconds"] = r.seconds;
  return j.dump(2);
}

}  // namespace stabgen
