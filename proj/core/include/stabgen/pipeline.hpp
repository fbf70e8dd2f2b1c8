#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "stabgen/config.hpp"
#include "stabgen/control.hpp"
#include "stabgen/error.hpp"
#include "stabgen/pde.hpp"
#include "stabgen/sampler.hpp"
#include "stabgen/stability.hpp"
#include "stabgen/tokens.hpp"

namespace stabgen {

enum class Task { kStability, kSpeed, kCtrlAuto, kCtrlNonauto, kFeedback, kPde };

inline constexpr std::array<Task, 6> kAllTasks = {Task::kStability,   Task::kSpeed,    Task::kCtrlAuto,
                                                  Task::kCtrlNonauto, Task::kFeedback, Task::kPde};

std::string_view task_name(Task t) noexcept;
/// Throws kInvalidConfig for unknown names.
Task task_from_name(std::string_view name);
bool is_control_task(Task t) noexcept;

/// Versioned rejection taxonomy ("stabgen-reject-v1").
enum class Rejection {
  kDegenerate,
  kSingular,
  kOverflow,
  kComplex,
  kMarginal,
  kUnencodable,
  kGramianSingular,
  kNoConvergence,
  kAmbiguous,
  kDuplicate,
  kSurplusClass,
  kUncontrollable,
  kUnverified,
  kCount_
};
inline constexpr std::size_t kRejectionCount = static_cast<std::size_t>(Rejection::kCount_);
std::string_view rejection_taxonomy_version() noexcept;
std::string_view rejection_name(Rejection r) noexcept;
/// Maps an oracle error onto the taxonomy.
Rejection rejection_of(const Error& e) noexcept;

using RejectionCounts = std::array<std::uint64_t, kRejectionCount>;

// --- wire format --------------------------------------------------------------

/// eq_0 | eq_1 | ... [XE x_0..x_{n-1} UE u_0..u_{p-1}]
TokenSeq encode_system_input(const DiffSystem& s, bool with_point, int sig_digits);
/// Inverse of encode_system_input. Without an XE block every state takes
/// `default_x_e`; controls are counted from the UE block.
DiffSystem decode_system_input(std::span<const Token> tokens, double default_x_e, bool has_time, double t_e);

/// axis factors, MOD axis b..., | MONO ord_0..ord_{n-1} coef ...
TokenSeq encode_pde_input(const PdeProblem& p, int sig_digits);
PdeProblem decode_pde_input(std::span<const Token> tokens);
/// exists vanishes, then per axis PT c | IV lo hi | FULL.
TokenSeq encode_pde_target(const PDEVerdict& v, int sig_digits);

/// K row-major, rows separated by |.
TokenSeq encode_matrix(const CMatrix& k, int sig_digits);
CMatrix decode_matrix(std::span<const Token> tokens);

// --- records ------------------------------------------------------------------

struct DatasetRecord {
  TokenSeq input;
  TokenSeq target;
  Task task = Task::kStability;
  int degree = 0;
  int controls = 0;
  std::string label;  // class used for balancing and statistics
  std::uint64_t hash = 0;
};

/// FNV-1a 64 over the token ids of the input.
std::uint64_t record_hash(std::span<const Token> input) noexcept;

struct Labeled {
  TokenSeq target;
  std::string label;
};

/// Runs the task oracle on an emitted input. Throws Error on oracle failure;
/// a result that the dataset must not contain (marginal, ambiguous, ...) is
/// returned as a Rejection.
std::variant<Labeled, Rejection> label_input(Task task, std::span<const Token> input, const DistributionConfig& cfg);

/// Draws, shifts, encodes and labels one candidate record.
class RecordFactory {
 public:
  RecordFactory(Task task, const DistributionConfig& cfg);
  /// Degree drawn uniformly from the configured range.
  std::variant<DatasetRecord, Rejection> next(Rng& rng);
  std::variant<DatasetRecord, Rejection> next(Rng& rng, int degree);

 private:
  Task task_;
  DistributionConfig cfg_;
  TreeSampler trees_;
};

// --- generation ---------------------------------------------------------------

struct GenJob {
  Task task = Task::kStability;
  DistributionConfig cfg;
  std::uint64_t count = 0;
  /// Target fraction of the first class ("stable" / "controllable").
  std::optional<double> balance;
  std::uint64_t shard_size = 10000;
  int workers = 1;
  std::filesystem::path out_dir;
  /// Abort when fewer than 1e-4 of this many consecutive draws yield a
  /// still-needed record.
  std::uint64_t unreachable_window = 1000000;
  /// Every record whose hash falls in this fraction is relabelled and compared.
  double audit_fraction = 0.01;

  void validate() const;
};

/// Default balance per task: 0.5 for stability and ctrl-auto, none otherwise.
std::optional<double> default_balance(Task t) noexcept;
/// Name of the class the balance fraction refers to.
std::string_view positive_label(Task t) noexcept;

struct ShardResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::vector<DatasetRecord> records;  // sorted by hash
  RejectionCounts rejections{};
  std::uint64_t attempts = 0;
  std::uint64_t audited = 0;
  std::uint64_t audit_mismatches = 0;
};

std::uint64_t shard_count(const GenJob& job) noexcept;
std::uint64_t shard_records(const GenJob& job, std::size_t index) noexcept;
/// Degrees come in equal proportion within every shard (and, when balanced,
/// the class mix holds per degree). Deterministic in (job, index) regardless
/// of worker count.
ShardResult generate_shard(const GenJob& job, std::size_t index);

struct GenReport {
  std::uint64_t records = 0;
  std::uint64_t attempts = 0;
  std::uint64_t audited = 0;
  std::uint64_t audit_mismatches = 0;
  std::uint64_t cross_shard_duplicates = 0;
  RejectionCounts rejections{};
  std::map<std::string, std::uint64_t> classes;
  std::vector<std::filesystem::path> shards;
  double seconds = 0.0;
};

std::filesystem::path shard_path(const GenJob& job, std::size_t index);
/// Writes `<task>-NNNNN.tsv` plus `.meta.jsonl` sidecars and `<task>-report.json`.
GenReport generate(const GenJob& job);
std::string report_json(const GenJob& job, const GenReport& r);

void write_shard(const ShardResult& shard, const std::filesystem::path& tsv);
std::string meta_line(const DatasetRecord& r);

/// Drops records whose input hash was already seen.
class DedupFilter {
 public:
  bool admit(const DatasetRecord& r) { return admit(r.hash); }
  bool admit(std::uint64_t hash);
  std::uint64_t duplicates() const noexcept { return duplicates_; }

 private:
  std::unordered_set<std::uint64_t> seen_;
  std::uint64_t duplicates_ = 0;
};
std::vector<DatasetRecord> dedup_filter(std::vector<DatasetRecord> records, std::uint64_t* duplicates = nullptr);

// --- variants and statistics ----------------------------------------------------

inline constexpr std::array<std::string_view, 10> kVariantNames = {
    "no-trig", "no-log-exp", "sqrt-only", "skewed-ops", "int10", "int50", "int70", "len-n3-3n3", "len-2n3-4n3", "degree6"};

/// Distribution-shift override applied to `base`. Throws kUnknownVariant.
DistributionConfig variant_config(std::string_view name, DistributionConfig base);

struct ShardStats {
  std::uint64_t records = 0;
  std::map<std::string, std::uint64_t> classes;
  std::map<std::string, std::uint64_t> tasks;
  std::map<std::size_t, std::uint64_t> input_length;  // bucketed by 16 tokens
  std::map<std::size_t, std::uint64_t> target_length;
  std::map<std::string, std::uint64_t> operators;
  RejectionCounts rejections{};
  bool have_rejections = false;
};

/// Reads TSV shards with their .meta.jsonl sidecars (and a sibling report if present).
ShardStats stats(const std::vector<std::filesystem::path>& shards);
ShardStats stats_of(const std::vector<DatasetRecord>& records);
std::string stats_json(const ShardStats& s);

}  // namespace stabgen
