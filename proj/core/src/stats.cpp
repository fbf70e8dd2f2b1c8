#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "stabgen/error.hpp"
#include "stabgen/pipeline.hpp"

namespace stabgen {
namespace {

constexpr std::size_t kLengthBucket = 16;

bool is_operator(Token t) { return t >= Token::kAdd && t <= Token::kAtan; }

void count_record(ShardStats& s, std::span<const Token> input, std::size_t target_len) {
  ++s.records;
  ++s.input_length[input.size() / kLengthBucket * kLengthBucket];
  ++s.target_length[target_len / kLengthBucket * kLengthBucket];
  for (Token t : input) {
    if (is_operator(t)) ++s.operators[std::string(token_name(t))];
  }
}

void merge_report(ShardStats& s, const std::filesystem::path& report) {
  std::ifstream in(report);
  if (!in) return;
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.contains("rejections")) return;
  for (std::size_t k = 0; k < kRejectionCount; ++k) {
    const std::string name(rejection_name(static_cast<Rejection>(k)));
    if (j["rejections"].contains(name)) s.rejections[k] += j["rejections"][name].get<std::uint64_t>();
  }
  s.have_rejections = true;
}

}  // namespace

ShardStats stats(const std::vector<std::filesystem::path>& shards) {
  ShardStats s;
  std::vector<std::filesystem::path> reports;
  for (const auto& path : shards) {
    std::ifstream tsv(path);
    if (!tsv) throw Error(ErrorKind::kIo, "cannot read " + path.string());
    std::filesystem::path meta_path = path;
    meta_path.replace_extension(".meta.jsonl");
    std::ifstream meta(meta_path);

    std::string line, meta_text;
    std::size_t lineno = 0;
    while (std::getline(tsv, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw Error(ErrorKind::kIo, path.string() + ":" + std::to_string(lineno) + ": missing tab");
      }
      const TokenSeq input = parse_tokens(std::string_view(line).substr(0, tab));
      const TokenSeq target = parse_tokens(std::string_view(line).substr(tab + 1));
      count_record(s, input, target.size());
      if (meta && std::getline(meta, meta_text)) {
        const auto j = nlohmann::json::parse(meta_text, nullptr, false);
        if (!j.is_discarded()) {
          if (j.contains("label")) ++s.classes[j["label"].get<std::string>()];
          if (j.contains("task")) ++s.tasks[j["task"].get<std::string>()];
        }
      }
    }

    // <task>-NNNNN.tsv -> <task>-report.json
    const std::string stem = path.stem().string();
    const auto dash = stem.rfind('-');
    if (dash != std::string::npos) {
      auto report = path.parent_path() / (stem.substr(0, dash) + "-report.json");
      if (std::find(reports.begin(), reports.end(), report) == reports.end()) reports.push_back(std::move(report));
    }
  }
  for (const auto& r : reports) merge_report(s, r);
  return s;
}

ShardStats stats_of(const std::vector<DatasetRecord>& records) {
  ShardStats s;
  for (const DatasetRecord& r : records) {
    count_record(s, r.input, r.target.size());
    ++s.classes[r.label];
    ++s.tasks[std::string(task_name(r.task))];
  }
  return s;
}

std::string stats_json(const ShardStats& s) {
  nlohmann::ordered_json j;
  j["records"] = s.records;
  j["classes"] = s.classes;
  nlohmann::ordered_json frac;
  for (const auto& [k, v] : s.classes) {
    frac[k] = s.records ? static_cast<double>(v) / static_cast<double>(s.records) : 0.0;
  }
  j["class_fractions"] = frac;
  j["tasks"] = s.tasks;
  auto hist = [](const std::map<std::size_t, std::uint64_t>& h) {
    nlohmann::ordered_json out;
    for (const auto& [k, v] : h) out[std::to_string(k)] = v;
    return out;
  };
  j["input_length_hist"] = hist(s.input_length);
  j["target_length_hist"] = hist(s.target_length);
  j["operators"] = s.operators;
  if (s.have_rejections) {
    nlohmann::ordered_json rej;
    rej["taxonomy"] = rejection_taxonomy_version();
    for (std::size_t k = 0; k < kRejectionCount; ++k) {
      rej[std::string(rejection_name(static_cast<Rejection>(k)))] = s.rejections[k];
    }
    j["rejections"] = rej;
  }
  return j.dump(2);
}

}  // namespace stabgen
