#include "stabgen/pipeline.hpp"

namespace stabgen {

bool DedupFilter::admit(std::uint64_t hash) {
  if (seen_.insert(hash).second) return true;
  ++duplicates_;
  return false;
}

std::vector<DatasetRecord> dedup_filter(std::vector<DatasetRecord> records, std::uint64_t* duplicates) {
  DedupFilter f;
  std::vector<DatasetRecord> out;
  out.reserve(records.size());
  for (auto& r : records) {
    if (r.hash == 0) r.hash = record_hash(r.input);
    if (f.admit(r)) out.push_back(std::move(r));
  }
  if (duplicates) *duplicates = f.duplicates();
  return out;
}

}  // namespace stabgen
