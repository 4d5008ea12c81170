#include "rmxs/partitions.hpp"

#include "rmxs/errors.hpp"

#include <numeric>

namespace rmxs {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] <= 0) throw PreconditionError("partition parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1]) throw PreconditionError("partition parts must be weakly decreasing");
  }
  weight_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

std::string Partition::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(parts_[i]);
  }
  return s + ")";
}

namespace {

void generate(int remaining, int max_part, int slots, std::vector<int>& prefix, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(prefix);
    return;
  }
  if (slots == 0) return;
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    prefix.push_back(p);
    generate(remaining - p, p, slots - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<Partition> partitions_of(int n, int max_len) {
  std::vector<Partition> out;
  if (n < 0 || max_len < 0) return out;
  std::vector<int> prefix;
  generate(n, n, max_len, prefix, out);
  return out;
}

PartitionStream::PartitionStream(int max_len, int max_weight) : max_len_(max_len), max_weight_(max_weight) {
  if (max_len < 0 || max_weight < 0) throw PreconditionError("partition bounds must be non-negative");
}

void PartitionStream::fill_weight(int w) {
  pending_ = partitions_of(w, max_len_);
  pos_ = 0;
}

std::optional<Partition> PartitionStream::next() {
  while (pos_ >= pending_.size()) {
    if (weight_ >= max_weight_) return std::nullopt;
    fill_weight(++weight_);
  }
  return pending_[pos_++];
}

std::vector<Partition> partitions(int max_len, int max_weight) {
  std::vector<Partition> out;
  PartitionStream stream(max_len, max_weight);
  while (auto p = stream.next()) out.push_back(std::move(*p));
  return out;
}

}  // namespace rmxs
