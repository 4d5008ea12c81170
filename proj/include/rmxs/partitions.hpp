#pragma once

#include <optional>
#include <string>
#include <vector>

namespace rmxs {

/// Integer partition kappa_1 >= ... >= kappa_l > 0; the empty list is the
/// zero partition.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  int length() const { return static_cast<int>(parts_.size()); }
  int weight() const { return weight_; }
  /// kappa_i with the convention kappa_i = 0 past the length (1-based).
  int part(int i) const { return i <= length() ? parts_[static_cast<std::size_t>(i - 1)] : 0; }

  std::string str() const;

  friend bool operator==(const Partition& a, const Partition& b) { return a.parts_ == b.parts_; }

 private:
  std::vector<int> parts_;
  int weight_ = 0;
};

/// Streams every partition with length <= max_len and weight <= max_weight
/// exactly once: by increasing weight, and within a weight in decreasing
/// lexicographic order of the parts, e.g. (), (1), (2), (1,1), (3), (2,1).
class PartitionStream {
 public:
  PartitionStream(int max_len, int max_weight);

  std::optional<Partition> next();

 private:
  void fill_weight(int w);

  int max_len_;
  int max_weight_;
  int weight_ = -1;
  std::vector<Partition> pending_;
  std::size_t pos_ = 0;
};

std::vector<Partition> partitions(int max_len, int max_weight);

/// Partitions of exactly n with at most max_len parts, same order as above.
std::vector<Partition> partitions_of(int n, int max_len);

}  // namespace rmxs
