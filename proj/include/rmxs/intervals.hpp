#pragma once

// Finite unions of real intervals with possibly infinite endpoints. Only the
// measure of a set matters to the integrals that use it, so intervals are
// treated as closed and single points are dropped.

#include <string>
#include <vector>

namespace rmxs {

struct Interval {
  double lo;
  double hi;
};

class IntervalSet {
 public:
  IntervalSet() = default;
  /// Sorts the pieces, drops empty ones (lo >= hi) and merges overlapping or
  /// touching pieces. NaN endpoints are rejected.
  explicit IntervalSet(std::vector<Interval> pieces);

  static IntervalSet real_line();

  const std::vector<Interval>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }
  bool contains(double x) const;
  /// True if [lo, hi] lies inside the set, up to finitely many points.
  bool covers(double lo, double hi) const;
  /// Sorted finite endpoints.
  std::vector<double> endpoints() const;

  /// Canonical text form, e.g. "[1,inf)" or "(-inf,0]u[2,3]"; the empty set is "{}".
  std::string str() const;

  friend bool operator==(const IntervalSet& a, const IntervalSet& b);

 private:
  std::vector<Interval> pieces_;
};

/// Parses the canonical form produced by str().
IntervalSet parse_interval_set(const std::string& text);

}  // namespace rmxs
