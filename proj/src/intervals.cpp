#include "rmxs/intervals.hpp"

#include "rmxs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rmxs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string endpoint_str(double x) {
  if (x == kInf) return "inf";
  if (x == -kInf) return "-inf";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double parse_endpoint(const std::string& s) {
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw PreconditionError("bad interval endpoint '" + s + "'");
  }
  if (used != s.size() || std::isnan(v)) throw PreconditionError("bad interval endpoint '" + s + "'");
  return v;
}

}  // namespace

IntervalSet::IntervalSet(std::vector<Interval> pieces) {
  for (const auto& p : pieces)
    if (std::isnan(p.lo) || std::isnan(p.hi)) throw PreconditionError("interval endpoint is NaN");
  pieces.erase(std::remove_if(pieces.begin(), pieces.end(), [](const Interval& p) { return !(p.lo < p.hi); }),
               pieces.end());
  std::sort(pieces.begin(), pieces.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  for (const auto& p : pieces) {
    if (!pieces_.empty() && p.lo <= pieces_.back().hi)
      pieces_.back().hi = std::max(pieces_.back().hi, p.hi);
    else
      pieces_.push_back(p);
  }
}

IntervalSet IntervalSet::real_line() { return IntervalSet({{-kInf, kInf}}); }

bool IntervalSet::contains(double x) const {
  for (const auto& p : pieces_)
    if (x >= p.lo && x <= p.hi) return true;
  return false;
}

bool IntervalSet::covers(double lo, double hi) const {
  if (!(lo < hi)) return true;
  for (const auto& p : pieces_)
    if (p.lo <= lo && p.hi >= hi) return true;
  return false;
}

std::vector<double> IntervalSet::endpoints() const {
  std::vector<double> e;
  for (const auto& p : pieces_) {
    if (std::isfinite(p.lo)) e.push_back(p.lo);
    if (std::isfinite(p.hi)) e.push_back(p.hi);
  }
  return e;
}

std::string IntervalSet::str() const {
  if (pieces_.empty()) return "{}";
  std::string out;
  for (const auto& p : pieces_) {
    if (!out.empty()) out += "u";
    out += std::isfinite(p.lo) ? "[" : "(";
    out += endpoint_str(p.lo) + "," + endpoint_str(p.hi);
    out += std::isfinite(p.hi) ? "]" : ")";
  }
  return out;
}

bool operator==(const IntervalSet& a, const IntervalSet& b) {
  if (a.pieces_.size() != b.pieces_.size()) return false;
  for (std::size_t i = 0; i < a.pieces_.size(); ++i)
    if (a.pieces_[i].lo != b.pieces_[i].lo || a.pieces_[i].hi != b.pieces_[i].hi) return false;
  return true;
}

IntervalSet parse_interval_set(const std::string& text) {
  if (text == "{}") return IntervalSet();
  std::vector<Interval> pieces;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = text.find('u', pos);
    const std::string piece = text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    if (piece.size() < 5 || (piece.front() != '[' && piece.front() != '(') ||
        (piece.back() != ']' && piece.back() != ')'))
      throw PreconditionError("bad interval '" + piece + "'");
    const std::string body = piece.substr(1, piece.size() - 2);
    const std::size_t comma = body.find(',');
    if (comma == std::string::npos) throw PreconditionError("bad interval '" + piece + "'");
    pieces.push_back({parse_endpoint(body.substr(0, comma)), parse_endpoint(body.substr(comma + 1))});
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  return IntervalSet(std::move(pieces));
}

}  // namespace rmxs
