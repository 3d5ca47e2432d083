// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "rdemon/lang/ast.hpp"

namespace rdemon::engine {

struct Sample {
  double time = 0.0;
  double value = 0.0;
};

enum class PercentileMethod {
  NearestRank,  // element at rank ceil(p/100 * n)
  Linear,       // interpolate between ranks floor(h)+1 and floor(h)+2, h = (n-1) p/100
};

/// Aggregates samples already restricted to the window. Empty input yields
/// no value. `integral` is the trapezoidal area under the samples.
std::optional<double> window_aggregate(std::span<const Sample> samples, const lang::Aggregation& fn,
                                       PercentileMethod method = PercentileMethod::NearestRank);

/// Two-stack sliding aggregation for an associative operation. Push at the
/// back, pop at the front, amortised O(1).
template <typename Op>
class TwoStackAggregator {
 public:
  explicit TwoStackAggregator(Op op = {}) : op_(op) {}

  void push(double x) {
    back_.push_back(x);
    back_agg_ = back_.size() == 1 ? x : op_(back_agg_, x);
  }

  void pop() {
    if (front_.empty()) flip();
    front_.pop_back();
  }

  bool empty() const { return front_.empty() && back_.empty(); }

  double query() const {
    if (front_.empty()) return back_agg_;
    if (back_.empty()) return front_.back().agg;
    return op_(front_.back().agg, back_agg_);
  }

 private:
  struct Entry {
    double value;
    double agg;  // aggregate of this entry and every newer entry below it
  };

  void flip() {
    front_.reserve(back_.size());
    for (auto it = back_.rbegin(); it != back_.rend(); ++it) {
      const double agg = front_.empty() ? *it : op_(*it, front_.back().agg);
      front_.push_back(Entry{*it, agg});
    }
    back_.clear();
  }

  Op op_;
  std::vector<Entry> front_;  // top (back of vector) is the oldest element
  std::vector<double> back_;
  double back_agg_ = 0.0;
};

struct SumOp {
  double operator()(double a, double b) const { return a + b; }
};
struct MinOp {
  double operator()(double a, double b) const { return b < a ? b : a; }
};
struct MaxOp {
  double operator()(double a, double b) const { return a < b ? b : a; }
};

/// Order statistic over a multiset that changes by single insertions and
/// removals, kept as two partitions split at the requested rank.
class RankTracker {
 public:
  RankTracker(double percentile, PercentileMethod method) : p_(percentile), method_(method) {}

  void insert(double x);
  void erase(double x);
  std::optional<double> query() const;
  std::size_t size() const { return lower_.size() + upper_.size(); }

 private:
  std::size_t target_lower_size(std::size_t n) const;
  void rebalance();

  double p_;
  PercentileMethod method_;
  std::multiset<double> lower_;
  std::multiset<double> upper_;
};

/// Incrementally maintained aggregation over the time interval (now - D, now].
class SlidingWindow {
 public:
  SlidingWindow(double duration_s, lang::Aggregation fn,
                PercentileMethod method = PercentileMethod::NearestRank);

  /// Appends a sample; times must be non-decreasing.
  void push(double time, double value);

  /// Drops samples with time <= now - D and aggregates the rest.
  std::optional<double> evaluate(double now);

  std::size_t size() const { return samples_.size(); }
  double duration() const { return duration_; }
  const lang::Aggregation& function() const { return fn_; }

 private:
  void evict_front();

  double duration_;
  lang::Aggregation fn_;
  std::deque<Sample> samples_;
  TwoStackAggregator<SumOp> sums_;
  TwoStackAggregator<MinOp> mins_;
  TwoStackAggregator<MaxOp> maxs_;
  TwoStackAggregator<SumOp> areas_;  // trapezoids between consecutive samples
  std::optional<RankTracker> ranks_;
};

}  // namespace rdemon::engine
