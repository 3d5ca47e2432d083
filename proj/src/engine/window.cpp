// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/engine/window.hpp"

#include <algorithm>
#include <cmath>

namespace rdemon::engine {

using lang::AggregationKind;

namespace {

std::size_t nearest_rank(double p, std::size_t n) {
  const auto k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n) / 100.0));
  return std::clamp<std::size_t>(k, 1, n);
}

}  // namespace

std::optional<double> window_aggregate(std::span<const Sample> samples, const lang::Aggregation& fn,
                                       PercentileMethod method) {
  if (samples.empty()) return std::nullopt;
  switch (fn.kind) {
    case AggregationKind::Count: return static_cast<double>(samples.size());
    case AggregationKind::Sum:
    case AggregationKind::Avg: {
      double sum = 0.0;
      for (const auto& s : samples) sum += s.value;
      return fn.kind == AggregationKind::Sum ? sum : sum / static_cast<double>(samples.size());
    }
    case AggregationKind::Min: {
      double m = samples.front().value;
      for (const auto& s : samples) m = std::min(m, s.value);
      return m;
    }
    case AggregationKind::Max: {
      double m = samples.front().value;
      for (const auto& s : samples) m = std::max(m, s.value);
      return m;
    }
    case AggregationKind::Integral: {
      double area = 0.0;
      for (std::size_t i = 1; i < samples.size(); ++i) {
        area += 0.5 * (samples[i - 1].value + samples[i].value) * (samples[i].time - samples[i - 1].time);
      }
      return area;
    }
    case AggregationKind::Percentile: {
      std::vector<double> values;
      values.reserve(samples.size());
      for (const auto& s : samples) values.push_back(s.value);
      std::sort(values.begin(), values.end());
      const std::size_t n = values.size();
      if (method == PercentileMethod::NearestRank) return values[nearest_rank(fn.percentile, n) - 1];
      const double h = static_cast<double>(n - 1) * fn.percentile / 100.0;
      const auto lo = static_cast<std::size_t>(std::floor(h));
      if (lo + 1 >= n) return values[n - 1];
      return values[lo] + (h - std::floor(h)) * (values[lo + 1] - values[lo]);
    }
  }
  return std::nullopt;
}

// --- RankTracker -----------------------------------------------------------

std::size_t RankTracker::target_lower_size(std::size_t n) const {
  if (n == 0) return 0;
  if (method_ == PercentileMethod::NearestRank) return nearest_rank(p_, n);
  const double h = static_cast<double>(n - 1) * p_ / 100.0;
  return static_cast<std::size_t>(std::floor(h)) + 1;
}

void RankTracker::insert(double x) {
  if (!lower_.empty() && x <= *lower_.rbegin()) {
    lower_.insert(x);
  } else {
    upper_.insert(x);
  }
  rebalance();
}

void RankTracker::erase(double x) {
  if (!lower_.empty() && x <= *lower_.rbegin()) {
    lower_.erase(lower_.find(x));
  } else {
    upper_.erase(upper_.find(x));
  }
  rebalance();
}

void RankTracker::rebalance() {
  const std::size_t k = target_lower_size(size());
  while (lower_.size() > k) {
    auto it = std::prev(lower_.end());
    upper_.insert(*it);
    lower_.erase(it);
  }
  while (lower_.size() < k && !upper_.empty()) {
    auto it = upper_.begin();
    lower_.insert(*it);
    upper_.erase(it);
  }
}

std::optional<double> RankTracker::query() const {
  if (lower_.empty()) return std::nullopt;
  const double at_rank = *lower_.rbegin();
  if (method_ == PercentileMethod::NearestRank || upper_.empty()) return at_rank;
  const double h = static_cast<double>(size() - 1) * p_ / 100.0;
  const double frac = h - std::floor(h);
  return at_rank + frac * (*upper_.begin() - at_rank);
}

// --- SlidingWindow ---------------------------------------------------------

SlidingWindow::SlidingWindow(double duration_s, lang::Aggregation fn, PercentileMethod method)
    : duration_(duration_s), fn_(fn) {
  if (fn_.kind == AggregationKind::Percentile) ranks_.emplace(fn_.percentile, method);
}

void SlidingWindow::push(double time, double value) {
  switch (fn_.kind) {
    case AggregationKind::Sum:
    case AggregationKind::Avg: sums_.push(value); break;
    case AggregationKind::Min: mins_.push(value); break;
    case AggregationKind::Max: maxs_.push(value); break;
    case AggregationKind::Integral:
      if (!samples_.empty()) {
        const Sample& prev = samples_.back();
        areas_.push(0.5 * (prev.value + value) * (time - prev.time));
      }
      break;
    case AggregationKind::Percentile: ranks_->insert(value); break;
    case AggregationKind::Count: break;
  }
  samples_.push_back(Sample{time, value});
}

void SlidingWindow::evict_front() {
  const Sample front = samples_.front();
  samples_.pop_front();
  switch (fn_.kind) {
    case AggregationKind::Sum:
    case AggregationKind::Avg: sums_.pop(); break;
    case AggregationKind::Min: mins_.pop(); break;
    case AggregationKind::Max: maxs_.pop(); break;
    case AggregationKind::Integral:
      if (!areas_.empty()) areas_.pop();
      break;
    case AggregationKind::Percentile: ranks_->erase(front.value); break;
    case AggregationKind::Count: break;
  }
}

std::optional<double> SlidingWindow::evaluate(double now) {
  const double left = now - duration_;
  while (!samples_.empty() && !(samples_.front().time > left)) evict_front();
  if (samples_.empty()) return std::nullopt;
  const auto n = static_cast<double>(samples_.size());
  switch (fn_.kind) {
    case AggregationKind::Count: return n;
    case AggregationKind::Sum: return sums_.query();
    case AggregationKind::Avg: return sums_.query() / n;
    case AggregationKind::Min: return mins_.query();
    case AggregationKind::Max: return maxs_.query();
    case AggregationKind::Integral: return areas_.empty() ? 0.0 : areas_.query();
    case AggregationKind::Percentile: return ranks_->query();
  }
  return std::nullopt;
}

}  // namespace rdemon::engine
