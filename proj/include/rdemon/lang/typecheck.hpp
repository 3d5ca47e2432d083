// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rdemon/lang/ast.hpp"
#include "rdemon/lang/errors.hpp"

namespace rdemon::lang {

using StreamId = int;

struct StreamInfo {
  std::string name;
  ValueType type = ValueType::Float64;
  bool is_input = false;
  std::optional<double> rate_hz;  // set for periodic outputs only
  bool filtered = false;
  bool may_be_absent = true;  // whether a direct reference can observe "no value"
  int layer = -1;             // -1 for inputs
  int output_index = -1;      // index into Specification::outputs
};

struct WindowInfo {
  int slot = -1;
  StreamId source = -1;
  double duration_s = 0.0;
  Aggregation fn;
};

struct TriggerInfo {
  std::optional<double> rate_hz;        // nullopt: evaluated when its inputs receive events
  std::vector<StreamId> referenced;     // streams read directly by the condition
};

/// A specification with resolved names, node types and an evaluation order.
///
/// Stream ids are dense: inputs first (declaration order), then outputs.
/// Windows and stream references inside the AST carry their resolved ids.
struct TypedSpecification {
  Specification spec;
  std::vector<StreamInfo> streams;
  std::vector<ValueType> node_types;     // indexed by Expr::id
  std::vector<std::vector<StreamId>> layers;
  std::vector<WindowInfo> windows;       // indexed by WindowExpr::slot
  std::vector<TriggerInfo> triggers;     // parallel to spec.triggers
  /// Per input: event-timed outputs that must re-evaluate when it receives an event, in order.
  std::vector<std::vector<StreamId>> event_outputs;
  /// Per input: event-timed triggers that must re-evaluate when it receives an event.
  std::vector<std::vector<int>> event_triggers;
  /// Per stream: windows aggregating it.
  std::vector<std::vector<int>> windows_of;
  /// Sorted distinct rates of all periodic outputs and triggers.
  std::vector<double> rates_hz;
  std::vector<std::string> warnings;

  std::optional<StreamId> find(std::string_view name) const;
  std::size_t input_count() const { return spec.inputs.size(); }
  const OutputDecl& output(StreamId id) const;
};

/// Types every expression, orders output streams into evaluation layers and
/// registers sliding windows.
///
/// Throws TypeError, UntimedWindow or CyclicDependency.
TypedSpecification typecheck(Specification spec);

}  // namespace rdemon::lang
