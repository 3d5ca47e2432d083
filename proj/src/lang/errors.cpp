// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/lang/errors.hpp"

namespace rdemon::lang {

namespace {

std::string located(SourcePos pos, const std::string& message) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message;
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace

SpecError::SpecError(SourcePos pos, const std::string& message)
    : std::runtime_error(located(pos, message)), pos_(pos), detail_(message) {}

ParseError::ParseError(SourcePos pos, const std::string& message,
                       std::vector<std::string> expected)
    : SpecError(pos, expected.empty() ? message
                                      : message + " (expected " + join(expected, ", ") + ")"),
      expected_(std::move(expected)) {}

DuplicateStream::DuplicateStream(SourcePos pos, const std::string& name)
    : SpecError(pos, "duplicate stream " + name) {}

UndeclaredStream::UndeclaredStream(SourcePos pos, const std::string& name)
    : SpecError(pos, "undeclared stream " + name) {}

UntimedWindow::UntimedWindow(SourcePos pos, const std::string& owner)
    : SpecError(pos, "sliding window in " + owner + " which has no @rate annotation") {}

CyclicDependency::CyclicDependency(std::vector<std::string> cycle)
    : SpecError(SourcePos{}, "cyclic dependency: " + join(cycle, " -> ")),
      cycle_(std::move(cycle)) {}

}  // namespace rdemon::lang
