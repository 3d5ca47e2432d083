// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rdemon/lang/ast.hpp"

namespace rdemon::lang {

/// Base class of every error raised while reading or checking a specification.
class SpecError : public std::runtime_error {
 public:
  SpecError(SourcePos pos, const std::string& message);

  SourcePos pos() const { return pos_; }
  const std::string& detail() const { return detail_; }

 private:
  SourcePos pos_;
  std::string detail_;
};

class ParseError : public SpecError {
 public:
  ParseError(SourcePos pos, const std::string& message, std::vector<std::string> expected);

  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::vector<std::string> expected_;
};

class DuplicateStream : public SpecError {
 public:
  DuplicateStream(SourcePos pos, const std::string& name);
};

class UndeclaredStream : public SpecError {
 public:
  UndeclaredStream(SourcePos pos, const std::string& name);
};

class TypeError : public SpecError {
 public:
  using SpecError::SpecError;
};

class UntimedWindow : public SpecError {
 public:
  UntimedWindow(SourcePos pos, const std::string& owner);
};

class CyclicDependency : public SpecError {
 public:
  explicit CyclicDependency(std::vector<std::string> cycle);

  const std::vector<std::string>& cycle() const { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

}  // namespace rdemon::lang
