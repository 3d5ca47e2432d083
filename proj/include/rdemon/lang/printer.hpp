// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "rdemon/lang/ast.hpp"

namespace rdemon::lang {

/// Shortest decimal form that reads back to the same double; integral
/// values keep a trailing ".0" so they read as floats.
std::string format_number(double v);

/// Like format_number but integral values print bare, as in `over: 7200`.
std::string format_duration(double seconds);

std::string print(const Expr& e);

/// Canonical source text; parse(print(s)) is structurally equal to s.
std::string print(const Specification& spec);

}  // namespace rdemon::lang
