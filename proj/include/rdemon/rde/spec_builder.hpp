// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>

#include "rdemon/lang/typecheck.hpp"
#include "rdemon/rde/params.hpp"

namespace rdemon::rde {

/// Specification source for the full RDE monitor: segment classification,
/// per-segment distance, average velocity, dynamics percentile, RPA and
/// emission totals, and one trigger per constraint.
std::string build_rde_spec(const RdeParameters& p = {});

/// Parsed and typechecked build_rde_spec(p).
std::shared_ptr<const lang::TypedSpecification> compile_rde_spec(const RdeParameters& p = {});

}  // namespace rdemon::rde
