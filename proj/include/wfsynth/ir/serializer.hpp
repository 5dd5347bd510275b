// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include "wfsynth/ir/program.hpp"

namespace wfsynth::ir {

/// Canonical text: header lines, then one blank line between statements,
/// two-space indentation, bindings sorted by slot name, declaration order
/// kept, comments dropped.
std::string serialize_workflow(const WorkflowProgram& program);

/// serialize(parse(source)).
std::string canonicalize(std::string_view source);

/// Quotes `s` as a DSL string literal without interpolation (`$` doubled).
std::string quote_literal(std::string_view s);

}  // namespace wfsynth::ir
