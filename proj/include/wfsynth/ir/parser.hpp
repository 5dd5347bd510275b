// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// Grammar of the `.wf` workflow language (one program per file, UTF-8):
//
//   program   := header stmt* return
//   header    := "workflow" NAME NL "kind" TASK_KIND NL ["contract" STRING NL]
//   stmt      := node | repeat | branch
//   node      := "node" ID "=" OPERATOR "{" NL (SLOT "=" value NL)* "}" NL
//   repeat    := "repeat" INT "{" NL node+ "}" NL
//   branch    := "branch" ref "{" NL "return" ref NL "}" NL
//   return    := "return" ref NL
//   value     := ref | STRING | "[" [item ("," item)*] "]"
//   item      := ref | spread | STRING
//   ref       := ID "." FIELD              (ID may be "task")
//   spread    := ID "[" "*" "]" "." FIELD  (every iteration of a repeated node)
//
// Strings accept \" \\ \n \t \r escapes and `${ref}` interpolation; `$$` is a
// literal dollar sign. `#` starts a comment. Blank lines are insignificant.

#pragma once

#include <string_view>

#include "wfsynth/ir/program.hpp"

namespace wfsynth::ir {

/// Parses and resolves a program. Throws SyntaxError (with 1-based line and
/// column), SchemaError (unknown operator kind, slot, field or node) or
/// CycleError (bindings form a cycle).
WorkflowProgram parse_workflow(std::string_view source,
                               const OperatorRegistry& registry = OperatorRegistry::builtin());

}  // namespace wfsynth::ir
