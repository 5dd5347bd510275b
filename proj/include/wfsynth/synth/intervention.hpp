// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// Causal interventions on the demonstration pool used by ablation runs.

#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "wfsynth/synth/demo_pool.hpp"

namespace wfsynth::synth {

enum class InterventionMode { None, ZeroShot, Shuffled, CrossDomain, RandomOps };

std::string to_string(InterventionMode m);
/// Accepts none, zero_shot, shuffled, cross_domain, random_ops; throws ConfigError.
InterventionMode intervention_from_string(const std::string& s);

struct Intervention {
    InterventionMode mode = InterventionMode::None;
    std::uint64_t seed = 0;
};

class CrossDomainUnavailable : public DataError {
public:
    explicit CrossDomainUnavailable(const std::string& target)
        : DataError("no source task outside the domain of '" + target + "'") {}
};

/// Seeded bijection from operator names to random identifiers.
struct OpRenaming {
    std::map<std::string, std::string> forward;  // true name -> alias

    std::string apply(const std::string& text) const;
    std::string invert(const std::string& text) const;
};

OpRenaming make_op_renaming(std::uint64_t seed);

/// Seeded Fisher-Yates permutation of the lines of `text` (line multiset kept).
std::string shuffle_lines(const std::string& text, std::uint64_t seed);

/// Applies `iv` to `pool`. cross_domain draws replacements from `catalog`.
DemoPool apply_intervention(const DemoPool& pool, const Intervention& iv, const TaskSpec& target,
                            const DemoCatalog& catalog);

}  // namespace wfsynth::synth
